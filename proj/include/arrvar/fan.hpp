#pragma once

#include "cone.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace arrvar {

// A quasifan given by its maximal cones. Cones of the fan are all faces of
// the listed ones; the support is their union.
struct Fan {
    size_t ambient = 0;
    std::vector<Cone> max_cones;
};

inline std::vector<IVec> fan_rays(const Fan& f) {
    std::vector<IVec> out;
    for (const Cone& c : f.max_cones)
        for (const IVec& r : c.rays) out.push_back(r);
    std::sort(out.begin(), out.end(), lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace detail {

// Scaled dual rows of a simplicial cone: integer vectors h_i with
// h_i . r_j = D delta_ij for one positive D, so sums of the rows keep the
// exact signs of coefficients in the ray basis.
struct ConeDual {
    bool simplicial = false;
    std::vector<IVec> h;
};

inline ConeDual cone_dual(const Cone& c) {
    ConeDual out;
    if (!c.pointed() || c.rays.size() != c.dim()) return out;
    const size_t d = c.rays.size(), n = c.ambient;
    out.simplicial = true;
    if (d == 0) return out;
    // Reduce [Gram | R] to [I | Gram^-1 R]; row i of the right block is the
    // dual basis vector of ray i inside the span.
    QMat aug(d, d + n);
    for (size_t i = 0; i < d; ++i) {
        for (size_t j = 0; j < d; ++j) aug.a[i][j] = Rat(dot(c.rays[i], c.rays[j]));
        for (size_t j = 0; j < n; ++j) aug.a[i][d + j] = Rat(c.rays[i][j]);
    }
    auto pivots = rref(aug);
    if (pivots.size() != d || pivots.back() >= d) {
        out.simplicial = false;
        return out;
    }
    Int den(1);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < n; ++j) den = lcm(den, Int(aug.a[i][d + j].get_den()));
    for (size_t i = 0; i < d; ++i) {
        IVec h(n);
        for (size_t j = 0; j < n; ++j) {
            const Rat& x = aug.a[i][d + j];
            h[j] = Int(x.get_num() * (den / Int(x.get_den())));
        }
        out.h.push_back(std::move(h));
    }
    return out;
}

}  // namespace detail

// Pairwise intersections must be faces of both participants.  A pair of
// simplicial cones is certified without computing the intersection: let h be
// the sum of the dual rows of one cone over its rays the other does not
// share.  h is nonnegative on the first cone, so h nonpositive on every ray
// of the second traps the intersection in the span of the shared rays, which
// makes it their cone, a face of both by simpliciality.  Pairs without a
// witness on either side fall back to the exact test.
inline bool is_fan(const Fan& f) {
    const size_t m = f.max_cones.size();
    std::map<IVec, size_t> ray_id;
    std::vector<std::vector<size_t>> rid(m);
    for (size_t i = 0; i < m; ++i)
        for (const IVec& r : f.max_cones[i].rays)
            rid[i].push_back(ray_id.emplace(r, ray_id.size()).first->second);
    std::vector<IVec> rays(ray_id.size());
    for (const auto& [r, g] : ray_id) rays[g] = r;

    // Per simplicial cone: dots of every dual row with every fan ray, plus a
    // trailing total row, so any witness sum is a few integer subtractions.
    std::vector<detail::ConeDual> dual(m);
    std::vector<std::vector<IVec>> dots(m);
    for (size_t i = 0; i < m; ++i) {
        dual[i] = detail::cone_dual(f.max_cones[i]);
        if (!dual[i].simplicial) continue;
        dots[i].assign(dual[i].h.size() + 1, IVec(rays.size(), Int(0)));
        for (size_t k = 0; k < dual[i].h.size(); ++k)
            for (size_t g = 0; g < rays.size(); ++g) {
                dots[i][k][g] = dot(dual[i].h[k], rays[g]);
                dots[i].back()[g] += dots[i][k][g];
            }
    }

    auto certified = [&](size_t i, size_t j) {
        if (!dual[i].simplicial || !dual[j].simplicial) return false;
        const auto& ri = f.max_cones[i].rays;
        const auto& rj = f.max_cones[j].rays;
        std::vector<size_t> si, sj;  // positions of shared rays per side
        for (size_t p = 0, q = 0; p < ri.size() && q < rj.size();) {
            if (ri[p] == rj[q]) {
                si.push_back(p);
                sj.push_back(q);
                ++p, ++q;
            } else if (lex_less(ri[p], rj[q])) {
                ++p;
            } else {
                ++q;
            }
        }
        auto side = [&](size_t a, const std::vector<size_t>& shared, size_t b) {
            for (size_t g : rid[b]) {
                Int s = dots[a].back()[g];
                for (size_t k : shared) s -= dots[a][k][g];
                if (s > 0) return false;
            }
            return true;
        };
        return side(i, si, j) || side(j, sj, i);
    };

    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j) {
            if (certified(i, j)) continue;
            Cone t = intersect(f.max_cones[i], f.max_cones[j]);
            if (!face_of(t, f.max_cones[i]) || !face_of(t, f.max_cones[j])) return false;
        }
    return true;
}

// A complete fan covers Q^ambient: all maximal cones are full-dimensional and
// every facet of each is shared with exactly one other maximal cone.
inline bool is_complete(const Fan& f) {
    if (f.max_cones.empty()) return false;
    for (const Cone& c : f.max_cones)
        if (c.dim() != f.ambient) return false;
    for (size_t i = 0; i < f.max_cones.size(); ++i) {
        const Cone& c = f.max_cones[i];
        for (const IVec& a : c.facets) {
            std::vector<IVec> eqs(c.eqs.a.begin(), c.eqs.a.end());
            eqs.push_back(a);
            Cone facet = Cone::from_h(f.ambient, c.facets, eqs);
            size_t shared = 0;
            for (size_t j = 0; j < f.max_cones.size(); ++j)
                if (j != i && f.max_cones[j].contains_cone(facet)) ++shared;
            if (shared != 1) return false;
        }
    }
    return true;
}

// Maximal cones of {a n b : a in f, b in g}; the common refinement of the
// supports. Intersections contained in a strictly larger intersection drop.
inline Fan refine_fan(const Fan& f, const Fan& g) {
    if (f.ambient != g.ambient) throw error("refine_fan: ambient mismatch");
    std::map<std::string, Cone> pieces;
    for (const Cone& a : f.max_cones)
        for (const Cone& b : g.max_cones) {
            Cone c = intersect(a, b);
            if (c.is_zero()) continue;
            pieces.emplace(c.key(), std::move(c));
        }
    Fan out;
    out.ambient = f.ambient;
    for (const auto& [ka, a] : pieces) {
        bool maximal = true;
        for (const auto& [kb, b] : pieces) {
            if (ka == kb) continue;
            if (b.contains_cone(a) && !(a == b)) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.max_cones.push_back(a);
    }
    return out;
}

}  // namespace arrvar
