#pragma once

#include "snf.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace arrvar {

namespace detail {

inline IMat stack_rows(size_t dim, const std::vector<const std::vector<IVec>*>& groups) {
    std::vector<IVec> rows;
    for (const auto* g : groups)
        for (const IVec& v : *g) rows.push_back(v);
    if (rows.empty()) return IMat(0, dim);
    return IMat(std::move(rows));
}

// Extreme rays and a lineality basis of {x : <a,x> >= 0 for ineqs, <b,x> = 0
// for eqs}, by incremental double description with combinatorial adjacency.
struct DDResult {
    std::vector<IVec> rays;
    std::vector<IVec> lin;
};

inline DDResult dd_from_h(size_t dim, const std::vector<IVec>& ineqs,
                          const std::vector<IVec>& eqs) {
    std::vector<IVec> lin, rays;
    std::vector<std::vector<bool>> zset;  // per ray, over inequalities processed
    for (size_t i = 0; i < dim; ++i) {
        IVec e(dim, 0);
        e[i] = 1;
        lin.push_back(std::move(e));
    }
    size_t nineq = 0;

    auto process = [&](const IVec& a, bool is_eq) {
        if (is_zero(a)) return;
        size_t hit = lin.size();
        for (size_t i = 0; i < lin.size(); ++i)
            if (dot(a, lin[i]) != 0) {
                hit = i;
                break;
            }
        if (hit < lin.size()) {
            IVec l0 = lin[hit];
            Int p = dot(a, l0);
            if (p < 0) {
                l0 = neg(l0);
                p = -p;
            }
            std::vector<IVec> nl;
            for (size_t i = 0; i < lin.size(); ++i) {
                if (i == hit) continue;
                nl.push_back(primitive_vector(combine(p, lin[i], -dot(a, lin[i]), l0)));
            }
            lin = std::move(nl);
            for (IVec& r : rays) r = primitive_vector(combine(p, r, -dot(a, r), l0));
            if (!is_eq) {
                // Previously processed inequalities all vanish on the old
                // lineality, hence on l0.
                rays.push_back(l0);
                zset.emplace_back(nineq, true);
                for (size_t k = 0; k < rays.size(); ++k)
                    zset[k].push_back(dot(a, rays[k]) == 0);
                ++nineq;
            }
            return;
        }

        std::vector<Int> val(rays.size());
        for (size_t k = 0; k < rays.size(); ++k) val[k] = dot(a, rays[k]);

        auto adjacent = [&](size_t i, size_t j) {
            std::vector<bool> w(nineq);
            for (size_t b = 0; b < nineq; ++b) w[b] = zset[i][b] && zset[j][b];
            for (size_t k = 0; k < rays.size(); ++k) {
                if (k == i || k == j) continue;
                bool covers = true;
                for (size_t b = 0; b < nineq && covers; ++b)
                    if (w[b] && !zset[k][b]) covers = false;
                if (covers) return false;
            }
            return true;
        };

        std::vector<IVec> nr;
        std::vector<std::vector<bool>> nz;
        for (size_t k = 0; k < rays.size(); ++k) {
            if (val[k] < 0 || (is_eq && val[k] != 0)) continue;
            nr.push_back(rays[k]);
            nz.push_back(zset[k]);
            nz.back().push_back(val[k] == 0);
        }
        for (size_t i = 0; i < rays.size(); ++i) {
            if (val[i] <= 0) continue;
            for (size_t j = 0; j < rays.size(); ++j) {
                if (val[j] >= 0) continue;
                if (!adjacent(i, j)) continue;
                IVec n = combine(val[i], rays[j], -val[j], rays[i]);
                if (is_zero(n)) continue;
                nr.push_back(primitive_vector(n));
                std::vector<bool> w(nineq + 1);
                for (size_t b = 0; b < nineq; ++b) w[b] = zset[i][b] && zset[j][b];
                w[nineq] = true;
                nz.push_back(std::move(w));
            }
        }
        rays = std::move(nr);
        zset = std::move(nz);
        if (!is_eq)
            ++nineq;
        else
            for (auto& z : zset) z.pop_back();
    };

    for (const IVec& b : eqs) process(b, true);
    for (const IVec& a : ineqs) process(a, false);
    return {std::move(rays), std::move(lin)};
}

// Unique representative of a ray class modulo the lineality span: orthogonal
// projection onto the complement, made primitive.
inline IVec reduce_mod_lineality(const IVec& r, const IMat& lin) {
    if (lin.rows == 0) return primitive_vector(r);
    // Solve G c = lin * r with G the Gram matrix, then project.
    QMat g(lin.rows, lin.rows);
    for (size_t i = 0; i < lin.rows; ++i)
        for (size_t j = 0; j < lin.rows; ++j) g.a[i][j] = Rat(dot(lin.a[i], lin.a[j]));
    QVec rhs(lin.rows);
    for (size_t i = 0; i < lin.rows; ++i) rhs[i] = Rat(dot(lin.a[i], r));
    auto c = solve(g, rhs);
    if (!c) throw error("reduce_mod_lineality: degenerate Gram matrix");
    QVec p = to_rat(r);
    for (size_t i = 0; i < lin.rows; ++i)
        for (size_t j = 0; j < p.size(); ++j) p[j] -= (*c)[i] * Rat(lin.a[i][j]);
    if (is_zero(p)) return IVec(r.size(), 0);
    return primitive_vector(p);
}

inline std::vector<IVec> canonical_rays(const std::vector<IVec>& rays, const IMat& lin) {
    std::vector<IVec> out;
    for (const IVec& r : rays) {
        IVec p = reduce_mod_lineality(r, lin);
        if (!is_zero(p)) out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(), lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

// Convex polyhedral cone with both canonical representations:
//   V-side: extreme rays (primitive, reduced modulo lineality, sorted) and the
//           saturated HNF basis of the lineality lattice;
//   H-side: irredundant facet normals (primitive, inside span, sorted) and the
//           saturated HNF basis of the span's orthogonal complement.
// Two cones are equal as sets iff their stored data coincide.
struct Cone {
    size_t ambient = 0;
    std::vector<IVec> rays;
    IMat lin{0, 0};
    std::vector<IVec> facets;
    IMat eqs{0, 0};

    static Cone from_h(size_t dim, const std::vector<IVec>& ineqs,
                       const std::vector<IVec>& eqs_in) {
        Cone c;
        c.ambient = dim;
        auto dd = detail::dd_from_h(dim, ineqs, eqs_in);
        c.lin = kernel_basis(detail::stack_rows(dim, {&ineqs, &eqs_in}));
        c.rays = detail::canonical_rays(dd.rays, c.lin);
        c.finish_h_side();
        return c;
    }

    static Cone from_generators(size_t dim, const std::vector<IVec>& gens,
                                const std::vector<IVec>& lins = {}) {
        // Dual description: facets of cone(gens)+span(lins) are the extreme
        // rays of {u : <u,g> >= 0, <u,l> = 0}.
        Cone c;
        c.ambient = dim;
        auto dual = detail::dd_from_h(dim, gens, lins);
        c.eqs = kernel_basis(detail::stack_rows(dim, {&gens, &lins}));
        std::vector<IVec> eqrows(c.eqs.a.begin(), c.eqs.a.end());
        c.facets = detail::canonical_rays(dual.rays, c.eqs);
        auto primal = detail::dd_from_h(dim, c.facets, eqrows);
        c.lin = kernel_basis(detail::stack_rows(dim, {&c.facets, &eqrows}));
        c.rays = detail::canonical_rays(primal.rays, c.lin);
        return c;
    }

    void finish_h_side() {
        std::vector<IVec> linrows(lin.a.begin(), lin.a.end());
        auto dual = detail::dd_from_h(ambient, rays, linrows);
        eqs = kernel_basis(detail::stack_rows(ambient, {&rays, &linrows}));
        facets = detail::canonical_rays(dual.rays, eqs);
    }

    size_t dim() const { return ambient - eqs.rows; }
    bool pointed() const { return lin.rows == 0; }
    bool is_zero() const { return rays.empty() && lin.rows == 0; }

    bool contains(const IVec& x) const {
        for (size_t i = 0; i < eqs.rows; ++i)
            if (dot(eqs.a[i], x) != 0) return false;
        for (const IVec& a : facets)
            if (dot(a, x) < 0) return false;
        return true;
    }

    bool contains(const QVec& x) const {
        for (size_t i = 0; i < eqs.rows; ++i)
            if (dot(eqs.a[i], x) != 0) return false;
        for (const IVec& a : facets)
            if (dot(a, x) < 0) return false;
        return true;
    }

    bool relative_interior_contains(const IVec& x) const {
        for (size_t i = 0; i < eqs.rows; ++i)
            if (dot(eqs.a[i], x) != 0) return false;
        for (const IVec& a : facets)
            if (dot(a, x) <= 0) return false;
        return true;
    }

    bool relative_interior_contains(const QVec& x) const {
        for (size_t i = 0; i < eqs.rows; ++i)
            if (dot(eqs.a[i], x) != 0) return false;
        for (const IVec& a : facets)
            if (dot(a, x) <= 0) return false;
        return true;
    }

    bool contains_cone(const Cone& c) const {
        for (const IVec& r : c.rays)
            if (!contains(r)) return false;
        for (size_t i = 0; i < c.lin.rows; ++i)
            if (!contains(c.lin.a[i]) || !contains(neg(c.lin.a[i]))) return false;
        return true;
    }

    bool operator==(const Cone& o) const {
        return ambient == o.ambient && rays == o.rays && lin == o.lin;
    }

    std::string key() const {
        std::string s = std::to_string(ambient) + ";";
        for (const IVec& r : rays) s += to_string(r);
        s += "|";
        for (const auto& r : lin.a) s += to_string(r);
        return s;
    }
};

inline Cone intersect(const Cone& a, const Cone& b) {
    if (a.ambient != b.ambient) throw error("intersect: ambient mismatch");
    std::vector<IVec> ineqs = a.facets;
    ineqs.insert(ineqs.end(), b.facets.begin(), b.facets.end());
    std::vector<IVec> eqs(a.eqs.a.begin(), a.eqs.a.end());
    eqs.insert(eqs.end(), b.eqs.a.begin(), b.eqs.a.end());
    return Cone::from_h(a.ambient, ineqs, eqs);
}

// tau is a face of sigma iff tau = sigma cut by the facets vanishing on tau.
inline bool face_of(const Cone& tau, const Cone& sigma) {
    if (!sigma.contains_cone(tau)) return false;
    std::vector<IVec> extra(sigma.eqs.a.begin(), sigma.eqs.a.end());
    for (const IVec& a : sigma.facets) {
        bool vanishes = true;
        for (const IVec& r : tau.rays)
            if (dot(a, r) != 0) {
                vanishes = false;
                break;
            }
        for (size_t i = 0; i < tau.lin.rows && vanishes; ++i)
            if (dot(a, tau.lin.a[i]) != 0) vanishes = false;
        if (vanishes) extra.push_back(a);
    }
    return Cone::from_h(sigma.ambient, sigma.facets, extra) == tau;
}

// Ray index sets of all faces of a pointed cone, via facet incidence closure.
// Includes the empty set (the zero face) and the full index set.
inline std::vector<std::vector<size_t>> face_ray_sets(const Cone& sigma) {
    if (!sigma.pointed()) throw error("face_ray_sets: cone not pointed");
    const size_t n = sigma.rays.size(), f = sigma.facets.size();
    std::vector<std::vector<bool>> inc(n, std::vector<bool>(f));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < f; ++j) inc[i][j] = dot(sigma.facets[j], sigma.rays[i]) == 0;
    std::map<std::vector<size_t>, bool> seen;
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
        std::vector<bool> fz(f, true);
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t(1) << i))
                for (size_t j = 0; j < f; ++j) fz[j] = fz[j] && inc[i][j];
        std::vector<size_t> closure;
        for (size_t i = 0; i < n; ++i) {
            bool in = true;
            for (size_t j = 0; j < f && in; ++j)
                if (fz[j] && !inc[i][j]) in = false;
            if (in) closure.push_back(i);
        }
        seen.emplace(std::move(closure), true);
    }
    std::vector<std::vector<size_t>> out;
    for (auto& [s, _] : seen) out.push_back(s);
    return out;
}

}  // namespace arrvar
