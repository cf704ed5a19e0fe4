#pragma once

#include "variety.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

namespace arrvar {

// Image of the flat S in Q^r: sum of e_i over S, where e_1..e_r are the
// standard basis vectors and e_0 = -(e_1 + ... + e_r).
inline IVec flat_vector(size_t r, const std::vector<size_t>& flat) {
    IVec v(r, 0);
    for (size_t i : flat) {
        if (i == 0) {
            for (size_t j = 0; j < r; ++j) v[j] -= 1;
        } else {
            v[i - 1] += 1;
        }
    }
    return v;
}

// Tropical variety of the arrangement, as a quasifan in Q^{r+s}: every
// maximal cone is base x Q^s with a common lineality part {0} x Q^s.
struct TropicalData {
    size_t r = 0;
    size_t s = 0;
    bool coarse = false;
    std::vector<Cone> base;    // maximal cones in Q^r
    std::vector<Cone> lifted;  // base x Q^s in Q^{r+s}
    // Chains of flats per base cone, fine structure only (empty when coarse).
    std::vector<std::vector<std::vector<size_t>>> chains;
};

namespace detail {

inline Cone lift_cone(const Cone& b, size_t s) {
    std::vector<IVec> gens;
    for (const IVec& r : b.rays) {
        IVec g = r;
        g.resize(r.size() + s, 0);
        gens.push_back(std::move(g));
    }
    std::vector<IVec> lins;
    for (size_t i = 0; i < b.lin.rows; ++i) {
        IVec g = b.lin.a[i];
        g.resize(b.ambient + s, 0);
        lins.push_back(std::move(g));
    }
    for (size_t j = 0; j < s; ++j) {
        IVec g(b.ambient + s, 0);
        g[b.ambient + j] = 1;
        lins.push_back(std::move(g));
    }
    return Cone::from_generators(b.ambient + s, gens, lins);
}

// Minimal dependent column sets, ascending by size then members.
inline std::vector<std::vector<size_t>> circuits(const Arrangement& arr) {
    const size_t n = arr.ncols();
    std::vector<std::vector<size_t>> out;
    std::vector<std::vector<size_t>> by_size;
    for (size_t mask = 1; mask < (size_t(1) << n); ++mask) {
        std::vector<size_t> s;
        for (size_t j = 0; j < n; ++j)
            if (mask & (size_t(1) << j)) s.push_back(j);
        if (subset_rank(arr, s) == s.size()) continue;
        bool minimal = true;
        for (const auto& c : out)
            if (std::includes(s.begin(), s.end(), c.begin(), c.end())) minimal = false;
        if (minimal) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        return x < y;
    });
    return out;
}

// Coordinates of the point z of Q^r on the r+1 arrangement labels: label 0
// evaluates to zero, label i to z_{i-1}; shifts by the all-ones vector do
// not change the minimizing sets below.
inline std::vector<std::vector<size_t>> initial_pattern(
    const IVec& z, const std::vector<std::vector<size_t>>& circs) {
    std::vector<std::vector<size_t>> pattern;
    for (const auto& c : circs) {
        Int best;
        bool first = true;
        std::vector<size_t> arg;
        for (size_t i : c) {
            Int val = i == 0 ? Int(0) : z[i - 1];
            if (first || val < best) {
                best = val;
                arg.assign(1, i);
                first = false;
            } else if (val == best) {
                arg.push_back(i);
            }
        }
        pattern.push_back(std::move(arg));
    }
    return pattern;
}

// Two cones meeting along a common facet merge iff every circuit selects the
// same minimizing labels on both interiors (equal initial data) and the hull
// cut at the shared hyperplane returns exactly the pair.
inline std::optional<Cone> merge_union(const Cone& a, const Cone& b,
                                       const std::vector<std::vector<size_t>>& circs) {
    if (a.dim() != b.dim() || a.dim() < 2) return std::nullopt;
    IVec za(a.ambient, 0), zb(b.ambient, 0);
    for (const IVec& r : a.rays) za = combine(1, za, 1, r);
    for (const IVec& r : b.rays) zb = combine(1, zb, 1, r);
    if (initial_pattern(za, circs) != initial_pattern(zb, circs)) return std::nullopt;
    for (const IVec& u : a.facets) {
        bool nonpos = true;
        for (const IVec& r : b.rays)
            if (dot(u, r) > 0) nonpos = false;
        if (!nonpos) continue;
        std::vector<IVec> gens = a.rays;
        gens.insert(gens.end(), b.rays.begin(), b.rays.end());
        Cone hull = Cone::from_generators(a.ambient, gens);
        if (!hull.pointed() || hull.dim() != a.dim()) continue;
        Cone plus = intersect(hull, Cone::from_h(a.ambient, {u}, {}));
        Cone minus = intersect(hull, Cone::from_h(a.ambient, {neg(u)}, {}));
        if (plus == a && minus == b) return hull;
    }
    return std::nullopt;
}

}  // namespace detail

// Maximal cones of trop(X) c Q^{r+s}. The fine structure has one cone per
// maximal chain of proper flats, cone(e_{F_1},...,e_{F_c}) x Q^s; coarsening
// merges cones across a shared facet whenever their union stays convex.
inline TropicalData trop_quasifan(const Arrangement& arr, size_t s, bool coarsen = false) {
    TropicalData t;
    t.r = arr.r();
    t.s = s;
    t.coarse = coarsen;
    for (const auto& chain : maximal_chains(arr)) {
        std::vector<IVec> gens;
        std::vector<std::vector<size_t>> members;
        for (const Flat& f : chain) {
            gens.push_back(flat_vector(t.r, f.members));
            members.push_back(f.members);
        }
        t.base.push_back(Cone::from_generators(t.r, gens));
        t.chains.push_back(std::move(members));
    }
    if (coarsen) {
        t.chains.clear();
        auto circs = detail::circuits(arr);
        if (circs.empty()) {
            // Free column matroid: the support is all of Q^r and the coarse
            // structure is the single cone with full lineality.
            std::vector<IVec> lins;
            for (size_t i = 0; i < t.r; ++i) {
                IVec g(t.r, 0);
                g[i] = 1;
                lins.push_back(std::move(g));
            }
            t.base.assign(1, Cone::from_generators(t.r, {}, lins));
            for (const Cone& b : t.base) t.lifted.push_back(detail::lift_cone(b, s));
            return t;
        }
        bool merged = true;
        while (merged) {
            merged = false;
            for (size_t i = 0; i < t.base.size() && !merged; ++i)
                for (size_t j = i + 1; j < t.base.size() && !merged; ++j) {
                    auto hull = detail::merge_union(t.base[i], t.base[j], circs);
                    if (!hull) continue;
                    t.base[i] = *hull;
                    t.base.erase(t.base.begin() + j);
                    merged = true;
                }
        }
        std::sort(t.base.begin(), t.base.end(),
                  [](const Cone& a, const Cone& b) { return a.key() < b.key(); });
    }
    for (const Cone& b : t.base) t.lifted.push_back(detail::lift_cone(b, s));
    return t;
}

inline Fan trop_fan(const TropicalData& t) { return Fan{t.r + t.s, t.lifted}; }

enum class PConeType { leaf, big, special };

inline const char* pcone_name(PConeType t) {
    switch (t) {
        case PConeType::leaf: return "leaf";
        case PConeType::big: return "big";
        default: return "special";
    }
}

namespace detail {

// A piece C c sigma meets the relative interior of sigma iff the sum of its
// extreme rays does: a strict combination of a relint point with any point
// of sigma stays in the relint.
inline bool piece_meets_interior(const Cone& sigma, const Cone& piece) {
    if (piece.rays.empty()) return false;
    IVec z(sigma.ambient, 0);
    for (const IVec& r : piece.rays) z = combine(1, z, 1, r);
    return sigma.relative_interior_contains(z);
}

// Classification of a pointed cone against the tropical quasifan, or nullopt
// when the relative interior misses the tropical support entirely.
inline std::optional<PConeType> classify_or_none(const Cone& sigma, const TropicalData& t) {
    if (sigma.ambient != t.r + t.s) throw invalid_input("classify: ambient dimension mismatch");
    if (!sigma.pointed()) throw invalid_input("classify: cone not pointed");
    std::vector<Cone> pieces;
    std::map<std::string, bool> seen;
    for (const Cone& tau : t.lifted) {
        Cone c = intersect(sigma, tau);
        if (seen.emplace(c.key(), true).second) pieces.push_back(std::move(c));
    }

    // Leaf: sigma is covered by its full-dimensional pieces. Coverage holds
    // iff every piece facet meeting the interior of sigma is shared.
    std::vector<const Cone*> full;
    for (const Cone& c : pieces)
        if (c.dim() == sigma.dim()) full.push_back(&c);
    if (!full.empty()) {
        bool covered = true;
        for (const Cone* c : full) {
            std::vector<IVec> ceqs(c->eqs.a.begin(), c->eqs.a.end());
            for (const IVec& u : c->facets) {
                std::vector<IVec> cut = ceqs;
                cut.push_back(u);
                Cone f = Cone::from_h(c->ambient, c->facets, cut);
                if (!piece_meets_interior(sigma, f)) continue;
                bool shared = false;
                for (const Cone* other : full)
                    if (other != c && other->contains_cone(f)) shared = true;
                if (!shared) covered = false;
            }
        }
        if (covered) return PConeType::leaf;
    }
    if (sigma.is_zero()) return PConeType::leaf;

    // Big: the relative interior meets the lineality part {0} x Q^s.
    std::vector<IVec> lins;
    for (size_t j = 0; j < t.s; ++j) {
        IVec g(t.r + t.s, 0);
        g[t.r + j] = 1;
        lins.push_back(std::move(g));
    }
    Cone lineality = Cone::from_generators(t.r + t.s, {}, lins);
    if (detail::piece_meets_interior(sigma, intersect(sigma, lineality))) return PConeType::big;

    for (const Cone& c : pieces)
        if (piece_meets_interior(sigma, c)) return PConeType::special;
    return std::nullopt;
}

}  // namespace detail

inline PConeType classify_cone(const Cone& sigma, const TropicalData& t) {
    auto res = detail::classify_or_none(sigma, t);
    if (!res) throw error("not an X-cone");
    return *res;
}

// A big or special cone with at most one ray per block whose induced ray
// rho = Q>=0 * v_sigma is the unique new ray of the tropical refinement.
struct ElementaryCone {
    Cone sigma;
    std::vector<size_t> blocks;  // I, ascending
    std::vector<size_t> js;      // chosen variable within each block
    IVec weights;                // ell_i = prod_{k in I} l_k / l_i
    IVec v_sigma;                // sum of ell_i * v_{i j_i}
    Int c_sigma;                 // gcd of the entries of v_sigma
    IVec rho;                    // primitive generator v_sigma / c_sigma
};

inline std::vector<ElementaryCone> elementary_cones(const VarietyData& v,
                                                    const TropicalData& t) {
    const CoxRing& ring = v.gr.ring;
    std::map<IVec, size_t> var_of;
    for (size_t j = 0; j < v.columns.size(); ++j) var_of.emplace(v.columns[j], j);

    std::map<std::vector<IVec>, Cone> faces;
    for (const Cone& sigma : v.fan.max_cones)
        for (const auto& rs : face_ray_sets(sigma)) {
            if (rs.empty()) continue;
            std::vector<IVec> key;
            for (size_t i : rs) key.push_back(sigma.rays[i]);
            std::sort(key.begin(), key.end(), lex_less);
            if (faces.count(key)) continue;
            faces.emplace(key, Cone::from_generators(sigma.ambient, key));
        }

    std::vector<ElementaryCone> out;
    for (const auto& [key, sigma] : faces) {
        ElementaryCone e;
        e.sigma = sigma;
        bool ok = true;
        for (const IVec& r : sigma.rays) {
            auto it = var_of.find(r);
            if (it == var_of.end()) throw error("elementary: fan ray is not a column");
            size_t b = ring.block_of(it->second);
            if (b == static_cast<size_t>(-1)) continue;
            if (std::find(e.blocks.begin(), e.blocks.end(), b) != e.blocks.end()) ok = false;
            e.blocks.push_back(b);
            e.js.push_back(it->second - ring.offset[b]);
        }
        if (!ok || e.blocks.empty()) continue;

        auto type = detail::classify_or_none(sigma, t);
        if (!type || *type == PConeType::leaf) continue;

        // The refinement adds a ray through sigma's interior or nothing.
        bool has_interior_ray = false;
        for (const Cone& tau : t.lifted) {
            Cone piece = intersect(sigma, tau);
            for (const IVec& r : piece.rays)
                if (sigma.relative_interior_contains(r)) has_interior_ray = true;
        }
        if (!has_interior_ray) continue;

        std::vector<size_t> order(e.blocks.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return e.blocks[a] < e.blocks[b]; });
        std::vector<size_t> bs, js;
        for (size_t i : order) {
            bs.push_back(e.blocks[i]);
            js.push_back(e.js[i]);
        }
        e.blocks = bs;
        e.js = js;

        Int prod = 1;
        for (size_t i = 0; i < e.blocks.size(); ++i)
            prod *= ring.exp.l[e.blocks[i]][e.js[i]];
        e.v_sigma = IVec(sigma.ambient, 0);
        for (size_t i = 0; i < e.blocks.size(); ++i) {
            Int w = prod / ring.exp.l[e.blocks[i]][e.js[i]];
            e.weights.push_back(w);
            e.v_sigma = combine(1, e.v_sigma, w, v.columns[ring.var(e.blocks[i], e.js[i])]);
        }
        if (is_zero(e.v_sigma)) throw error("elementary: degenerate ray");
        e.c_sigma = gcd_vec(e.v_sigma);
        e.rho = primitive_vector(e.v_sigma);
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<ElementaryCone> elementary_cones(const VarietyData& v) {
    return elementary_cones(v, trop_quasifan(v.gr.ring.arr, v.gr.s(), true));
}

// Rays of the tropical refinement of the fan: the original rays plus one new
// ray per elementary cone.
inline std::vector<IVec> refinement_rays(const VarietyData& v) {
    std::vector<IVec> out = v.columns;
    std::map<IVec, bool> seen;
    for (const IVec& r : out) seen.emplace(r, true);
    for (const ElementaryCone& e : elementary_cones(v))
        if (seen.emplace(e.rho, true).second) out.push_back(e.rho);
    return out;
}

// Laurent polynomial in exponent-coefficient form.
struct ShiftedPoly {
    std::vector<IVec> exps;
    std::vector<Rat> coeffs;
    bool degenerate = false;  // fewer than two monomials survive
};

// Push a polynomial with exponents over the columns of p down along p and
// pull it back over the columns of pprime, normalized so that no variable
// divides every monomial. Requires all exponent differences to lie in the
// rational row space of p and all shifted exponents to be integral.
inline ShiftedPoly pushdown_shift(const std::vector<IVec>& exps, const std::vector<Rat>& coeffs,
                                  const IMat& p, const IMat& pprime) {
    if (exps.empty() || exps.size() != coeffs.size())
        throw invalid_input("shift: empty polynomial or coefficient mismatch");
    for (const IVec& e : exps)
        if (e.size() != p.cols) throw invalid_input("shift: exponent length mismatch");
    if (pprime.rows != p.rows) throw invalid_input("shift: matrices have different row count");

    QMat pt = to_rat(p).transpose();
    std::vector<QVec> us;
    for (const IVec& mu : exps) {
        QVec rhs(p.cols);
        for (size_t w = 0; w < p.cols; ++w) rhs[w] = Rat(mu[w] - exps[0][w]);
        auto u = solve(pt, rhs);
        if (!u) throw error("not shiftable");
        us.push_back(std::move(*u));
    }

    ShiftedPoly res;
    res.exps.assign(exps.size(), IVec(pprime.cols, 0));
    res.coeffs = coeffs;
    for (size_t w = 0; w < pprime.cols; ++w) {
        std::vector<Rat> vals(exps.size());
        for (size_t j = 0; j < exps.size(); ++j) {
            Rat v(0);
            for (size_t i = 0; i < pprime.rows; ++i) v += us[j][i] * Rat(pprime.a[i][w]);
            vals[j] = v;
        }
        Rat low = *std::min_element(vals.begin(), vals.end());
        for (size_t j = 0; j < exps.size(); ++j) {
            Rat nu = vals[j] - low;
            if (nu.get_den() != 1) throw error("not shiftable");
            res.exps[j][w] = nu.get_num();
        }
    }
    res.degenerate = res.exps.size() < 2;
    return res;
}

// Relation g_t as a polynomial over the ring variables.
inline ShiftedPoly relation_poly(const CoxRing& ring, size_t t) {
    ShiftedPoly g;
    for (size_t i : ring.relation_support(t)) {
        g.exps.push_back(ring.monomial(i));
        g.coeffs.push_back(Rat(ring.lambda.a[t][i]));
    }
    g.degenerate = g.exps.size() < 2;
    return g;
}

}  // namespace arrvar
