#pragma once

#include "anticanonical.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace arrvar {

// Search for the Fano varieties with at worst canonical singularities among
// the rings built from five plane lines in special position whose grading has
// rank one or two.  A shape case fixes the arrangement, the blocks carrying
// two variables and the free variable count; what remains is a finite set of
// integer tuples in the extra grading row.

struct SearchCase {
    std::string id;
    size_t picard = 1;            // rank of the grading group
    size_t triple_points = 2;     // concurrence count of the arrangement, 1 or 2
    std::vector<size_t> doubled;  // blocks carrying two variables, increasing
    size_t m = 0;                 // free variables
    size_t nparams = 0;           // undetermined entries of the extra grading row
};

// Representative arrangements: five lines with triple points {0,1,3} and
// {0,2,4}, or five lines with the single triple point {1,2,4}.
inline Arrangement classification_arrangement(size_t triple_points) {
    if (triple_points == 2)
        return make_arrangement(IMat({{1, 0, 0, 1, 1}, {0, 1, 0, 1, 0}, {0, 0, 1, 0, 1}}));
    if (triple_points == 1)
        return make_arrangement(IMat({{1, 0, 0, -1, 0}, {0, 1, 0, -1, -1}, {0, 0, 1, -1, -2}}));
    throw invalid_input("classifier: triple point count must be 1 or 2");
}

// Column permutations induced by linear symmetries of the representative
// arrangement: data sets differing by one of these give isomorphic rings.
// Two triple points admit a dihedral group of order eight.  One triple point
// gives a Klein four group: columns 0 and 3 off the triple point line can be
// swapped, and so can columns 1 and 4 on it, but the cross ratio against the
// point cut out by the 0-3 line rigidifies the remaining moves of {1,2,4}.
inline std::vector<std::vector<size_t>> arrangement_symmetries(size_t triple_points) {
    std::vector<std::vector<size_t>> gens;
    if (triple_points == 2)
        gens = {{0, 3, 2, 1, 4}, {0, 1, 4, 3, 2}, {0, 2, 1, 4, 3}};
    else if (triple_points == 1)
        gens = {{3, 1, 2, 0, 4}, {0, 4, 2, 3, 1}};
    else
        throw invalid_input("classifier: triple point count must be 1 or 2");

    std::set<std::vector<size_t>> group{{0, 1, 2, 3, 4}};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<size_t>> cur(group.begin(), group.end());
        for (const auto& g : cur)
            for (const auto& h : gens) {
                std::vector<size_t> gh(5);
                for (size_t i = 0; i < 5; ++i) gh[i] = g[h[i]];
                if (group.insert(gh).second) grew = true;
            }
    }
    return {group.begin(), group.end()};
}

namespace detail {

inline std::string case_id(size_t picard, size_t m, size_t tp, const std::vector<size_t>& doubled) {
    std::string s = "p" + std::to_string(picard) + "m" + std::to_string(m) + "t" + std::to_string(tp);
    if (!doubled.empty()) {
        s += "-d";
        for (size_t b : doubled) s += std::to_string(b);
    }
    return s;
}

// Lexicographically least representatives of the size-k block subsets under
// the symmetry group.
inline std::vector<std::vector<size_t>> subset_orbit_reps(size_t tp, size_t k) {
    auto group = arrangement_symmetries(tp);
    std::set<std::vector<size_t>> seen;
    std::vector<std::vector<size_t>> reps;
    std::vector<size_t> idx;
    auto rec = [&](auto&& self, size_t start) -> void {
        if (idx.size() == k) {
            if (seen.count(idx)) return;
            for (const auto& g : group) {
                std::vector<size_t> img;
                for (size_t b : idx) img.push_back(g[b]);
                std::sort(img.begin(), img.end());
                seen.insert(std::move(img));
            }
            reps.push_back(idx);
            return;
        }
        for (size_t b = start; b < 5; ++b) {
            idx.push_back(b);
            self(self, b + 1);
            idx.pop_back();
        }
    };
    rec(rec, 0);
    return reps;
}

}  // namespace detail

// All shape cases up to symmetry.  A case needs doubled + m extra columns to
// reach grading rank picard; the extra row fixes every singleton entry to 1
// by row reduction, so only the doubled blocks (or block 0 when none is
// doubled) keep undetermined entries.
inline std::vector<SearchCase> enumerate_cases() {
    std::vector<SearchCase> out;
    for (size_t picard = 1; picard <= 2; ++picard)
        for (size_t delta = 0; delta <= picard; ++delta)
            for (size_t tp = 1; tp <= 2; ++tp)
                for (const auto& rep : detail::subset_orbit_reps(tp, delta)) {
                    SearchCase sc;
                    sc.picard = picard;
                    sc.triple_points = tp;
                    sc.doubled = rep;
                    sc.m = picard - delta;
                    sc.nparams = rep.empty() ? 1 : rep.size() + 1;
                    sc.id = detail::case_id(picard, sc.m, tp, rep);
                    out.push_back(std::move(sc));
                }
    return out;
}

// Graded ring of a shape case at a parameter tuple.  The extra row carries
// (x, y) on the first doubled block and (z, 0) on the second, or x on block 0
// when nothing is doubled; all other T entries are 1, free entries are +1 and
// -1.  This normal form loses no candidates: adding exponent rows moves any
// extra row into it whenever the singleton entries are odd, and even
// singleton entries make the degree matrix columns imprimitive.
inline GradedRing case_ring(const SearchCase& sc, const IVec& params) {
    if (params.size() != sc.nparams) throw invalid_input("classifier: wrong parameter count");
    ExponentData exp;
    exp.n.assign(5, 1);
    for (size_t b : sc.doubled) exp.n[b] = 2;
    exp.l.resize(5);
    for (size_t i = 0; i < 5; ++i) exp.l[i] = exp.n[i] == 2 ? IVec{1, 1} : IVec{2};
    exp.m = sc.m;

    std::vector<size_t> offset(6, 0);
    for (size_t i = 0; i < 5; ++i) offset[i + 1] = offset[i] + exp.n[i];
    IMat d(1, offset[5] + sc.m);
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = 0; j < exp.n[i]; ++j) d.a[0][offset[i] + j] = 1;
    if (sc.doubled.empty()) {
        d.a[0][offset[0]] = params[0];
    } else {
        d.a[0][offset[sc.doubled[0]]] = params[0];
        d.a[0][offset[sc.doubled[0]] + 1] = params[1];
        if (sc.doubled.size() == 2) {
            d.a[0][offset[sc.doubled[1]]] = params[2];
            d.a[0][offset[sc.doubled[1]] + 1] = 0;
        }
    }
    if (sc.m >= 1) d.a[0][offset[5]] = 1;
    if (sc.m == 2) d.a[0][offset[5] + 1] = -1;
    return build_graded_ring(classification_arrangement(sc.triple_points), exp, d);
}

// One variable chosen per block.  The chosen columns positively combine to a
// multiple of the last coordinate axis: vsum/ell is its height, and its sign
// tells which half axis the cone covers.  compatible records whether the
// complementary weights put the target class strictly inside their cone, so
// that the cone appears in the fan selected by the target class.
struct BlockSelection {
    std::vector<size_t> js;
    Int ell = 0;   // positive combination denominator
    Int vsum = 0;  // height of the combined column
    bool compatible = false;

    Rat t() const { return ell == 0 ? Rat(0) : Rat(vsum) / Rat(ell); }
};

inline std::vector<BlockSelection> block_selections(const GradedRing& gr, const IVec& u) {
    const CoxRing& ring = gr.ring;
    const size_t nb = ring.nblocks(), nv = ring.nvars();
    const IVec& drow = gr.p.a[gr.p.rows - 1];
    std::vector<BlockSelection> out;
    std::vector<size_t> js(nb, 0);
    while (true) {
        BlockSelection sel;
        sel.js = js;
        Int prod(1);
        for (size_t i = 0; i < nb; ++i) prod *= ring.exp.l[i][js[i]];
        IVec ells(nb);
        sel.ell = -Int(ring.nrelations()) * prod;
        for (size_t i = 0; i < nb; ++i) {
            ells[i] = prod / ring.exp.l[i][js[i]];
            sel.ell += ells[i];
        }
        for (size_t i = 0; i < nb; ++i) sel.vsum += ells[i] * drow[ring.var(i, js[i])];

        if (gr.k.rho == 1) {
            sel.compatible = true;
        } else {
            std::vector<bool> chosen(nv, false);
            for (size_t i = 0; i < nb; ++i) chosen[ring.var(i, js[i])] = true;
            std::vector<IVec> gens;
            for (size_t j = 0; j < nv; ++j)
                if (!chosen[j]) gens.push_back(gr.k.qfree.col(j));
            sel.compatible =
                Cone::from_generators(gr.k.rho, gens).relative_interior_contains(to_rat(u));
        }
        out.push_back(std::move(sel));

        size_t i = 0;
        while (i < nb && js[i] + 1 == ring.exp.n[i]) js[i++] = 0;
        if (i == nb) break;
        ++js[i];
    }
    return out;
}

// Acceptance filters at one parameter tuple, all necessary for a Fano variety
// with at worst canonical singularities:
//  - the effective cone is pointed and the anticanonical class lies strictly
//    inside the moving cone (strictly inside the effective cone for rank 1);
//  - both half axis directions are covered, by a free column or by a
//    compatible selection cone of matching sign;
//  - every compatible selection cone has height within [-1, 1], the bound on
//    the discrepancy of its extra ray.
inline bool classification_filters(const GradedRing& gr) {
    const Grading& g = gr.k;
    const size_t nv = gr.ring.nvars();
    IVec u = anticanonical_class(gr.ring, g).free;

    if (g.rho == 1) {
        int sign = 0;
        for (size_t j = 0; j < nv; ++j) {
            const Int& w = g.qfree.a[0][j];
            if (w == 0) return false;
            int s = w > 0 ? 1 : -1;
            if (sign == 0) sign = s;
            if (s != sign) return false;
        }
        if (u[0] == 0 || (u[0] > 0 ? 1 : -1) != sign) return false;
    } else {
        std::vector<IVec> w;
        for (size_t j = 0; j < nv; ++j) w.push_back(g.qfree.col(j));
        if (!Cone::from_generators(g.rho, w).pointed()) return false;
        std::optional<Cone> mov;
        for (size_t j = 0; j < nv; ++j) {
            std::vector<IVec> rest;
            for (size_t j2 = 0; j2 < nv; ++j2)
                if (j2 != j) rest.push_back(w[j2]);
            Cone cj = Cone::from_generators(g.rho, rest);
            mov = mov ? intersect(*mov, cj) : cj;
            if (mov->dim() < g.rho) return false;
        }
        if (!mov->relative_interior_contains(to_rat(u))) return false;
    }

    bool plus = false, minus = false;
    const IVec& drow = gr.p.a[gr.p.rows - 1];
    for (size_t k = 0; k < gr.ring.exp.m; ++k) {
        const Int& e = drow[gr.ring.nshifted() + k];
        if (e == 1) plus = true;
        if (e == -1) minus = true;
    }
    for (const BlockSelection& sel : block_selections(gr, u)) {
        if (!sel.compatible || sel.vsum == 0) continue;
        Rat t = sel.t();
        if (t > 1 || t < -1) return false;
        (sel.vsum > 0 ? plus : minus) = true;
    }
    return plus && minus;
}

// Sweep window for the undetermined entries.  Accepted tuples must keep
// `margin` away from the window edge; otherwise the window proves nothing and
// the sweep aborts.
struct SweepWindow {
    Int lo = -16, hi = 8;
    Int margin = 2;
};

inline std::vector<IVec> bound_parameters(const SearchCase& sc, const SweepWindow& win = {}) {
    std::vector<IVec> grid;
    auto consider = [&](const IVec& p) {
        GradedRing gr;
        try {
            gr = case_ring(sc, p);
        } catch (const invalid_input&) {
            return;  // imprimitive or coinciding degree columns
        }
        if (!classification_filters(gr)) return;
        for (size_t i = 0; i < p.size(); ++i) {
            bool edge = win.hi - p[i] < win.margin;
            if (i != 2) edge = edge || p[i] - win.lo < win.margin;  // z >= 1 is structural
            if (edge)
                throw error("classifier: accepted tuple " + to_string(p) + " of case " + sc.id +
                            " is within the margin of the sweep window edge");
        }
        grid.push_back(p);
    };

    if (sc.nparams == 1) {
        for (Int x = win.lo; x <= win.hi; ++x) consider(IVec{x});
    } else if (sc.nparams == 2) {
        for (Int x = win.lo; x <= win.hi; ++x)
            for (Int y = win.lo; y < x; ++y) consider(IVec{x, y});
    } else {
        for (Int x = win.lo; x <= win.hi; ++x)
            for (Int y = win.lo; y < x; ++y)
                for (Int z = 1; z <= win.hi; ++z) consider(IVec{x, y, z});
    }
    return grid;
}

enum class CandidateStatus { accepted, wall, rejected, failed };

inline const char* candidate_status_name(CandidateStatus s) {
    switch (s) {
        case CandidateStatus::accepted: return "accepted";
        case CandidateStatus::wall: return "wall";
        case CandidateStatus::rejected: return "rejected";
        default: return "failed";
    }
}

struct Candidate {
    std::string case_id;
    size_t picard = 1;
    size_t triple_points = 2;
    std::vector<size_t> doubled;
    size_t m = 0;
    IVec params;

    CandidateStatus status = CandidateStatus::failed;
    std::string note;  // reject or failure reason; primality caveats
    KElem klass;       // anticanonical class
    IVec torsion;      // invariant factors of the grading group
    Singularity sing = Singularity::not_log_terminal;
    bool fano = false;
    Int gorenstein_index = 0;
    std::string key;  // normal form, accepted candidates only
    std::optional<VarietyData> variety;
};

namespace detail {

// Normal form of (exponent data, extra row) under arrangement symmetries,
// swaps inside two-variable blocks, global sign, and reduction by the lattice
// of exponent rows.  Data sets with equal keys give isomorphic rings.
inline std::string candidate_key(size_t tp, const ExponentData& exp, const IVec& drow) {
    auto group = arrangement_symmetries(tp);
    std::vector<size_t> off(6, 0);
    for (size_t i = 0; i < 5; ++i) off[i + 1] = off[i] + exp.n[i];
    const size_t nshift = off[5], nv = nshift + exp.m;

    std::string best;
    for (const auto& pi : group) {
        ExponentData e2;
        e2.m = exp.m;
        e2.n.resize(5);
        e2.l.resize(5);
        for (size_t i = 0; i < 5; ++i) {
            e2.n[i] = exp.n[pi[i]];
            e2.l[i] = exp.l[pi[i]];
        }
        std::vector<size_t> off2(6, 0);
        for (size_t i = 0; i < 5; ++i) off2[i + 1] = off2[i] + e2.n[i];
        std::vector<size_t> dbl;
        for (size_t i = 0; i < 5; ++i)
            if (e2.n[i] == 2) dbl.push_back(i);

        IMat rows(4, nv);
        for (size_t i = 1; i < 5; ++i) {
            for (size_t j = 0; j < e2.n[0]; ++j) rows.a[i - 1][off2[0] + j] = -e2.l[0][j];
            for (size_t j = 0; j < e2.n[i]; ++j) rows.a[i - 1][off2[i] + j] = e2.l[i][j];
        }
        IMat h = row_hnf(rows);

        for (int sign : {1, -1}) {
            for (size_t mask = 0; mask < (size_t(1) << dbl.size()); ++mask) {
                IVec d2(nv, 0);
                for (size_t i = 0; i < 5; ++i)
                    for (size_t j = 0; j < e2.n[i]; ++j) {
                        size_t jj = j;
                        for (size_t b = 0; b < dbl.size(); ++b)
                            if (dbl[b] == i && (mask >> b) & 1) jj = 1 - j;
                        d2[off2[i] + j] = sign * drow[off[pi[i]] + jj];
                    }
                for (size_t k = 0; k < exp.m; ++k) d2[off2[5] + k] = sign * drow[nshift + k];
                std::sort(d2.begin() + off2[5], d2.end(), [](const Int& a, const Int& b) {
                    return a > b;
                });

                for (size_t r = 0; r < h.rows; ++r) {
                    size_t c = 0;
                    while (c < nv && h.a[r][c] == 0) ++c;
                    if (c == nv) continue;
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), d2[c].get_mpz_t(), h.a[r][c].get_mpz_t());
                    for (size_t j = 0; j < nv; ++j) d2[j] -= q * h.a[r][j];
                }

                std::string s = "t" + std::to_string(tp) + "|n:";
                for (size_t i = 0; i < 5; ++i) s += std::to_string(e2.n[i]) + ",";
                s += "|l:";
                for (size_t i = 0; i < 5; ++i) s += to_string(e2.l[i]) + ";";
                s += "|m:" + std::to_string(exp.m) + "|d:" + to_string(d2);
                if (best.empty() || s < best) best = s;
            }
        }
    }
    return best;
}

}  // namespace detail

// Full verdict chain at one parameter tuple: variables prime, fan selected by
// the anticanonical class, singularity type, Fano test.  A tuple whose
// anticanonical class sits on a chamber wall is reported as such, not
// silently dropped.
inline Candidate evaluate_point(const SearchCase& sc, const IVec& params) {
    Candidate c;
    c.case_id = sc.id;
    c.picard = sc.picard;
    c.triple_points = sc.triple_points;
    c.doubled = sc.doubled;
    c.m = sc.m;
    c.params = params;

    GradedRing gr = case_ring(sc, params);
    c.klass = anticanonical_class(gr.ring, gr.k);
    c.torsion = gr.k.torsion;

    for (const PrimalityRecord& rec : k_prime_variables(gr.ring, gr.k)) {
        if (rec.status == Primality::not_prime) {
            c.status = CandidateStatus::rejected;
            c.note = "variable " + gr.ring.var_name(rec.var) + " is not prime: " + rec.reason;
            return c;
        }
        if (rec.status == Primality::undecided)
            c.note += "primality of " + gr.ring.var_name(rec.var) + " undecided: " + rec.reason + "; ";
    }

    Fan fan;
    try {
        fan = fan_from_ample(gr, to_rat(c.klass.free));
    } catch (const error& e) {
        std::string what = e.what();
        c.status = what.find("ambiguous chamber") != std::string::npos ? CandidateStatus::wall
                                                                       : CandidateStatus::failed;
        c.note += what;
        return c;
    }

    VarietyData v = make_variety(gr, fan);
    c.sing = singularity_type(v).type;
    c.gorenstein_index = gorenstein_check(v).index;
    try {
        c.fano = is_fano(v);
    } catch (const error& e) {
        c.status = CandidateStatus::failed;
        c.note += e.what();
        return c;
    }

    if (c.sing != Singularity::terminal && c.sing != Singularity::canonical) {
        c.status = CandidateStatus::rejected;
        c.note += "singularities worse than canonical";
        return c;
    }
    if (!c.fano) {
        c.status = CandidateStatus::rejected;
        c.note += "anticanonical class not ample";
        return c;
    }
    c.status = CandidateStatus::accepted;
    c.key = detail::candidate_key(sc.triple_points, gr.ring.exp, gr.p.a[gr.p.rows - 1]);
    c.variety = std::move(v);
    return c;
}

inline std::vector<Candidate> run_search(const std::vector<SearchCase>& cases,
                                         const SweepWindow& win = {}) {
    std::vector<Candidate> out;
    for (const SearchCase& sc : cases)
        for (const IVec& p : bound_parameters(sc, win)) out.push_back(evaluate_point(sc, p));
    return out;
}

struct DedupeResult {
    std::vector<Candidate> representatives;            // one per key, ordered by key
    std::vector<std::vector<size_t>> members;          // input indices behind each representative
    std::vector<std::pair<size_t, size_t>> undecided;  // representative pairs with equal
                                                       // invariants but different keys
};

// Merge accepted candidates with equal normal-form keys.  Distinct keys with
// equal coarse invariants cannot be told apart by the implemented moves and
// are flagged instead of merged.
inline DedupeResult dedupe(const std::vector<Candidate>& candidates) {
    std::map<std::string, std::vector<size_t>> by_key;
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].status != CandidateStatus::accepted) continue;
        if (candidates[i].key.empty()) throw error("dedupe: accepted candidate without a key");
        by_key[candidates[i].key].push_back(i);
    }
    DedupeResult out;
    for (const auto& [key, members] : by_key) {
        out.representatives.push_back(candidates[members.front()]);
        out.members.push_back(members);
    }
    auto coarse = [](const Candidate& c) {
        return std::to_string(c.triple_points) + "|doubled:" + std::to_string(c.doubled.size()) +
               "|m:" + std::to_string(c.m) + "|rank:" + std::to_string(c.picard) +
               "|tors:" + to_string(c.torsion) + "|" + singularity_name(c.sing) + "|gor:" +
               to_string(c.gorenstein_index) + "|" + (c.fano ? "fano" : "-");
    };
    std::map<std::string, std::vector<size_t>> by_coarse;
    for (size_t i = 0; i < out.representatives.size(); ++i)
        by_coarse[coarse(out.representatives[i])].push_back(i);
    for (const auto& [inv, reps] : by_coarse)
        for (size_t i = 0; i < reps.size(); ++i)
            for (size_t j = i + 1; j < reps.size(); ++j)
                out.undecided.emplace_back(reps[i], reps[j]);
    return out;
}

// ---------------------------------------------------------------------------
// Products of two rank-one factors

namespace detail {

// Single-relation factor on k variables: pairs with exponents (1,1) plus one
// exponent-2 singleton when k is odd; the arrangement is [I | -1], so the
// relation is the sum of all block monomials.
inline std::pair<Arrangement, ExponentData> product_factor(size_t k) {
    if (k < 5) throw invalid_input("product: factors need at least five variables");
    const size_t blocks = (k + 1) / 2;
    IMat a(blocks - 1, blocks);
    for (size_t i = 0; i + 1 < blocks; ++i) {
        a.a[i][i] = 1;
        a.a[i][blocks - 1] = -1;
    }
    ExponentData e;
    e.m = 0;
    e.n.assign(blocks, 2);
    e.l.assign(blocks, IVec{1, 1});
    if (k % 2 == 1) {
        e.n[blocks - 1] = 1;
        e.l[blocks - 1] = IVec{2};
    }
    return {make_arrangement(std::move(a)), std::move(e)};
}

inline IMat unimodular_inverse(const IMat& v) {
    const size_t n = v.rows;
    QMat q = to_rat(v);
    IMat inv(n, n);
    for (size_t j = 0; j < n; ++j) {
        QVec e(n, Rat(0));
        e[j] = 1;
        auto x = solve(q, e);
        if (!x) throw error("product: singular transition matrix");
        for (size_t i = 0; i < n; ++i) {
            if ((*x)[i].get_den() != 1) throw error("product: transition matrix not unimodular");
            inv.a[i][j] = (*x)[i].get_num();
        }
    }
    return inv;
}

}  // namespace detail

struct ProductFamilyResult {
    GradedRing gr;
    VarietyData variety;
    IVec ample;                 // selected class in the basis of the grading
    size_t dim = 0;
    bool smooth_direct = false; // chart-by-chart certificate, independent path
    SmoothnessReport report;    // generic stratum sweep
    bool fano = false;
    bool fano_expected = false; // strict twist bound a_1 * (k2-2) < k1-2; at
                                // equality the class is nef but not ample
};

// Variety of the product of two single-relation factors on k1 and k2
// variables, glued over a rank-two grading: the first factor variables have
// degrees (1, 0), the second (a_j, 1) with the twist vector a.  Admissible
// twists pair up to cancel, decrease along odd positions and vanish on a
// trailing singleton.
inline ProductFamilyResult product_family(size_t k1, size_t k2, const IVec& a) {
    if (a.size() != k2) throw invalid_input("product: need one twist entry per second factor variable");
    for (size_t i = 0; i + 1 < k2; i += 2) {
        if (a[i] < 0) throw invalid_input("product: twists at odd positions must be nonnegative");
        if (a[i + 1] != -a[i]) throw invalid_input("product: paired twists must cancel");
        if (i + 3 < k2 && a[i] < a[i + 2])
            throw invalid_input("product: twists must decrease along odd positions");
    }
    if (k2 % 2 == 1 && a[k2 - 1] != 0)
        throw invalid_input("product: the trailing twist must vanish");

    auto [arr1, exp1] = detail::product_factor(k1);
    auto [arr2, exp2] = detail::product_factor(k2);
    const size_t b1 = exp1.n.size(), b2 = exp2.n.size(), n = k1 + k2;
    ProductData pd = product_ring({arr1, arr2}, {exp1, exp2}, 0);

    ProductFamilyResult out;
    out.gr.ring = build_ring(pd.arr, pd.exp);
    out.gr.has_d = true;
    const CoxRing& rg = out.gr.ring;

    // Degree matrix of the grading: first factor (1, 0), second (a_j, 1).
    IMat q(2, n);
    for (size_t j = 0; j < k1; ++j) q.a[0][j] = 1;
    for (size_t j = 0; j < k2; ++j) {
        q.a[0][k1 + j] = a[j];
        q.a[1][k1 + j] = 1;
    }

    // Exponent rows of the two factor relations, one group per factor.  The
    // generic normalization against global block 0 is not orthogonal to q, so
    // the kernel rows are grouped by factor instead.
    std::vector<IVec> prows;
    auto fill = [&](size_t base, size_t nblocks) {
        for (size_t t = 1; t < nblocks; ++t) {
            IVec row(n, 0);
            for (size_t j = 0; j < rg.exp.n[base]; ++j) row[rg.var(base, j)] = -rg.exp.l[base][j];
            for (size_t j = 0; j < rg.exp.n[base + t]; ++j)
                row[rg.var(base + t, j)] = rg.exp.l[base + t][j];
            prows.push_back(std::move(row));
        }
    };
    fill(0, b1);
    fill(b1, b2);

    // Complete the exponent rows to a basis of the saturated kernel of q:
    // express them in kernel coordinates, check the embedding is primitive,
    // and append the complementary rows of the coordinate change.
    IMat kq = kernel_basis(q);
    IMat kqt = kq.transpose();
    IMat coords(prows.size(), kq.rows);
    for (size_t i = 0; i < prows.size(); ++i) {
        auto x = lattice_solve(kqt, prows[i]);
        if (!x) throw error("product: exponent row outside the kernel of the degree matrix");
        coords.a[i] = *x;
    }
    SmithForm sf = smith(coords);
    if (sf.rank != coords.rows) throw error("product: exponent rows are dependent");
    for (const Int& d : sf.diag)
        if (d != 1) throw error("product: exponent rows are not primitively embedded");
    IMat vinv = detail::unimodular_inverse(sf.v);
    for (size_t i = coords.rows; i < kq.rows; ++i) {
        IVec row(n, 0);
        for (size_t j = 0; j < kq.rows; ++j)
            for (size_t c = 0; c < n; ++c) row[c] += vinv.a[i][j] * kq.a[j][c];
        prows.push_back(std::move(row));
    }
    out.gr.p = IMat(std::move(prows));
    for (size_t j = 0; j < n; ++j) {
        IVec cj = out.gr.p.col(j);
        if (is_zero(cj) || gcd_vec(cj) != 1)
            throw error("product: degree matrix column " + std::to_string(j) + " is not primitive");
    }
    if (rank(out.gr.p) != out.gr.p.rows) throw error("product: degree matrix is rank-deficient");
    out.gr.k = make_grading(out.gr.p);
    if (out.gr.k.rho != 2 || !out.gr.k.torsion.empty())
        throw error("product: grading group is not free of rank two");

    // Transition from the q basis to the computed grading basis.
    IMat trans(2, 2);
    for (size_t i = 0; i < 2; ++i) {
        trans.a[i][0] = out.gr.k.qfree.a[i][0];
        trans.a[i][1] = out.gr.k.qfree.a[i][k1] - a[0] * out.gr.k.qfree.a[i][0];
    }
    Int det = trans.a[0][0] * trans.a[1][1] - trans.a[0][1] * trans.a[1][0];
    if (det != 1 && det != -1) throw error("product: transition matrix not unimodular");
    for (size_t j = 0; j < n; ++j) {
        IVec expected = mul(trans, IVec{q.a[0][j], q.a[1][j]});
        if (expected != out.gr.k.qfree.col(j)) throw error("product: weight transition mismatch");
    }

    out.ample = mul(trans, IVec{a[0] + 1, Int(1)});
    Fan fan = fan_from_ample(out.gr, to_rat(out.ample));
    out.variety = make_variety(out.gr, fan);
    out.dim = out.variety.dim();

    // Independent smoothness certificate: enumerate coordinate subsets that
    // meet the total space (no factor keeps exactly one surviving relation
    // monomial) and are semistable (the selected class lies in the cone of
    // surviving weights); each needs surviving variables in both factors
    // (full relation Jacobian) and surviving weights generating Z^2 (trivial
    // isotropy).
    {
        std::vector<std::vector<uint64_t>> monomials(2);
        size_t var = 0;
        for (size_t i = 0; i < rg.nblocks(); ++i) {
            uint64_t m = 0;
            for (size_t j = 0; j < rg.exp.n[i]; ++j) m |= uint64_t(1) << (var + j);
            monomials[i < b1 ? 0 : 1].push_back(m);
            var += rg.exp.n[i];
        }
        const uint64_t f1 = (uint64_t(1) << k1) - 1, f2 = ((uint64_t(1) << n) - 1) ^ f1;
        const IVec uq{a[0] + 1, Int(1)};  // selected class in the q basis
        // Every weight sits in the halfplane y >= 0, so the cross product is
        // a total slope order and 2D cone membership reduces to comparing
        // against the two extreme alive weights.
        auto relevant = [&](uint64_t alive) {
            bool any = false;
            Int lo_x, lo_y, hi_x, hi_y;
            for (size_t j = 0; j < n; ++j) {
                if (!((alive >> j) & 1)) continue;
                Int wx = q.a[0][j], wy = q.a[1][j];
                if (!any) {
                    lo_x = hi_x = wx;
                    lo_y = hi_y = wy;
                    any = true;
                    continue;
                }
                if (wx * lo_y - wy * lo_x < 0) lo_x = std::move(wx), lo_y = std::move(wy);
                else if (wx * hi_y - wy * hi_x > 0) hi_x = std::move(wx), hi_y = std::move(wy);
            }
            if (!any) return false;
            return uq[0] * lo_y - uq[1] * lo_x <= 0 && uq[0] * hi_y - uq[1] * hi_x >= 0;
        };
        out.smooth_direct = true;
        for (uint64_t alive = 0; alive < (uint64_t(1) << n) && out.smooth_direct; ++alive) {
            bool face = true;
            for (size_t f = 0; f < 2 && face; ++f) {
                size_t count = 0;
                for (uint64_t m : monomials[f])
                    if ((alive & m) == m) ++count;
                if (count == 1) face = false;
            }
            if (!face || !relevant(alive)) continue;
            if (!(alive & f1) || !(alive & f2)) {
                out.smooth_direct = false;
                break;
            }
            Int g(0);
            for (size_t j = 0; j < n && g != 1; ++j) {
                if (!((alive >> j) & 1)) continue;
                for (size_t j2 = j + 1; j2 < n && g != 1; ++j2) {
                    if (!((alive >> j2) & 1)) continue;
                    g = gcd(g, q.a[0][j] * q.a[1][j2] - q.a[0][j2] * q.a[1][j]);
                }
            }
            if (g != 1) out.smooth_direct = false;
        }
    }

    out.report = smoothness_report(out.variety);
    out.fano = is_fano(out.variety);
    out.fano_expected = a[0] >= 0 && a[0] * Int(k2 - 2) < Int(k1 - 2);
    return out;
}

}  // namespace arrvar
