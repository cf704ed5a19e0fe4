#pragma once

#include "arrangement.hpp"
#include "grading.hpp"

#include <optional>
#include <string>
#include <vector>

namespace arrvar {

// Block sizes n_i and exponents l_ij for the graded ring attached to a line
// arrangement, plus the number m of free variables.
struct ExponentData {
    std::vector<size_t> n;   // one entry per arrangement column, n_i >= 1
    std::vector<IVec> l;     // l[i] has n[i] entries, all >= 1
    size_t m = 0;
};

struct CoxRing {
    Arrangement arr;
    ExponentData exp;
    IMat lambda{0, 0};    // (r-c) x (r+1) relation coefficients
    IMat p0{0, 0};        // r x nvars exponent matrix of the relations
    std::vector<size_t> offset;  // offset[i] = first variable index of block i

    size_t r() const { return arr.r(); }
    size_t c() const { return arr.c(); }
    size_t nblocks() const { return exp.n.size(); }
    size_t nshifted() const { return offset.back(); }  // total count of T variables
    size_t nvars() const { return nshifted() + exp.m; }
    size_t nrelations() const { return lambda.rows; }
    size_t dim() const { return nvars() - nrelations(); }

    size_t var(size_t i, size_t j) const { return offset[i] + j; }
    bool is_free_var(size_t v) const { return v >= nshifted(); }

    // Block of a T variable; free variables map to npos.
    size_t block_of(size_t v) const {
        if (is_free_var(v)) return static_cast<size_t>(-1);
        size_t i = 0;
        while (offset[i + 1] <= v) ++i;
        return i;
    }

    std::string var_name(size_t v) const {
        if (is_free_var(v)) return "S" + std::to_string(v - nshifted() + 1);
        size_t i = block_of(v);
        return "T" + std::to_string(i) + std::to_string(v - offset[i] + 1);
    }

    // Exponent vector of the monomial T_i^{l_i}.
    IVec monomial(size_t i) const {
        IVec e(nvars(), 0);
        for (size_t j = 0; j < exp.n[i]; ++j) e[var(i, j)] = exp.l[i][j];
        return e;
    }

    // Support of relation t: blocks with nonzero coefficient.
    std::vector<size_t> relation_support(size_t t) const {
        std::vector<size_t> s;
        for (size_t i = 0; i <= r(); ++i)
            if (lambda.a[t][i] != 0) s.push_back(i);
        return s;
    }
};

namespace detail {

inline std::string join_indices(const std::vector<size_t>& v) {
    std::string s;
    for (size_t x : v) {
        if (!s.empty()) s += ", ";
        s += std::to_string(x);
    }
    return s;
}

// Relation coefficient rows: a canonical basis of ker(A) subseteq Z^{r+1}.
// When the leading c+1 columns are a basis the rows take the echelon shape
// (coefficients on the leading block, -k e_i on column i); otherwise the
// canonical HNF kernel basis is used.
inline IMat relation_rows(const Arrangement& arr) {
    const size_t c = arr.c(), r = arr.r();
    std::vector<size_t> lead(c + 1);
    for (size_t i = 0; i <= c; ++i) lead[i] = i;
    if (rank_cols(arr.a, lead) == c + 1) {
        QMat red = to_rat(arr.a);
        rref(red);
        std::vector<IVec> rows;
        for (size_t i = c + 1; i <= r; ++i) {
            QVec v(r + 1, Rat(0));
            for (size_t k = 0; k <= c; ++k) v[k] = red.a[k][i];
            v[i] = Rat(-1);
            rows.push_back(primitive_vector(v));
        }
        return IMat(std::move(rows));
    }
    return kernel_basis(arr.a);
}

}  // namespace detail

inline CoxRing build_ring(const Arrangement& arr, const ExponentData& exp) {
    const size_t r = arr.r(), c = arr.c();
    if (exp.n.size() != r + 1) throw invalid_input("ring: block count must match arrangement columns");
    if (exp.l.size() != exp.n.size()) throw invalid_input("ring: exponent rows must match block count");
    for (size_t i = 0; i <= r; ++i) {
        if (exp.n[i] == 0) throw invalid_input("ring: empty block");
        if (exp.l[i].size() != exp.n[i]) throw invalid_input("ring: exponent row length mismatch");
        for (const Int& e : exp.l[i])
            if (e < 1) throw invalid_input("ring: exponents must be positive");
    }

    CoxRing ring;
    ring.arr = arr;
    ring.exp = exp;
    ring.offset.resize(r + 2, 0);
    for (size_t i = 0; i <= r; ++i) ring.offset[i + 1] = ring.offset[i] + exp.n[i];
    ring.lambda = detail::relation_rows(arr);
    if (ring.lambda.rows != r - c) throw invalid_input("ring: arrangement kernel has wrong rank");

    ring.p0 = IMat(r, ring.nvars());
    for (size_t i = 1; i <= r; ++i) {
        for (size_t j = 0; j < exp.n[0]; ++j) ring.p0.a[i - 1][ring.var(0, j)] = -exp.l[0][j];
        for (size_t j = 0; j < exp.n[i]; ++j) ring.p0.a[i - 1][ring.var(i, j)] = exp.l[i][j];
    }
    return ring;
}

// Ring together with its degree matrix and grading group. Without d rows the
// grading is by K0 = Z^nvars / im(P0^T); with d rows the full degree matrix
// P = [P0; d] must have pairwise different primitive columns spanning Q^{r+s}.
struct GradedRing {
    CoxRing ring;
    IMat p{0, 0};
    Grading k;
    bool has_d = false;

    size_t s() const { return p.rows - ring.r(); }
};

inline GradedRing build_graded_ring(const Arrangement& arr, const ExponentData& exp,
                                    const std::optional<IMat>& d = std::nullopt) {
    GradedRing g;
    g.ring = build_ring(arr, exp);
    g.has_d = d.has_value() && d->rows > 0;
    if (!g.has_d) {
        g.p = g.ring.p0;
    } else {
        if (d->cols != g.ring.nvars())
            throw invalid_input("grading: d rows must have one column per variable");
        std::vector<IVec> rows = g.ring.p0.a;
        rows.insert(rows.end(), d->a.begin(), d->a.end());
        g.p = IMat(std::move(rows));
        for (size_t j = 0; j < g.p.cols; ++j) {
            IVec cj = g.p.col(j);
            if (arrvar::is_zero(cj) || gcd_vec(cj) != 1)
                throw invalid_input("grading: degree matrix column " + std::to_string(j) +
                                    " is not primitive");
            for (size_t j2 = j + 1; j2 < g.p.cols; ++j2)
                if (cj == g.p.col(j2))
                    throw invalid_input("grading: degree matrix columns " + std::to_string(j) +
                                        " and " + std::to_string(j2) + " coincide");
        }
        if (rank(g.p) != g.p.rows) throw invalid_input("grading: degree matrix is rank-deficient");
    }
    g.k = make_grading(g.p);
    return g;
}

// Common degree of the monomials of relation t; throws if inhomogeneous.
inline KElem relation_degree(const CoxRing& ring, const Grading& g, size_t t) {
    std::vector<size_t> supp = ring.relation_support(t);
    KElem d = g.degree(ring.monomial(supp[0]));
    for (size_t k = 1; k < supp.size(); ++k)
        if (!(g.degree(ring.monomial(supp[k])) == d)) throw error("relation not homogeneous");
    return d;
}

inline KElem anticanonical_class(const CoxRing& ring, const Grading& g) {
    KElem k{IVec(g.rho, 0), IVec(g.torsion.size(), 0)};
    for (size_t v = 0; v < ring.nvars(); ++v) k = g.add(k, g.degree_of_var(v));
    for (size_t t = 0; t < ring.nrelations(); ++t) k = g.sub(k, relation_degree(ring, g, t));
    return k;
}

// Certificate that ring data is not brought into honest form, if any.
struct HonestyReport {
    bool honest = true;
    std::string certificate;  // empty when honest
};

inline HonestyReport check_honest(const CoxRing& ring) {
    for (size_t i = 0; i <= ring.r(); ++i)
        if (ring.exp.n[i] == 1 && ring.exp.l[i][0] == 1)
            return {false, "variable " + ring.var_name(ring.var(i, 0)) +
                               " enters its relations linearly; eliminate it"};
    std::vector<std::vector<size_t>> comp = decompose(ring.arr);
    if (comp.size() > 1) {
        for (const std::vector<size_t>& g : comp)
            if (subset_rank(ring.arr, g) == 1)
                return {false, "free-variable reduction: column block {" + detail::join_indices(g) +
                                   "} spans a line"};
        std::string parts;
        for (const std::vector<size_t>& g : comp) {
            if (!parts.empty()) parts += ", ";
            parts += "{" + detail::join_indices(g) + "}";
        }
        return {false, "product decomposition into column blocks " + parts};
    }
    if (position_type(ring.arr) == Position::general)
        return {false, "arrangement columns are in general position"};
    return {};
}

enum class Primality { prime, not_prime, undecided };

struct PrimalityRecord {
    size_t var = 0;
    Primality status = Primality::prime;
    std::string reason;
};

// Is the variable a K-prime element of the ring? Free variables always are;
// for T_ij the residual relation system modulo T_ij is analyzed.
inline std::vector<PrimalityRecord> k_prime_variables(const CoxRing& ring, const Grading& g) {
    std::vector<PrimalityRecord> out;
    for (size_t v = 0; v < ring.nvars(); ++v) {
        PrimalityRecord rec;
        rec.var = v;
        if (ring.is_free_var(v)) {
            rec.reason = "free variable";
            out.push_back(rec);
            continue;
        }
        const size_t bi = ring.block_of(v);
        // Residual supports: block bi drops out of every relation containing it.
        std::vector<std::vector<size_t>> supp(ring.nrelations());
        std::vector<size_t> dirty;
        for (size_t t = 0; t < ring.nrelations(); ++t) {
            supp[t] = ring.relation_support(t);
            auto it = std::find(supp[t].begin(), supp[t].end(), bi);
            if (it != supp[t].end()) {
                supp[t].erase(it);
                dirty.push_back(t);
            }
        }
        for (size_t t = 0; t < ring.nrelations() && rec.status == Primality::prime; ++t) {
            if (supp[t].size() <= 1)
                rec = {v, Primality::not_prime, "a relation degenerates to a monomial"};
        }
        for (size_t t1 = 0; t1 + 1 < ring.nrelations() && rec.status == Primality::prime; ++t1)
            for (size_t t2 = t1 + 1; t2 < ring.nrelations(); ++t2) {
                if (supp[t1] != supp[t2]) continue;
                IMat pair(2, supp[t1].size());
                for (size_t k = 0; k < supp[t1].size(); ++k) {
                    pair.a[0][k] = ring.lambda.a[t1][supp[t1][k]];
                    pair.a[1][k] = ring.lambda.a[t2][supp[t1][k]];
                }
                if (rank(pair) == 1) {
                    rec = {v, Primality::not_prime, "two relations become proportional"};
                    break;
                }
            }
        // Binomial residuals: T^mu + a T^nu factors iff the class of
        // (mu - nu)/gcd has order smaller than the gcd of the exponents.
        for (size_t t : dirty) {
            if (rec.status != Primality::prime) break;
            if (supp[t].size() != 2) continue;
            IVec mu = ring.monomial(supp[t][0]), nu = ring.monomial(supp[t][1]);
            Int content = gcd(gcd_vec(mu), gcd_vec(nu));
            if (content == 1) continue;
            IVec diff = sub(mu, nu);
            for (Int& x : diff) x /= content;
            KElem w = g.degree(diff);
            if (!arrvar::is_zero(w.free)) continue;
            if (g.torsion_order(w) < content)
                rec = {v, Primality::not_prime, "a residual binomial factors homogeneously"};
        }
        // Residual systems that stay coupled through lost terms with a large
        // relation and a coefficient-rank drop are out of reach here.
        if (rec.status == Primality::prime && dirty.size() >= 2) {
            bool big = false;
            for (size_t t : dirty) big = big || supp[t].size() >= 3;
            std::vector<size_t> cols;
            for (size_t t : dirty)
                for (size_t b : supp[t]) cols.push_back(b);
            std::sort(cols.begin(), cols.end());
            cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
            IMat res(dirty.size(), cols.size());
            for (size_t a = 0; a < dirty.size(); ++a)
                for (size_t k = 0; k < cols.size(); ++k)
                    res.a[a][k] = ring.lambda.a[dirty[a]][cols[k]];
            if (big && rank(res) < res.rows)
                rec = {v, Primality::undecided, "coupled residual system of deficient rank"};
        }
        if (rec.status == Primality::prime && rec.reason.empty())
            rec.reason = "residual system stays a complete intersection with disjoint monomials";
        out.push_back(rec);
    }
    return out;
}

// Data of a ring product with extra free variables and a fresh degree matrix.
struct ProductData {
    Arrangement arr;
    ExponentData exp;
};

inline ProductData product_ring(const std::vector<Arrangement>& arrs,
                                const std::vector<ExponentData>& exps, size_t m) {
    if (arrs.empty() || arrs.size() != exps.size())
        throw invalid_input("product: need matching nonempty factor lists");
    size_t crows = 0, ccols = 0;
    for (size_t f = 0; f < arrs.size(); ++f) {
        if (exps[f].m != 0) throw invalid_input("product: factors must not carry free variables");
        if (!is_indecomposable(arrs[f])) throw invalid_input("product: factor arrangement decomposes");
        for (size_t i = 0; i < exps[f].n.size(); ++i)
            if (exps[f].n[i] == 1 && exps[f].l[i][0] == 1)
                throw invalid_input("product: factor has a linear variable");
        crows += arrs[f].a.rows;
        ccols += arrs[f].a.cols;
    }
    ProductData out;
    out.arr.a = IMat(crows, ccols);
    size_t ro = 0, co = 0;
    for (size_t f = 0; f < arrs.size(); ++f) {
        for (size_t i = 0; i < arrs[f].a.rows; ++i)
            for (size_t j = 0; j < arrs[f].a.cols; ++j)
                out.arr.a.a[ro + i][co + j] = arrs[f].a.a[i][j];
        ro += arrs[f].a.rows;
        co += arrs[f].a.cols;
        out.exp.n.insert(out.exp.n.end(), exps[f].n.begin(), exps[f].n.end());
        out.exp.l.insert(out.exp.l.end(), exps[f].l.begin(), exps[f].l.end());
    }
    out.exp.m = m;
    return out;
}

}  // namespace arrvar
