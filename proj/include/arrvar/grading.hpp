#pragma once

#include "snf.hpp"

#include <string>
#include <vector>

namespace arrvar {

// Element of the divisor class group K = Z^rho + sum Z_{d_i}, torsion entries
// reduced to [0, d_i).
struct KElem {
    IVec free;
    IVec tors;

    bool operator==(const KElem& o) const { return free == o.free && tors == o.tors; }
    bool is_zero() const { return arrvar::is_zero(free) && arrvar::is_zero(tors); }
};

// The grading group K = Z^nvars / im(P^T) of a full-row-rank degree matrix P.
// Free coordinates pair variables against the canonical saturated kernel
// basis of P; torsion coordinates come from the Smith form of P^T.
struct Grading {
    size_t nvars = 0;
    size_t rho = 0;   // free rank of K
    IVec torsion;     // invariant factors >= 2, divisor chain
    IMat qfree{0, 0};  // rho x nvars
    IMat qtors{0, 0};  // torsion.size() x nvars

    KElem degree(const IVec& exponent) const {
        KElem k;
        k.free = mul(qfree, exponent);
        k.tors = mul(qtors, exponent);
        for (size_t i = 0; i < torsion.size(); ++i) {
            mpz_fdiv_r(k.tors[i].get_mpz_t(), k.tors[i].get_mpz_t(), torsion[i].get_mpz_t());
        }
        return k;
    }

    KElem degree_of_var(size_t j) const {
        IVec e(nvars, 0);
        e[j] = 1;
        return degree(e);
    }

    KElem add(const KElem& a, const KElem& b) const {
        KElem k{arrvar::add(a.free, b.free), arrvar::add(a.tors, b.tors)};
        for (size_t i = 0; i < torsion.size(); ++i)
            mpz_fdiv_r(k.tors[i].get_mpz_t(), k.tors[i].get_mpz_t(), torsion[i].get_mpz_t());
        return k;
    }

    KElem sub(const KElem& a, const KElem& b) const {
        KElem k{arrvar::sub(a.free, b.free), arrvar::sub(a.tors, b.tors)};
        for (size_t i = 0; i < torsion.size(); ++i)
            mpz_fdiv_r(k.tors[i].get_mpz_t(), k.tors[i].get_mpz_t(), torsion[i].get_mpz_t());
        return k;
    }

    KElem scale_elem(const Int& s, const KElem& a) const {
        KElem k{arrvar::scale(s, a.free), arrvar::scale(s, a.tors)};
        for (size_t i = 0; i < torsion.size(); ++i)
            mpz_fdiv_r(k.tors[i].get_mpz_t(), k.tors[i].get_mpz_t(), torsion[i].get_mpz_t());
        return k;
    }

    // Order of a torsion element (free part must vanish).
    Int torsion_order(const KElem& a) const {
        if (!arrvar::is_zero(a.free)) throw error("torsion_order: element has infinite order");
        Int o = 1;
        for (size_t i = 0; i < torsion.size(); ++i)
            o = lcm(o, torsion[i] / gcd(torsion[i], a.tors[i]));
        return o;
    }

    // Do the given elements generate K as a group?
    bool generates(const std::vector<KElem>& gens) const {
        const size_t t = torsion.size();
        IMat m(rho + t, gens.size() + t);
        for (size_t j = 0; j < gens.size(); ++j) {
            for (size_t i = 0; i < rho; ++i) m.a[i][j] = gens[j].free[i];
            for (size_t i = 0; i < t; ++i) m.a[rho + i][j] = gens[j].tors[i];
        }
        for (size_t i = 0; i < t; ++i) m.a[rho + i][gens.size() + i] = torsion[i];
        Cokernel c = cokernel(m);
        return c.free_rank == 0 && c.torsion.empty();
    }

    std::string group_name() const {
        std::string s;
        if (rho > 0) s = rho == 1 ? "Z" : "Z^" + std::to_string(rho);
        for (const Int& d : torsion) {
            if (!s.empty()) s += " x ";
            s += "Z/" + d.get_str();
        }
        if (s.empty()) s = "0";
        return s;
    }
};

inline Grading make_grading(const IMat& p) {
    if (rank(p) != p.rows) throw invalid_input("grading: degree matrix not of full row rank");
    Grading g;
    g.nvars = p.cols;
    g.qfree = kernel_basis(p);
    g.rho = g.qfree.rows;
    SmithForm s = smith(p.transpose());
    std::vector<IVec> trows;
    for (size_t i = 0; i < s.rank; ++i)
        if (s.diag[i] >= 2) {
            g.torsion.push_back(s.diag[i]);
            trows.push_back(s.u.a[i]);
        }
    g.qtors = trows.empty() ? IMat(0, p.cols) : IMat(std::move(trows));
    return g;
}

// Free-part degree of a rational divisor class.
inline QVec free_degree(const Grading& g, const QVec& exponent) {
    QVec out(g.rho, Rat(0));
    for (size_t i = 0; i < g.rho; ++i)
        for (size_t j = 0; j < g.nvars; ++j) out[i] += Rat(g.qfree.a[i][j]) * exponent[j];
    return out;
}

}  // namespace arrvar
