#pragma once

#include "matrix.hpp"

#include <algorithm>
#include <optional>

namespace arrvar {

// Smith normal form U*M*V = D with U, V unimodular and the diagonal of D a
// divisor chain d1 | d2 | ... | dk, di > 0, k = rank(M).
struct SmithForm {
    IMat d, u, v;
    size_t rank = 0;
    IVec diag;  // the positive invariant factors, length == rank
};

inline SmithForm smith(const IMat& m0) {
    SmithForm s;
    s.d = m0;
    s.u = IMat::identity(m0.rows);
    s.v = IMat::identity(m0.cols);
    IMat& m = s.d;
    size_t t = 0;
    const size_t lim = std::min(m.rows, m.cols);
    while (t < lim) {
        // Pick the nonzero entry of smallest magnitude in the trailing block.
        size_t pi = t, pj = t;
        bool found = false;
        for (size_t i = t; i < m.rows; ++i)
            for (size_t j = t; j < m.cols; ++j) {
                if (m.a[i][j] == 0) continue;
                if (!found || mpz_cmpabs(m.a[i][j].get_mpz_t(), m.a[pi][pj].get_mpz_t()) < 0) {
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found) break;
        std::swap(m.a[t], m.a[pi]);
        std::swap(s.u.a[t], s.u.a[pi]);
        if (pj != t)
            for (size_t i = 0; i < m.rows; ++i) std::swap(m.a[i][t], m.a[i][pj]);
        if (pj != t)
            for (size_t i = 0; i < m.cols; ++i) std::swap(s.v.a[i][t], s.v.a[i][pj]);

        bool clean = true;
        for (size_t i = t + 1; i < m.rows; ++i) {
            if (m.a[i][t] == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), m.a[i][t].get_mpz_t(), m.a[t][t].get_mpz_t());
            for (size_t j = 0; j < m.cols; ++j) m.a[i][j] -= q * m.a[t][j];
            for (size_t j = 0; j < s.u.cols; ++j) s.u.a[i][j] -= q * s.u.a[t][j];
            if (m.a[i][t] != 0) clean = false;
        }
        for (size_t j = t + 1; j < m.cols; ++j) {
            if (m.a[t][j] == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), m.a[t][j].get_mpz_t(), m.a[t][t].get_mpz_t());
            for (size_t i = 0; i < m.rows; ++i) m.a[i][j] -= q * m.a[i][t];
            for (size_t i = 0; i < s.v.rows; ++i) s.v.a[i][j] -= q * s.v.a[i][t];
            if (m.a[t][j] != 0) clean = false;
        }
        if (!clean) continue;  // residues are smaller than the pivot; repeat

        // Enforce divisibility of the trailing block by the pivot.
        bool divides = true;
        for (size_t i = t + 1; i < m.rows && divides; ++i)
            for (size_t j = t + 1; j < m.cols && divides; ++j)
                if (m.a[i][j] % m.a[t][t] != 0) {
                    for (size_t jj = 0; jj < m.cols; ++jj) m.a[t][jj] += m.a[i][jj];
                    for (size_t jj = 0; jj < s.u.cols; ++jj) s.u.a[t][jj] += s.u.a[i][jj];
                    divides = false;
                }
        if (!divides) continue;

        if (m.a[t][t] < 0) {
            for (size_t j = 0; j < m.cols; ++j) m.a[t][j] = -m.a[t][j];
            for (size_t j = 0; j < s.u.cols; ++j) s.u.a[t][j] = -s.u.a[t][j];
        }
        ++t;
    }
    s.rank = t;
    s.diag.resize(t);
    for (size_t i = 0; i < t; ++i) s.diag[i] = m.a[i][i];
    return s;
}

// Row Hermite normal form: the unique canonical basis of the row lattice.
// Pivots are positive, entries above a pivot lie in [0, pivot).
inline IMat row_hnf(const IMat& m0) {
    IMat m = m0;
    size_t row = 0;
    for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
        // Gcd elimination below the current row.
        while (true) {
            size_t best = m.rows;
            for (size_t i = row; i < m.rows; ++i) {
                if (m.a[i][col] == 0) continue;
                if (best == m.rows ||
                    mpz_cmpabs(m.a[i][col].get_mpz_t(), m.a[best][col].get_mpz_t()) < 0)
                    best = i;
            }
            if (best == m.rows) break;
            std::swap(m.a[row], m.a[best]);
            bool done = true;
            for (size_t i = row + 1; i < m.rows; ++i) {
                if (m.a[i][col] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m.a[i][col].get_mpz_t(), m.a[row][col].get_mpz_t());
                for (size_t j = 0; j < m.cols; ++j) m.a[i][j] -= q * m.a[row][j];
                if (m.a[i][col] != 0) done = false;
            }
            if (done) break;
        }
        if (m.a[row][col] == 0) continue;
        if (m.a[row][col] < 0)
            for (size_t j = 0; j < m.cols; ++j) m.a[row][j] = -m.a[row][j];
        for (size_t i = 0; i < row; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), m.a[i][col].get_mpz_t(), m.a[row][col].get_mpz_t());
            if (q == 0) continue;
            for (size_t j = 0; j < m.cols; ++j) m.a[i][j] -= q * m.a[row][j];
        }
        ++row;
    }
    m.a.resize(row);
    m.rows = row;
    return m;
}

// Canonical basis of the saturated lattice {x in Z^cols : m*x = 0}: the last
// cols - rank columns of V are a basis since V is unimodular; HNF fixes it.
inline IMat kernel_basis(const IMat& m) {
    SmithForm s = smith(m);
    IMat k(m.cols - s.rank, m.cols);
    for (size_t j = s.rank; j < m.cols; ++j)
        for (size_t i = 0; i < m.cols; ++i) k.a[j - s.rank][i] = s.v.a[i][j];
    return row_hnf(k);
}

// One integral solution of m*x = b, or nullopt when none exists.
inline std::optional<IVec> lattice_solve(const IMat& m, const IVec& b) {
    SmithForm s = smith(m);
    IVec y = mul(s.u, b);
    IVec z(m.cols, 0);
    for (size_t i = 0; i < y.size(); ++i) {
        if (i < s.rank) {
            if (y[i] % s.diag[i] != 0) return std::nullopt;
            z[i] = y[i] / s.diag[i];
        } else if (y[i] != 0) {
            return std::nullopt;
        }
    }
    return mul(s.v, z);
}

// Structure of Z^rows / im(m): free rank plus invariant factors >= 2.
struct Cokernel {
    size_t free_rank = 0;
    IVec torsion;  // d with d >= 2, divisor chain order
};

inline Cokernel cokernel(const IMat& m) {
    SmithForm s = smith(m);
    Cokernel c;
    c.free_rank = m.rows - s.rank;
    for (const Int& d : s.diag)
        if (d >= 2) c.torsion.push_back(d);
    return c;
}

}  // namespace arrvar
