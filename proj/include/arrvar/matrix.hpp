#pragma once

#include "numeric.hpp"

#include <optional>
#include <vector>

namespace arrvar {

// Dense row-major matrix over Int or Rat entries.
template <typename T>
struct Mat {
    size_t rows = 0, cols = 0;
    std::vector<std::vector<T>> a;

    Mat() = default;
    Mat(size_t r, size_t c) : rows(r), cols(c), a(r, std::vector<T>(c, T(0))) {}
    explicit Mat(std::vector<std::vector<T>> rows_) : a(std::move(rows_)) {
        rows = a.size();
        cols = rows ? a[0].size() : 0;
        for (const auto& r : a)
            if (r.size() != cols) throw error("Mat: ragged rows");
    }

    std::vector<T>& operator[](size_t i) { return a[i]; }
    const std::vector<T>& operator[](size_t i) const { return a[i]; }

    static Mat identity(size_t n) {
        Mat m(n, n);
        for (size_t i = 0; i < n; ++i) m.a[i][i] = T(1);
        return m;
    }

    Mat transpose() const {
        Mat t(cols, rows);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) t.a[j][i] = a[i][j];
        return t;
    }

    std::vector<T> col(size_t j) const {
        std::vector<T> c(rows);
        for (size_t i = 0; i < rows; ++i) c[i] = a[i][j];
        return c;
    }

    bool operator==(const Mat& o) const { return a == o.a; }
};

using IMat = Mat<Int>;
using QMat = Mat<Rat>;

template <typename T>
Mat<T> mul(const Mat<T>& x, const Mat<T>& y) {
    if (x.cols != y.rows) throw error("mul: shape mismatch");
    Mat<T> z(x.rows, y.cols);
    for (size_t i = 0; i < x.rows; ++i)
        for (size_t k = 0; k < x.cols; ++k) {
            if (x.a[i][k] == 0) continue;
            for (size_t j = 0; j < y.cols; ++j) z.a[i][j] += x.a[i][k] * y.a[k][j];
        }
    return z;
}

template <typename T>
std::vector<T> mul(const Mat<T>& m, const std::vector<T>& v) {
    if (m.cols != v.size()) throw error("mul: shape mismatch");
    std::vector<T> w(m.rows, T(0));
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j) w[i] += m.a[i][j] * v[j];
    return w;
}

inline QVec mul(const IMat& m, const QVec& v) {
    if (m.cols != v.size()) throw error("mul: shape mismatch");
    QVec w(m.rows, Rat(0));
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j) w[i] += Rat(m.a[i][j]) * v[j];
    return w;
}

inline QMat to_rat(const IMat& m) {
    QMat q(m.rows, m.cols);
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j) q.a[i][j] = Rat(m.a[i][j]);
    return q;
}

// In-place reduced row echelon form; returns pivot columns.
inline std::vector<size_t> rref(QMat& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
        size_t sel = row;
        while (sel < m.rows && m.a[sel][col] == 0) ++sel;
        if (sel == m.rows) continue;
        std::swap(m.a[sel], m.a[row]);
        Rat inv = 1 / m.a[row][col];
        for (size_t j = col; j < m.cols; ++j) m.a[row][j] *= inv;
        for (size_t i = 0; i < m.rows; ++i) {
            if (i == row || m.a[i][col] == 0) continue;
            Rat f = m.a[i][col];
            for (size_t j = col; j < m.cols; ++j) m.a[i][j] -= f * m.a[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline size_t rank(QMat m) { return rref(m).size(); }

inline size_t rank(const IMat& m) { return rank(to_rat(m)); }

// Rank of the submatrix picking the given columns.
inline size_t rank_cols(const IMat& m, const std::vector<size_t>& cols) {
    QMat s(m.rows, cols.size());
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < cols.size(); ++j) s.a[i][j] = Rat(m.a[i][cols[j]]);
    return rank(std::move(s));
}

// One solution of m*x = b over Q, or nullopt if inconsistent.
inline std::optional<QVec> solve(const QMat& m, const QVec& b) {
    QMat aug(m.rows, m.cols + 1);
    for (size_t i = 0; i < m.rows; ++i) {
        for (size_t j = 0; j < m.cols; ++j) aug.a[i][j] = m.a[i][j];
        aug.a[i][m.cols] = b[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols) return std::nullopt;
    QVec x(m.cols, Rat(0));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug.a[i][m.cols];
    return x;
}

inline std::optional<QVec> solve(const IMat& m, const QVec& b) {
    return solve(to_rat(m), b);
}

// Basis of the rational kernel {x : m*x = 0}, one vector per free column.
inline std::vector<QVec> kernel(const QMat& m) {
    QMat r = m;
    auto pivots = rref(r);
    std::vector<bool> is_pivot(m.cols, false);
    for (size_t p : pivots) is_pivot[p] = true;
    std::vector<QVec> basis;
    for (size_t j = 0; j < m.cols; ++j) {
        if (is_pivot[j]) continue;
        QVec v(m.cols, Rat(0));
        v[j] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r.a[i][j];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace arrvar
