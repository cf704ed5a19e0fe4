#pragma once

#include "matrix.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace arrvar {

// A projective line arrangement encoded by the (c+1) x (r+1) coefficient
// matrix: column i spans the center of the i-th hyperplane coordinate.
// Columns must be nonzero, pairwise linearly independent, and span Q^{c+1}.
struct Arrangement {
    IMat a;

    size_t c() const { return a.rows - 1; }
    size_t r() const { return a.cols - 1; }
    size_t ncols() const { return a.cols; }
};

inline Arrangement make_arrangement(IMat m) {
    if (m.rows == 0 || m.cols < m.rows) throw invalid_input("arrangement: need at least c+1 columns");
    if (rank(m) != m.rows) throw invalid_input("arrangement: rows not of full rank");
    for (size_t j = 0; j < m.cols; ++j)
        if (is_zero(m.col(j))) throw invalid_input("arrangement: zero column");
    for (size_t i = 0; i < m.cols; ++i)
        for (size_t j = i + 1; j < m.cols; ++j)
            if (rank_cols(m, {i, j}) != 2)
                throw invalid_input("arrangement: columns " + std::to_string(i) + " and " +
                                    std::to_string(j) + " are parallel");
    return Arrangement{std::move(m)};
}

inline size_t subset_rank(const Arrangement& arr, const std::vector<size_t>& s) {
    return rank_cols(arr.a, s);
}

// Smallest flat containing s: all columns inside the span of s.
inline std::vector<size_t> closure(const Arrangement& arr, const std::vector<size_t>& s) {
    size_t rk = subset_rank(arr, s);
    std::vector<size_t> out;
    for (size_t j = 0; j < arr.ncols(); ++j) {
        std::vector<size_t> ext = s;
        ext.push_back(j);
        if (subset_rank(arr, ext) == rk) out.push_back(j);
    }
    return out;
}

inline bool is_flat(const Arrangement& arr, const std::vector<size_t>& s) {
    std::vector<size_t> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    return closure(arr, sorted) == sorted;
}

struct Flat {
    std::vector<size_t> members;
    size_t rank = 0;
};

// All flats of the column matroid, ordered by rank then members.
inline std::vector<Flat> flats(const Arrangement& arr) {
    const size_t n = arr.ncols();
    std::map<std::vector<size_t>, size_t> seen;
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
        std::vector<size_t> s;
        for (size_t j = 0; j < n; ++j)
            if (mask & (size_t(1) << j)) s.push_back(j);
        std::vector<size_t> cl = closure(arr, s);
        seen.emplace(std::move(cl), subset_rank(arr, s));
    }
    std::vector<Flat> out;
    for (const auto& [m, rk] : seen) out.push_back({m, rk});
    std::sort(out.begin(), out.end(), [](const Flat& x, const Flat& y) {
        if (x.rank != y.rank) return x.rank < y.rank;
        return x.members < y.members;
    });
    return out;
}

// Maximal chains S1 < S2 < ... < Sc of proper nonempty flats; every maximal
// chain hits each rank 1..c exactly once.
inline std::vector<std::vector<Flat>> maximal_chains(const Arrangement& arr) {
    std::vector<Flat> all = flats(arr);
    const size_t c = arr.c();
    std::vector<std::vector<Flat>> by_rank(c + 1);
    for (const Flat& f : all)
        if (f.rank >= 1 && f.rank <= c) by_rank[f.rank].push_back(f);
    std::vector<std::vector<Flat>> chains;
    std::vector<Flat> cur;
    auto contains = [](const std::vector<size_t>& big, const std::vector<size_t>& small) {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    };
    auto rec = [&](auto&& self, size_t rank) -> void {
        if (rank > c) {
            chains.push_back(cur);
            return;
        }
        for (const Flat& f : by_rank[rank]) {
            if (!cur.empty() && !contains(f.members, cur.back().members)) continue;
            cur.push_back(f);
            self(self, rank + 1);
            cur.pop_back();
        }
    };
    rec(rec, 1);
    return chains;
}

enum class Position { general, special };

// General position: every k <= c+1 columns are linearly independent.
inline Position position_type(const Arrangement& arr) {
    const size_t n = arr.ncols(), k_max = std::min(arr.c() + 1, n);
    std::vector<size_t> idx;
    auto rec = [&](auto&& self, size_t start, size_t k) -> bool {
        if (idx.size() == k) return subset_rank(arr, idx) == k;
        for (size_t j = start; j < n; ++j) {
            idx.push_back(j);
            bool ok = self(self, j + 1, k);
            idx.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    for (size_t k = 2; k <= k_max; ++k)
        if (!rec(rec, 0, k)) return Position::special;
    return Position::general;
}

// Finest partition of the columns into groups whose spans form a direct sum:
// the connected components of the column matroid, joined along circuits
// (minimal dependent subsets).
inline std::vector<std::vector<size_t>> decompose(const Arrangement& arr) {
    const size_t n = arr.ncols();
    std::vector<size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto join = [&](size_t x, size_t y) { parent[find(x)] = find(y); };

    for (size_t mask = 1; mask < (size_t(1) << n); ++mask) {
        std::vector<size_t> s;
        for (size_t j = 0; j < n; ++j)
            if (mask & (size_t(1) << j)) s.push_back(j);
        if (s.size() < 2 || s.size() > arr.c() + 2) continue;
        if (subset_rank(arr, s) == s.size()) continue;  // independent
        bool circuit = true;
        for (size_t k = 0; k < s.size() && circuit; ++k) {
            std::vector<size_t> t = s;
            t.erase(t.begin() + k);
            if (subset_rank(arr, t) != t.size()) circuit = false;
        }
        if (!circuit) continue;
        for (size_t k = 1; k < s.size(); ++k) join(s[0], s[k]);
    }
    std::map<size_t, std::vector<size_t>> groups;
    for (size_t j = 0; j < n; ++j) groups[find(j)].push_back(j);
    std::vector<std::vector<size_t>> out;
    for (auto& [root, g] : groups) out.push_back(std::move(g));
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_indecomposable(const Arrangement& arr) { return decompose(arr).size() == 1; }

}  // namespace arrvar
