#pragma once

#include "cone.hpp"

#include <algorithm>
#include <vector>

namespace arrvar {

// One chart piece of the anticanonical complex: the part of a pointed cone on
// the nonnegative side of the affine hyperplane <u,.> = -1.
struct TruncatedCell {
    Cone cone;
    QVec u;  // cell cut: { x in cone : <u,x> >= -1 }
};

// Bounded iff the cone is pointed and u is negative on every extreme ray.
inline bool bounded(const TruncatedCell& cell) {
    if (!cell.cone.pointed()) return false;
    for (const IVec& r : cell.cone.rays)
        if (dot(r, cell.u) >= 0) return false;
    return true;
}

inline Int rat_floor(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline Int rat_ceil(const Rat& x) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

// All lattice points of a bounded cell, lexicographically sorted. The cell is
// the convex hull of 0 and the points -r/<u,r> on its extreme rays; a box
// scan over exact vertex coordinates stays exact.
inline std::vector<IVec> lattice_points(const TruncatedCell& cell) {
    if (!bounded(cell)) throw error("not log-terminal cell");
    const size_t d = cell.cone.ambient;
    std::vector<QVec> verts;
    verts.emplace_back(d, Rat(0));
    for (const IVec& r : cell.cone.rays) {
        Rat t = Rat(-1) / dot(r, cell.u);
        QVec v(d);
        for (size_t i = 0; i < d; ++i) v[i] = t * Rat(r[i]);
        verts.push_back(std::move(v));
    }
    IVec lo(d), hi(d);
    for (size_t i = 0; i < d; ++i) {
        Rat mn = verts[0][i], mx = verts[0][i];
        for (const QVec& v : verts) {
            if (v[i] < mn) mn = v[i];
            if (v[i] > mx) mx = v[i];
        }
        lo[i] = rat_ceil(mn);
        hi[i] = rat_floor(mx);
    }
    std::vector<IVec> out;
    IVec p = lo;
    while (true) {
        if (cell.cone.contains(p) && dot(p, cell.u) >= -1) out.push_back(p);
        size_t i = 0;
        while (i < d && p[i] == hi[i]) {
            p[i] = lo[i];
            ++i;
        }
        if (i == d) break;
        p[i] += 1;
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

}  // namespace arrvar
