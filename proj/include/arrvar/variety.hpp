#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cox_ring.hpp"
#include "fan.hpp"

namespace arrvar {

// Per maximal cone of a verified fan: the mask of variables whose column is
// not a ray of the cone, and whether the cone is simplicial.  Every column
// lying in a maximal cone of a verified pointed fan is one of its rays, so
// the complementary cone of a face mask sits inside the cone iff the mask
// contains minface.
struct MaxConeInfo {
    uint64_t minface = 0;
    bool simplicial = false;
};

// A variety is a graded ring together with a fan whose rays are exactly the
// primitive columns of the degree matrix.  All face data below is indexed by
// bitmasks over the ring variables; bit v set means variable v lies on the
// face gamma0 of the positive orthant, i.e. the variable survives (may be
// nonzero) on the corresponding stratum.  Construct through make_variety,
// which validates the fan and fills the derived members.
struct VarietyData {
    GradedRing gr;
    Fan fan;
    std::vector<IVec> columns;  // degree-matrix columns, one per variable
    std::vector<IVec> wfree;    // free part of the class-group degree per variable
    std::vector<uint64_t> blockmask;    // per block, mask of its variables
    std::vector<MaxConeInfo> coneinfo;  // parallel to fan.max_cones; empty if
                                        // some maximal cone is not pointed

    size_t nvars() const { return gr.ring.nvars(); }
    size_t dim() const { return gr.s() + gr.ring.c(); }
    size_t picard_rank() const { return gr.k.rho; }
};

// One orthant face together with its stratum data.
//   dead:      blocks whose monomial vanishes on the stratum (some variable off the face)
//   surviving: blocks with every variable on the face
//   s1:        blocks with exactly one variable off the face, that variable of exponent 1
struct FaceRecord {
    uint64_t mask = 0;
    std::vector<size_t> gamma0;
    std::vector<size_t> dead;
    std::vector<size_t> surviving;
    std::vector<size_t> s1;
    bool ambient_face = false;  // stratum meets the total coordinate space quotient
    bool variety_face = false;  // additionally the complementary cone belongs to the fan
};

namespace detail {

inline std::vector<uint64_t> block_masks(const CoxRing& ring) {
    std::vector<uint64_t> out(ring.nblocks(), 0);
    for (size_t i = 0; i < ring.nblocks(); ++i)
        for (size_t j = 0; j < ring.exp.n[i]; ++j) out[i] |= uint64_t(1) << ring.var(i, j);
    return out;
}

// Bit i set: block i has some variable off the face.
inline uint64_t dead_block_bits(const std::vector<uint64_t>& blockmask, uint64_t mask) {
    uint64_t out = 0;
    for (size_t i = 0; i < blockmask.size(); ++i)
        if ((mask & blockmask[i]) != blockmask[i]) out |= uint64_t(1) << i;
    return out;
}

inline std::vector<size_t> mask_to_set(uint64_t mask, size_t n) {
    std::vector<size_t> out;
    for (size_t v = 0; v < n; ++v)
        if (mask >> v & 1) out.push_back(v);
    return out;
}

// Face realizability with the flatness of each dead-block set memoized; the
// full set always qualifies.
struct FlatMemo {
    const CoxRing& ring;
    std::vector<uint64_t> blockmask;
    uint64_t allbits;
    std::vector<int8_t> table;
    std::map<uint64_t, int8_t> wide;  // block counts beyond the table size

    explicit FlatMemo(const CoxRing& r)
        : ring(r),
          blockmask(block_masks(r)),
          allbits((uint64_t(1) << r.nblocks()) - 1) {
        if (r.nblocks() <= 20) table.assign(size_t(1) << r.nblocks(), int8_t(-1));
    }

    bool realizable(uint64_t mask) {
        uint64_t dead = dead_block_bits(blockmask, mask);
        if (dead == allbits) return true;
        int8_t* slot = table.empty() ? &wide.emplace(dead, int8_t(-1)).first->second
                                     : &table[dead];
        if (*slot < 0)
            *slot = is_flat(ring.arr, mask_to_set(dead, ring.nblocks())) ? 1 : 0;
        return *slot == 1;
    }
};

}  // namespace detail

inline VarietyData make_variety(const GradedRing& gr, const Fan& fan) {
    const size_t nv = gr.ring.nvars();
    if (nv > 62) throw invalid_input("variety: too many variables for face enumeration");
    if (fan.ambient != gr.p.rows)
        throw invalid_input("variety: fan ambient dimension does not match the degree matrix");
    VarietyData v;
    v.gr = gr;
    v.fan = fan;
    for (size_t j = 0; j < nv; ++j) {
        v.columns.push_back(gr.p.col(j));
        if (is_zero(v.columns.back()) || gcd_vec(v.columns.back()) != 1)
            throw invalid_input("variety: degree matrix column " + std::to_string(j) +
                                " is not primitive");
        v.wfree.push_back(gr.k.degree_of_var(j).free);
    }
    for (size_t j = 0; j < nv; ++j)
        for (size_t k = j + 1; k < nv; ++k)
            if (v.columns[j] == v.columns[k])
                throw invalid_input("variety: degree matrix columns coincide");
    if (!is_fan(fan)) throw invalid_input("variety: cone collection is not a fan");
    // Rays of the fan must be exactly the columns.
    auto rays = fan_rays(fan);
    std::vector<std::string> rk, ck;
    for (auto& r : rays) rk.push_back(to_string(r));
    for (auto& c : v.columns) ck.push_back(to_string(c));
    std::sort(rk.begin(), rk.end());
    std::sort(ck.begin(), ck.end());
    if (rk != ck)
        throw invalid_input("variety: fan rays differ from the degree matrix columns");
    v.blockmask = detail::block_masks(gr.ring);
    bool pointed_fan = true;
    for (auto& tau : v.fan.max_cones)
        if (!tau.pointed()) pointed_fan = false;
    if (pointed_fan) {
        std::map<IVec, size_t> colidx;
        for (size_t j = 0; j < nv; ++j) colidx.emplace(v.columns[j], j);
        const uint64_t full = (uint64_t(1) << nv) - 1;
        for (auto& tau : v.fan.max_cones) {
            MaxConeInfo info;
            uint64_t raybits = 0;
            for (const IVec& r : tau.rays) raybits |= uint64_t(1) << colidx.at(r);
            info.minface = full ^ raybits;
            info.simplicial = tau.rays.size() == tau.dim();
            v.coneinfo.push_back(info);
        }
    }
    return v;
}

// A face is realizable on the quotient iff the set of blocks with vanishing
// monomial is closed in the column matroid of the arrangement; the full block
// set (all relation terms vanish) always qualifies.
inline bool xbar_face_test(const VarietyData& v, uint64_t mask) {
    uint64_t dead = detail::dead_block_bits(v.blockmask, mask);
    if (dead == (uint64_t(1) << v.gr.ring.nblocks()) - 1) return true;
    return is_flat(v.gr.ring.arr, detail::mask_to_set(dead, v.gr.ring.nblocks()));
}

// Cone spanned by the degree-matrix columns of the variables off the face.
inline Cone complementary_cone(const VarietyData& v, uint64_t mask) {
    std::vector<IVec> gens;
    for (size_t j = 0; j < v.nvars(); ++j)
        if (!(mask >> j & 1)) gens.push_back(v.columns[j]);
    return Cone::from_generators(v.gr.p.rows, gens);
}

namespace detail {

// Whether the complementary cone of the face is a face of some maximal cone.
// Containment is the minface mask test; simplicial cones make any ray subset
// a face, other cones get the geometric test.  Without cone info (some
// maximal cone not pointed) everything falls back to geometry.
inline bool variety_face_test(const VarietyData& v, uint64_t mask) {
    if (v.coneinfo.size() == v.fan.max_cones.size() && !v.fan.max_cones.empty()) {
        std::optional<Cone> comp;
        for (size_t t = 0; t < v.coneinfo.size(); ++t) {
            if ((mask & v.coneinfo[t].minface) != v.coneinfo[t].minface) continue;
            if (v.coneinfo[t].simplicial) return true;
            if (!comp) comp = complementary_cone(v, mask);
            if (face_of(*comp, v.fan.max_cones[t])) return true;
        }
        return false;
    }
    Cone comp = complementary_cone(v, mask);
    for (auto& tau : v.fan.max_cones)
        if (face_of(comp, tau)) return true;
    return false;
}

}  // namespace detail

inline FaceRecord face_record(const VarietyData& v, uint64_t mask) {
    const CoxRing& ring = v.gr.ring;
    FaceRecord rec;
    rec.mask = mask;
    rec.gamma0 = detail::mask_to_set(mask, v.nvars());
    for (size_t i = 0; i < ring.nblocks(); ++i) {
        size_t off = 0, offj = 0;
        for (size_t j = 0; j < ring.exp.n[i]; ++j)
            if (!(mask >> ring.var(i, j) & 1)) { ++off; offj = j; }
        if (off == 0) {
            rec.surviving.push_back(i);
        } else {
            rec.dead.push_back(i);
            if (off == 1 && ring.exp.l[i][offj] == 1) rec.s1.push_back(i);
        }
    }
    rec.ambient_face = xbar_face_test(v, mask);
    if (rec.ambient_face) rec.variety_face = detail::variety_face_test(v, mask);
    return rec;
}

// All faces whose stratum meets the variety, in increasing mask order.
inline std::vector<FaceRecord> x_faces(const VarietyData& v) {
    std::vector<FaceRecord> out;
    detail::FlatMemo memo(v.gr.ring);
    for (uint64_t mask = 0; mask < (uint64_t(1) << v.nvars()); ++mask) {
        if (!memo.realizable(mask)) continue;
        if (!detail::variety_face_test(v, mask)) continue;
        out.push_back(face_record(v, mask));
    }
    return out;
}

namespace detail {

// Inclusion-minimal realizable variety faces, one per maximal cone: the mask
// of variables whose column is not a ray.  Empty when cone info is missing
// or some mask fails realizability; callers then scan all faces.
inline std::vector<uint64_t> minimal_face_masks(const VarietyData& v) {
    if (v.coneinfo.size() != v.fan.max_cones.size() || v.fan.max_cones.empty()) return {};
    std::vector<uint64_t> out;
    for (const auto& info : v.coneinfo) {
        if (!xbar_face_test(v, info.minface)) return {};
        out.push_back(info.minface);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

// The stratum is smooth in the quotient iff the relation coefficients of the
// surviving and exponent-one blocks have full rank.
inline bool stratum_smooth(const VarietyData& v, const FaceRecord& rec) {
    std::vector<size_t> cols = rec.surviving;
    cols.insert(cols.end(), rec.s1.begin(), rec.s1.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    size_t want = v.gr.ring.r() - v.gr.ring.c();
    return rank_cols(v.gr.ring.lambda, cols) == want;
}

// Cone in the rational class group spanned by the degrees of the face variables.
inline Cone degree_cone(const VarietyData& v, uint64_t mask) {
    std::vector<IVec> gens;
    for (size_t j = 0; j < v.nvars(); ++j)
        if (mask >> j & 1) gens.push_back(v.wfree[j]);
    return Cone::from_generators(v.gr.k.rho, gens);
}

enum class Factoriality { factorial, q_factorial_only, neither };

// Points on the stratum are factorial iff the face degrees generate the whole
// class group, and Q-factorial iff they span it rationally.
inline Factoriality point_factoriality(const VarietyData& v, const FaceRecord& rec) {
    if (degree_cone(v, rec.mask).dim() != v.gr.k.rho) return Factoriality::neither;
    std::vector<KElem> degs;
    for (size_t j : rec.gamma0) degs.push_back(v.gr.k.degree_of_var(j));
    return v.gr.k.generates(degs) ? Factoriality::factorial : Factoriality::q_factorial_only;
}

struct SmoothnessReport {
    enum class Verdict { smooth, quasismooth_only, singular };
    Verdict verdict = Verdict::smooth;
    std::optional<FaceRecord> witness;  // first face exhibiting the reported defect
    std::string detail;
};

inline std::string verdict_name(SmoothnessReport::Verdict v) {
    switch (v) {
        case SmoothnessReport::Verdict::smooth: return "smooth";
        case SmoothnessReport::Verdict::quasismooth_only: return "quasismooth only";
        default: return "singular";
    }
}

// Growing the face enlarges the surviving and exponent-one block sets and the
// alive degree set, so smoothness and factoriality are monotone: the
// inclusion-minimal variety faces decide the verdict, and since every variety
// face contains one of them, the smallest defective minimal mask is also the
// first defective mask overall.
inline SmoothnessReport smoothness_report(const VarietyData& v) {
    SmoothnessReport rep;
    std::optional<FaceRecord> bad_stratum, bad_factorial;
    auto scan = [&](const FaceRecord& rec) {
        if (!bad_stratum && !stratum_smooth(v, rec)) bad_stratum = rec;
        if (!bad_factorial && point_factoriality(v, rec) != Factoriality::factorial)
            bad_factorial = rec;
        return !bad_stratum;  // singular dominates; first witness wanted
    };
    auto mins = detail::minimal_face_masks(v);
    if (!mins.empty()) {
        for (uint64_t m : mins)
            if (!scan(face_record(v, m))) break;
    } else {
        for (auto& rec : x_faces(v))
            if (!scan(rec)) break;
    }
    if (bad_stratum) {
        rep.verdict = SmoothnessReport::Verdict::singular;
        rep.witness = bad_stratum;
        rep.detail = "stratum of the quotient is singular";
    } else if (bad_factorial) {
        rep.verdict = SmoothnessReport::Verdict::quasismooth_only;
        rep.witness = bad_factorial;
        rep.detail = "quotient group does not act freely at the stratum";
    }
    return rep;
}

struct DivisorClassCones {
    Cone effective;
    Cone moving;
    Cone semiample;
    bool projective = false;
    // For rank-two class groups the effective cone splits along the semiample
    // chamber into a lower and upper part, oriented by positive determinant.
    std::optional<Cone> tau_minus, tau_plus;
};

inline DivisorClassCones divisor_class_cones(const VarietyData& v) {
    const size_t rho = v.gr.k.rho;
    DivisorClassCones out;
    uint64_t full = (uint64_t(1) << v.nvars()) - 1;
    out.effective = degree_cone(v, full);
    bool first = true;
    for (size_t j = 0; j < v.nvars(); ++j) {
        Cone q = degree_cone(v, full ^ (uint64_t(1) << j));
        out.moving = first ? q : intersect(out.moving, q);
        first = false;
    }
    // Degree cones grow with the face, so the semiample intersection only
    // needs the inclusion-minimal variety faces.
    first = true;
    auto step = [&](uint64_t mask) {
        Cone q = degree_cone(v, mask);
        out.semiample = first ? q : intersect(out.semiample, q);
        first = false;
        return out.semiample.dim() != 0;
    };
    auto mins = detail::minimal_face_masks(v);
    if (!mins.empty()) {
        for (uint64_t m : mins)
            if (!step(m)) break;
    } else {
        for (auto& rec : x_faces(v))
            if (!step(rec.mask)) break;
    }
    if (first) out.semiample = Cone::from_generators(rho, {});
    out.projective = rho > 0 && out.semiample.dim() == rho;
    if (rho == 2 && out.effective.dim() == 2 && out.semiample.dim() == 2) {
        auto det2 = [](const IVec& a, const IVec& b) { return Int(a[0] * b[1] - a[1] * b[0]); };
        auto orient = [&](std::vector<IVec> r) {
            if (r.size() == 2 && det2(r[0], r[1]) < 0) std::swap(r[0], r[1]);
            return r;
        };
        auto e = orient(out.effective.rays), s = orient(out.semiample.rays);
        out.tau_minus = Cone::from_generators(2, {e[0], s[0]});
        out.tau_plus = Cone::from_generators(2, {s[1], e[1]});
    }
    return out;
}

inline QVec anticanonical_free(const VarietyData& v) {
    return to_rat(anticanonical_class(v.gr.ring, v.gr.k).free);
}

// Fano iff the anticanonical class lies in the interior of the semiample cone.
inline bool is_fano(const VarietyData& v) {
    auto dcc = divisor_class_cones(v);
    if (!dcc.projective) throw error("not projective over the chosen data");
    return dcc.semiample.relative_interior_contains(anticanonical_free(v));
}

// Rebuild the fan selected by an ample class: the maximal complementary cones
// of the realizable faces whose degree cone contains u in its relative
// interior.  A class on the boundary of some degree cone separates chambers.
// Variables of equal free degree share one membership status, so the status
// of a mask is memoized on its set of distinct degree classes, and since a
// submask always contributes a larger complementary cone, only the
// inclusion-minimal accepted masks build cones.
inline Fan fan_from_ample(const GradedRing& gr, const QVec& u) {
    const size_t nv = gr.ring.nvars();
    if (nv > 62) throw invalid_input("variety: too many variables for face enumeration");
    if (u.size() != gr.k.rho) throw invalid_input("variety: ample class has wrong length");
    VarietyData v;  // fanless shell, only columns and degrees are used below
    v.gr = gr;
    for (size_t j = 0; j < nv; ++j) {
        v.columns.push_back(gr.p.col(j));
        v.wfree.push_back(gr.k.degree_of_var(j).free);
    }
    v.blockmask = detail::block_masks(gr.ring);
    detail::FlatMemo memo(gr.ring);

    std::vector<uint64_t> classbit(nv);
    std::vector<IVec> classdeg;
    for (size_t j = 0; j < nv; ++j) {
        size_t k = 0;
        while (k < classdeg.size() && !(classdeg[k] == v.wfree[j])) ++k;
        if (k == classdeg.size()) classdeg.push_back(v.wfree[j]);
        classbit[j] = uint64_t(1) << k;
    }
    std::map<uint64_t, int8_t> status;  // 0 outside, 1 on the boundary, 2 interior
    auto mask_status = [&](uint64_t mask) {
        uint64_t sig = 0;
        for (size_t j = 0; j < nv; ++j)
            if (mask >> j & 1) sig |= classbit[j];
        auto it = status.find(sig);
        if (it == status.end()) {
            std::vector<IVec> gens;
            for (size_t k = 0; k < classdeg.size(); ++k)
                if (sig >> k & 1) gens.push_back(classdeg[k]);
            Cone q = Cone::from_generators(gr.k.rho, gens);
            int8_t s = q.relative_interior_contains(u) ? 2 : (q.contains(u) ? 1 : 0);
            it = status.emplace(sig, s).first;
        }
        return it->second;
    };

    std::vector<uint64_t> minimal;
    std::vector<Cone> picked;
    for (uint64_t mask = 0; mask < (uint64_t(1) << nv); ++mask) {
        if (!memo.realizable(mask)) continue;
        int8_t s = mask_status(mask);
        if (s == 0) continue;
        if (s == 1) throw error("ambiguous chamber");
        bool covered = false;
        for (uint64_t m : minimal)
            if ((mask & m) == m) { covered = true; break; }
        if (covered) continue;
        minimal.push_back(mask);
        picked.push_back(complementary_cone(v, mask));
    }
    std::sort(picked.begin(), picked.end(),
              [](const Cone& a, const Cone& b) { return a.dim() > b.dim(); });
    Fan f;
    f.ambient = gr.p.rows;
    for (auto& c : picked) {
        bool maximal = true;
        for (auto& kept : f.max_cones)
            if (kept.contains_cone(c)) { maximal = false; break; }
        if (maximal) f.max_cones.push_back(c);
    }
    auto rays = fan_rays(f);
    if (rays.size() != nv) throw error("ample class outside the moving cone");
    if (!is_fan(f)) throw error("selected cones do not form a fan");
    return f;
}

}  // namespace arrvar
