#include "arrvar/variety.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace arrvar;
using Catch::Matchers::ContainsSubstring;

namespace {

// Five lines with two triple points {0,1,3} and {0,2,4}.
Arrangement five_lines() {
    return make_arrangement(IMat({{1, 0, 0, 1, 1}, {0, 1, 0, 1, 0}, {0, 0, 1, 0, 1}}));
}

GradedRing five_lines_graded() {
    ExponentData e;
    e.n = {2, 1, 1, 1, 1};
    e.l = {IVec{1, 1}, IVec{2}, IVec{2}, IVec{2}, IVec{2}};
    e.m = 1;
    return build_graded_ring(five_lines(), e, IMat({{-2, -3, 1, 1, 1, 1, 1}}));
}

// The nine maximal cones selected by the anticanonical chamber, as ray index
// sets over the column order T01,T02,T11,T21,T31,T41,S1.
const std::vector<std::vector<size_t>> kFiveLinesMaxCones = {
    {1, 2, 3, 4, 5},
    {0, 3, 5, 6}, {0, 2, 4, 6}, {0, 1, 3, 5}, {0, 1, 2, 4},
    {4, 5, 6}, {3, 4, 6}, {2, 5, 6}, {2, 3, 6}};

Fan five_lines_fan(const GradedRing& gr) {
    Fan f;
    f.ambient = gr.p.rows;
    for (auto& idx : kFiveLinesMaxCones) {
        std::vector<IVec> gens;
        for (size_t j : idx) gens.push_back(gr.p.col(j));
        f.max_cones.push_back(Cone::from_generators(f.ambient, gens));
    }
    return f;
}

// Toric surface with one quarter-plane chart of index two: two singleton
// blocks with exponents 2 and 1 plus two free variables.
GradedRing quadric_graded() {
    Arrangement arr = make_arrangement(IMat({{1, 0}, {0, 1}}));
    ExponentData e;
    e.n = {1, 1};
    e.l = {IVec{2}, IVec{1}};
    e.m = 2;
    return build_graded_ring(arr, e, IMat({{1, 0, 1, -1}}));
}

Fan quadric_fan(const GradedRing& gr) {
    Fan f;
    f.ambient = 2;
    for (auto idx : std::vector<std::vector<size_t>>{{1, 2}, {2, 0}, {0, 3}, {3, 1}}) {
        std::vector<IVec> gens;
        for (size_t j : idx) gens.push_back(gr.p.col(j));
        f.max_cones.push_back(Cone::from_generators(2, gens));
    }
    return f;
}

// Projectivized split bundle over a quadric surface: two moving-cone chambers.
GradedRing two_chamber_graded() {
    Arrangement arr = make_arrangement(IMat({{1, 0}, {0, 1}}));
    ExponentData e;
    e.n = {1, 1};
    e.l = {IVec{1}, IVec{1}};
    e.m = 3;
    return build_graded_ring(arr, e, IMat({{0, 0, 1, -1, 0}, {1, 0, 1, 0, -1}}));
}

// Five general lines, all double, one free variable; Picard rank one.
GradedRing rank_one_graded() {
    Arrangement arr = make_arrangement(
        IMat({{1, 0, 0, -1, 0}, {0, 1, 0, -1, -1}, {0, 0, 1, -1, -2}}));
    ExponentData e;
    e.n = {1, 1, 1, 1, 1};
    e.l = {IVec{2}, IVec{2}, IVec{2}, IVec{2}, IVec{2}};
    e.m = 1;
    return build_graded_ring(arr, e, IMat({{-5, 1, 1, 1, 1, 1}}));
}

uint64_t mask_of(const std::vector<size_t>& vars) {
    uint64_t m = 0;
    for (size_t v : vars) m |= uint64_t(1) << v;
    return m;
}

std::set<std::string> key_set(const Fan& f) {
    std::set<std::string> keys;
    for (auto& c : f.max_cones) keys.insert(c.key());
    return keys;
}

// Interior-to-interior containment of the ample chamber, the variety-face
// criterion of the rank-two decomposition.
bool chamber_in_interior(const Cone& sample, const Cone& q) {
    if (!q.contains_cone(sample)) return false;
    IVec mid(sample.ambient, Int(0));
    for (auto& r : sample.rays) mid = add(mid, r);
    return q.relative_interior_contains(mid);
}

}  // namespace

TEST_CASE("variety assembly validates the fan against the degree data") {
    GradedRing gr = five_lines_graded();
    VarietyData v = make_variety(gr, five_lines_fan(gr));
    CHECK(v.dim() == 3);
    CHECK(v.picard_rank() == 2);

    GradedRing qg = quadric_graded();
    CHECK_THROWS_WITH(make_variety(gr, quadric_fan(qg)), ContainsSubstring("ambient dimension"));

    Fan partial;
    partial.ambient = gr.p.rows;
    partial.max_cones.push_back(five_lines_fan(gr).max_cones[0]);
    CHECK_THROWS_WITH(make_variety(gr, partial), ContainsSubstring("fan rays differ"));
}

TEST_CASE("realizable orthant faces follow the column matroid") {
    GradedRing gr = five_lines_graded();
    VarietyData v = make_variety(gr, five_lines_fan(gr));

    CHECK(xbar_face_test(v, mask_of({0, 1, 2, 3, 4, 5, 6})));
    CHECK(xbar_face_test(v, mask_of({0, 6})));
    CHECK(xbar_face_test(v, mask_of({0, 3, 5, 6})));
    CHECK(xbar_face_test(v, mask_of({3, 5})));
    // Killing exactly the monomials of blocks 0 and 1 is not closed: the
    // triple point {0,1,3} forces block 3 into the closure.
    CHECK_FALSE(xbar_face_test(v, mask_of({0, 1, 2, 3, 4, 5, 6}) ^ mask_of({0, 2})));

    FaceRecord big = face_record(v, mask_of({0, 6}));
    CHECK(big.dead == std::vector<size_t>{0, 1, 2, 3, 4});
    CHECK(big.surviving.empty());
    CHECK(big.s1 == std::vector<size_t>{0});
    CHECK(big.ambient_face);
    CHECK(big.variety_face);
    CHECK_FALSE(stratum_smooth(v, big));

    FaceRecord off = face_record(v, mask_of({3, 5}));
    CHECK(off.dead == std::vector<size_t>{0, 1, 3});
    CHECK(off.surviving == std::vector<size_t>{2, 4});
    CHECK(off.ambient_face);
    CHECK_FALSE(off.variety_face);
    CHECK_FALSE(stratum_smooth(v, off));

    // Degrees of T11 and T31 sit on one ray: rational spanning fails.
    FaceRecord thin = face_record(v, mask_of({2, 4}));
    CHECK(thin.ambient_face);
    CHECK(point_factoriality(v, thin) == Factoriality::neither);
}

TEST_CASE("variety faces reproduce the fan and the singular witness") {
    GradedRing gr = five_lines_graded();
    VarietyData v = make_variety(gr, five_lines_fan(gr));
    auto faces = x_faces(v);

    std::set<std::string> projected;
    for (auto& rec : faces) projected.insert(complementary_cone(v, rec.mask).key());
    for (auto& c : five_lines_fan(gr).max_cones) CHECK(projected.count(c.key()) == 1);

    bool has_big = false, has_off = false;
    for (auto& rec : faces) {
        if (rec.mask == mask_of({0, 6})) has_big = true;
        if (rec.mask == mask_of({3, 5})) has_off = true;
    }
    CHECK(has_big);
    CHECK_FALSE(has_off);

    SmoothnessReport rep = smoothness_report(v);
    CHECK(rep.verdict == SmoothnessReport::Verdict::singular);
    CHECK(verdict_name(rep.verdict) == "singular");
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->mask == mask_of({0, 6}));
}

TEST_CASE("divisor class cones of the five-line variety") {
    GradedRing gr = five_lines_graded();
    VarietyData v = make_variety(gr, five_lines_fan(gr));
    DivisorClassCones dcc = divisor_class_cones(v);

    Cone eff = Cone::from_generators(2, {IVec{1, 0}, IVec{1, 2}});
    Cone chamber = Cone::from_generators(2, {IVec{1, 1}, IVec{1, 2}});
    CHECK(dcc.effective == eff);
    CHECK(dcc.moving == chamber);
    CHECK(dcc.semiample == chamber);
    CHECK(dcc.projective);
    REQUIRE(dcc.tau_minus.has_value());
    REQUIRE(dcc.tau_plus.has_value());
    CHECK(*dcc.tau_minus == Cone::from_generators(2, {IVec{1, 0}, IVec{1, 1}}));
    CHECK(*dcc.tau_plus == Cone::from_generators(2, {IVec{1, 2}}));

    CHECK(anticanonical_free(v) == QVec{Rat(3), Rat(4)});
    CHECK(is_fano(v));

    // Every nonzero realizable face satisfies exactly one inclusion of the
    // rank-two decomposition, and the interior inclusion marks variety faces.
    for (uint64_t mask = 1; mask < (uint64_t(1) << v.nvars()); ++mask) {
        if (!xbar_face_test(v, mask)) continue;
        Cone q = degree_cone(v, mask);
        bool in_plus = dcc.tau_plus->contains_cone(q);
        bool in_minus = dcc.tau_minus->contains_cone(q);
        bool interior = chamber_in_interior(dcc.semiample, q);
        CHECK(int(in_plus) + int(in_minus) + int(interior) == 1);
        CHECK(interior == face_record(v, mask).variety_face);
    }
}

TEST_CASE("fan recovery from an ample class") {
    GradedRing gr = five_lines_graded();
    Fan reference = five_lines_fan(gr);

    Fan rebuilt = fan_from_ample(gr, QVec{Rat(3), Rat(4)});
    CHECK(rebuilt.max_cones.size() == 9);
    CHECK(key_set(rebuilt) == key_set(reference));

    // Chamber invariance: any interior class selects the same fan.
    CHECK(key_set(fan_from_ample(gr, QVec{Rat(2), Rat(3)})) == key_set(reference));
    CHECK(key_set(fan_from_ample(gr, QVec{Rat(3), Rat(5)})) == key_set(reference));

    CHECK_THROWS_WITH(fan_from_ample(gr, QVec{Rat(1), Rat(1)}), ContainsSubstring("ambiguous chamber"));
    CHECK_THROWS_WITH(fan_from_ample(gr, QVec{Rat(0), Rat(1)}), ContainsSubstring("outside the moving cone"));

    // The moving cone of this example is a single chamber: classes of the
    // effective cone beyond it select no model.
    CHECK_THROWS_WITH(fan_from_ample(gr, QVec{Rat(2), Rat(1)}),
                      ContainsSubstring("outside the moving cone"));
}

TEST_CASE("adjacent chambers give different projective models") {
    GradedRing gr = two_chamber_graded();
    CHECK(gr.k.rho == 2);

    Fan low = fan_from_ample(gr, QVec{Rat(2), Rat(1)});
    Fan high = fan_from_ample(gr, QVec{Rat(1), Rat(2)});
    CHECK(key_set(low) != key_set(high));
    CHECK(key_set(fan_from_ample(gr, QVec{Rat(5), Rat(1)})) == key_set(low));
    CHECK_THROWS_WITH(fan_from_ample(gr, QVec{Rat(1), Rat(1)}),
                      ContainsSubstring("ambiguous chamber"));

    VarietyData xl = make_variety(gr, low);
    VarietyData xh = make_variety(gr, high);
    CHECK(divisor_class_cones(xl).projective);
    CHECK(divisor_class_cones(xh).projective);
    // The anticanonical class sits on the wall between the two chambers.
    CHECK(anticanonical_free(xl) == QVec{Rat(3), Rat(3)});
    CHECK_FALSE(is_fano(xl));
    CHECK_FALSE(is_fano(xh));
}

TEST_CASE("toric chart index shows in the factoriality ladder") {
    GradedRing gr = quadric_graded();
    VarietyData v = make_variety(gr, quadric_fan(gr));
    CHECK(v.dim() == 2);
    CHECK(v.picard_rank() == 2);

    auto faces = x_faces(v);
    CHECK(faces.size() == 9);

    FaceRecord smooth_chart = face_record(v, mask_of({0, 2}));
    CHECK(point_factoriality(v, smooth_chart) == Factoriality::factorial);
    FaceRecord index_two = face_record(v, mask_of({1, 3}));
    CHECK(point_factoriality(v, index_two) == Factoriality::q_factorial_only);

    SmoothnessReport rep = smoothness_report(v);
    CHECK(rep.verdict == SmoothnessReport::Verdict::quasismooth_only);
    CHECK(verdict_name(rep.verdict) == "quasismooth only");
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->mask == mask_of({1, 2}));

    DivisorClassCones dcc = divisor_class_cones(v);
    CHECK(dcc.effective == Cone::from_generators(2, {IVec{1, 0}, IVec{0, 1}}));
    CHECK(dcc.semiample == Cone::from_generators(2, {IVec{1, 0}, IVec{1, 1}}));
    REQUIRE(dcc.tau_minus.has_value());
    CHECK(*dcc.tau_minus == Cone::from_generators(2, {IVec{1, 0}}));
    CHECK(*dcc.tau_plus == Cone::from_generators(2, {IVec{1, 1}, IVec{0, 1}}));
    CHECK(anticanonical_free(v) == QVec{Rat(4), Rat(2)});
    CHECK(is_fano(v));

    CHECK(key_set(fan_from_ample(gr, QVec{Rat(2), Rat(1)})) == key_set(quadric_fan(gr)));
    CHECK_THROWS_WITH(fan_from_ample(gr, QVec{Rat(1), Rat(1)}), ContainsSubstring("ambiguous chamber"));
    CHECK_THROWS_WITH(fan_from_ample(gr, QVec{Rat(-1), Rat(5)}), ContainsSubstring("outside the moving cone"));

    for (uint64_t mask = 1; mask < (uint64_t(1) << v.nvars()); ++mask) {
        Cone q = degree_cone(v, mask);
        bool in_plus = dcc.tau_plus->contains_cone(q);
        bool in_minus = dcc.tau_minus->contains_cone(q);
        bool interior = chamber_in_interior(dcc.semiample, q);
        CHECK(int(in_plus) + int(in_minus) + int(interior) == 1);
        CHECK(interior == face_record(v, mask).variety_face);
    }
}

TEST_CASE("picard rank one makes every nonzero realizable face a variety face") {
    GradedRing gr = rank_one_graded();
    CHECK(gr.k.rho == 1);
    for (size_t j = 0; j < 6; ++j) CHECK(gr.k.degree_of_var(j).free == IVec{1});

    Fan fan = fan_from_ample(gr, QVec{Rat(1)});
    VarietyData v = make_variety(gr, fan);
    CHECK(v.dim() == 3);

    for (uint64_t mask = 1; mask < (uint64_t(1) << v.nvars()); ++mask) {
        auto rec = face_record(v, mask);
        if (rec.ambient_face) CHECK(rec.variety_face);
    }
    CHECK_FALSE(face_record(v, 0).variety_face);

    DivisorClassCones dcc = divisor_class_cones(v);
    CHECK(dcc.effective == Cone::from_generators(1, {IVec{1}}));
    CHECK(dcc.moving == dcc.effective);
    CHECK(dcc.projective);
    CHECK_FALSE(dcc.tau_minus.has_value());
    CHECK(anticanonical_free(v) == QVec{Rat(2)});
    CHECK(is_fano(v));
    CHECK(smoothness_report(v).verdict != SmoothnessReport::Verdict::smooth);

    CHECK_THROWS_AS(fan_from_ample(gr, QVec{Rat(1), Rat(1)}), invalid_input);
}
