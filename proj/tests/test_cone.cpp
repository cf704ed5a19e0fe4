#include <catch2/catch_amalgamated.hpp>

#include <arrvar/fan.hpp>
#include <arrvar/lattice_points.hpp>

using namespace arrvar;

namespace {

// Columns of the degree-data matrix of the quadric threefold used across the
// test suite: two block-0 columns, one column per doubled-exponent block, one
// free column.
const std::vector<IVec> kCols = {
    {-1, -1, -1, -1, -2}, {-1, -1, -1, -1, -3}, {2, 0, 0, 0, 1}, {0, 2, 0, 0, 1},
    {0, 0, 2, 0, 1},      {0, 0, 0, 2, 1},      {0, 0, 0, 0, 1}};

Cone cone_of(const std::vector<size_t>& idx) {
    std::vector<IVec> gens;
    for (size_t i : idx) gens.push_back(kCols[i]);
    return Cone::from_generators(5, gens);
}

Fan nine_cone_fan() {
    Fan f;
    f.ambient = 5;
    for (const auto& idx : std::vector<std::vector<size_t>>{{1, 2, 3, 4, 5},
                                                            {0, 3, 5, 6},
                                                            {0, 2, 4, 6},
                                                            {0, 1, 3, 5},
                                                            {0, 1, 2, 4},
                                                            {4, 5, 6},
                                                            {3, 4, 6},
                                                            {2, 5, 6},
                                                            {2, 3, 6}})
        f.max_cones.push_back(cone_of(idx));
    return f;
}

}  // namespace

TEST_CASE("quadrant cone round trip") {
    Cone c = Cone::from_generators(2, {{1, 0}, {0, 1}});
    CHECK(c.rays == std::vector<IVec>{{0, 1}, {1, 0}});
    CHECK(c.facets == std::vector<IVec>{{0, 1}, {1, 0}});
    CHECK(c.lin.rows == 0);
    CHECK(c.eqs.rows == 0);
    CHECK(c.dim() == 2);
    CHECK(c.pointed());

    Cone h = Cone::from_h(2, {{1, 0}, {0, 1}}, {});
    CHECK(c == h);

    // Redundant and scaled generators do not change the canonical form.
    Cone r = Cone::from_generators(2, {{3, 0}, {1, 1}, {0, 2}, {2, 5}});
    CHECK(c == r);
}

TEST_CASE("square cone is non-simplicial") {
    Cone c = Cone::from_generators(3, {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}});
    CHECK(c.rays == std::vector<IVec>{{-1, 0, 1}, {0, -1, 1}, {0, 1, 1}, {1, 0, 1}});
    CHECK(c.facets ==
          std::vector<IVec>{{-1, -1, 1}, {-1, 1, 1}, {1, -1, 1}, {1, 1, 1}});
    CHECK(c.dim() == 3);

    // An interior generator is absorbed.
    Cone r = Cone::from_generators(
        3, {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}, {0, 0, 1}});
    CHECK(c == r);

    // 1 zero face + 4 rays + 4 two-dimensional faces + the cone itself.
    CHECK(face_ray_sets(c).size() == 10);

    CHECK(c.relative_interior_contains(IVec{0, 0, 1}));
    CHECK_FALSE(c.relative_interior_contains(IVec{1, 0, 1}));
    CHECK(c.contains(IVec{1, 0, 1}));
    CHECK_FALSE(c.contains(IVec{1, 1, 1}));
}

TEST_CASE("halfspace has lineality") {
    Cone c = Cone::from_h(3, {{1, 0, 0}}, {});
    CHECK(c.lin == IMat({{0, 1, 0}, {0, 0, 1}}));
    CHECK(c.rays == std::vector<IVec>{{1, 0, 0}});
    CHECK(c.facets == std::vector<IVec>{{1, 0, 0}});
    CHECK_FALSE(c.pointed());
    CHECK(c.dim() == 3);

    // Rays are reduced modulo the lineality space.
    Cone g = Cone::from_generators(3, {{5, 2, -3}}, {{0, 1, 0}, {0, 0, 1}});
    CHECK(g == c);
}

TEST_CASE("cone inside a hyperplane") {
    Cone c = Cone::from_h(3, {{1, 0, 0}, {0, 1, 0}}, {{1, 1, 1}});
    CHECK(c.rays == std::vector<IVec>{{0, 1, -1}, {1, 0, -1}});
    CHECK(c.eqs == IMat({{1, 1, 1}}));
    CHECK(c.facets == std::vector<IVec>{{-1, 2, -1}, {2, -1, -1}});
    CHECK(c.dim() == 2);
    CHECK(c.relative_interior_contains(IVec{1, 1, -2}));
    CHECK_FALSE(c.relative_interior_contains(IVec{1, 0, -1}));
}

TEST_CASE("zero cone") {
    Cone c = Cone::from_generators(2, {});
    CHECK(c.is_zero());
    CHECK(c.dim() == 0);
    CHECK(c.contains(IVec{0, 0}));
    CHECK_FALSE(c.contains(IVec{1, 0}));
    CHECK(face_ray_sets(c).size() == 1);
}

TEST_CASE("intersection and faces") {
    Cone quadrant = Cone::from_generators(2, {{1, 0}, {0, 1}});
    Cone upper = Cone::from_generators(2, {{1, 1}, {-1, 1}});
    Cone i = intersect(quadrant, upper);
    CHECK(i.rays == std::vector<IVec>{{0, 1}, {1, 1}});

    Cone ray = Cone::from_generators(2, {{1, 0}});
    CHECK(face_of(ray, quadrant));
    CHECK_FALSE(face_of(ray, upper));
    Cone diag = Cone::from_generators(2, {{1, 1}});
    CHECK(face_of(diag, upper));
    CHECK_FALSE(face_of(diag, quadrant));  // interior ray, not a face
    CHECK(face_of(Cone::from_generators(2, {}), quadrant));
    CHECK(face_of(quadrant, quadrant));
}

TEST_CASE("the nine-cone fan is a fan with the expected dimensions") {
    Fan f = nine_cone_fan();
    CHECK(fan_rays(f).size() == 7);
    CHECK(f.max_cones[0].dim() == 5);
    for (size_t i = 1; i <= 4; ++i) CHECK(f.max_cones[i].dim() == 4);
    for (size_t i = 5; i <= 8; ++i) CHECK(f.max_cones[i].dim() == 3);
    CHECK(is_fan(f));
    CHECK_FALSE(is_complete(f));
}

TEST_CASE("projective plane fan is complete") {
    Fan f;
    f.ambient = 2;
    f.max_cones.push_back(Cone::from_generators(2, {{1, 0}, {0, 1}}));
    f.max_cones.push_back(Cone::from_generators(2, {{0, 1}, {-1, -1}}));
    f.max_cones.push_back(Cone::from_generators(2, {{-1, -1}, {1, 0}}));
    CHECK(is_fan(f));
    CHECK(is_complete(f));

    // Dropping one chart breaks completeness.
    Fan g = f;
    g.max_cones.pop_back();
    CHECK_FALSE(is_complete(g));
}

TEST_CASE("fan refinement splits along the common structure") {
    Fan f;
    f.ambient = 2;
    f.max_cones.push_back(Cone::from_generators(2, {{1, 0}, {0, 1}}));
    Fan g;
    g.ambient = 2;
    g.max_cones.push_back(Cone::from_generators(2, {{1, 0}, {1, 1}}));
    g.max_cones.push_back(Cone::from_generators(2, {{1, 1}, {0, 1}}));
    Fan r = refine_fan(f, g);
    REQUIRE(r.max_cones.size() == 2);
    CHECK((r.max_cones[0] == g.max_cones[0] || r.max_cones[0] == g.max_cones[1]));
    CHECK((r.max_cones[1] == g.max_cones[0] || r.max_cones[1] == g.max_cones[1]));
    CHECK_FALSE(r.max_cones[0] == r.max_cones[1]);

    // A partial cover refines to the single overlap piece.
    Fan h;
    h.ambient = 2;
    h.max_cones.push_back(Cone::from_generators(2, {{1, 0}, {1, 1}}));
    Fan s = refine_fan(f, h);
    REQUIRE(s.max_cones.size() == 1);
    CHECK(s.max_cones[0] == h.max_cones[0]);
}

TEST_CASE("lattice points of bounded cells") {
    Cone octant = Cone::from_generators(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    TruncatedCell cell{octant, {Rat(-1), Rat(-1), Rat(-1)}};
    CHECK(bounded(cell));
    CHECK(lattice_points(cell) ==
          std::vector<IVec>{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}});

    Cone square = Cone::from_generators(3, {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}});
    TruncatedCell sq{square, {Rat(0), Rat(0), Rat(-1)}};
    CHECK(lattice_points(sq) == std::vector<IVec>{{-1, 0, 1},
                                                  {0, -1, 1},
                                                  {0, 0, 0},
                                                  {0, 0, 1},
                                                  {0, 1, 1},
                                                  {1, 0, 1}});

    TruncatedCell open{octant, {Rat(-1), Rat(-1), Rat(0)}};
    CHECK_FALSE(bounded(open));
    CHECK_THROWS_AS(lattice_points(open), error);
    CHECK_THROWS_WITH(lattice_points(open), "not log-terminal cell");

    Cone half = Cone::from_h(2, {{1, 0}}, {});
    TruncatedCell linecell{half, {Rat(-1), Rat(0)}};
    CHECK_FALSE(bounded(linecell));
}

TEST_CASE("deep cell with fractional vertices") {
    // Cut the quadrant at x/2 + y/3 <= 1: vertices (2,0) and (0,3).
    Cone quadrant = Cone::from_generators(2, {{1, 0}, {0, 1}});
    TruncatedCell cell{quadrant, {Rat(-1, 2), Rat(-1, 3)}};
    auto pts = lattice_points(cell);
    CHECK(pts.size() == 7);
    for (const IVec& p : pts) {
        CHECK(p[0] >= 0);
        CHECK(p[1] >= 0);
        CHECK(Rat(p[0]) / 2 + Rat(p[1]) / 3 <= 1);
    }
}
