#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spatialrank/core.hpp"
#include "spatialrank/rng.hpp"

using namespace spatialrank;

namespace {

BoundingBox random_valid_box(std::mt19937_64& rng) {
    const double w = uniform_in(rng, 0.01, 0.9);
    const double h = uniform_in(rng, 0.01, 0.9);
    return {uniform_in(rng, 0.0, 1.0 - w), uniform_in(rng, 0.0, 1.0 - h), h, w};
}

}  // namespace

TEST_CASE("box invariants") {
    CHECK_NOTHROW((BoundingBox{0.0, 0.0, 1.0, 1.0}).validate());
    CHECK_NOTHROW((BoundingBox{0.5, 0.5, 0.5, 0.5}).validate());  // x+w = 1 exactly
    CHECK_THROWS_AS((BoundingBox{-0.1, 0.0, 0.5, 0.5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((BoundingBox{0.0, 0.0, 0.0, 0.5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((BoundingBox{0.6, 0.0, 0.5, 0.5}).validate(), std::invalid_argument);
    // tolerance absorbs detector rounding just past the frame edge
    CHECK_NOTHROW((BoundingBox{0.5, 0.5, 0.5, 0.5 + 5e-7}).validate());
    CHECK_THROWS_AS((Grounding{{0.0, 0.0, 0.5, 0.5}, 1.5}).validate(), std::invalid_argument);
}

TEST_CASE("relation vocabulary") {
    CHECK(static_cast<int>(SpatialRelation::Below) == 0);
    CHECK(static_cast<int>(SpatialRelation::Contains) == 8);
    for (int k = 0; k < kNumRelations; ++k) {
        const SpatialRelation r = relation_from_index(k);
        CHECK(relation_from_name(relation_name(r)) == r);
        // inverse of the inverse is the class itself
        CHECK(inverse_relation(inverse_relation(r)) == r);
        if (is_symmetric(r)) CHECK(inverse_relation(r) == r);
    }
    CHECK(inverse_relation(SpatialRelation::Below) == SpatialRelation::Above);
    CHECK(inverse_relation(SpatialRelation::LeftOf) == SpatialRelation::RightOf);
    CHECK(inverse_relation(SpatialRelation::Inside) == SpatialRelation::Contains);
    CHECK(is_symmetric(SpatialRelation::Outside));
    CHECK_FALSE(is_symmetric(SpatialRelation::Outside, /*outside_symmetric=*/false));
    CHECK_THROWS_AS(inverse_relation(SpatialRelation::Outside, false), std::invalid_argument);
    CHECK_THROWS_AS(relation_from_name("behind"), std::invalid_argument);
}

TEST_CASE("center") {
    auto c = center({0.0, 0.0, 1.0, 1.0});
    CHECK(c.x == 0.5);
    CHECK(c.y == 0.5);
    c = center({0.2, 0.4, 0.2, 0.2});
    CHECK(c.x == Catch::Approx(0.3));
    CHECK(c.y == Catch::Approx(0.5));
    c = center({0.9, 0.9, 0.1, 0.1});
    CHECK(c.x == Catch::Approx(0.95));
    CHECK(c.y == Catch::Approx(0.95));
}

TEST_CASE("center is translation-consistent") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        BoundingBox b = random_valid_box(rng);
        const double delta = uniform_in(rng, 0.0, 1.0 - b.x - b.w);
        BoundingBox shifted = b;
        shifted.x += delta;
        CHECK(center(shifted).x == Catch::Approx(center(b).x + delta).margin(1e-12));
        CHECK(center(shifted).y == center(b).y);
    }
}

TEST_CASE("geometry features") {
    const BoundingBox b{0.2, 0.2, 0.3, 0.3};
    SECTION("identical boxes give the zero direction") {
        const GeometryFeatures g = geometry_features(b, b);
        CHECK(g.ux == 0.0);
        CHECK(g.uy == 0.0);
        CHECK(g.d == 0.0);
    }
    SECTION("horizontal displacement") {
        // centers (0.25, 0.5) and (0.75, 0.5)
        const GeometryFeatures g =
            geometry_features({0.2, 0.45, 0.1, 0.1}, {0.7, 0.45, 0.1, 0.1});
        CHECK(g.ux == Catch::Approx(1.0));
        CHECK(g.uy == Catch::Approx(0.0).margin(1e-12));
        CHECK(g.d == Catch::Approx(0.5));
    }
    SECTION("3-4-5 triangle") {
        // centers (0.05, 0.05) and (0.35, 0.45)
        const GeometryFeatures g =
            geometry_features({0.0, 0.0, 0.1, 0.1}, {0.3, 0.4, 0.1, 0.1});
        CHECK(g.ux == Catch::Approx(0.6));
        CHECK(g.uy == Catch::Approx(0.8));
        CHECK(g.d == Catch::Approx(0.5));
    }
}

TEST_CASE("geometry feature properties") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i) {
        const BoundingBox a = random_valid_box(rng);
        const BoundingBox b = random_valid_box(rng);
        const GeometryFeatures fwd = geometry_features(a, b);
        const GeometryFeatures rev = geometry_features(b, a);
        // antisymmetry
        CHECK(rev.ux == Catch::Approx(-fwd.ux).margin(1e-12));
        CHECK(rev.uy == Catch::Approx(-fwd.uy).margin(1e-12));
        CHECK(rev.d == Catch::Approx(fwd.d).margin(1e-12));
        // unit norm or exactly zero
        const double norm = std::hypot(fwd.ux, fwd.uy);
        CHECK((norm == 0.0 || std::abs(norm - 1.0) < 1e-9));
        CHECK(fwd.d <= std::sqrt(2.0) + 1e-12);
    }
}

TEST_CASE("assemble_features") {
    const BoundingBox s{0.1, 0.2, 0.3, 0.4};
    const BoundingBox o{0.5, 0.1, 0.2, 0.3};
    const FeatureVector base = assemble_features(s, o, false);
    REQUIRE(base.size() == 8);
    CHECK(base == FeatureVector{0.1, 0.2, 0.3, 0.4, 0.5, 0.1, 0.2, 0.3});

    const FeatureVector geo = assemble_features(s, o, true);
    REQUIRE(geo.size() == 11);
    for (int i = 0; i < 8; ++i) CHECK(geo[i] == base[i]);

    // swapping subject and object swaps the 4-blocks and negates (ux, uy)
    const FeatureVector swapped = assemble_features(o, s, true);
    for (int i = 0; i < 4; ++i) {
        CHECK(swapped[i] == geo[i + 4]);
        CHECK(swapped[i + 4] == geo[i]);
    }
    CHECK(swapped[8] == Catch::Approx(-geo[8]).margin(1e-12));
    CHECK(swapped[9] == Catch::Approx(-geo[9]).margin(1e-12));
    CHECK(swapped[10] == Catch::Approx(geo[10]).margin(1e-12));

    // pure function: identical inputs yield identical outputs bit for bit
    CHECK(assemble_features(s, o, true) == geo);
}
