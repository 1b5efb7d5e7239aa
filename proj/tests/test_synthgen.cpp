#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <map>

#include "spatialrank/dataset.hpp"
#include "spatialrank/synthgen.hpp"

using namespace spatialrank;

TEST_CASE("label_of") {
    const SynthConfig cfg;
    SECTION("containment") {
        const BoundingBox outer{0.1, 0.1, 0.8, 0.8};
        const BoundingBox inner{0.3, 0.3, 0.2, 0.2};
        CHECK(label_of(inner, outer, cfg) == SpatialRelation::Inside);
        CHECK(label_of(outer, inner, cfg) == SpatialRelation::Contains);
    }
    SECTION("directional with aligned centers") {
        const BoundingBox top{0.4, 0.05, 0.2, 0.2};
        const BoundingBox bottom{0.4, 0.6, 0.2, 0.2};
        CHECK(label_of(bottom, top, cfg) == SpatialRelation::Below);
        CHECK(label_of(top, bottom, cfg) == SpatialRelation::Above);
        const BoundingBox left{0.05, 0.4, 0.2, 0.2};
        const BoundingBox right{0.6, 0.4, 0.2, 0.2};
        CHECK(label_of(left, right, cfg) == SpatialRelation::LeftOf);
        CHECK(label_of(right, left, cfg) == SpatialRelation::RightOf);
    }
    SECTION("distance bands for disjoint non-directional pairs") {
        const BoundingBox a{0.05, 0.05, 0.1, 0.1};
        // centers (0.1, 0.1) and roughly along the diagonal
        CHECK(label_of(a, {0.17, 0.2, 0.1, 0.1}, cfg) == SpatialRelation::Near);
        CHECK(label_of(a, {0.3, 0.35, 0.1, 0.1}, cfg) == SpatialRelation::Outside);
        CHECK(label_of(a, {0.6, 0.6, 0.1, 0.1}, cfg) == SpatialRelation::FarFrom);
    }
    SECTION("overlap without containment is ambiguous") {
        const BoundingBox a{0.2, 0.2, 0.3, 0.3};
        const BoundingBox b{0.3, 0.3, 0.3, 0.3};
        CHECK_FALSE(label_of(a, b, cfg).has_value());
    }
}

TEST_CASE("generate") {
    SynthConfig cfg;
    cfg.per_class = 10;
    cfg.seed = 7;

    SECTION("exact class balance") {
        const auto data = generate(cfg);
        REQUIRE(data.size() == 90);
        std::array<int, kNumRelations> counts{};
        for (const auto& inst : data) ++counts[static_cast<int>(inst.relation)];
        for (int k = 0; k < kNumRelations; ++k) CHECK(counts[k] == 10);
    }
    SECTION("self-consistency: label_of agrees with every stored relation") {
        for (const auto& inst : generate(cfg)) {
            const auto label = label_of(inst.subject.box, inst.object.box, cfg);
            REQUIRE(label.has_value());
            CHECK(*label == inst.relation);
        }
    }
    SECTION("confidences are silver-label range") {
        for (const auto& inst : generate(cfg)) {
            CHECK(inst.subject.confidence >= 0.8);
            CHECK(inst.subject.confidence <= 1.0);
            CHECK(inst.object.confidence >= 0.8);
            CHECK(inst.object.confidence <= 1.0);
        }
    }
    SECTION("determinism") {
        CHECK(instances_to_jsonl(generate(cfg)) == instances_to_jsonl(generate(cfg)));
        SynthConfig other = cfg;
        other.seed = 8;
        CHECK(instances_to_jsonl(generate(cfg)) != instances_to_jsonl(generate(other)));
    }
    SECTION("name skew concentrates name pairs per class") {
        SynthConfig skewed = cfg;
        skewed.per_class = 50;
        skewed.name_skew = 0.9;
        std::array<std::map<std::string, int>, kNumRelations> pair_counts;
        for (const auto& inst : generate(skewed))
            ++pair_counts[static_cast<int>(inst.relation)]
                         [inst.subject_name + "|" + inst.object_name];
        for (int k = 0; k < kNumRelations; ++k) {
            int top = 0;
            for (const auto& [pair, n] : pair_counts[k]) top = std::max(top, n);
            CHECK(top >= 30);  // ~90% of 50 draws hit the designated pair
        }
    }
    SECTION("config validation") {
        SynthConfig bad = cfg;
        bad.per_class = 0;
        CHECK_THROWS_AS(generate(bad), std::invalid_argument);
        bad = cfg;
        bad.far_threshold = bad.near_threshold;
        CHECK_THROWS_AS(generate(bad), std::invalid_argument);
        bad = cfg;
        bad.name_skew = 1.0;
        CHECK_THROWS_AS(generate(bad), std::invalid_argument);
    }
}

TEST_CASE("swap consistency with augmentation") {
    SynthConfig cfg;
    cfg.per_class = 112;  // ~1000 instances total
    cfg.seed = 13;
    const auto data = generate(cfg);
    REQUIRE(data.size() >= 1000);
    const auto augmented = augment(data);
    REQUIRE(augmented.size() == 2 * data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const ClauseInstance& swapped = augmented[2 * i + 1];
        const auto label = label_of(swapped.subject.box, swapped.object.box, cfg);
        REQUIRE(label.has_value());
        CHECK(*label == swapped.relation);
        if (!is_symmetric(data[i].relation))
            CHECK(swapped.relation == inverse_relation(data[i].relation));
    }
}
