#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "spatialrank/dataset.hpp"
#include "spatialrank/synthgen.hpp"

using namespace spatialrank;

namespace {

std::string record_line(const std::string& rel, int label, const std::string& image = "img1") {
    return nlohmann::json{{"image_id", image},
                          {"subject", "cup"},
                          {"object", "table"},
                          {"relation", rel},
                          {"label", label},
                          {"subject_box", {0.1, 0.1, 0.2, 0.2}},
                          {"subject_conf", 0.9},
                          {"object_box", {0.6, 0.6, 0.2, 0.2}},
                          {"object_conf", 0.8}}
        .dump();
}

std::string instance_key(const ClauseInstance& inst) {
    return inst.image_id + "|" + inst.subject_name + "|" +
           std::string(relation_name(inst.relation)) + "|" + inst.object_name;
}

}  // namespace

TEST_CASE("parse_records") {
    SECTION("empty stream") {
        std::istringstream in("");
        CHECK(parse_records(in).empty());
    }
    SECTION("valid lines kept in order") {
        std::istringstream in(record_line("near", 1, "a") + "\n" + record_line("on", 0, "b") +
                              "\n\n" + record_line("under", 1, "c") + "\n");
        const auto records = parse_records(in);
        REQUIRE(records.size() == 3);
        CHECK(records[0].image_id == "a");
        CHECK(records[1].image_id == "b");
        CHECK(records[1].label == 0);
        CHECK(records[2].image_id == "c");
        CHECK(records[0].subject_grounding.has_value());
        CHECK(records[0].subject_grounding->confidence == 0.9);
    }
    SECTION("bad label names the field and line") {
        std::istringstream in(record_line("near", 1) + "\n" + record_line("near", 2) + "\n");
        try {
            parse_records(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find("label") != std::string::npos);
        }
    }
    SECTION("missing field named") {
        std::istringstream in(R"({"image_id":"x","subject":"cup","object":"table","label":1})");
        CHECK_THROWS_WITH(parse_records(in), Catch::Matchers::ContainsSubstring("relation"));
    }
    SECTION("malformed JSON carries line number") {
        std::istringstream in(record_line("near", 1) + "\nnot json\n");
        CHECK_THROWS_WITH(parse_records(in), Catch::Matchers::ContainsSubstring("line 2"));
    }
}

TEST_CASE("merge_clause covers exactly the 32 mapped phrases") {
    const std::map<std::string, SpatialRelation> expected = {
        {"below", SpatialRelation::Below},
        {"beneath", SpatialRelation::Below},
        {"under", SpatialRelation::Below},
        {"above", SpatialRelation::Above},
        {"on", SpatialRelation::Above},
        {"on top of", SpatialRelation::Above},
        {"over", SpatialRelation::Above},
        {"away from", SpatialRelation::FarFrom},
        {"far away from", SpatialRelation::FarFrom},
        {"far from", SpatialRelation::FarFrom},
        {"at the right side of", SpatialRelation::RightOf},
        {"right of", SpatialRelation::RightOf},
        {"at the left side of", SpatialRelation::LeftOf},
        {"left of", SpatialRelation::LeftOf},
        {"in", SpatialRelation::Inside},
        {"in the middle of", SpatialRelation::Inside},
        {"inside", SpatialRelation::Inside},
        {"part of", SpatialRelation::Inside},
        {"within", SpatialRelation::Inside},
        {"outside", SpatialRelation::Outside},
        {"adjacent to", SpatialRelation::Near},
        {"at the edge of", SpatialRelation::Near},
        {"at the side of", SpatialRelation::Near},
        {"attached to", SpatialRelation::Near},
        {"beside", SpatialRelation::Near},
        {"by", SpatialRelation::Near},
        {"close to", SpatialRelation::Near},
        {"connected to", SpatialRelation::Near},
        {"near", SpatialRelation::Near},
        {"next to", SpatialRelation::Near},
        {"touching", SpatialRelation::Near},
        {"contains", SpatialRelation::Contains},
    };
    REQUIRE(expected.size() == 32);
    REQUIRE(merge_table_size() == 32);
    for (const auto& [phrase, rel] : expected) {
        auto merged = merge_clause(phrase);
        REQUIRE(merged.has_value());
        CHECK(*merged == rel);
    }
    // orientation- and depth-based clauses are rejected
    for (const char* phrase : {"in front of", "behind", "facing away", "parallel to", "facing",
                               "opposite to", ""})
        CHECK_FALSE(merge_clause(phrase).has_value());
}

TEST_CASE("merge_clause normalizes case and whitespace") {
    CHECK(merge_clause("  On Top Of ") == SpatialRelation::Above);
    CHECK(merge_clause("BENEATH") == SpatialRelation::Below);
    CHECK(merge_clause("close   to") == SpatialRelation::Near);
    CHECK(merge_clause("touching") == SpatialRelation::Near);
}

TEST_CASE("prepare") {
    std::istringstream in(record_line("close to", 1, "a") + "\n" +   // kept as near
                          record_line("on", 0, "b") + "\n" +         // label 0
                          record_line("behind", 1, "c") + "\n" +     // unmergeable
                          R"({"image_id":"d","subject":"cup","object":"table","relation":"on","label":1})" +
                          "\n");                                     // missing grounding
    const auto records = parse_records(in);
    const auto [instances, summary] = prepare(records);
    REQUIRE(instances.size() == 1);
    CHECK(instances[0].relation == SpatialRelation::Near);
    CHECK(instances[0].image_id == "a");
    CHECK(summary.input == 4);
    CHECK(summary.kept == 1);
    CHECK(summary.dropped_label_zero == 1);
    CHECK(summary.dropped_unmergeable == 1);
    CHECK(summary.dropped_missing_grounding == 1);
    CHECK(summary.per_class[static_cast<int>(SpatialRelation::Near)] == 1);
}

TEST_CASE("prepare confidence filter") {
    std::istringstream in(record_line("near", 1, "a") + "\n");
    const auto records = parse_records(in);
    const auto [kept, s1] = prepare(records, PrepareOptions{0.5});
    CHECK(kept.size() == 1);
    std::istringstream in2(record_line("near", 1, "a") + "\n");
    const auto [dropped, s2] = prepare(parse_records(in2), PrepareOptions{0.95});
    CHECK(dropped.empty());
    CHECK(s2.dropped_low_confidence == 1);
}

TEST_CASE("stratified_split") {
    SynthConfig cfg;
    cfg.per_class = 20;
    cfg.seed = 3;
    const auto instances = generate(cfg);

    SECTION("sizes and per-class ratio") {
        const SplitPair split = stratified_split(instances, 0.8, 17);
        CHECK(split.train.size() == 144);
        CHECK(split.test.size() == 36);
        std::array<int, kNumRelations> train_counts{};
        for (const auto& inst : split.train) ++train_counts[static_cast<int>(inst.relation)];
        for (int k = 0; k < kNumRelations; ++k) CHECK(train_counts[k] == 16);
    }
    SECTION("10 instances of one class at 0.8 split 8/2") {
        std::vector<ClauseInstance> ten(instances.begin(), instances.begin() + 10);
        for (auto& inst : ten) inst.relation = SpatialRelation::Near;
        const SplitPair split = stratified_split(ten, 0.8, 0);
        CHECK(split.train.size() == 8);
        CHECK(split.test.size() == 2);
    }
    SECTION("deterministic for a fixed seed") {
        const SplitPair a = stratified_split(instances, 0.8, 99);
        const SplitPair b = stratified_split(instances, 0.8, 99);
        CHECK(instances_to_jsonl(a.train) == instances_to_jsonl(b.train));
        CHECK(instances_to_jsonl(a.test) == instances_to_jsonl(b.test));
        const SplitPair c = stratified_split(instances, 0.8, 100);
        CHECK(instances_to_jsonl(a.train) != instances_to_jsonl(c.train));
    }
    SECTION("train and test are disjoint and cover the input") {
        const SplitPair split = stratified_split(instances, 0.8, 5);
        std::multiset<std::string> all, recombined;
        for (const auto& inst : instances) all.insert(instance_key(inst));
        for (const auto& inst : split.train) recombined.insert(instance_key(inst));
        for (const auto& inst : split.test) recombined.insert(instance_key(inst));
        CHECK(all == recombined);
    }
    SECTION("class with fewer than 2 instances is rejected by name") {
        std::vector<ClauseInstance> bad(instances.begin(), instances.begin() + 5);
        for (auto& inst : bad) inst.relation = SpatialRelation::Near;
        bad[0].relation = SpatialRelation::Contains;
        CHECK_THROWS_WITH(stratified_split(bad, 0.8, 0),
                          Catch::Matchers::ContainsSubstring("contains"));
    }
    SECTION("ratio bounds") {
        CHECK_THROWS_AS(stratified_split(instances, 0.0, 0), std::invalid_argument);
        CHECK_THROWS_AS(stratified_split(instances, 1.0, 0), std::invalid_argument);
    }
}

TEST_CASE("augment") {
    SynthConfig cfg;
    cfg.per_class = 5;
    cfg.seed = 8;
    const auto instances = generate(cfg);
    const auto augmented = augment(instances);
    REQUIRE(augmented.size() == 2 * instances.size());

    for (std::size_t i = 0; i < instances.size(); ++i) {
        const ClauseInstance& orig = augmented[2 * i];
        const ClauseInstance& swapped = augmented[2 * i + 1];
        CHECK(instance_key(orig) == instance_key(instances[i]));
        CHECK(swapped.subject_name == orig.object_name);
        CHECK(swapped.object_name == orig.subject_name);
        CHECK(swapped.subject.box.x == orig.object.box.x);
        CHECK(swapped.object.confidence == orig.subject.confidence);
        if (is_symmetric(orig.relation))
            CHECK(swapped.relation == orig.relation);
        else
            CHECK(swapped.relation == inverse_relation(orig.relation));
    }

    SECTION("specific relation swaps") {
        ClauseInstance left = instances[0];
        left.relation = SpatialRelation::LeftOf;
        CHECK(augment({left})[1].relation == SpatialRelation::RightOf);
        left.relation = SpatialRelation::Near;
        CHECK(augment({left})[1].relation == SpatialRelation::Near);
    }

    SECTION("swap of the swap restores the relation") {
        for (const auto& inst : instances) {
            const auto once = augment({inst});
            const auto back = augment({once[1]});
            CHECK(back[1].relation == inst.relation);
            CHECK(back[1].subject_name == inst.subject_name);
        }
    }
}

TEST_CASE("jsonl round trip through prepare") {
    SynthConfig cfg;
    cfg.per_class = 4;
    cfg.seed = 21;
    const auto instances = generate(cfg);
    const std::string jsonl = instances_to_jsonl(instances);
    std::istringstream in(jsonl);
    const auto [reparsed, summary] = prepare(parse_records(in));
    REQUIRE(reparsed.size() == instances.size());
    CHECK(instances_to_jsonl(reparsed) == jsonl);
}
