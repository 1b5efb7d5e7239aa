#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "spatialrank/core.hpp"
#include "spatialrank/rng.hpp"

// Dataset pipeline: JSONL ingestion, positive-label filtering, clause
// merging onto the 9-class vocabulary, stratified splitting, and
// swap-based augmentation.

namespace spatialrank {

struct RawRecord {
    std::string image_id;
    std::string subject;
    std::string relation;  // original clause phrase, pre-merge
    std::string object;
    int label = 0;
    std::optional<Grounding> subject_grounding;
    std::optional<Grounding> object_grounding;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::string normalize_phrase(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = true;  // trims leading whitespace
    for (char c : s) {
        if (c == ' ' || c == '\t') {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

inline Grounding grounding_from_json(const nlohmann::json& box, double conf) {
    if (!box.is_array() || box.size() != 4)
        throw std::invalid_argument("box must be an array of 4 numbers [x,y,h,w]");
    Grounding g;
    g.box = BoundingBox{box[0].get<double>(), box[1].get<double>(),
                        box[2].get<double>(), box[3].get<double>()};
    g.confidence = conf;
    return g;
}

}  // namespace detail

// Clause phrase -> merged relation class. Unmapped phrases (orientation- and
// depth-based clauses among them) return nullopt and the record is dropped.
inline std::optional<SpatialRelation> merge_clause(std::string_view original) {
    static const std::unordered_map<std::string, SpatialRelation> kMergeMap = {
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
    const auto it = kMergeMap.find(detail::normalize_phrase(original));
    if (it == kMergeMap.end()) return std::nullopt;
    return it->second;
}

inline std::size_t merge_table_size() { return 32; }

// One JSON object per line with keys image_id, subject, object, relation,
// label, and optional subject_box/subject_conf/object_box/object_conf.
inline std::vector<RawRecord> parse_records(std::istream& in) {
    std::vector<RawRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
        }
        RawRecord rec;
        try {
            for (const char* field : {"image_id", "subject", "object", "relation", "label"})
                if (!j.contains(field))
                    throw std::invalid_argument(std::string("missing field \"") + field + "\"");
            rec.image_id = j.at("image_id").get<std::string>();
            rec.subject = j.at("subject").get<std::string>();
            rec.object = j.at("object").get<std::string>();
            rec.relation = j.at("relation").get<std::string>();
            if (!j.at("label").is_number_integer())
                throw std::invalid_argument("field \"label\" must be an integer");
            rec.label = j.at("label").get<int>();
            if (rec.label != 0 && rec.label != 1)
                throw std::invalid_argument("field \"label\" must be 0 or 1");
            if (j.contains("subject_box"))
                rec.subject_grounding = detail::grounding_from_json(
                    j.at("subject_box"), j.value("subject_conf", 1.0));
            if (j.contains("object_box"))
                rec.object_grounding = detail::grounding_from_json(
                    j.at("object_box"), j.value("object_conf", 1.0));
        } catch (const std::exception& e) {
            throw ParseError(lineno, e.what());
        }
        records.push_back(std::move(rec));
    }
    return records;
}

struct PrepareOptions {
    double min_confidence = 0.0;  // 0 disables the silver-label filter
};

struct PrepareSummary {
    std::size_t input = 0;
    std::size_t kept = 0;
    std::size_t dropped_label_zero = 0;
    std::size_t dropped_unmergeable = 0;
    std::size_t dropped_missing_grounding = 0;
    std::size_t dropped_invalid_grounding = 0;
    std::size_t dropped_low_confidence = 0;
    std::array<std::size_t, kNumRelations> per_class{};
};

inline std::pair<std::vector<ClauseInstance>, PrepareSummary> prepare(
    const std::vector<RawRecord>& records, const PrepareOptions& opts = {}) {
    std::vector<ClauseInstance> out;
    PrepareSummary summary;
    summary.input = records.size();
    for (const RawRecord& rec : records) {
        if (rec.label != 1) {
            ++summary.dropped_label_zero;
            continue;
        }
        const auto merged = merge_clause(rec.relation);
        if (!merged) {
            ++summary.dropped_unmergeable;
            continue;
        }
        if (!rec.subject_grounding || !rec.object_grounding) {
            ++summary.dropped_missing_grounding;
            continue;
        }
        ClauseInstance inst;
        inst.image_id = rec.image_id;
        inst.subject_name = rec.subject;
        inst.object_name = rec.object;
        inst.relation = *merged;
        inst.subject = *rec.subject_grounding;
        inst.object = *rec.object_grounding;
        try {
            inst.validate();
        } catch (const std::invalid_argument&) {
            ++summary.dropped_invalid_grounding;
            continue;
        }
        if (opts.min_confidence > 0.0 &&
            (inst.subject.confidence < opts.min_confidence ||
             inst.object.confidence < opts.min_confidence)) {
            ++summary.dropped_low_confidence;
            continue;
        }
        ++summary.per_class[static_cast<int>(inst.relation)];
        ++summary.kept;
        out.push_back(std::move(inst));
    }
    return {std::move(out), summary};
}

struct SplitPair {
    std::vector<ClauseInstance> train;
    std::vector<ClauseInstance> test;
    std::uint64_t seed = 0;
};

// Per-class train counts start at floor(n_k * ratio); the remainder needed to
// reach round(total * ratio) goes to the classes with the largest fractional
// parts. Keeps every class within one instance of the target ratio while the
// overall sizes land exactly on the rounded total.
inline SplitPair stratified_split(const std::vector<ClauseInstance>& instances,
                                  double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("split ratio must be in (0,1)");
    std::array<std::vector<std::size_t>, kNumRelations> by_class;
    for (std::size_t i = 0; i < instances.size(); ++i)
        by_class[static_cast<int>(instances[i].relation)].push_back(i);
    for (int k = 0; k < kNumRelations; ++k) {
        if (!by_class[k].empty() && by_class[k].size() < 2)
            throw std::invalid_argument(
                "class \"" + std::string(relation_name(relation_from_index(k))) +
                "\" has fewer than 2 instances");
    }

    const std::size_t total_train =
        static_cast<std::size_t>(std::llround(static_cast<double>(instances.size()) * ratio));
    std::array<std::size_t, kNumRelations> train_k{};
    std::vector<std::pair<double, int>> remainders;
    std::size_t assigned = 0;
    for (int k = 0; k < kNumRelations; ++k) {
        const double exact = static_cast<double>(by_class[k].size()) * ratio;
        train_k[k] = static_cast<std::size_t>(exact);
        assigned += train_k[k];
        if (!by_class[k].empty()) remainders.push_back({exact - static_cast<double>(train_k[k]), k});
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; assigned < total_train && i < remainders.size(); ++i) {
        const int k = remainders[i].second;
        if (train_k[k] < by_class[k].size()) {
            ++train_k[k];
            ++assigned;
        }
    }

    SplitPair split;
    split.seed = seed;
    for (int k = 0; k < kNumRelations; ++k) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(k)));
        seeded_shuffle(by_class[k], rng);
        for (std::size_t i = 0; i < by_class[k].size(); ++i) {
            (i < train_k[k] ? split.train : split.test).push_back(instances[by_class[k][i]]);
        }
    }
    return split;
}

// Factor-2 augmentation: each instance is followed by its subject/object
// swap, with the relation inverted for asymmetric classes.
inline std::vector<ClauseInstance> augment(const std::vector<ClauseInstance>& train,
                                           bool outside_symmetric = true) {
    std::vector<ClauseInstance> out;
    out.reserve(train.size() * 2);
    for (const ClauseInstance& inst : train) {
        out.push_back(inst);
        ClauseInstance swapped = inst;
        std::swap(swapped.subject_name, swapped.object_name);
        std::swap(swapped.subject, swapped.object);
        swapped.relation = inverse_relation(inst.relation, outside_symmetric);
        out.push_back(std::move(swapped));
    }
    return out;
}

// --- JSONL serialization -------------------------------------------------

inline nlohmann::json instance_to_json(const ClauseInstance& inst) {
    return nlohmann::json{
        {"image_id", inst.image_id},
        {"subject", inst.subject_name},
        {"object", inst.object_name},
        {"relation", std::string(relation_name(inst.relation))},
        {"label", 1},
        {"subject_box", {inst.subject.box.x, inst.subject.box.y, inst.subject.box.h, inst.subject.box.w}},
        {"subject_conf", inst.subject.confidence},
        {"object_box", {inst.object.box.x, inst.object.box.y, inst.object.box.h, inst.object.box.w}},
        {"object_conf", inst.object.confidence},
    };
}

inline std::string instances_to_jsonl(const std::vector<ClauseInstance>& instances) {
    std::string out;
    for (const ClauseInstance& inst : instances) {
        out += instance_to_json(inst).dump();
        out += '\n';
    }
    return out;
}

inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open for writing: " + tmp.string());
        f << content;
        if (!f.good()) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_instances_jsonl(const std::filesystem::path& path,
                                  const std::vector<ClauseInstance>& instances) {
    write_text_atomic(path, instances_to_jsonl(instances));
}

inline std::vector<RawRecord> parse_records_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path.string());
    return parse_records(f);
}

// Reads a grounding JSONL and runs the standard prepare pass; our own
// train/test files round-trip through this unchanged.
inline std::vector<ClauseInstance> read_instances_jsonl(const std::filesystem::path& path,
                                                        const PrepareOptions& opts = {}) {
    return prepare(parse_records_file(path), opts).first;
}

inline nlohmann::json summary_to_json(const PrepareSummary& s) {
    nlohmann::json per_class = nlohmann::json::object();
    for (int k = 0; k < kNumRelations; ++k)
        per_class[std::string(relation_name(relation_from_index(k)))] = s.per_class[k];
    return nlohmann::json{
        {"input", s.input},
        {"kept", s.kept},
        {"dropped",
         {{"label_zero", s.dropped_label_zero},
          {"unmergeable_relation", s.dropped_unmergeable},
          {"missing_grounding", s.dropped_missing_grounding},
          {"invalid_grounding", s.dropped_invalid_grounding},
          {"low_confidence", s.dropped_low_confidence}}},
        {"per_class", per_class},
    };
}

}  // namespace spatialrank
