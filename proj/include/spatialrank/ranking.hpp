#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "spatialrank/core.hpp"
#include "spatialrank/dataset.hpp"
#include "spatialrank/mlp.hpp"

// Clause scoring and re-ranking: the factored clause score
// p(subject) * Pr(relation | boxes) * p(object), plus smoothed
// co-occurrence priors keyed by (subject, object) noun phrases.

namespace spatialrank {

struct ScoredRelation {
    SpatialRelation relation = SpatialRelation::Below;
    double score = 0.0;
};

inline RelationDistribution uniform_distribution() {
    RelationDistribution d;
    d.fill(1.0 / kNumRelations);
    return d;
}

struct PriorTable {
    double alpha = 1.0;
    std::unordered_map<std::string, RelationDistribution> table;

    static std::string key(std::string_view subject, std::string_view object) {
        return detail::normalize_phrase(subject) + "|" + detail::normalize_phrase(object);
    }

    // Unseen pairs fall back to the uniform distribution.
    RelationDistribution lookup(std::string_view subject, std::string_view object) const {
        const auto it = table.find(key(subject, object));
        if (it == table.end()) return uniform_distribution();
        return it->second;
    }
};

// Additive smoothing: prior_k = (count_k + alpha) / (total + 9 * alpha).
inline PriorTable build_priors(const std::vector<ClauseInstance>& train, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("smoothing alpha must be positive");
    if (train.empty()) throw std::invalid_argument("cannot build priors from an empty train set");
    PriorTable priors;
    priors.alpha = alpha;
    std::unordered_map<std::string, std::array<std::size_t, kNumRelations>> counts;
    for (const ClauseInstance& inst : train)
        counts[PriorTable::key(inst.subject_name, inst.object_name)]
              [static_cast<int>(inst.relation)] += 1;
    for (const auto& [key, c] : counts) {
        std::size_t total = 0;
        for (std::size_t n : c) total += n;
        RelationDistribution d;
        for (int k = 0; k < kNumRelations; ++k)
            d[k] = (static_cast<double>(c[k]) + alpha) /
                   (static_cast<double>(total) + kNumRelations * alpha);
        priors.table[key] = d;
    }
    return priors;
}

// score_k = p_i * dist_k * p_j, in canonical class order.
inline std::vector<ScoredRelation> score(const RelationDistribution& dist, double p_i,
                                         double p_j) {
    if (!(p_i >= 0.0 && p_i <= 1.0 && p_j >= 0.0 && p_j <= 1.0))
        throw std::invalid_argument("confidences must lie in [0,1]");
    std::vector<ScoredRelation> out(kNumRelations);
    for (int k = 0; k < kNumRelations; ++k)
        out[k] = {relation_from_index(k), p_i * dist[k] * p_j};
    return out;
}

// Elementwise product with the prior, renormalized. Renormalization never
// changes the ordering.
inline RelationDistribution rerank(const RelationDistribution& dist,
                                   const RelationDistribution& prior) {
    RelationDistribution out;
    double total = 0.0;
    for (int k = 0; k < kNumRelations; ++k) {
        out[k] = dist[k] * prior[k];
        total += out[k];
    }
    if (!(total > 0.0))
        throw std::runtime_error("rerank: all products are zero");
    for (double& v : out) v /= total;
    return out;
}

// assemble features -> predict -> optional rerank -> score -> sort
// descending, ties broken by canonical class index.
inline std::vector<ScoredRelation> rank_clause(const MlpModel& model,
                                               const ClauseInstance& instance,
                                               const PriorTable* priors, bool use_geo) {
    const FeatureVector features =
        assemble_features(instance.subject.box, instance.object.box, use_geo);
    RelationDistribution dist = predict(model, features);
    if (priors)
        dist = rerank(dist, priors->lookup(instance.subject_name, instance.object_name));
    std::vector<ScoredRelation> scored =
        score(dist, instance.subject.confidence, instance.object.confidence);
    std::stable_sort(scored.begin(), scored.end(), [](const ScoredRelation& a, const ScoredRelation& b) {
        if (a.score != b.score) return a.score > b.score;
        return static_cast<int>(a.relation) < static_cast<int>(b.relation);
    });
    return scored;
}

// --- Serialization --------------------------------------------------------

inline nlohmann::json priors_to_json(const PriorTable& priors) {
    nlohmann::json table = nlohmann::json::object();
    for (const auto& [key, dist] : priors.table) table[key] = dist;
    return nlohmann::json{{"alpha", priors.alpha}, {"priors", table}};
}

inline PriorTable priors_from_json(const nlohmann::json& j) {
    PriorTable priors;
    try {
        priors.alpha = j.at("alpha").get<double>();
        for (const auto& [key, dist] : j.at("priors").items()) {
            const auto v = dist.get<std::vector<double>>();
            if (static_cast<int>(v.size()) != kNumRelations)
                throw std::runtime_error("prior entry \"" + key + "\" is not a 9-vector");
            RelationDistribution d;
            std::copy(v.begin(), v.end(), d.begin());
            priors.table[key] = d;
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed prior table: ") + e.what());
    }
    return priors;
}

inline void save_priors_file(const std::filesystem::path& path, const PriorTable& priors) {
    write_text_atomic(path, priors_to_json(priors).dump(2) + "\n");
}

inline PriorTable load_priors_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open prior table: " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed prior table: ") + e.what());
    }
    return priors_from_json(j);
}

}  // namespace spatialrank
