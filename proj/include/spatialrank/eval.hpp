#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "spatialrank/core.hpp"
#include "spatialrank/ranking.hpp"

// Evaluation: top-k accuracy against random chance, ablation-style ranking
// reports, binary accuracy with delta-over-chance for external prediction
// files, and the detector-coverage breakdown.

namespace spatialrank {

struct RankingReport {
    double top1 = 0.0;
    double top3 = 0.0;
    double chance_top1 = 0.0;
    double chance_top3 = 0.0;
    double delta_top1 = 0.0;
    double delta_top3 = 0.0;
    bool use_geo = false;
    bool used_priors = false;
    std::size_t num_instances = 0;
    std::array<double, kNumRelations> per_class_top1{};
    std::array<std::size_t, kNumRelations> per_class_count{};
};

inline double random_chance(int k, int num_classes) {
    if (k < 1 || k > num_classes) throw std::invalid_argument("k must be in [1, num_classes]");
    return static_cast<double>(k) / static_cast<double>(num_classes);
}

inline double top_k_accuracy(const std::vector<std::vector<ScoredRelation>>& rankings,
                             const std::vector<SpatialRelation>& gold, int k) {
    if (rankings.size() != gold.size())
        throw std::invalid_argument("rankings/gold length mismatch");
    if (k < 1 || k > kNumRelations) throw std::invalid_argument("k must be in [1, 9]");
    if (rankings.empty()) throw std::invalid_argument("empty evaluation set");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        for (int r = 0; r < k; ++r) {
            if (rankings[i][r].relation == gold[i]) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(rankings.size());
}

inline RankingReport evaluate(const MlpModel& model, const std::vector<ClauseInstance>& test,
                              const PriorTable* priors, bool use_geo) {
    if (test.empty()) throw std::invalid_argument("empty test set");
    std::vector<std::vector<ScoredRelation>> rankings;
    std::vector<SpatialRelation> gold;
    rankings.reserve(test.size());
    gold.reserve(test.size());
    std::array<std::size_t, kNumRelations> class_hits{};
    RankingReport report;
    for (const ClauseInstance& inst : test) {
        rankings.push_back(rank_clause(model, inst, priors, use_geo));
        gold.push_back(inst.relation);
        const int cls = static_cast<int>(inst.relation);
        ++report.per_class_count[cls];
        if (rankings.back()[0].relation == inst.relation) ++class_hits[cls];
    }
    report.top1 = top_k_accuracy(rankings, gold, 1);
    report.top3 = top_k_accuracy(rankings, gold, 3);
    report.chance_top1 = random_chance(1, kNumRelations);
    report.chance_top3 = random_chance(3, kNumRelations);
    report.delta_top1 = report.top1 - report.chance_top1;
    report.delta_top3 = report.top3 - report.chance_top3;
    report.use_geo = use_geo;
    report.used_priors = priors != nullptr;
    report.num_instances = test.size();
    for (int k = 0; k < kNumRelations; ++k)
        report.per_class_top1[k] =
            report.per_class_count[k] == 0
                ? 0.0
                : static_cast<double>(class_hits[k]) / static_cast<double>(report.per_class_count[k]);
    return report;
}

struct BinaryAccuracy {
    double accuracy = 0.0;
    double delta_over_chance = 0.0;  // accuracy - 0.5
};

inline BinaryAccuracy binary_accuracy(const std::vector<int>& predictions,
                                      const std::vector<int>& labels) {
    if (predictions.empty()) throw std::invalid_argument("empty prediction list");
    if (predictions.size() != labels.size())
        throw std::invalid_argument("predictions/labels length mismatch");
    std::size_t matches = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] != 0 && predictions[i] != 1)
            throw std::invalid_argument("predictions must be 0 or 1");
        if (labels[i] != 0 && labels[i] != 1)
            throw std::invalid_argument("labels must be 0 or 1");
        if (predictions[i] == labels[i]) ++matches;
    }
    BinaryAccuracy out;
    out.accuracy = static_cast<double>(matches) / static_cast<double>(predictions.size());
    out.delta_over_chance = out.accuracy - 0.5;
    return out;
}

// --- Detector coverage analysis -------------------------------------------

struct CoverageCase {
    bool correct = false;
    std::string subject;
    std::string object;
    std::unordered_set<std::string> detected_labels;
};

using SynonymLexicon = std::unordered_map<std::string, std::vector<std::string>>;

enum class DetectedCount : int { Both = 0, One = 1, None = 2 };

// cells[correct ? 0 : 1][both/one/none] -> (exact %, synonym %)
struct CoverageBreakdown {
    std::array<std::array<double, 2>, 3> correct_pct{};
    std::array<std::array<double, 2>, 3> incorrect_pct{};
    std::size_t num_correct = 0;
    std::size_t num_incorrect = 0;
};

namespace detail {

inline bool phrase_detected(const std::string& phrase,
                            const std::unordered_set<std::string>& detected,
                            const SynonymLexicon* lexicon) {
    const std::string norm = normalize_phrase(phrase);
    if (detected.count(norm)) return true;  // the phrase itself always counts
    if (lexicon) {
        const auto it = lexicon->find(norm);
        if (it != lexicon->end())
            for (const std::string& syn : it->second)
                if (detected.count(normalize_phrase(syn))) return true;
    }
    return false;
}

inline DetectedCount detected_count(const CoverageCase& c, const SynonymLexicon* lexicon) {
    int n = 0;
    if (phrase_detected(c.subject, c.detected_labels, lexicon)) ++n;
    if (phrase_detected(c.object, c.detected_labels, lexicon)) ++n;
    return n == 2 ? DetectedCount::Both : (n == 1 ? DetectedCount::One : DetectedCount::None);
}

}  // namespace detail

inline CoverageBreakdown detector_coverage_analysis(const std::vector<CoverageCase>& cases,
                                                    const SynonymLexicon& lexicon) {
    CoverageBreakdown out;
    std::array<std::array<std::size_t, 2>, 3> correct_counts{};
    std::array<std::array<std::size_t, 2>, 3> incorrect_counts{};
    for (const CoverageCase& c : cases) {
        std::unordered_set<std::string> normalized;
        for (const std::string& label : c.detected_labels)
            normalized.insert(detail::normalize_phrase(label));
        CoverageCase norm = c;
        norm.detected_labels = std::move(normalized);
        const int exact = static_cast<int>(detail::detected_count(norm, nullptr));
        const int syn = static_cast<int>(detail::detected_count(norm, &lexicon));
        auto& counts = c.correct ? correct_counts : incorrect_counts;
        ++counts[exact][0];
        ++counts[syn][1];
        (c.correct ? out.num_correct : out.num_incorrect) += 1;
    }
    for (int row = 0; row < 3; ++row)
        for (int m = 0; m < 2; ++m) {
            out.correct_pct[row][m] =
                out.num_correct == 0 ? 0.0
                                     : 100.0 * static_cast<double>(correct_counts[row][m]) /
                                           static_cast<double>(out.num_correct);
            out.incorrect_pct[row][m] =
                out.num_incorrect == 0 ? 0.0
                                       : 100.0 * static_cast<double>(incorrect_counts[row][m]) /
                                             static_cast<double>(out.num_incorrect);
        }
    return out;
}

// --- Report output ---------------------------------------------------------

inline nlohmann::json report_to_json(const RankingReport& r) {
    nlohmann::json per_class = nlohmann::json::object();
    for (int k = 0; k < kNumRelations; ++k) {
        const std::string name(relation_name(relation_from_index(k)));
        per_class[name] = {{"top1", r.per_class_top1[k]}, {"count", r.per_class_count[k]}};
    }
    return nlohmann::json{
        {"top1", r.top1},
        {"top3", r.top3},
        {"chance_top1", r.chance_top1},
        {"chance_top3", r.chance_top3},
        {"delta_top1", r.delta_top1},
        {"delta_top3", r.delta_top3},
        {"num_instances", r.num_instances},
        {"config", {{"geo", r.use_geo}, {"rerank", r.used_priors}}},
        {"per_class", per_class},
    };
}

inline std::string format_pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * fraction);
    return buf;
}

inline std::string report_to_text(const RankingReport& r) {
    std::string model_row = r.used_priors ? "Bbox w/ Re-ranking" : "Bbox w/o Re-ranking";
    if (r.use_geo) model_row += " + geo";
    char buf[256];
    std::string out;
    out += "Model                          Top-1    Top-3\n";
    std::snprintf(buf, sizeof(buf), "%-30s %6s   %6s\n", "Random Chance (multiclass)",
                  format_pct(r.chance_top1).c_str(), format_pct(r.chance_top3).c_str());
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-30s %6s   %6s\n", model_row.c_str(),
                  format_pct(r.top1).c_str(), format_pct(r.top3).c_str());
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-30s %6s   %6s\n", "Delta over chance",
                  format_pct(r.delta_top1).c_str(), format_pct(r.delta_top3).c_str());
    out += buf;
    out += "\nPer-class top-1:\n";
    for (int k = 0; k < kNumRelations; ++k) {
        std::snprintf(buf, sizeof(buf), "  %-10s %6s   (n=%zu)\n",
                      std::string(relation_name(relation_from_index(k))).c_str(),
                      format_pct(r.per_class_top1[k]).c_str(), r.per_class_count[k]);
        out += buf;
    }
    return out;
}

inline nlohmann::json coverage_to_json(const CoverageBreakdown& b) {
    auto half = [](const std::array<std::array<double, 2>, 3>& pct) {
        return nlohmann::json{
            {"both", {{"exact", pct[0][0]}, {"synonym", pct[0][1]}}},
            {"one", {{"exact", pct[1][0]}, {"synonym", pct[1][1]}}},
            {"none", {{"exact", pct[2][0]}, {"synonym", pct[2][1]}}},
        };
    };
    return nlohmann::json{{"correct", half(b.correct_pct)},
                          {"incorrect", half(b.incorrect_pct)},
                          {"num_correct", b.num_correct},
                          {"num_incorrect", b.num_incorrect}};
}

inline std::string coverage_to_text(const CoverageBreakdown& b) {
    static const char* kRows[3] = {"both", "one", "none"};
    char buf[160];
    std::string out = "Case        Detected   Exact%   Synonym%\n";
    for (int half = 0; half < 2; ++half) {
        const auto& pct = half == 0 ? b.correct_pct : b.incorrect_pct;
        for (int row = 0; row < 3; ++row) {
            std::snprintf(buf, sizeof(buf), "%-11s %-9s %7.2f %9.2f\n",
                          half == 0 ? "correct" : "incorrect", kRows[row], pct[row][0],
                          pct[row][1]);
            out += buf;
        }
    }
    return out;
}

}  // namespace spatialrank
