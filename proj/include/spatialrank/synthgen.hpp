#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spatialrank/core.hpp"
#include "spatialrank/rng.hpp"

// Synthetic scene generator: box pairs whose relation is analytically known
// via label_of, used as the brute-force oracle for end-to-end training and
// ranking tests. Per-class sampling leaves margins around every decision
// threshold so the classes are well separated in feature space.

namespace spatialrank {

struct SynthConfig {
    int per_class = 100;
    std::uint64_t seed = 0;
    double near_threshold = 0.25;
    double far_threshold = 0.6;
    double directional_gap = 0.05;
    double containment_margin = 0.02;
    // Probability of drawing the class-designated (subject, object) name
    // pair instead of a uniform one; exercises the co-occurrence priors.
    double name_skew = 0.0;
    int max_attempts = 20000;

    void validate() const {
        if (per_class <= 0) throw std::invalid_argument("per_class must be positive");
        if (!(far_threshold > near_threshold && near_threshold > 0.0))
            throw std::invalid_argument("need far_threshold > near_threshold > 0");
        if (!(directional_gap > 0.0)) throw std::invalid_argument("directional_gap must be positive");
        if (!(containment_margin > 0.0))
            throw std::invalid_argument("containment_margin must be positive");
        if (!(name_skew >= 0.0 && name_skew < 1.0))
            throw std::invalid_argument("name_skew must lie in [0,1)");
    }
};

namespace detail {

inline bool boxes_disjoint(const BoundingBox& a, const BoundingBox& b) {
    return a.x + a.w < b.x || b.x + b.w < a.x || a.y + a.h < b.y || b.y + b.h < a.y;
}

inline bool strictly_within(const BoundingBox& inner, const BoundingBox& outer, double margin) {
    return inner.x >= outer.x + margin && inner.y >= outer.y + margin &&
           inner.x + inner.w <= outer.x + outer.w - margin &&
           inner.y + inner.h <= outer.y + outer.h - margin;
}

}  // namespace detail

// First-match-wins decision procedure: containment, then directional
// disjointness with aligned centers, then the distance bands (near /
// outside / far) over disjoint pairs. Overlapping non-contained pairs are
// ambiguous.
inline std::optional<SpatialRelation> label_of(const BoundingBox& subject,
                                               const BoundingBox& object,
                                               const SynthConfig& config) {
    if (detail::strictly_within(subject, object, config.containment_margin))
        return SpatialRelation::Inside;
    if (detail::strictly_within(object, subject, config.containment_margin))
        return SpatialRelation::Contains;

    const Point cs = center(subject);
    const Point co = center(object);
    const double dx = co.x - cs.x;
    const double dy = co.y - cs.y;
    const double gap = config.directional_gap;

    if (subject.y >= object.y + object.h + gap && std::abs(dx) < gap)
        return SpatialRelation::Below;
    if (subject.y + subject.h + gap <= object.y && std::abs(dx) < gap)
        return SpatialRelation::Above;
    if (subject.x >= object.x + object.w + gap && std::abs(dy) < gap)
        return SpatialRelation::RightOf;
    if (subject.x + subject.w + gap <= object.x && std::abs(dy) < gap)
        return SpatialRelation::LeftOf;

    if (!detail::boxes_disjoint(subject, object)) return std::nullopt;
    const double d = std::hypot(dx, dy);
    if (d > config.far_threshold) return SpatialRelation::FarFrom;
    if (d < config.near_threshold) return SpatialRelation::Near;
    return SpatialRelation::Outside;
}

namespace detail {

inline const std::vector<std::string>& synth_vocabulary() {
    static const std::vector<std::string> kVocab = {
        "cup",    "table", "bed",   "bicycle", "spoon", "bowl",
        "plant",  "bus",   "chair", "laptop",  "cat",   "dog",
        "bottle", "sofa",  "clock", "vase",    "book",  "lamp",
    };
    return kVocab;
}

inline BoundingBox random_box(std::mt19937_64& rng, double min_side, double max_side) {
    const double w = uniform_in(rng, min_side, max_side);
    const double h = uniform_in(rng, min_side, max_side);
    return {uniform_in(rng, 0.0, 1.0 - w), uniform_in(rng, 0.0, 1.0 - h), h, w};
}

// One candidate pair for the class; may fail label_of and be resampled.
inline std::pair<BoundingBox, BoundingBox> sample_pair(SpatialRelation cls,
                                                       std::mt19937_64& rng,
                                                       const SynthConfig& cfg) {
    const double gap = cfg.directional_gap;
    switch (cls) {
        case SpatialRelation::Inside: {
            const BoundingBox obj = random_box(rng, 0.45, 0.7);
            const double m = 1.5 * cfg.containment_margin;
            const double w = uniform_in(rng, 0.05, obj.w - 2.0 * m - 0.01);
            const double h = uniform_in(rng, 0.05, obj.h - 2.0 * m - 0.01);
            const BoundingBox sub = {uniform_in(rng, obj.x + m, obj.x + obj.w - m - w),
                                     uniform_in(rng, obj.y + m, obj.y + obj.h - m - h), h, w};
            return {sub, obj};
        }
        case SpatialRelation::Contains: {
            auto [sub, obj] = sample_pair(SpatialRelation::Inside, rng, cfg);
            return {obj, sub};
        }
        case SpatialRelation::Below:
        case SpatialRelation::Above:
        case SpatialRelation::RightOf:
        case SpatialRelation::LeftOf: {
            const BoundingBox sub = random_box(rng, 0.05, 0.25);
            const double ow = uniform_in(rng, 0.05, 0.25);
            const double oh = uniform_in(rng, 0.05, 0.25);
            const Point cs = center(sub);
            const bool vertical = cls == SpatialRelation::Below || cls == SpatialRelation::Above;
            double ox, oy;
            if (vertical) {
                ox = std::clamp(cs.x - ow / 2.0 + uniform_in(rng, -gap / 3.0, gap / 3.0), 0.0,
                                1.0 - ow);
                if (cls == SpatialRelation::Below)  // object sits above the subject
                    oy = uniform_in(rng, 0.0, std::max(1e-3, sub.y - oh - 2.0 * gap));
                else
                    oy = uniform_in(rng, std::min(sub.y + sub.h + 2.0 * gap, 1.0 - oh), 1.0 - oh);
            } else {
                oy = std::clamp(cs.y - oh / 2.0 + uniform_in(rng, -gap / 3.0, gap / 3.0), 0.0,
                                1.0 - oh);
                if (cls == SpatialRelation::RightOf)  // object sits left of the subject
                    ox = uniform_in(rng, 0.0, std::max(1e-3, sub.x - ow - 2.0 * gap));
                else
                    ox = uniform_in(rng, std::min(sub.x + sub.w + 2.0 * gap, 1.0 - ow), 1.0 - ow);
            }
            return {sub, BoundingBox{ox, oy, oh, ow}};
        }
        case SpatialRelation::Near:
        case SpatialRelation::FarFrom:
        case SpatialRelation::Outside: {
            double lo, hi, min_side = 0.05, max_side = 0.15;
            if (cls == SpatialRelation::Near) {
                lo = 0.4 * cfg.near_threshold;
                hi = 0.85 * cfg.near_threshold;
            } else if (cls == SpatialRelation::FarFrom) {
                lo = cfg.far_threshold + 0.08;
                hi = 0.95;
            } else {
                // disjoint pair at intermediate distance, next to a
                // container-like object box
                lo = cfg.near_threshold + 0.07;
                hi = cfg.far_threshold - 0.12;
                max_side = 0.3;
            }
            const BoundingBox sub = random_box(rng, 0.05, 0.15);
            const double ow = uniform_in(rng, min_side, max_side);
            const double oh = uniform_in(rng, min_side, max_side);
            const double dist = uniform_in(rng, lo, hi);
            const double angle = uniform_in(rng, 0.0, 2.0 * 3.14159265358979323846);
            const Point cs = center(sub);
            const double ox = cs.x + dist * std::cos(angle) - ow / 2.0;
            const double oy = cs.y + dist * std::sin(angle) - oh / 2.0;
            if (ox < 0.0 || ox > 1.0 - ow || oy < 0.0 || oy > 1.0 - oh)
                return {sub, sub};  // off-frame; caller rejects via label_of
            return {sub, BoundingBox{ox, oy, oh, ow}};
        }
    }
    throw std::logic_error("sample_pair: bad enum value");
}

}  // namespace detail

inline std::vector<ClauseInstance> generate(const SynthConfig& config) {
    config.validate();
    const auto& vocab = detail::synth_vocabulary();
    std::vector<ClauseInstance> out;
    out.reserve(static_cast<std::size_t>(config.per_class) * kNumRelations);
    for (int cls = 0; cls < kNumRelations; ++cls) {
        const SpatialRelation relation = relation_from_index(cls);
        std::mt19937_64 rng(mix_seed(config.seed, 100 + static_cast<std::uint64_t>(cls)));
        // designated name pair for the skewed mode, distinct per class
        const std::string skew_subject = vocab[(2 * cls) % vocab.size()];
        const std::string skew_object = vocab[(2 * cls + 1) % vocab.size()];
        for (int n = 0; n < config.per_class; ++n) {
            bool placed = false;
            for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
                auto [sub, obj] = detail::sample_pair(relation, rng, config);
                if (label_of(sub, obj, config) != relation) continue;
                ClauseInstance inst;
                inst.image_id = "synth-" + std::to_string(cls) + "-" + std::to_string(n);
                if (uniform_unit(rng) < config.name_skew) {
                    inst.subject_name = skew_subject;
                    inst.object_name = skew_object;
                } else {
                    inst.subject_name = vocab[uniform_index(rng, vocab.size())];
                    inst.object_name = vocab[uniform_index(rng, vocab.size())];
                }
                inst.relation = relation;
                inst.subject = {sub, uniform_in(rng, 0.8, 1.0)};
                inst.object = {obj, uniform_in(rng, 0.8, 1.0)};
                inst.validate();
                out.push_back(std::move(inst));
                placed = true;
                break;
            }
            if (!placed)
                throw std::runtime_error("synthgen: rejection budget exhausted for class \"" +
                                         std::string(relation_name(relation)) + "\"");
        }
    }
    return out;
}

}  // namespace spatialrank
