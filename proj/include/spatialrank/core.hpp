#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Core domain types: normalized bounding boxes, groundings, the 9-class
// spatial relation vocabulary, and the geometry feature computations that
// feed the relation classifier.

namespace spatialrank {

inline constexpr int kNumRelations = 9;
inline constexpr double kBoxTolerance = 1e-6;

enum class SpatialRelation : int {
    Below = 0,
    Above = 1,
    FarFrom = 2,
    RightOf = 3,
    LeftOf = 4,
    Inside = 5,
    Outside = 6,
    Near = 7,
    Contains = 8,
};

inline constexpr std::array<SpatialRelation, kNumRelations> kAllRelations = {
    SpatialRelation::Below,   SpatialRelation::Above,  SpatialRelation::FarFrom,
    SpatialRelation::RightOf, SpatialRelation::LeftOf, SpatialRelation::Inside,
    SpatialRelation::Outside, SpatialRelation::Near,   SpatialRelation::Contains,
};

inline std::string_view relation_name(SpatialRelation r) {
    switch (r) {
        case SpatialRelation::Below: return "below";
        case SpatialRelation::Above: return "above";
        case SpatialRelation::FarFrom: return "far from";
        case SpatialRelation::RightOf: return "right of";
        case SpatialRelation::LeftOf: return "left of";
        case SpatialRelation::Inside: return "inside";
        case SpatialRelation::Outside: return "outside";
        case SpatialRelation::Near: return "near";
        case SpatialRelation::Contains: return "contains";
    }
    throw std::logic_error("relation_name: bad enum value");
}

inline SpatialRelation relation_from_index(int idx) {
    if (idx < 0 || idx >= kNumRelations)
        throw std::out_of_range("relation index out of range: " + std::to_string(idx));
    return static_cast<SpatialRelation>(idx);
}

inline SpatialRelation relation_from_name(std::string_view name) {
    for (SpatialRelation r : kAllRelations)
        if (relation_name(r) == name) return r;
    throw std::invalid_argument("unknown relation name: " + std::string(name));
}

// `outside` has no natural inverse in the vocabulary; by default it is
// treated as symmetric so that every instance can be swap-augmented.
inline bool is_symmetric(SpatialRelation r, bool outside_symmetric = true) {
    switch (r) {
        case SpatialRelation::Near:
        case SpatialRelation::FarFrom: return true;
        case SpatialRelation::Outside: return outside_symmetric;
        default: return false;
    }
}

inline SpatialRelation inverse_relation(SpatialRelation r, bool outside_symmetric = true) {
    switch (r) {
        case SpatialRelation::Below: return SpatialRelation::Above;
        case SpatialRelation::Above: return SpatialRelation::Below;
        case SpatialRelation::LeftOf: return SpatialRelation::RightOf;
        case SpatialRelation::RightOf: return SpatialRelation::LeftOf;
        case SpatialRelation::Inside: return SpatialRelation::Contains;
        case SpatialRelation::Contains: return SpatialRelation::Inside;
        case SpatialRelation::Near: return SpatialRelation::Near;
        case SpatialRelation::FarFrom: return SpatialRelation::FarFrom;
        case SpatialRelation::Outside:
            if (outside_symmetric) return SpatialRelation::Outside;
            throw std::invalid_argument("outside has no inverse when not treated as symmetric");
    }
    throw std::logic_error("inverse_relation: bad enum value");
}

// Axis-aligned box in normalized image coordinates, (x, y) = top-left corner.
struct BoundingBox {
    double x = 0.0;
    double y = 0.0;
    double h = 0.0;
    double w = 0.0;

    void validate() const {
        if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
            throw std::invalid_argument("box corner outside [0,1]");
        if (!(h > 0.0 && w > 0.0))
            throw std::invalid_argument("box extent must be positive");
        if (!(x + w <= 1.0 + kBoxTolerance && y + h <= 1.0 + kBoxTolerance))
            throw std::invalid_argument("box extends past the unit frame");
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(h) || !std::isfinite(w))
            throw std::invalid_argument("box coordinates must be finite");
    }
};

struct Grounding {
    BoundingBox box;
    double confidence = 1.0;

    void validate() const {
        box.validate();
        if (!(confidence >= 0.0 && confidence <= 1.0))
            throw std::invalid_argument("grounding confidence outside [0,1]");
    }
};

// One (subject, relation, object) triple grounded in a single image.
struct ClauseInstance {
    std::string image_id;
    std::string subject_name;
    std::string object_name;
    SpatialRelation relation = SpatialRelation::Below;
    Grounding subject;
    Grounding object;

    void validate() const {
        if (subject_name.empty() || object_name.empty())
            throw std::invalid_argument("clause subject/object names must be non-empty");
        subject.validate();
        object.validate();
    }
};

using FeatureVector = std::vector<double>;
using RelationDistribution = std::array<double, kNumRelations>;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point center(const BoundingBox& box) {
    return {box.x + box.w / 2.0, box.y + box.h / 2.0};
}

struct GeometryFeatures {
    double ux = 0.0;  // unit direction, subject center -> object center
    double uy = 0.0;
    double d = 0.0;   // Euclidean distance between centers
};

inline GeometryFeatures geometry_features(const BoundingBox& subject_box,
                                          const BoundingBox& object_box) {
    const Point cs = center(subject_box);
    const Point co = center(object_box);
    const double dx = co.x - cs.x;
    const double dy = co.y - cs.y;
    const double d = std::hypot(dx, dy);
    if (d < 1e-9) return {0.0, 0.0, d};
    return {dx / d, dy / d, d};
}

// Feature layout: [x_s, y_s, h_s, w_s, x_o, y_o, h_o, w_o] (+ [ux, uy, d]).
inline FeatureVector assemble_features(const BoundingBox& subject_box,
                                       const BoundingBox& object_box,
                                       bool use_geo) {
    FeatureVector f;
    f.reserve(use_geo ? 11 : 8);
    f.insert(f.end(), {subject_box.x, subject_box.y, subject_box.h, subject_box.w,
                       object_box.x, object_box.y, object_box.h, object_box.w});
    if (use_geo) {
        const GeometryFeatures g = geometry_features(subject_box, object_box);
        f.insert(f.end(), {g.ux, g.uy, g.d});
    }
    return f;
}

inline int feature_dim(bool use_geo) { return use_geo ? 11 : 8; }

}  // namespace spatialrank
