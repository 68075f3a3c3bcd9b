#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <tcb/errors.hpp>

namespace tcb {

/// Axis-aligned box in continuous pixel coordinates, top-left + size
/// (the MOTChallenge file convention). Valid boxes have w > 0, h > 0.
struct BBox {
    double x = 0.0;  // left edge
    double y = 0.0;  // top edge
    double w = 0.0;
    double h = 0.0;

    double cx() const { return x + 0.5 * w; }
    double cy() const { return y + 0.5 * h; }
    double right() const { return x + w; }
    double bottom() const { return y + h; }
    double area() const { return w * h; }
    double aspect() const { return w / h; }

    bool valid() const;
};

/// Detector output for one candidate: geometry, confidence, class
/// probabilities and the fused score conf * max(class_probs).
struct ScoredBox {
    BBox box;
    double conf = 0.0;
    std::vector<double> class_probs;
    double fused = 0.0;

    static ScoredBox make(const BBox& box, double conf, std::vector<double> class_probs);
};

/// Intersection over union of two valid boxes. Empty overlap clamps to 0.
double iou(const BBox& a, const BBox& b);

/// Fused box score: conf * max(class_probs). Throws ValidationError on an
/// empty class list.
double fuse_score(double conf, std::span<const double> class_probs);

/// Greedy non-maximum suppression by descending fused score, ties broken by
/// lower input index. Returns kept indices in suppression order; no two kept
/// boxes overlap above iou_threshold.
std::vector<std::size_t> nms(std::span<const ScoredBox> candidates, double iou_threshold);

}  // namespace tcb
