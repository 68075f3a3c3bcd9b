#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <tcb/appearance.hpp>
#include <tcb/geometry.hpp>

namespace tcb {

/// Target centre (grid cells) and spread for one ground-truth heatmap.
struct GaussianSpec {
    double cx = 0.0;
    double cy = 0.0;
    double sigma = 1.0;  // > 0
};

/// Candidates picked per ground-truth box for heatmap supervision.
struct SelectionResult {
    std::vector<Embedding> features;
    std::vector<std::int64_t> ids;
    std::vector<int> indices;  // candidate index each feature came from
};

/// Cross-frame supervision: previous-frame features aligned with
/// current-frame target centres over the ids both frames selected.
struct TrainingPair {
    std::vector<Embedding> prev_features;
    std::vector<GaussianSpec> gt_centers;
    std::vector<std::int64_t> shared_ids;
};

/// Loss value and per-template d(loss)/d(response) grids.
struct LossReport {
    double loss = 0.0;
    std::vector<Eigen::MatrixXd> gradients;
};

/// One detector candidate: box plus its pooled feature.
struct Candidate {
    BBox box;
    Embedding feature;
};

/// For each ground-truth box, the argmax-IoU candidate is selected iff its
/// IoU exceeds alpha (ties go to the lowest candidate index); the ground
/// truth is skipped otherwise.
SelectionResult select_objects(std::span<const Candidate> candidates,
                               std::span<const BBox> gt_boxes,
                               std::span<const std::int64_t> gt_ids, double alpha);

/// Restricts prev to the ids also selected in cur and aligns each survivor
/// with that id's current-frame target centre.
TrainingPair pair_by_id(const SelectionResult& prev, const SelectionResult& cur,
                        const std::map<std::int64_t, GaussianSpec>& cur_gt_centers);

/// exp(-((x-cx)^2 + (y-cy)^2) / (2 sigma^2)) sampled on the integer grid.
Heatmap gaussian_heatmap(const GaussianSpec& spec, int height, int width);

/// Largest radius (cells) such that a corner shifted by it still overlaps
/// the w x h box at min_overlap IoU; minimum over the three shift cases.
double centernet_radius(double w_cells, double h_cells, double min_overlap = 0.7);

/// Size-adaptive spread: the min-overlap-0.7 radius of the box scaled to
/// grid cells, divided by 3 and floored at 0.5.
double size_adaptive_sigma(const BBox& box, double stride);

/// Monotone map from a [-1, 1] correlation response to the (0, 1) range the
/// loss needs: (value + 1) / 2.
double squash_response(double correlation_value);
Heatmap squash_heatmap(const Heatmap& raw);

/// Heatmap supervision loss, averaged over templates:
///   -(1/n) sum over grids of  (1 - m) log(m)            where gt >= 1
///                             (1 - h) m log(1 - m)      elsewhere
/// Predictions must lie strictly inside (0, 1). The gradient is the analytic
/// partial with respect to each prediction cell.
LossReport logistic_mse_loss(std::span<const Heatmap> pred, std::span<const Heatmap> gt);

}  // namespace tcb
