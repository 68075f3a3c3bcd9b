#include <tcb/training.hpp>

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace tcb {

SelectionResult select_objects(std::span<const Candidate> candidates,
                               std::span<const BBox> gt_boxes,
                               std::span<const std::int64_t> gt_ids, double alpha) {
    if (gt_boxes.size() != gt_ids.size()) {
        throw ValidationError("select_objects: gt boxes and ids misaligned");
    }
    SelectionResult result;
    for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
        int best = -1;
        double best_iou = 0.0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const double overlap = iou(candidates[c].box, gt_boxes[g]);
            if (overlap > best_iou) {
                best_iou = overlap;
                best = static_cast<int>(c);
            }
        }
        if (best >= 0 && best_iou > alpha) {
            result.features.push_back(candidates[static_cast<std::size_t>(best)].feature);
            result.ids.push_back(gt_ids[g]);
            result.indices.push_back(best);
        }
    }
    return result;
}

TrainingPair pair_by_id(const SelectionResult& prev, const SelectionResult& cur,
                        const std::map<std::int64_t, GaussianSpec>& cur_gt_centers) {
    std::unordered_set<std::int64_t> cur_ids(cur.ids.begin(), cur.ids.end());
    TrainingPair pair;
    for (std::size_t i = 0; i < prev.ids.size(); ++i) {
        const std::int64_t id = prev.ids[i];
        if (!cur_ids.contains(id)) continue;
        const auto center = cur_gt_centers.find(id);
        if (center == cur_gt_centers.end()) {
            throw ValidationError("pair_by_id: shared id has no current-frame target centre");
        }
        pair.prev_features.push_back(prev.features[i]);
        pair.gt_centers.push_back(center->second);
        pair.shared_ids.push_back(id);
    }
    return pair;
}

Heatmap gaussian_heatmap(const GaussianSpec& spec, int height, int width) {
    if (!(spec.sigma > 0.0)) throw ValidationError("gaussian_heatmap: sigma must be positive");
    Heatmap map = Heatmap::zeros(height, width);
    const double inv = 1.0 / (2.0 * spec.sigma * spec.sigma);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - spec.cx;
            const double dy = y - spec.cy;
            map.values(y, x) = std::exp(-(dx * dx + dy * dy) * inv);
        }
    }
    return map;
}

// The three corner-shift cases of the CenterNet radius, in its widely
// deployed form (the same arithmetic FairMOT and CenterTrack ship with).
double centernet_radius(double w_cells, double h_cells, double min_overlap) {
    const double w = w_cells;
    const double h = h_cells;

    const double a1 = 1.0;
    const double b1 = h + w;
    const double c1 = w * h * (1.0 - min_overlap) / (1.0 + min_overlap);
    const double r1 = (b1 + std::sqrt(b1 * b1 - 4.0 * a1 * c1)) / 2.0;

    const double a2 = 4.0;
    const double b2 = 2.0 * (h + w);
    const double c2 = (1.0 - min_overlap) * w * h;
    const double r2 = (b2 + std::sqrt(b2 * b2 - 4.0 * a2 * c2)) / 2.0;

    const double a3 = 4.0 * min_overlap;
    const double b3 = -2.0 * min_overlap * (h + w);
    const double c3 = (min_overlap - 1.0) * w * h;
    const double r3 = (b3 + std::sqrt(b3 * b3 - 4.0 * a3 * c3)) / 2.0;

    return std::min({r1, r2, r3});
}

double size_adaptive_sigma(const BBox& box, double stride) {
    if (!box.valid()) throw ValidationError("size_adaptive_sigma: invalid box");
    if (!(stride > 0.0)) throw ValidationError("size_adaptive_sigma: stride must be positive");
    const double radius = centernet_radius(box.w / stride, box.h / stride);
    return std::max(0.5, radius / 3.0);
}

double squash_response(double correlation_value) {
    return 0.5 * (correlation_value + 1.0);
}

Heatmap squash_heatmap(const Heatmap& raw) {
    Heatmap out = raw;
    out.values = 0.5 * (raw.values.array() + 1.0);
    return out;
}

LossReport logistic_mse_loss(std::span<const Heatmap> pred, std::span<const Heatmap> gt) {
    if (pred.empty() || pred.size() != gt.size()) {
        throw ValidationError("logistic_mse_loss: need matching, non-empty heatmap lists");
    }
    const double n = static_cast<double>(pred.size());

    LossReport report;
    report.gradients.reserve(pred.size());
    double total = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const Heatmap& m = pred[i];
        const Heatmap& h = gt[i];
        if (m.height != h.height || m.width != h.width) {
            throw ValidationError("logistic_mse_loss: heatmap shape mismatch");
        }
        Eigen::MatrixXd grad(m.height, m.width);
        for (int y = 0; y < m.height; ++y) {
            for (int x = 0; x < m.width; ++x) {
                const double mv = m.values(y, x);
                if (!(mv > 0.0 && mv < 1.0)) {
                    throw ValidationError("logistic_mse_loss: prediction outside (0, 1)");
                }
                const double hv = h.values(y, x);
                if (hv >= 1.0) {
                    total += (1.0 - mv) * std::log(mv);
                    grad(y, x) = (std::log(mv) - (1.0 - mv) / mv) / n;
                } else {
                    total += (1.0 - hv) * mv * std::log(1.0 - mv);
                    grad(y, x) = (1.0 - hv) * (mv / (1.0 - mv) - std::log(1.0 - mv)) / n;
                }
            }
        }
        report.gradients.push_back(std::move(grad));
    }
    report.loss = -total / n;
    return report;
}

}  // namespace tcb
