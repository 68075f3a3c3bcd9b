#include <tcb/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tcb {

bool BBox::valid() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h) &&
           w > 0.0 && h > 0.0;
}

ScoredBox ScoredBox::make(const BBox& box, double conf, std::vector<double> class_probs) {
    ScoredBox sb;
    sb.box = box;
    sb.conf = conf;
    sb.fused = fuse_score(conf, class_probs);
    sb.class_probs = std::move(class_probs);
    return sb;
}

double iou(const BBox& a, const BBox& b) {
    const double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
    const double inter = ix * iy;
    if (inter <= 0.0) return 0.0;
    return inter / (a.area() + b.area() - inter);
}

double fuse_score(double conf, std::span<const double> class_probs) {
    if (class_probs.empty()) {
        throw ValidationError("fuse_score: class probability list is empty");
    }
    return conf * *std::max_element(class_probs.begin(), class_probs.end());
}

std::vector<std::size_t> nms(std::span<const ScoredBox> candidates, double iou_threshold) {
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
        throw ValidationError("nms: iou_threshold must lie in (0, 1]");
    }
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return candidates[a].fused > candidates[b].fused;
    });

    std::vector<std::size_t> kept;
    std::vector<bool> suppressed(candidates.size(), false);
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const std::size_t idx = order[rank];
        if (suppressed[idx]) continue;
        kept.push_back(idx);
        for (std::size_t lower = rank + 1; lower < order.size(); ++lower) {
            const std::size_t other = order[lower];
            if (!suppressed[other] && iou(candidates[idx].box, candidates[other].box) > iou_threshold) {
                suppressed[other] = true;
            }
        }
    }
    return kept;
}

}  // namespace tcb
