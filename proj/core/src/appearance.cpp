#include <tcb/appearance.hpp>

#include <cmath>

#include <tcb/parallel.hpp>

namespace tcb {

FeatureMap FeatureMap::zeros(int height, int width, int channels) {
    FeatureMap fmap;
    fmap.height = height;
    fmap.width = width;
    fmap.channels = channels;
    fmap.cells.setZero(static_cast<Eigen::Index>(height) * width, channels);
    return fmap;
}

Heatmap Heatmap::zeros(int height, int width) {
    Heatmap map;
    map.height = height;
    map.width = width;
    map.values.setZero(height, width);
    return map;
}

double cosine(const Embedding& a, const Embedding& b) {
    if (a.size() != b.size()) throw ValidationError("cosine: dimension mismatch");
    const double norm_a = a.norm();
    const double norm_b = b.norm();
    if (norm_a == 0.0 || norm_b == 0.0) throw ValidationError("cosine: zero-norm embedding");
    return a.dot(b) / (norm_a * norm_b);
}

EmaResult ema_update(const Embedding& old_template, const Embedding& next, double gamma) {
    if (old_template.size() != next.size()) {
        throw ValidationError("ema_update: dimension mismatch");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw ValidationError("ema_update: gamma outside [0, 1]");
    }
    Embedding blended = (1.0 - gamma) * old_template + gamma * next;
    const double norm = blended.norm();
    if (norm == 0.0) {
        return EmaResult{old_template, true};
    }
    return EmaResult{blended / norm, false};
}

CorrelationResult correlate(const TemplateSet& templates, const FeatureMap& fmap,
                            std::size_t threads) {
    const std::size_t k = templates.templates.size();
    if (templates.track_ids.size() != k) {
        throw ValidationError("correlate: templates and track_ids misaligned");
    }
    for (const Embedding& z : templates.templates) {
        if (z.size() != fmap.channels) throw ValidationError("correlate: dimension mismatch");
        if (z.norm() == 0.0) throw ValidationError("correlate: zero-norm template");
    }

    CorrelationResult result;
    result.heatmaps.resize(k);
    if (k == 0) return result;

    const Eigen::VectorXd cell_norms = fmap.cells.rowwise().norm();
    result.degenerate_cells = (cell_norms.array() == 0.0).count();

    // One heatmap per template; rows are independent so the split over
    // templates cannot change any output bit.
    parallel_for(
        k,
        [&](std::size_t i) {
            const Embedding& z = templates.templates[i];
            const double z_norm = z.norm();
            Eigen::VectorXd responses = fmap.cells * z;
            for (Eigen::Index c = 0; c < responses.size(); ++c) {
                if (cell_norms(c) == 0.0) {
                    responses(c) = 0.0;
                } else {
                    responses(c) /= z_norm * cell_norms(c);
                }
            }
            Heatmap map = Heatmap::zeros(fmap.height, fmap.width);
            for (int y = 0; y < fmap.height; ++y) {
                for (int x = 0; x < fmap.width; ++x) {
                    map.values(y, x) = responses(static_cast<Eigen::Index>(y) * fmap.width + x);
                }
            }
            result.heatmaps[i] = std::move(map);
        },
        threads);

    return result;
}

}  // namespace tcb
