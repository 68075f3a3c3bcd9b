#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include <tcb/errors.hpp>

namespace tcb {

/// Per-detection appearance vector. Dimension is fixed per run (512 by
/// default at the pipeline level); similarity inputs must have nonzero norm.
using Embedding = Eigen::VectorXd;

/// Dense H x W x C feature grid stored as one row per cell, row-major over
/// (y, x). Cell (x, y) lives in row y * width + x.
struct FeatureMap {
    int height = 0;
    int width = 0;
    int channels = 0;
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> cells;

    static FeatureMap zeros(int height, int width, int channels);

    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::ConstRowXpr
    cell(int x, int y) const {
        return cells.row(y * width + x);
    }
    auto cell(int x, int y) { return cells.row(y * width + x); }
};

/// Stored templates of currently tracked identities.
struct TemplateSet {
    std::vector<Embedding> templates;
    std::vector<std::int64_t> track_ids;
};

/// H x W response grid; correlate() outputs live in [-1, 1].
struct Heatmap {
    int height = 0;
    int width = 0;
    Eigen::MatrixXd values;  // values(y, x)

    static Heatmap zeros(int height, int width);
};

/// Cosine similarity. Throws ValidationError on dimension mismatch or a
/// zero-norm input.
double cosine(const Embedding& a, const Embedding& b);

struct EmaResult {
    Embedding value;
    bool degenerate = false;  // blend cancelled to zero; value is the old template
};

/// Template refresh (1 - gamma) * old + gamma * next, re-normalised to unit
/// L2 so similarity magnitudes stay comparable across track ages. An exactly
/// cancelling blend keeps the old template and flags the update degenerate.
EmaResult ema_update(const Embedding& old_template, const Embedding& next, double gamma);

struct CorrelationResult {
    std::vector<Heatmap> heatmaps;     // one per template, input order
    std::int64_t degenerate_cells = 0; // zero-norm cells, responses forced to 0
};

/// Per-template response maps: heatmap i at (x, y) is the cosine between
/// template i and the feature cell. Templates are independent rows of one
/// matrix product, so any parallel split over templates is bit-stable.
/// threads == 1 forces serial evaluation; 0 uses the TCB_THREADS cap.
CorrelationResult correlate(const TemplateSet& templates, const FeatureMap& fmap,
                            std::size_t threads = 1);

}  // namespace tcb
