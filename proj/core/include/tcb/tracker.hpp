#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <tcb/appearance.hpp>
#include <tcb/assignment.hpp>
#include <tcb/geometry.hpp>
#include <tcb/kalman.hpp>

namespace tcb {

enum class TrackStatus { Active, Lost, Removed };

enum class FusionMode {
    Product,  // iou * det_score * temp_score
    Linear,   // (1 - delta) * iou + delta * temp_score
    IouOnly,
};

FusionMode fusion_mode_from_string(const std::string& name);
std::string to_string(FusionMode mode);

/// Tracker knobs. The defaults follow BYTE conventions; everything is a
/// config key so ablations can sweep them.
struct TrackerConfig {
    double tau_high = 0.6;           // high/low confidence split on the fused score
    double tau_low = 0.1;            // discard floor
    double stage1_min_score = 0.1;   // fused-score gate (triple products are small)
    double stage2_min_iou = 0.5;
    double stage3_min_iou = 0.5;
    double gamma = 0.1;              // template EMA weight
    double new_track_min_conf = 0.6; // birth gate on detector confidence
    int max_age = 30;                // frames a lost track survives
    bool use_kalman = true;
    FusionMode fusion = FusionMode::Product;
    double delta = 0.5;              // linear fusion weight

    void validate() const;
};

/// Persistent identity. Lost tracks keep a frozen template and re-enter
/// every association round until max_age expires.
struct Track {
    std::int64_t id = 0;
    BBox last_box;
    double last_conf = 0.0;  // detector confidence of the latest observation
    std::optional<KalmanState> motion;
    Embedding tmpl;
    TrackStatus status = TrackStatus::Active;
    int frames_since_update = 0;
    int age = 0;

    /// Box used for IoU during association: the Kalman prediction when
    /// motion is on, the last observed box otherwise.
    const BBox& association_box() const { return assoc_box_; }
    BBox assoc_box_;
};

/// Detections plus aligned embeddings for one frame.
struct FrameInput {
    std::int64_t frame_index = 0;
    std::vector<ScoredBox> detections;
    std::vector<Embedding> embeddings;
};

struct TrackOutput {
    std::int64_t id = 0;
    BBox box;
    double conf = 0.0;
};

/// Appearance affinity clamped to [0, 1] so product fusion stays
/// order-preserving. Zero-norm embeddings score 0 instead of failing, the
/// same degenerate-cell treatment correlate() applies.
double temp_score(const Embedding& track_template, const Embedding& det_embedding);

/// Association weight for one (track, detection) pair under the given
/// fusion mode. delta only matters for FusionMode::Linear and must lie in
/// [0, 1] there.
double fused_score(double iou_val, double det_conf, double temp, FusionMode mode,
                   double delta = 0.0);

/// Online tracker: BYTE confidence split, three association rounds
/// (fused score, then IoU over the high remainder, then IoU over the low
/// detections), track lifecycle and template maintenance.
class Tracker {
public:
    explicit Tracker(TrackerConfig config);

    /// Advances one frame and returns the active tracks. Frame indices must
    /// be strictly increasing.
    std::vector<TrackOutput> step(const FrameInput& input);

    const std::vector<Track>& tracks() const { return tracks_; }
    const TrackerConfig& config() const { return config_; }

private:
    TrackerConfig config_;
    std::vector<Track> tracks_;
    std::int64_t next_id_ = 1;
    std::optional<std::int64_t> last_frame_;
};

}  // namespace tcb
