#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <tcb/metrics.hpp>
#include <tcb/tracker.hpp>

namespace tcb {

enum class MotionModel {
    Linear,           // constant velocity, reflecting borders
    Crossing,         // agents converge through the arena centre and pass
    SinusoidalDance,  // per-agent sinusoidal velocity, random phase/amplitude
};

MotionModel motion_model_from_string(const std::string& name);
std::string to_string(MotionModel model);

/// Deterministic synthetic-scene recipe. Separate RNG streams drive
/// trajectories, appearance and detector noise, so changing one noise knob
/// leaves the others untouched.
struct ScenarioConfig {
    int num_agents = 5;
    int frames = 100;
    double arena_w = 1920.0;
    double arena_h = 1080.0;
    MotionModel motion = MotionModel::Linear;
    double box_size = 60.0;
    double appearance_gap = 0.0;     // max inter-identity cosine, [0, 1)
    double embed_noise_sigma = 0.0;  // per-channel gaussian on embeddings
    double jitter_sigma = 0.0;       // pixels, on box corners
    double drop_prob = 0.0;          // per-detection dropout
    double fp_rate = 0.0;            // Poisson mean of false positives per frame
    double conf_low = 0.6;
    double conf_high = 0.95;
    std::uint64_t seed = 1;
    int embedding_dim = 512;

    void validate() const;
};

/// Ground truth, the detection/embedding stream derived from it, and the
/// per-detection provenance (source gt id, or -1 for a false positive).
struct ScenarioBundle {
    std::vector<TrackRecord> gt;
    std::vector<FrameInput> frames;
    std::vector<std::vector<std::int64_t>> provenance;  // aligned with frames
};

ScenarioBundle generate_scenario(const ScenarioConfig& config);

/// Keeps every k-th frame (k = round(1/ratio)) and renumbers frames
/// consecutively in both ground truth and detections.
ScenarioBundle subsample(const ScenarioBundle& bundle, double ratio);

/// Feeds the bundle through a fresh Tracker and scores it against the
/// bundle's ground truth.
MetricsReport run_and_score(const ScenarioBundle& bundle, const TrackerConfig& config,
                            double iou_threshold = 0.5);

}  // namespace tcb
