#include <tcb/simulator.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace tcb {

MotionModel motion_model_from_string(const std::string& name) {
    if (name == "linear") return MotionModel::Linear;
    if (name == "crossing") return MotionModel::Crossing;
    if (name == "sinusoidal-dance" || name == "dance") return MotionModel::SinusoidalDance;
    throw ValidationError("unknown motion model: " + name);
}

std::string to_string(MotionModel model) {
    switch (model) {
        case MotionModel::Linear: return "linear";
        case MotionModel::Crossing: return "crossing";
        case MotionModel::SinusoidalDance: return "sinusoidal-dance";
    }
    return "?";
}

void ScenarioConfig::validate() const {
    const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (num_agents < 1) throw ValidationError("scenario: num_agents must be positive");
    if (frames < 2) throw ValidationError("scenario: need at least 2 frames");
    if (!(box_size > 0.0)) throw ValidationError("scenario: box_size must be positive");
    if (arena_w <= box_size || arena_h <= box_size) {
        throw ValidationError("scenario: arena smaller than one box");
    }
    if (!(appearance_gap >= 0.0 && appearance_gap < 1.0)) {
        throw ValidationError("scenario: appearance_gap outside [0, 1)");
    }
    if (!unit(drop_prob)) throw ValidationError("scenario: drop_prob outside [0, 1]");
    if (fp_rate < 0.0) throw ValidationError("scenario: fp_rate must be nonnegative");
    if (embed_noise_sigma < 0.0 || jitter_sigma < 0.0) {
        throw ValidationError("scenario: noise sigmas must be nonnegative");
    }
    if (!unit(conf_low) || !unit(conf_high) || conf_low > conf_high) {
        throw ValidationError("scenario: confidence range invalid");
    }
    if (embedding_dim < 1) throw ValidationError("scenario: embedding_dim must be positive");
    const int needed = num_agents + (appearance_gap > 0.0 ? 1 : 0);
    if (needed > embedding_dim) {
        throw ValidationError("scenario: appearance_gap infeasible, too many agents for dim");
    }
}

namespace {

// stream tags keep the three RNG concerns independent of each other
constexpr std::uint64_t kMotionTag = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kAppearanceTag = 0xc2b2ae3d27d4eb4fULL;
constexpr std::uint64_t kNoiseTag = 0x165667b19e3779f9ULL;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    if (lo == hi) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double gaussian(std::mt19937_64& rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

int poisson(std::mt19937_64& rng, double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int count = -1;
    double product = 1.0;
    do {
        ++count;
        product *= uniform(rng, 0.0, 1.0);
    } while (product > limit);
    return count;
}

// fold a coordinate back into [lo, hi], flipping direction on each bounce
void reflect(double& position, double& velocity, double lo, double hi) {
    while (position < lo || position > hi) {
        if (position < lo) {
            position = 2.0 * lo - position;
            velocity = -velocity;
        } else {
            position = 2.0 * hi - position;
            velocity = -velocity;
        }
    }
}

struct Agent {
    // linear / crossing state
    double x = 0.0, y = 0.0, vx = 0.0, vy = 0.0;
    // sinusoidal parameters
    double base_x = 0.0, base_y = 0.0;
    double amp_x = 0.0, amp_y = 0.0;
    double freq_x = 0.0, freq_y = 0.0;
    double phase_x = 0.0, phase_y = 0.0;
};

std::vector<Embedding> make_prototypes(const ScenarioConfig& config, std::mt19937_64& rng) {
    const int extra = config.appearance_gap > 0.0 ? 1 : 0;
    const int count = config.num_agents + extra;

    // orthonormal basis by Gram-Schmidt over gaussian draws
    std::vector<Embedding> basis;
    basis.reserve(count);
    while (static_cast<int>(basis.size()) < count) {
        Embedding v(config.embedding_dim);
        for (int i = 0; i < config.embedding_dim; ++i) v(i) = gaussian(rng);
        for (const Embedding& b : basis) v -= b.dot(v) * b;
        const double norm = v.norm();
        if (norm < 1e-8) continue;  // rare near-dependence, redraw
        basis.push_back(v / norm);
    }

    std::vector<Embedding> prototypes;
    prototypes.reserve(config.num_agents);
    if (extra == 0) {
        prototypes.assign(basis.begin(), basis.begin() + config.num_agents);
        return prototypes;
    }
    // shared component u sets the pairwise cosine to exactly the gap
    const Embedding& shared = basis.back();
    const double mix = std::sqrt(config.appearance_gap);
    const double rest = std::sqrt(1.0 - config.appearance_gap);
    for (int a = 0; a < config.num_agents; ++a) {
        prototypes.push_back(mix * shared + rest * basis[a]);
    }
    return prototypes;
}

std::vector<Agent> init_agents(const ScenarioConfig& config, std::mt19937_64& rng) {
    std::vector<Agent> agents(config.num_agents);
    const double margin = 0.5 * config.box_size;
    switch (config.motion) {
        case MotionModel::Linear:
            for (Agent& agent : agents) {
                agent.x = uniform(rng, margin, config.arena_w - margin);
                agent.y = uniform(rng, margin, config.arena_h - margin);
                const double speed = uniform(rng, 2.0, 8.0);
                const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
                agent.vx = speed * std::cos(angle);
                agent.vy = speed * std::sin(angle);
            }
            break;
        case MotionModel::Crossing: {
            // everyone converges through the centre around mid-sequence
            const double cx = 0.5 * config.arena_w;
            const double cy = 0.5 * config.arena_h;
            const double radius =
                0.5 * std::min(config.arena_w, config.arena_h) - 2.0 * margin;
            for (int a = 0; a < config.num_agents; ++a) {
                const double angle = 2.0 * std::numbers::pi * a / config.num_agents +
                                     uniform(rng, -0.08, 0.08);
                const double r = radius * uniform(rng, 0.9, 1.0);
                Agent& agent = agents[a];
                agent.x = cx + r * std::cos(angle);
                agent.y = cy + r * std::sin(angle);
                // reach the centre near frame frames/2, with a little skew
                const double arrival = 0.5 * config.frames * uniform(rng, 0.9, 1.1);
                agent.vx = (cx - agent.x) / arrival;
                agent.vy = (cy - agent.y) / arrival;
            }
            break;
        }
        case MotionModel::SinusoidalDance: {
            // loose formation grid; neighbours oscillate into each other
            const int cols = std::max(1, static_cast<int>(std::ceil(
                                             std::sqrt(static_cast<double>(config.num_agents)))));
            const double spacing = 1.6 * config.box_size;
            const double origin_x = 0.5 * config.arena_w -
                                    0.5 * spacing * (cols - 1);
            const int rows = (config.num_agents + cols - 1) / cols;
            const double origin_y = 0.5 * config.arena_h - 0.5 * spacing * (rows - 1);
            for (int a = 0; a < config.num_agents; ++a) {
                Agent& agent = agents[a];
                agent.base_x = origin_x + spacing * (a % cols);
                agent.base_y = origin_y + spacing * (a / cols);
                agent.amp_x = config.box_size * uniform(rng, 0.6, 1.5);
                agent.amp_y = config.box_size * uniform(rng, 0.6, 1.5);
                agent.freq_x = uniform(rng, 0.15, 0.45);
                agent.freq_y = uniform(rng, 0.15, 0.45);
                agent.phase_x = uniform(rng, 0.0, 2.0 * std::numbers::pi);
                agent.phase_y = uniform(rng, 0.0, 2.0 * std::numbers::pi);
            }
            break;
        }
    }
    return agents;
}

BBox agent_box(const ScenarioConfig& config, const Agent& agent, int frame) {
    double cx = 0.0, cy = 0.0;
    if (config.motion == MotionModel::SinusoidalDance) {
        cx = agent.base_x + agent.amp_x * std::sin(agent.freq_x * frame + agent.phase_x);
        cy = agent.base_y + agent.amp_y * std::sin(agent.freq_y * frame + agent.phase_y);
    } else {
        cx = agent.x;
        cy = agent.y;
    }
    const double margin = 0.5 * config.box_size;
    cx = std::clamp(cx, margin, config.arena_w - margin);
    cy = std::clamp(cy, margin, config.arena_h - margin);
    return BBox{cx - margin, cy - margin, config.box_size, config.box_size};
}

void advance(const ScenarioConfig& config, std::vector<Agent>& agents) {
    if (config.motion == MotionModel::SinusoidalDance) return;  // closed form
    const double margin = 0.5 * config.box_size;
    for (Agent& agent : agents) {
        agent.x += agent.vx;
        agent.y += agent.vy;
        reflect(agent.x, agent.vx, margin, config.arena_w - margin);
        reflect(agent.y, agent.vy, margin, config.arena_h - margin);
    }
}

}  // namespace

ScenarioBundle generate_scenario(const ScenarioConfig& config) {
    config.validate();

    std::mt19937_64 motion_rng(config.seed ^ kMotionTag);
    std::mt19937_64 appearance_rng(config.seed ^ kAppearanceTag);
    std::mt19937_64 noise_rng(config.seed ^ kNoiseTag);

    const std::vector<Embedding> prototypes = make_prototypes(config, appearance_rng);
    std::vector<Agent> agents = init_agents(config, motion_rng);

    ScenarioBundle bundle;
    const double conf_mid = 0.5 * (config.conf_low + config.conf_high);

    for (int frame = 1; frame <= config.frames; ++frame) {
        FrameInput input;
        input.frame_index = frame;
        std::vector<std::int64_t> sources;

        for (int a = 0; a < config.num_agents; ++a) {
            const BBox box = agent_box(config, agents[a], frame);
            const std::int64_t id = a + 1;
            bundle.gt.push_back(TrackRecord{frame, id, box, 1.0});

            if (config.drop_prob > 0.0 && uniform(noise_rng, 0.0, 1.0) < config.drop_prob) {
                continue;
            }
            BBox det = box;
            if (config.jitter_sigma > 0.0) {
                det.x += config.jitter_sigma * gaussian(noise_rng);
                det.y += config.jitter_sigma * gaussian(noise_rng);
                det.w = std::max(4.0, det.w + 0.5 * config.jitter_sigma * gaussian(noise_rng));
                det.h = std::max(4.0, det.h + 0.5 * config.jitter_sigma * gaussian(noise_rng));
            }
            const double conf = uniform(noise_rng, config.conf_low, config.conf_high);

            Embedding emb = prototypes[a];
            if (config.embed_noise_sigma > 0.0) {
                for (int i = 0; i < config.embedding_dim; ++i) {
                    emb(i) += config.embed_noise_sigma * gaussian(appearance_rng);
                }
            }
            const double norm = emb.norm();
            if (norm > 0.0) emb /= norm;

            input.detections.push_back(ScoredBox::make(det, conf, {1.0}));
            input.embeddings.push_back(std::move(emb));
            sources.push_back(id);
        }

        // false positives sized like the agents, confidences from the low half
        const int fp_count = poisson(noise_rng, config.fp_rate);
        const double margin = 0.5 * config.box_size;
        for (int f = 0; f < fp_count; ++f) {
            BBox fp_box;
            fp_box.w = std::max(4.0, config.box_size + 2.0 * gaussian(noise_rng));
            fp_box.h = std::max(4.0, config.box_size + 2.0 * gaussian(noise_rng));
            fp_box.x = uniform(noise_rng, margin, config.arena_w - margin) - 0.5 * fp_box.w;
            fp_box.y = uniform(noise_rng, margin, config.arena_h - margin) - 0.5 * fp_box.h;
            const double conf = uniform(noise_rng, config.conf_low, conf_mid);

            Embedding emb(config.embedding_dim);
            for (int i = 0; i < config.embedding_dim; ++i) emb(i) = gaussian(noise_rng);
            emb.normalize();

            input.detections.push_back(ScoredBox::make(fp_box, conf, {1.0}));
            input.embeddings.push_back(std::move(emb));
            sources.push_back(-1);
        }

        bundle.frames.push_back(std::move(input));
        bundle.provenance.push_back(std::move(sources));
        advance(config, agents);
    }
    return bundle;
}

ScenarioBundle subsample(const ScenarioBundle& bundle, double ratio) {
    if (!(ratio > 0.0 && ratio <= 1.0)) {
        throw ValidationError("subsample: ratio outside (0, 1]");
    }
    const int keep_every = static_cast<int>(std::lround(1.0 / ratio));
    if (keep_every <= 1) return bundle;

    std::int64_t first = 0;
    bool have_first = false;
    for (const FrameInput& frame : bundle.frames) {
        if (!have_first || frame.frame_index < first) {
            first = frame.frame_index;
            have_first = true;
        }
    }
    for (const TrackRecord& record : bundle.gt) {
        if (!have_first || record.frame < first) {
            first = record.frame;
            have_first = true;
        }
    }

    const auto keep = [&](std::int64_t frame) { return (frame - first) % keep_every == 0; };
    const auto renumber = [&](std::int64_t frame) { return (frame - first) / keep_every + 1; };

    ScenarioBundle out;
    for (const TrackRecord& record : bundle.gt) {
        if (keep(record.frame)) {
            TrackRecord kept = record;
            kept.frame = renumber(record.frame);
            out.gt.push_back(kept);
        }
    }
    for (std::size_t i = 0; i < bundle.frames.size(); ++i) {
        if (!keep(bundle.frames[i].frame_index)) continue;
        FrameInput frame = bundle.frames[i];
        frame.frame_index = renumber(frame.frame_index);
        out.frames.push_back(std::move(frame));
        out.provenance.push_back(i < bundle.provenance.size() ? bundle.provenance[i]
                                                              : std::vector<std::int64_t>{});
    }
    return out;
}

MetricsReport run_and_score(const ScenarioBundle& bundle, const TrackerConfig& config,
                            double iou_threshold) {
    Tracker tracker(config);
    std::vector<TrackRecord> results;
    for (const FrameInput& frame : bundle.frames) {
        for (const TrackOutput& out : tracker.step(frame)) {
            results.push_back(TrackRecord{frame.frame_index, out.id, out.box, out.conf});
        }
    }
    return evaluate(bundle.gt, results, iou_threshold);
}

}  // namespace tcb
