#include <tcb/tracker.hpp>

#include <algorithm>
#include <cmath>

namespace tcb {

FusionMode fusion_mode_from_string(const std::string& name) {
    if (name == "product") return FusionMode::Product;
    if (name == "linear") return FusionMode::Linear;
    if (name == "iou" || name == "iou_only") return FusionMode::IouOnly;
    throw ValidationError("unknown fusion mode: " + name);
}

std::string to_string(FusionMode mode) {
    switch (mode) {
        case FusionMode::Product: return "product";
        case FusionMode::Linear: return "linear";
        case FusionMode::IouOnly: return "iou";
    }
    return "?";
}

void TrackerConfig::validate() const {
    const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!unit(tau_high) || !unit(tau_low) || !unit(stage1_min_score) || !unit(stage2_min_iou) ||
        !unit(stage3_min_iou) || !unit(gamma) || !unit(new_track_min_conf)) {
        throw ValidationError("tracker config: thresholds must lie in [0, 1]");
    }
    if (!(tau_low < tau_high)) {
        throw ValidationError("tracker config: tau_low must be below tau_high");
    }
    if (max_age < 0) throw ValidationError("tracker config: max_age must be nonnegative");
    if (fusion == FusionMode::Linear && !unit(delta)) {
        throw ValidationError("tracker config: delta outside [0, 1]");
    }
}

double temp_score(const Embedding& track_template, const Embedding& det_embedding) {
    if (track_template.size() != det_embedding.size()) {
        throw ValidationError("temp_score: dimension mismatch");
    }
    if (track_template.norm() == 0.0 || det_embedding.norm() == 0.0) return 0.0;
    return std::max(0.0, cosine(track_template, det_embedding));
}

double fused_score(double iou_val, double det_conf, double temp, FusionMode mode, double delta) {
    switch (mode) {
        case FusionMode::Product:
            return iou_val * det_conf * temp;
        case FusionMode::Linear:
            if (!(delta >= 0.0 && delta <= 1.0)) {
                throw ValidationError("fused_score: delta outside [0, 1]");
            }
            return (1.0 - delta) * iou_val + delta * temp;
        case FusionMode::IouOnly:
            return iou_val;
    }
    throw ValidationError("fused_score: unknown fusion mode");
}

Tracker::Tracker(TrackerConfig config) : config_(config) {
    config_.validate();
}

namespace {

Embedding unit_or_zero(const Embedding& e) {
    const double norm = e.norm();
    return norm == 0.0 ? e : Embedding(e / norm);
}

// IoU-gated assignment for rounds 2 and 3.
AssignmentResult match_by_iou(const std::vector<Track*>& tracks,
                              const std::vector<int>& det_indices, const FrameInput& input,
                              double min_iou) {
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(tracks.size()),
                         static_cast<Eigen::Index>(det_indices.size()));
    for (std::size_t t = 0; t < tracks.size(); ++t) {
        for (std::size_t d = 0; d < det_indices.size(); ++d) {
            cost(t, d) = 1.0 - iou(tracks[t]->association_box(),
                                   input.detections[det_indices[d]].box);
        }
    }
    return linear_assignment(cost, 1.0 - min_iou);
}

}  // namespace

std::vector<TrackOutput> Tracker::step(const FrameInput& input) {
    if (input.detections.size() != input.embeddings.size()) {
        throw ValidationError("step: detections and embeddings misaligned");
    }
    if (last_frame_ && input.frame_index <= *last_frame_) {
        throw ValidationError("step: frame indices must be strictly increasing");
    }
    last_frame_ = input.frame_index;

    // 1. BYTE split on the fused score
    std::vector<int> high, low;
    for (int d = 0; d < static_cast<int>(input.detections.size()); ++d) {
        const double fused = input.detections[d].fused;
        if (fused >= config_.tau_high) {
            high.push_back(d);
        } else if (fused >= config_.tau_low) {
            low.push_back(d);
        }
    }

    // 2. advance motion and refresh the association geometry
    std::vector<Track*> pool;
    for (Track& track : tracks_) {
        if (track.status == TrackStatus::Removed) continue;
        if (config_.use_kalman && track.motion) {
            track.motion = kf_predict(*track.motion);
            track.assoc_box_ = kf_box(*track.motion);
        } else {
            track.assoc_box_ = track.last_box;
        }
        pool.push_back(&track);
    }

    std::vector<char> track_matched(pool.size(), 0);
    std::vector<char> det_matched(input.detections.size(), 0);
    std::vector<std::pair<Track*, int>> matches_a12;  // template updates allowed
    std::vector<std::pair<Track*, int>> matches_a3;

    // 3. Association 1: fused score over high-confidence detections
    if (!pool.empty() && !high.empty()) {
        Eigen::MatrixXd cost(static_cast<Eigen::Index>(pool.size()),
                             static_cast<Eigen::Index>(high.size()));
        for (std::size_t t = 0; t < pool.size(); ++t) {
            for (std::size_t d = 0; d < high.size(); ++d) {
                const ScoredBox& det = input.detections[high[d]];
                const double overlap = iou(pool[t]->association_box(), det.box);
                double temp = 1.0;
                if (config_.fusion != FusionMode::IouOnly) {
                    // product fusion ignores the appearance term at zero
                    // overlap, so skip the dot product there
                    if (config_.fusion == FusionMode::Product && overlap == 0.0) {
                        temp = 0.0;
                        cost(t, d) = 1.0;
                        continue;
                    }
                    temp = temp_score(pool[t]->tmpl, input.embeddings[high[d]]);
                }
                cost(t, d) = 1.0 - fused_score(overlap, det.fused, temp, config_.fusion,
                                               config_.delta);
            }
        }
        const AssignmentResult result =
            linear_assignment(cost, 1.0 - config_.stage1_min_score);
        for (const auto& [t, d] : result.matches) {
            track_matched[t] = 1;
            det_matched[high[d]] = 1;
            matches_a12.emplace_back(pool[t], high[d]);
        }
    }

    // 4. Association 2: IoU over the high-confidence remainder
    {
        std::vector<Track*> remaining_tracks;
        std::vector<std::size_t> remaining_pool_idx;
        for (std::size_t t = 0; t < pool.size(); ++t) {
            if (!track_matched[t]) {
                remaining_tracks.push_back(pool[t]);
                remaining_pool_idx.push_back(t);
            }
        }
        std::vector<int> remaining_high;
        for (int d : high) {
            if (!det_matched[d]) remaining_high.push_back(d);
        }
        if (!remaining_tracks.empty() && !remaining_high.empty()) {
            const AssignmentResult result =
                match_by_iou(remaining_tracks, remaining_high, input, config_.stage2_min_iou);
            for (const auto& [t, d] : result.matches) {
                track_matched[remaining_pool_idx[t]] = 1;
                det_matched[remaining_high[d]] = 1;
                matches_a12.emplace_back(remaining_tracks[t], remaining_high[d]);
            }
        }
    }

    // 5. Association 3: IoU over the low-confidence detections
    {
        std::vector<Track*> remaining_tracks;
        std::vector<std::size_t> remaining_pool_idx;
        for (std::size_t t = 0; t < pool.size(); ++t) {
            if (!track_matched[t]) {
                remaining_tracks.push_back(pool[t]);
                remaining_pool_idx.push_back(t);
            }
        }
        if (!remaining_tracks.empty() && !low.empty()) {
            const AssignmentResult result =
                match_by_iou(remaining_tracks, low, input, config_.stage3_min_iou);
            for (const auto& [t, d] : result.matches) {
                track_matched[remaining_pool_idx[t]] = 1;
                det_matched[low[d]] = 1;
                matches_a3.emplace_back(remaining_tracks[t], low[d]);
            }
        }
    }

    // 6. commit matches: box, motion, lifecycle; templates only for rounds 1-2
    const auto commit = [&](Track* track, int det_index, bool update_template) {
        const ScoredBox& det = input.detections[det_index];
        track->last_box = det.box;
        track->last_conf = det.conf;
        if (config_.use_kalman && track->motion) {
            track->motion = kf_update(*track->motion, det.box);
        }
        track->status = TrackStatus::Active;
        track->frames_since_update = 0;
        ++track->age;
        if (update_template) {
            const Embedding detection = unit_or_zero(input.embeddings[det_index]);
            if (detection.norm() != 0.0 && track->tmpl.norm() != 0.0) {
                track->tmpl = ema_update(track->tmpl, detection, config_.gamma).value;
            }
        }
    };
    for (const auto& [track, det] : matches_a12) commit(track, det, true);
    for (const auto& [track, det] : matches_a3) commit(track, det, false);

    // 7. age out the unmatched
    for (std::size_t t = 0; t < pool.size(); ++t) {
        if (track_matched[t]) continue;
        Track* track = pool[t];
        ++track->frames_since_update;
        ++track->age;
        track->status = track->frames_since_update > config_.max_age ? TrackStatus::Removed
                                                                     : TrackStatus::Lost;
    }
    std::erase_if(tracks_, [](const Track& t) { return t.status == TrackStatus::Removed; });

    // 8. births from unmatched high-confidence detections
    for (int d : high) {
        if (det_matched[d]) continue;
        const ScoredBox& det = input.detections[d];
        if (det.conf < config_.new_track_min_conf) continue;
        Track track;
        track.id = next_id_++;
        track.last_box = det.box;
        track.last_conf = det.conf;
        track.assoc_box_ = det.box;
        if (config_.use_kalman) track.motion = kf_init(det.box);
        track.tmpl = unit_or_zero(input.embeddings[d]);
        track.status = TrackStatus::Active;
        track.frames_since_update = 0;
        track.age = 1;
        tracks_.push_back(std::move(track));
    }

    // 9. report the active set
    std::vector<TrackOutput> outputs;
    for (const Track& track : tracks_) {
        if (track.status == TrackStatus::Active) {
            outputs.push_back(TrackOutput{track.id, track.last_box, track.last_conf});
        }
    }
    return outputs;
}

}  // namespace tcb
