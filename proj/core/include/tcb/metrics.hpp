#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <tcb/geometry.hpp>

namespace tcb {

/// One result or ground-truth row: a box with an identity at a frame.
struct TrackRecord {
    std::int64_t frame = 0;
    std::int64_t id = 0;
    BBox box;
    double conf = 1.0;
};

struct FrameCounts {
    std::int64_t frame = 0;
    int gt = 0;
    int pred = 0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    int id_switches = 0;
};

struct ClearResult {
    double mota = 0.0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t id_switches = 0;
    std::int64_t total_gt = 0;
    std::vector<FrameCounts> frames;
};

struct HotaResult {
    double hota = 0.0;
    double deta = 0.0;
    double assa = 0.0;
};

/// Full evaluation of one sequence.
struct MetricsReport {
    double mota = 0.0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t id_switches = 0;
    double idf1 = 0.0;
    double hota = 0.0;
    double deta = 0.0;
    double assa = 0.0;
    std::int64_t total_gt = 0;
    std::vector<FrameCounts> frames;
};

/// CLEAR accumulation: correspondences persist from the previous frame
/// while still above the IoU threshold, the remainder is matched optimally,
/// and a switch is counted when a ground-truth identity's matched predicted
/// id differs from its last known one. Duplicate (frame, id) rows are
/// rejected.
ClearResult clear_metrics(std::span<const TrackRecord> gt, std::span<const TrackRecord> pred,
                          double iou_threshold = 0.5);

/// Identity-F1: one global bipartite mapping of ground-truth to predicted
/// identities maximising identity-consistent matches over the sequence.
double idf1(std::span<const TrackRecord> gt, std::span<const TrackRecord> pred,
            double iou_threshold = 0.5);

/// Higher-order tracking accuracy with DetA/AssA, averaged over the
/// localisation thresholds 0.05, 0.10, ..., 0.95.
HotaResult hota(std::span<const TrackRecord> gt, std::span<const TrackRecord> pred);

/// Runs all three metric families.
MetricsReport evaluate(std::span<const TrackRecord> gt, std::span<const TrackRecord> pred,
                       double iou_threshold = 0.5);

/// Fixed-column text table over the headline numbers plus the per-frame
/// breakdown.
std::string format_table(const MetricsReport& report);

/// One `key=value` line per metric, stable order, 6-decimal reals.
std::string format_key_values(const MetricsReport& report);

}  // namespace tcb
