#include <tcb/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include <tcb/assignment.hpp>

namespace tcb {

namespace {

struct FrameEntry {
    std::int64_t id;
    BBox box;
};

using FrameMap = std::map<std::int64_t, std::vector<FrameEntry>>;

FrameMap group_by_frame(std::span<const TrackRecord> records, const char* what) {
    FrameMap frames;
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (const TrackRecord& record : records) {
        if (!record.box.valid()) {
            throw ValidationError(std::string(what) + ": invalid box");
        }
        if (!seen.emplace(record.frame, record.id).second) {
            throw ValidationError(std::string(what) + ": duplicate (frame, id) row");
        }
        frames[record.frame].push_back(FrameEntry{record.id, record.box});
    }
    return frames;
}

std::vector<std::int64_t> all_frames(const FrameMap& a, const FrameMap& b) {
    std::set<std::int64_t> keys;
    for (const auto& [frame, _] : a) keys.insert(frame);
    for (const auto& [frame, _] : b) keys.insert(frame);
    return {keys.begin(), keys.end()};
}

const std::vector<FrameEntry>& entries_at(const FrameMap& frames, std::int64_t frame) {
    static const std::vector<FrameEntry> empty;
    const auto it = frames.find(frame);
    return it == frames.end() ? empty : it->second;
}

}  // namespace

ClearResult clear_metrics(std::span<const TrackRecord> gt, std::span<const TrackRecord> pred,
                          double iou_threshold) {
    const FrameMap gt_frames = group_by_frame(gt, "clear_metrics gt");
    const FrameMap pred_frames = group_by_frame(pred, "clear_metrics pred");

    ClearResult result;
    result.total_gt = static_cast<std::int64_t>(gt.size());

    std::unordered_map<std::int64_t, std::int64_t> active;      // gt id -> pred id, last frame
    std::unordered_map<std::int64_t, std::int64_t> last_match;  // gt id -> last matched pred id

    for (const std::int64_t frame : all_frames(gt_frames, pred_frames)) {
        const auto& gts = entries_at(gt_frames, frame);
        const auto& preds = entries_at(pred_frames, frame);

        std::vector<char> gt_taken(gts.size(), 0), pred_taken(preds.size(), 0);
        std::vector<std::pair<int, int>> frame_matches;

        // persist previous-frame correspondences still above threshold
        for (std::size_t g = 0; g < gts.size(); ++g) {
            const auto carried = active.find(gts[g].id);
            if (carried == active.end()) continue;
            for (std::size_t p = 0; p < preds.size(); ++p) {
                if (pred_taken[p] || preds[p].id != carried->second) continue;
                if (iou(gts[g].box, preds[p].box) >= iou_threshold) {
                    gt_taken[g] = 1;
                    pred_taken[p] = 1;
                    frame_matches.emplace_back(static_cast<int>(g), static_cast<int>(p));
                }
                break;
            }
        }

        // optimal assignment over the remainder
        std::vector<int> free_gt, free_pred;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (!gt_taken[g]) free_gt.push_back(static_cast<int>(g));
        }
        for (std::size_t p = 0; p < preds.size(); ++p) {
            if (!pred_taken[p]) free_pred.push_back(static_cast<int>(p));
        }
        if (!free_gt.empty() && !free_pred.empty()) {
            Eigen::MatrixXd cost(free_gt.size(), free_pred.size());
            for (std::size_t g = 0; g < free_gt.size(); ++g) {
                for (std::size_t p = 0; p < free_pred.size(); ++p) {
                    cost(g, p) = 1.0 - iou(gts[free_gt[g]].box, preds[free_pred[p]].box);
                }
            }
            const AssignmentResult assigned = linear_assignment(cost, 1.0 - iou_threshold);
            for (const auto& [g, p] : assigned.matches) {
                frame_matches.emplace_back(free_gt[g], free_pred[p]);
            }
        }

        FrameCounts counts;
        counts.frame = frame;
        counts.gt = static_cast<int>(gts.size());
        counts.pred = static_cast<int>(preds.size());
        counts.tp = static_cast<int>(frame_matches.size());
        counts.fp = counts.pred - counts.tp;
        counts.fn = counts.gt - counts.tp;

        std::unordered_map<std::int64_t, std::int64_t> next_active;
        for (const auto& [g, p] : frame_matches) {
            const std::int64_t gt_id = gts[g].id;
            const std::int64_t pred_id = preds[p].id;
            const auto last = last_match.find(gt_id);
            if (last != last_match.end() && last->second != pred_id) {
                ++counts.id_switches;
            }
            last_match[gt_id] = pred_id;
            next_active[gt_id] = pred_id;
        }
        active = std::move(next_active);

        result.fp += counts.fp;
        result.fn += counts.fn;
        result.id_switches += counts.id_switches;
        result.frames.push_back(counts);
    }

    if (result.total_gt > 0) {
        result.mota = 1.0 - static_cast<double>(result.fp + result.fn + result.id_switches) /
                                static_cast<double>(result.total_gt);
    } else {
        result.mota = result.fp == 0 ? 1.0 : 0.0;
    }
    return result;
}

double idf1(std::span<const TrackRecord> gt, std::span<const TrackRecord> pred,
            double iou_threshold) {
    const FrameMap gt_frames = group_by_frame(gt, "idf1 gt");
    const FrameMap pred_frames = group_by_frame(pred, "idf1 pred");

    std::map<std::int64_t, std::int64_t> gt_count, pred_count;
    for (const TrackRecord& r : gt) ++gt_count[r.id];
    for (const TrackRecord& r : pred) ++pred_count[r.id];

    const std::int64_t total = static_cast<std::int64_t>(gt.size() + pred.size());
    if (total == 0) return 1.0;
    if (gt.empty() || pred.empty()) return 0.0;

    std::vector<std::int64_t> gt_ids, pred_ids;
    std::map<std::int64_t, int> gt_index, pred_index;
    for (const auto& [id, _] : gt_count) {
        gt_index[id] = static_cast<int>(gt_ids.size());
        gt_ids.push_back(id);
    }
    for (const auto& [id, _] : pred_count) {
        pred_index[id] = static_cast<int>(pred_ids.size());
        pred_ids.push_back(id);
    }

    // identity-consistent frame counts per (gt id, pred id)
    Eigen::MatrixXd idtp = Eigen::MatrixXd::Zero(gt_ids.size(), pred_ids.size());
    for (const std::int64_t frame : all_frames(gt_frames, pred_frames)) {
        for (const FrameEntry& g : entries_at(gt_frames, frame)) {
            for (const FrameEntry& p : entries_at(pred_frames, frame)) {
                if (iou(g.box, p.box) >= iou_threshold) {
                    idtp(gt_index[g.id], pred_index[p.id]) += 1.0;
                }
            }
        }
    }

    // square problem with explicit no-match rows/cols so every identity may
    // stay unmatched at the cost of its own detections
    const int ng = static_cast<int>(gt_ids.size());
    const int np = static_cast<int>(pred_ids.size());
    const int n = ng + np;
    const double big = static_cast<double>(total) + 1.0;
    Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(n, n, big);
    for (int g = 0; g < ng; ++g) {
        for (int p = 0; p < np; ++p) {
            cost(g, p) = static_cast<double>(gt_count[gt_ids[g]] + pred_count[pred_ids[p]]) -
                         2.0 * idtp(g, p);
        }
        cost(g, np + g) = static_cast<double>(gt_count[gt_ids[g]]);
    }
    for (int p = 0; p < np; ++p) {
        cost(ng + p, p) = static_cast<double>(pred_count[pred_ids[p]]);
    }
    for (int g = 0; g < ng; ++g) {
        for (int p = 0; p < np; ++p) {
            cost(ng + p, np + g) = 0.0;
        }
    }

    const AssignmentResult assigned = linear_assignment(cost, big + 1.0);
    // total cost = IDFP + IDFN; every detection appears once on each side
    const double idtp_total = (static_cast<double>(total) - assigned.total_cost) / 2.0;
    return 2.0 * idtp_total / static_cast<double>(total);
}

HotaResult hota(std::span<const TrackRecord> gt, std::span<const TrackRecord> pred) {
    const FrameMap gt_frames = group_by_frame(gt, "hota gt");
    const FrameMap pred_frames = group_by_frame(pred, "hota pred");

    if (gt.empty() && pred.empty()) return HotaResult{1.0, 1.0, 1.0};
    if (gt.empty() || pred.empty()) return HotaResult{0.0, 0.0, 0.0};

    std::map<std::int64_t, std::int64_t> gt_count, pred_count;
    for (const TrackRecord& r : gt) ++gt_count[r.id];
    for (const TrackRecord& r : pred) ++pred_count[r.id];

    const std::vector<std::int64_t> frames = all_frames(gt_frames, pred_frames);

    double hota_sum = 0.0, deta_sum = 0.0, assa_sum = 0.0;
    int alpha_steps = 0;
    for (int step = 1; step <= 19; ++step) {
        const double alpha = 0.05 * step;

        // first pass: how often each identity pair could match at this alpha
        std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> potential;
        for (const std::int64_t frame : frames) {
            for (const FrameEntry& g : entries_at(gt_frames, frame)) {
                for (const FrameEntry& p : entries_at(pred_frames, frame)) {
                    if (iou(g.box, p.box) >= alpha) ++potential[{g.id, p.id}];
                }
            }
        }
        const auto alignment = [&](std::int64_t gid, std::int64_t pid) {
            const auto it = potential.find({gid, pid});
            if (it == potential.end()) return 0.0;
            const double pot = static_cast<double>(it->second);
            return pot / (static_cast<double>(gt_count[gid] + pred_count[pid]) - pot);
        };

        // second pass: per-frame optimal matching weighted by the global
        // alignment so ties resolve toward identity-consistent pairs
        std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> matched;
        std::int64_t tp = 0;
        for (const std::int64_t frame : frames) {
            const auto& gts = entries_at(gt_frames, frame);
            const auto& preds = entries_at(pred_frames, frame);
            if (gts.empty() || preds.empty()) continue;
            Eigen::MatrixXd cost(gts.size(), preds.size());
            for (std::size_t g = 0; g < gts.size(); ++g) {
                for (std::size_t p = 0; p < preds.size(); ++p) {
                    const double overlap = iou(gts[g].box, preds[p].box);
                    if (overlap >= alpha) {
                        cost(g, p) = -(1000.0 * alignment(gts[g].id, preds[p].id) + overlap);
                    } else {
                        cost(g, p) = 1.0;
                    }
                }
            }
            const AssignmentResult assigned = linear_assignment(cost, 0.0);
            for (const auto& [g, p] : assigned.matches) {
                ++matched[{gts[g].id, preds[p].id}];
                ++tp;
            }
        }

        const std::int64_t fn = static_cast<std::int64_t>(gt.size()) - tp;
        const std::int64_t fp = static_cast<std::int64_t>(pred.size()) - tp;
        const double deta = tp == 0 ? 0.0
                                    : static_cast<double>(tp) /
                                          static_cast<double>(tp + fn + fp);
        double assa = 0.0;
        if (tp > 0) {
            double acc = 0.0;
            for (const auto& [pair, count] : matched) {
                const double tpa = static_cast<double>(count);
                const double fna = static_cast<double>(gt_count[pair.first]) - tpa;
                const double fpa = static_cast<double>(pred_count[pair.second]) - tpa;
                acc += tpa * (tpa / (tpa + fna + fpa));
            }
            assa = acc / static_cast<double>(tp);
        }

        hota_sum += std::sqrt(deta * assa);
        deta_sum += deta;
        assa_sum += assa;
        ++alpha_steps;
    }

    return HotaResult{hota_sum / alpha_steps, deta_sum / alpha_steps, assa_sum / alpha_steps};
}

MetricsReport evaluate(std::span<const TrackRecord> gt, std::span<const TrackRecord> pred,
                       double iou_threshold) {
    const ClearResult clear = clear_metrics(gt, pred, iou_threshold);
    const HotaResult h = hota(gt, pred);

    MetricsReport report;
    report.mota = clear.mota;
    report.fp = clear.fp;
    report.fn = clear.fn;
    report.id_switches = clear.id_switches;
    report.total_gt = clear.total_gt;
    report.frames = clear.frames;
    report.idf1 = idf1(gt, pred, iou_threshold);
    report.hota = h.hota;
    report.deta = h.deta;
    report.assa = h.assa;
    return report;
}

std::string format_table(const MetricsReport& report) {
    char line[256];
    std::string out;
    out += "metric      value\n";
    const auto add = [&](const char* name, double value) {
        std::snprintf(line, sizeof(line), "%-10s %10.6f\n", name, value);
        out += line;
    };
    add("MOTA", report.mota);
    add("IDF1", report.idf1);
    add("HOTA", report.hota);
    add("DetA", report.deta);
    add("AssA", report.assa);
    std::snprintf(line, sizeof(line), "%-10s %10lld\n", "FP",
                  static_cast<long long>(report.fp));
    out += line;
    std::snprintf(line, sizeof(line), "%-10s %10lld\n", "FN",
                  static_cast<long long>(report.fn));
    out += line;
    std::snprintf(line, sizeof(line), "%-10s %10lld\n", "IDs",
                  static_cast<long long>(report.id_switches));
    out += line;
    std::snprintf(line, sizeof(line), "%-10s %10lld\n", "GT",
                  static_cast<long long>(report.total_gt));
    out += line;

    out += "\nframe         gt  pred    tp    fp    fn  idsw\n";
    for (const FrameCounts& f : report.frames) {
        std::snprintf(line, sizeof(line), "%-10lld %5d %5d %5d %5d %5d %5d\n",
                      static_cast<long long>(f.frame), f.gt, f.pred, f.tp, f.fp, f.fn,
                      f.id_switches);
        out += line;
    }
    return out;
}

std::string format_key_values(const MetricsReport& report) {
    char line[128];
    std::string out;
    const auto add_real = [&](const char* key, double value) {
        std::snprintf(line, sizeof(line), "%s=%.6f\n", key, value);
        out += line;
    };
    const auto add_count = [&](const char* key, std::int64_t value) {
        std::snprintf(line, sizeof(line), "%s=%lld\n", key, static_cast<long long>(value));
        out += line;
    };
    add_real("mota", report.mota);
    add_real("idf1", report.idf1);
    add_real("hota", report.hota);
    add_real("deta", report.deta);
    add_real("assa", report.assa);
    add_count("fp", report.fp);
    add_count("fn", report.fn);
    add_count("id_switches", report.id_switches);
    add_count("total_gt", report.total_gt);
    return out;
}

}  // namespace tcb
