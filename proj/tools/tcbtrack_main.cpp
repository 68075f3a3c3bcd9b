// tcbtrack: multi-object tracking association engine and evaluation harness.
//
// Subcommands: track, eval, simulate, subsample, ablate, losscheck, bench.
// Exit codes: 0 success, 2 validation error, 1 internal error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tcb/config.hpp>
#include <tcb/io.hpp>
#include <tcb/metrics.hpp>
#include <tcb/parallel.hpp>
#include <tcb/simulator.hpp>
#include <tcb/tracker.hpp>
#include <tcb/training.hpp>

namespace {

using tcb::Config;

// Registers every config key as a --key flag; values land in `overrides`.
void add_config_flags(CLI::App* cmd, const std::vector<tcb::ConfigKey>& keys,
                      std::map<std::string, std::string>& overrides) {
    for (const tcb::ConfigKey& key : keys) {
        cmd->add_option_function<std::string>(
            "--" + std::string(key.name),
            [&overrides, name = std::string(key.name)](const std::string& value) {
                overrides[name] = value;
            },
            key.help);
    }
}

Config load_config(const std::string& path, const std::map<std::string, std::string>& overrides) {
    Config config = path.empty() ? Config() : Config::from_file(path);
    for (const auto& [key, value] : overrides) config.set(key, value);
    return config;
}

std::vector<tcb::TrackRecord> run_tracker(const std::vector<tcb::FrameInput>& frames,
                                          const tcb::TrackerConfig& config) {
    tcb::Tracker tracker(config);
    std::vector<tcb::TrackRecord> records;
    for (const tcb::FrameInput& frame : frames) {
        for (const tcb::TrackOutput& out : tracker.step(frame)) {
            records.push_back(tcb::TrackRecord{frame.frame_index, out.id, out.box, out.conf});
        }
    }
    return records;
}

double percentile(std::vector<double> samples, double q) {
    if (samples.empty()) return 0.0;
    std::sort(samples.begin(), samples.end());
    const double pos = q * (samples.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, samples.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return samples[lo] * (1.0 - frac) + samples[hi] * frac;
}

int cmd_track(const std::string& dets_path, const std::string& embs_path,
              const std::string& config_path, const std::string& out_path,
              const std::map<std::string, std::string>& overrides) {
    const Config config = load_config(config_path, overrides);
    const tcb::TrackerConfig tracker_config = tcb::tracker_config_from(config);

    const tcb::DetectionMap detections = tcb::read_detections(dets_path);
    const tcb::EmbeddingFile embeddings = tcb::read_embeddings(embs_path);
    std::vector<tcb::FrameInput> frames = tcb::combine_inputs(detections, embeddings);

    if (config.get_bool("apply_nms", false)) {
        const double nms_iou = config.get_real("nms_iou", 0.7);
        for (tcb::FrameInput& frame : frames) {
            const auto kept = tcb::nms(frame.detections, nms_iou);
            std::vector<tcb::ScoredBox> boxes;
            std::vector<tcb::Embedding> embs;
            for (const std::size_t idx : kept) {
                boxes.push_back(frame.detections[idx]);
                embs.push_back(frame.embeddings[idx]);
            }
            frame.detections = std::move(boxes);
            frame.embeddings = std::move(embs);
        }
    }

    const std::vector<tcb::TrackRecord> records = run_tracker(frames, tracker_config);
    tcb::write_results(out_path, records);
    std::cout << "tracked " << frames.size() << " frames, wrote " << records.size()
              << " rows to " << out_path << "\n";
    return 0;
}

int cmd_eval(const std::string& gt_path, const std::string& results_path, double iou_thresh,
             const std::string& out_path) {
    const std::vector<tcb::TrackRecord> gt = tcb::read_track_records(gt_path);
    const std::vector<tcb::TrackRecord> pred = tcb::read_track_records(results_path);
    const tcb::MetricsReport report = tcb::evaluate(gt, pred, iou_thresh);

    std::cout << tcb::format_table(report) << "\n" << tcb::format_key_values(report);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw tcb::ValidationError("cannot write file: " + out_path);
        out << tcb::format_key_values(report);
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::int64_t seed_flag, bool seed_set,
                 const std::map<std::string, std::string>& overrides) {
    Config config = load_config(config_path, overrides);
    if (seed_set) config.set("seed", std::to_string(seed_flag));
    const tcb::ScenarioConfig scenario = tcb::scenario_config_from(config);
    const tcb::ScenarioBundle bundle = tcb::generate_scenario(scenario);

    tcb::SequenceMeta meta;
    meta.name = config.get_string("name", "synthetic");
    meta.fps = config.get_real("fps", 25.0);
    meta.frame_count = scenario.frames;
    meta.image_w = scenario.arena_w;
    meta.image_h = scenario.arena_h;
    meta.embedding_dim = scenario.embedding_dim;
    tcb::write_bundle(out_dir, bundle, meta);
    std::cout << "wrote scenario (" << scenario.frames << " frames, " << scenario.num_agents
              << " agents) to " << out_dir << "\n";
    return 0;
}

int cmd_subsample(const std::string& in_dir, double ratio, const std::string& out_dir) {
    const tcb::ScenarioBundle bundle = tcb::read_bundle(in_dir);
    const tcb::ScenarioBundle sampled = tcb::subsample(bundle, ratio);

    tcb::SequenceMeta meta = tcb::read_meta(std::filesystem::path(in_dir) / "meta.txt");
    meta.frame_count = static_cast<std::int64_t>(sampled.frames.size());
    meta.fps *= ratio;
    tcb::write_bundle(out_dir, sampled, meta);
    std::cout << "kept " << sampled.frames.size() << " frames at ratio " << ratio << " in "
              << out_dir << "\n";
    return 0;
}

struct AblationRow {
    std::string label;
    double mota = 0.0, idf1 = 0.0, hota = 0.0;
    double fp = 0.0, fn = 0.0, ids = 0.0;
};

AblationRow mean_over_seeds(const std::string& label, const tcb::ScenarioConfig& scenario,
                            const tcb::TrackerConfig& tracker, int seeds) {
    std::vector<tcb::MetricsReport> reports(seeds);
    tcb::parallel_for(static_cast<std::size_t>(seeds), [&](std::size_t s) {
        tcb::ScenarioConfig seeded = scenario;
        seeded.seed = scenario.seed + s;
        reports[s] = tcb::run_and_score(tcb::generate_scenario(seeded), tracker);
    });
    AblationRow row;
    row.label = label;
    for (const tcb::MetricsReport& r : reports) {
        row.mota += r.mota;
        row.idf1 += r.idf1;
        row.hota += r.hota;
        row.fp += static_cast<double>(r.fp);
        row.fn += static_cast<double>(r.fn);
        row.ids += static_cast<double>(r.id_switches);
    }
    const double n = static_cast<double>(seeds);
    row.mota /= n;
    row.idf1 /= n;
    row.hota /= n;
    row.fp /= n;
    row.fn /= n;
    row.ids /= n;
    return row;
}

void print_rows(const std::vector<AblationRow>& rows) {
    std::printf("%-14s %8s %8s %8s %8s %8s %8s\n", "mode", "MOTA", "IDF1", "HOTA", "FP", "FN",
                "IDs");
    for (const AblationRow& row : rows) {
        std::printf("%-14s %8.4f %8.4f %8.4f %8.1f %8.1f %8.1f\n", row.label.c_str(), row.mota,
                    row.idf1, row.hota, row.fp, row.fn, row.ids);
    }
}

int cmd_ablate(const std::string& scenario_path, const std::string& modes_csv, int seeds,
               const std::map<std::string, std::string>& overrides) {
    const Config config = load_config(scenario_path, overrides);
    const tcb::ScenarioConfig scenario = tcb::scenario_config_from(config);
    tcb::TrackerConfig base = tcb::tracker_config_from(config);

    std::vector<std::string> modes;
    std::stringstream stream(modes_csv);
    std::string mode;
    while (std::getline(stream, mode, ',')) {
        if (!mode.empty()) modes.push_back(mode);
    }
    if (modes.empty()) throw tcb::ValidationError("ablate: no modes given");

    std::vector<AblationRow> rows;
    for (const std::string& name : modes) {
        tcb::TrackerConfig tracker = base;
        tracker.fusion = tcb::fusion_mode_from_string(name);
        if (tracker.fusion == tcb::FusionMode::Linear) {
            // the paper-style grid search over the appearance weight
            for (int d = 1; d <= 9; ++d) {
                tracker.delta = 0.1 * d;
                char label[32];
                std::snprintf(label, sizeof(label), "linear d=%.1f", tracker.delta);
                rows.push_back(mean_over_seeds(label, scenario, tracker, seeds));
            }
        } else {
            rows.push_back(mean_over_seeds(name, scenario, tracker, seeds));
        }
    }
    print_rows(rows);
    return 0;
}

int cmd_losscheck(const std::string& size_str, int templates, std::uint64_t seed) {
    const auto sep = size_str.find('x');
    if (sep == std::string::npos) {
        throw tcb::ValidationError("losscheck: --size expects HxW, e.g. 16x16");
    }
    const int height = std::stoi(size_str.substr(0, sep));
    const int width = std::stoi(size_str.substr(sep + 1));
    if (height < 1 || width < 1 || templates < 1) {
        throw tcb::ValidationError("losscheck: size and template count must be positive");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    std::vector<tcb::Heatmap> preds, gts;
    for (int k = 0; k < templates; ++k) {
        tcb::Heatmap pred = tcb::Heatmap::zeros(height, width);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) pred.values(y, x) = unit(rng);
        }
        preds.push_back(std::move(pred));
        const double cx = static_cast<double>(rng() % width);
        const double cy = static_cast<double>(rng() % height);
        const double sigma = 1.0 + 0.1 * static_cast<double>(rng() % 20);
        gts.push_back(tcb::gaussian_heatmap({cx, cy, sigma}, height, width));
    }

    const tcb::LossReport report = tcb::logistic_mse_loss(preds, gts);

    const double step = 1e-4;
    double max_rel = 0.0;
    for (int k = 0; k < templates; ++k) {
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const double saved = preds[k].values(y, x);
                preds[k].values(y, x) = saved + step;
                const double up = tcb::logistic_mse_loss(preds, gts).loss;
                preds[k].values(y, x) = saved - step;
                const double down = tcb::logistic_mse_loss(preds, gts).loss;
                preds[k].values(y, x) = saved;
                const double fd = (up - down) / (2.0 * step);
                const double analytic = report.gradients[k](y, x);
                const double rel = std::abs(analytic - fd) /
                                   std::max({std::abs(analytic), std::abs(fd), 1e-8});
                max_rel = std::max(max_rel, rel);
            }
        }
    }
    std::printf("loss=%.9f\nmax_gradient_rel_error=%.3e\n", report.loss, max_rel);
    return 0;
}

int cmd_bench(int tracks, int dets, int frames_count) {
    if (tracks < 1 || dets < 1 || frames_count < 1) {
        throw tcb::ValidationError("bench: counts must be positive");
    }
    // crowd of agents on a grid; every frame re-associates all of them
    tcb::ScenarioConfig scenario;
    scenario.num_agents = tracks;
    scenario.frames = frames_count + 1;
    scenario.motion = tcb::MotionModel::SinusoidalDance;
    scenario.arena_w = 4000.0;
    scenario.arena_h = 4000.0;
    scenario.box_size = 50.0;
    scenario.appearance_gap = 0.2;
    scenario.embed_noise_sigma = 0.02;
    scenario.jitter_sigma = 1.0;
    scenario.fp_rate = std::max(0, dets - tracks);
    scenario.seed = 99;
    const tcb::ScenarioBundle bundle = tcb::generate_scenario(scenario);

    tcb::Tracker tracker{tcb::TrackerConfig{}};
    std::vector<double> latencies_ms;
    bool first = true;
    for (const tcb::FrameInput& frame : bundle.frames) {
        const auto start = std::chrono::steady_clock::now();
        tracker.step(frame);
        const auto stop = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(stop - start).count();
        if (!first) latencies_ms.push_back(ms);  // first frame only creates tracks
        first = false;
    }

    std::printf("frames=%zu tracks=%d dets_per_frame≈%d\n", latencies_ms.size(), tracks, dets);
    std::printf("p50=%.3fms p95=%.3fms p99=%.3fms\n", percentile(latencies_ms, 0.50),
                percentile(latencies_ms, 0.95), percentile(latencies_ms, 0.99));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"temporal-correlation multi-object tracking engine"};
    app.require_subcommand(1);

    std::map<std::string, std::string> overrides;

    // track
    auto* track = app.add_subcommand("track", "associate detections into tracks");
    std::string dets_path, embs_path, config_path, out_path;
    std::string fusion_flag;
    double delta_flag = -1.0;
    bool no_kalman = false;
    track->add_option("--dets", dets_path, "detection CSV")->required();
    track->add_option("--embs", embs_path, "embedding file")->required();
    track->add_option("--config", config_path, "key=value config file");
    track->add_option("--out", out_path, "output results file")->required();
    track->add_option("--fusion", fusion_flag, "product | linear | iou");
    track->add_option("--delta", delta_flag, "linear fusion weight");
    track->add_flag("--no-kalman", no_kalman, "disable motion prediction");
    add_config_flags(track, tcb::tracker_config_keys(), overrides);

    // eval
    auto* eval = app.add_subcommand("eval", "score results against ground truth");
    std::string gt_path, results_path, eval_out;
    double iou_thresh = 0.5;
    eval->add_option("--gt", gt_path, "ground-truth CSV")->required();
    eval->add_option("--results", results_path, "tracker results CSV")->required();
    eval->add_option("--iou-thresh", iou_thresh, "CLEAR/IDF1 IoU threshold");
    eval->add_option("--out", eval_out, "also write the key=value summary here");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic scenario bundle");
    std::string sim_config, sim_out;
    std::int64_t seed_flag = 0;
    simulate->add_option("--config", sim_config, "key=value scenario config");
    simulate->add_option("--out", sim_out, "output directory")->required();
    auto* seed_opt = simulate->add_option("--seed", seed_flag, "scenario seed");
    add_config_flags(simulate, tcb::scenario_config_keys(), overrides);

    // subsample
    auto* sub = app.add_subcommand("subsample", "keep every k-th frame of a bundle");
    std::string sub_in, sub_out;
    double ratio = 1.0;
    sub->add_option("--in", sub_in, "input bundle directory")->required();
    sub->add_option("--ratio", ratio, "kept-frame ratio: 1.0, 0.5 or 0.33")->required();
    sub->add_option("--out", sub_out, "output bundle directory")->required();

    // ablate
    auto* ablate = app.add_subcommand("ablate", "compare fusion modes over seeded scenarios");
    std::string scenario_path, modes = "product,linear,iou";
    int seeds = 5;
    ablate->add_option("--scenario", scenario_path, "scenario config file")->required();
    ablate->add_option("--modes", modes, "comma-separated fusion modes");
    ablate->add_option("--seeds", seeds, "seeds per mode");
    add_config_flags(ablate, tcb::scenario_config_keys(), overrides);
    add_config_flags(ablate, tcb::tracker_config_keys(), overrides);

    // losscheck
    auto* losscheck = app.add_subcommand("losscheck", "loss value and gradient check");
    std::string size_str = "16x16";
    int templates = 2;
    std::uint64_t loss_seed = 1;
    losscheck->add_option("--size", size_str, "heatmap size HxW");
    losscheck->add_option("--templates", templates, "number of templates");
    losscheck->add_option("--seed", loss_seed, "random seed");

    // bench
    auto* bench = app.add_subcommand("bench", "per-frame association latency percentiles");
    int bench_tracks = 200, bench_dets = 200, bench_frames = 100;
    bench->add_option("--tracks", bench_tracks, "simultaneous tracks");
    bench->add_option("--dets", bench_dets, "detections per frame");
    bench->add_option("--frames", bench_frames, "measured frames");

    CLI11_PARSE(app, argc, argv);

    try {
        if (track->parsed()) {
            if (!fusion_flag.empty()) overrides["fusion"] = fusion_flag;
            if (delta_flag >= 0.0) overrides["delta"] = std::to_string(delta_flag);
            if (no_kalman) overrides["use_kalman"] = "false";
            return cmd_track(dets_path, embs_path, config_path, out_path, overrides);
        }
        if (eval->parsed()) return cmd_eval(gt_path, results_path, iou_thresh, eval_out);
        if (simulate->parsed()) {
            return cmd_simulate(sim_config, sim_out, seed_flag, seed_opt->count() > 0,
                                overrides);
        }
        if (sub->parsed()) return cmd_subsample(sub_in, ratio, sub_out);
        if (ablate->parsed()) return cmd_ablate(scenario_path, modes, seeds, overrides);
        if (losscheck->parsed()) return cmd_losscheck(size_str, templates, loss_seed);
        if (bench->parsed()) return cmd_bench(bench_tracks, bench_dets, bench_frames);
    } catch (const tcb::ValidationError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "internal error: " << error.what() << "\n";
        return 1;
    }
    return 0;
}
