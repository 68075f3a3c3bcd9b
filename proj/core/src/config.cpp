#include <tcb/config.hpp>

#include <fstream>
#include <sstream>

namespace tcb {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

Config Config::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str(), path.string());
}

Config Config::from_string(const std::string& text, const std::string& origin) {
    Config config;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(origin + ":" + std::to_string(line_no) +
                                  ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ValidationError(origin + ":" + std::to_string(line_no) + ": empty key");
        }
        config.values_[key] = value;
    }
    return config;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_real(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        const double value = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': not a real number: " + it->second);
    }
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        const std::int64_t value = std::stoll(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': not an integer: " + it->second);
    }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ValidationError("config key '" + key + "': not a boolean: " + v);
}

std::string Config::serialize() const {
    std::string out;
    for (const auto& [key, value] : values_) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

std::vector<ConfigKey> tracker_config_keys() {
    return {
        {"tau_high", "high/low confidence split on the fused score"},
        {"tau_low", "discard floor for detections"},
        {"stage1_min_score", "fused-score gate for association round 1"},
        {"stage2_min_iou", "IoU gate for association round 2"},
        {"stage3_min_iou", "IoU gate for association round 3"},
        {"gamma", "template EMA weight"},
        {"new_track_min_conf", "birth gate on detector confidence"},
        {"max_age", "frames a lost track survives"},
        {"use_kalman", "constant-velocity motion prediction on/off"},
        {"fusion", "association weighting: product | linear | iou"},
        {"delta", "appearance weight for linear fusion"},
    };
}

std::vector<ConfigKey> scenario_config_keys() {
    return {
        {"num_agents", "simulated identities"},
        {"frames", "sequence length"},
        {"arena_w", "arena width in pixels"},
        {"arena_h", "arena height in pixels"},
        {"motion", "trajectory family: linear | crossing | sinusoidal-dance"},
        {"box_size", "agent box side in pixels"},
        {"appearance_gap", "max inter-identity cosine"},
        {"embed_noise_sigma", "per-channel embedding noise"},
        {"jitter_sigma", "box jitter in pixels"},
        {"drop_prob", "per-detection dropout probability"},
        {"fp_rate", "expected false positives per frame"},
        {"conf_low", "confidence range low end"},
        {"conf_high", "confidence range high end"},
        {"seed", "scenario seed"},
        {"embedding_dim", "embedding dimensionality"},
    };
}

TrackerConfig tracker_config_from(const Config& config) {
    TrackerConfig defaults;
    TrackerConfig out;
    out.tau_high = config.get_real("tau_high", defaults.tau_high);
    out.tau_low = config.get_real("tau_low", defaults.tau_low);
    out.stage1_min_score = config.get_real("stage1_min_score", defaults.stage1_min_score);
    out.stage2_min_iou = config.get_real("stage2_min_iou", defaults.stage2_min_iou);
    out.stage3_min_iou = config.get_real("stage3_min_iou", defaults.stage3_min_iou);
    out.gamma = config.get_real("gamma", defaults.gamma);
    out.new_track_min_conf = config.get_real("new_track_min_conf", defaults.new_track_min_conf);
    out.max_age = static_cast<int>(config.get_int("max_age", defaults.max_age));
    out.use_kalman = config.get_bool("use_kalman", defaults.use_kalman);
    out.fusion = fusion_mode_from_string(config.get_string("fusion", to_string(defaults.fusion)));
    out.delta = config.get_real("delta", defaults.delta);
    out.validate();
    return out;
}

ScenarioConfig scenario_config_from(const Config& config) {
    ScenarioConfig defaults;
    ScenarioConfig out;
    out.num_agents = static_cast<int>(config.get_int("num_agents", defaults.num_agents));
    out.frames = static_cast<int>(config.get_int("frames", defaults.frames));
    out.arena_w = config.get_real("arena_w", defaults.arena_w);
    out.arena_h = config.get_real("arena_h", defaults.arena_h);
    out.motion = motion_model_from_string(config.get_string("motion", to_string(defaults.motion)));
    out.box_size = config.get_real("box_size", defaults.box_size);
    out.appearance_gap = config.get_real("appearance_gap", defaults.appearance_gap);
    out.embed_noise_sigma = config.get_real("embed_noise_sigma", defaults.embed_noise_sigma);
    out.jitter_sigma = config.get_real("jitter_sigma", defaults.jitter_sigma);
    out.drop_prob = config.get_real("drop_prob", defaults.drop_prob);
    out.fp_rate = config.get_real("fp_rate", defaults.fp_rate);
    out.conf_low = config.get_real("conf_low", defaults.conf_low);
    out.conf_high = config.get_real("conf_high", defaults.conf_high);
    out.seed = static_cast<std::uint64_t>(config.get_int("seed", static_cast<std::int64_t>(defaults.seed)));
    out.embedding_dim = static_cast<int>(config.get_int("embedding_dim", defaults.embedding_dim));
    out.validate();
    return out;
}

}  // namespace tcb
