#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <tcb/errors.hpp>
#include <tcb/simulator.hpp>
#include <tcb/tracker.hpp>

namespace tcb {

/// Flat key=value configuration. '#' starts a comment, '=' separates, keys
/// are case-sensitive. Serialisation is sorted, so files are diff-friendly
/// and byte-deterministic.
class Config {
public:
    Config() = default;

    static Config from_file(const std::filesystem::path& path);
    static Config from_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.contains(key); }
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_real(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    std::string serialize() const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// One overridable key: every config key doubles as a --key CLI flag.
struct ConfigKey {
    const char* name;
    const char* help;
};

std::vector<ConfigKey> tracker_config_keys();
std::vector<ConfigKey> scenario_config_keys();

TrackerConfig tracker_config_from(const Config& config);
ScenarioConfig scenario_config_from(const Config& config);

}  // namespace tcb
