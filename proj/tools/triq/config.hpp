#pragma once

#include <triq/noise.hpp>
#include <triq/spin_system.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace triq::cli {

// Bad or missing configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RawEntry {
    std::string value;
    std::string origin;  // "file.conf:12", "env TRIQ_SEED", "--seed"
};

// Flat `key = value` lines, `#` comments. Keys are checked against the known
// set while parsing; duplicates are errors.
struct RawConfig {
    std::map<std::string, RawEntry> entries;
    std::filesystem::path base_dir;  // relative file paths resolve here
};

const std::vector<std::string>& known_keys();
// bath.tau_c_s -> TRIQ_BATH_TAU_C_S
std::string env_name(std::string_view key);

RawConfig parse_config_text(std::string_view text, const std::string& source);
RawConfig load_config_file(const std::filesystem::path& path);

using EnvLookup = std::function<const char*(const char*)>;
// Environment values replace file values for every known key.
void apply_env_overrides(RawConfig& raw, const EnvLookup& lookup);
void set_override(RawConfig& raw, const std::string& key, std::string value, std::string origin);

struct ExperimentConfig {
    std::optional<std::string> state;  // ghz | w | wwbar
    std::optional<std::filesystem::path> circuit_file;

    SpinSystem spins;
    bool hamiltonian = false;  // false: H_s = 0 (relaxation only)

    BathMode bath_mode = BathMode::markovian;
    double ou_sigma = 0.0;
    double tau_c_s = 0.01;
    int trajectories = 256;
    double sigma_min = 0.1;
    double sigma_max = 1000.0;

    std::string dd = "none";  // none | xy16s | kddxy | single_axis
    double dd_tau_s = 0.0;
    int dd_cycles = 0;  // 0: as many as fit in grid.t_final_s
    double flip_error = 0.0;

    double t_final_s = 1.0;
    double sample_s = 0.001;
    std::optional<double> dt_s;

    std::optional<std::uint64_t> seed;

    double noise_sigma = 0.0;
    std::optional<std::filesystem::path> records_file;

    double decay_threshold = 0.0;
    int calibrate_qubit = 1;

    NoiseModel noise_model() const;
    std::uint64_t require_seed(std::string_view command) const;
};

ExperimentConfig resolve(const RawConfig& raw);

}  // namespace triq::cli
