#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace triq::cli {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const RawEntry& e, std::string_view key, std::string_view msg) {
    throw ConfigError(e.origin + ": key '" + std::string(key) + "': " + std::string(msg));
}

double to_double(const RawEntry& e, std::string_view key) {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last || !std::isfinite(v)) fail(e, key, "expected a number, got '" + e.value + "'");
    return v;
}

template <class Int>
Int to_int(const RawEntry& e, std::string_view key) {
    Int v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last) fail(e, key, "expected an integer, got '" + e.value + "'");
    return v;
}

std::array<double, 3> to_triple(const RawEntry& e, std::string_view key) {
    std::array<double, 3> out{};
    std::size_t n = 0;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (n == 3) fail(e, key, "expected three comma-separated numbers");
        out[n++] = to_double(RawEntry{trim(item), e.origin}, key);
    }
    if (n != 3) fail(e, key, "expected three comma-separated numbers");
    return out;
}

std::string one_of(const RawEntry& e, std::string_view key, std::initializer_list<std::string_view> choices) {
    for (auto c : choices)
        if (e.value == c) return e.value;
    std::string msg = "expected one of";
    for (auto c : choices) msg += " " + std::string(c);
    fail(e, key, msg + ", got '" + e.value + "'");
}

}  // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "state",          "circuit_file",   "spins.t1_s",     "spins.t2_s",      "spins.offsets_hz",
        "spins.j12_hz",   "spins.j13_hz",   "spins.j23_hz",   "spins.hamiltonian", "bath.mode",
        "bath.ou_sigma",  "bath.tau_c_s",   "bath.trajectories", "bath.sigma_min", "bath.sigma_max",
        "dd.sequence",    "dd.tau_s",       "dd.cycles",      "dd.flip_error",   "grid.t_final_s",
        "grid.sample_s",  "grid.dt_s",      "seed",           "tomo.noise_sigma", "tomo.records_file",
        "decay.threshold", "calibrate.qubit",
    };
    return keys;
}

std::string env_name(std::string_view key) {
    std::string out = "TRIQ_";
    for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

RawConfig parse_config_text(std::string_view text, const std::string& source) {
    RawConfig raw;
    const auto& keys = known_keys();
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::string origin = source + ":" + std::to_string(line_no);
        auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(origin + ": expected 'key = value'");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(origin + ": unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(origin + ": key '" + key + "' has an empty value");
        if (raw.entries.count(key)) throw ConfigError(origin + ": duplicate key '" + key + "'");
        raw.entries[key] = RawEntry{value, origin};
    }
    return raw;
}

RawConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    RawConfig raw = parse_config_text(ss.str(), path.string());
    raw.base_dir = path.parent_path();
    return raw;
}

void apply_env_overrides(RawConfig& raw, const EnvLookup& lookup) {
    for (const auto& key : known_keys()) {
        const std::string name = env_name(key);
        if (const char* v = lookup(name.c_str())) {
            const std::string value = trim(v);
            if (value.empty()) throw ConfigError("env " + name + ": empty value");
            raw.entries[key] = RawEntry{value, "env " + name};
        }
    }
}

void set_override(RawConfig& raw, const std::string& key, std::string value, std::string origin) {
    raw.entries[key] = RawEntry{std::move(value), std::move(origin)};
}

NoiseModel ExperimentConfig::noise_model() const {
    NoiseModel n = NoiseModel::from_spins(spins);
    n.bath_mode = bath_mode;
    n.ou_sigma = ou_sigma;
    n.ou_tau_c = tau_c_s;
    n.trajectories = trajectories;
    n.seed = seed.value_or(0);
    return n;
}

std::uint64_t ExperimentConfig::require_seed(std::string_view command) const {
    if (!seed) throw ConfigError(std::string(command) + ": 'seed' is required (config key, TRIQ_SEED or --seed)");
    return *seed;
}

ExperimentConfig resolve(const RawConfig& raw) {
    ExperimentConfig c;
    c.spins = SpinSystem::default_system();
    auto path_of = [&](const RawEntry& e) {
        std::filesystem::path p(e.value);
        return p.is_absolute() || raw.base_dir.empty() ? p : raw.base_dir / p;
    };
    auto positive = [](const RawEntry& e, std::string_view key, double v) {
        if (!(v > 0.0)) fail(e, key, "must be > 0");
        return v;
    };
    auto non_negative = [](const RawEntry& e, std::string_view key, double v) {
        if (!(v >= 0.0)) fail(e, key, "must be >= 0");
        return v;
    };

    for (const auto& [key, e] : raw.entries) {
        if (key == "state") c.state = one_of(e, key, {"ghz", "w", "wwbar"});
        else if (key == "circuit_file") c.circuit_file = path_of(e);
        else if (key == "spins.t1_s") c.spins.t1_s = to_triple(e, key);
        else if (key == "spins.t2_s") c.spins.t2_s = to_triple(e, key);
        else if (key == "spins.offsets_hz") c.spins.offsets_hz = to_triple(e, key);
        else if (key == "spins.j12_hz") c.spins.j_hz[0] = to_double(e, key);
        else if (key == "spins.j13_hz") c.spins.j_hz[1] = to_double(e, key);
        else if (key == "spins.j23_hz") c.spins.j_hz[2] = to_double(e, key);
        else if (key == "spins.hamiltonian") c.hamiltonian = one_of(e, key, {"on", "off"}) == "on";
        else if (key == "bath.mode")
            c.bath_mode = one_of(e, key, {"markovian", "correlated"}) == "markovian" ? BathMode::markovian
                                                                                    : BathMode::correlated;
        else if (key == "bath.ou_sigma") c.ou_sigma = non_negative(e, key, to_double(e, key));
        else if (key == "bath.tau_c_s") c.tau_c_s = positive(e, key, to_double(e, key));
        else if (key == "bath.trajectories") {
            c.trajectories = to_int<int>(e, key);
            if (c.trajectories < 1) fail(e, key, "must be >= 1");
        } else if (key == "bath.sigma_min") c.sigma_min = positive(e, key, to_double(e, key));
        else if (key == "bath.sigma_max") c.sigma_max = positive(e, key, to_double(e, key));
        else if (key == "dd.sequence") c.dd = one_of(e, key, {"none", "xy16s", "kddxy", "single_axis"});
        else if (key == "dd.tau_s") c.dd_tau_s = positive(e, key, to_double(e, key));
        else if (key == "dd.cycles") {
            c.dd_cycles = to_int<int>(e, key);
            if (c.dd_cycles < 1) fail(e, key, "must be >= 1");
        } else if (key == "dd.flip_error") c.flip_error = to_double(e, key);
        else if (key == "grid.t_final_s") c.t_final_s = non_negative(e, key, to_double(e, key));
        else if (key == "grid.sample_s") c.sample_s = positive(e, key, to_double(e, key));
        else if (key == "grid.dt_s") c.dt_s = positive(e, key, to_double(e, key));
        else if (key == "seed") c.seed = to_int<std::uint64_t>(e, key);
        else if (key == "tomo.noise_sigma") c.noise_sigma = non_negative(e, key, to_double(e, key));
        else if (key == "tomo.records_file") c.records_file = path_of(e);
        else if (key == "decay.threshold") c.decay_threshold = non_negative(e, key, to_double(e, key));
        else if (key == "calibrate.qubit") {
            c.calibrate_qubit = to_int<int>(e, key);
            if (c.calibrate_qubit < 1 || c.calibrate_qubit > 3) fail(e, key, "must be 1, 2 or 3");
        } else {
            throw ConfigError(e.origin + ": unknown key '" + key + "'");
        }
    }

    try {
        c.spins.validate();
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("spins: ") + ex.what());
    }
    if (c.state && c.circuit_file) throw ConfigError("'state' and 'circuit_file' are mutually exclusive");
    if (!(c.sigma_min < c.sigma_max)) throw ConfigError("bath.sigma_min must be below bath.sigma_max");
    if (c.dd != "none" && !(c.dd_tau_s > 0.0)) throw ConfigError("dd.tau_s is required when dd.sequence is set");
    if (c.flip_error <= -1.0) throw ConfigError("dd.flip_error must be > -1");
    return c;
}

}  // namespace triq::cli
