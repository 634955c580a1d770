#include "ramp_sentinel/config.hpp"

#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

namespace ramp {
namespace {

[[nodiscard]] std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

[[nodiscard]] double parse_double(std::string_view value, std::string_view key, int line) {
    const std::string_view v = trim(value);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("expected a number for '" + std::string(key) + "', got '" +
                              std::string(v) + "'",
                          line);
    }
    return out;
}

[[nodiscard]] int parse_int(std::string_view value, std::string_view key, int line) {
    const std::string_view v = trim(value);
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("expected an integer for '" + std::string(key) + "', got '" +
                              std::string(v) + "'",
                          line);
    }
    return out;
}

[[nodiscard]] bool parse_bool(std::string_view value, std::string_view key, int line) {
    const std::string_view v = trim(value);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("expected true or false for '" + std::string(key) + "', got '" +
                          std::string(v) + "'",
                      line);
}

[[nodiscard]] std::vector<std::string_view> split(std::string_view value, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const std::size_t pos = value.find(sep);
        if (pos == std::string_view::npos) {
            parts.push_back(trim(value));
            return parts;
        }
        parts.push_back(trim(value.substr(0, pos)));
        value.remove_prefix(pos + 1);
    }
}

[[nodiscard]] std::vector<double> parse_list(std::string_view value, std::string_view key,
                                             int line) {
    std::vector<double> out;
    for (const std::string_view part : split(value, ',')) {
        out.push_back(parse_double(part, key, line));
    }
    return out;
}

// "start:value, start:value, ..." piecewise-constant profile.
[[nodiscard]] std::vector<DemandSegment> parse_profile(std::string_view value,
                                                       std::string_view key, int line) {
    std::vector<DemandSegment> out;
    for (const std::string_view part : split(value, ',')) {
        const std::size_t pos = part.find(':');
        if (pos == std::string_view::npos) {
            throw ConfigError("expected start:value pairs for '" + std::string(key) + "'", line);
        }
        DemandSegment seg;
        seg.start_cycle = parse_double(part.substr(0, pos), key, line);
        seg.rate = parse_double(part.substr(pos + 1), key, line);
        out.push_back(seg);
    }
    return out;
}

struct SeedSpec {
    int count = 20;
    std::uint64_t base = 1;
};

// Routes one key to its field. `seed_spec` collects the two seed keys so the
// seed list can be materialized once every key has been seen.
void set_value(AppConfig& cfg, SeedSpec& seeds, std::string_view section, std::string_view key,
               std::string_view value, int line) {
    ScenarioConfig& sc = cfg.scenario;
    if (section == "solver") {
        if (key == "beta") cfg.solver.beta = parse_double(value, key, line);
        else if (key == "mu1_cap") cfg.solver.mu1_cap = parse_double(value, key, line);
        else if (key == "epsilon_margin") cfg.solver.epsilon_margin = parse_double(value, key, line);
        else if (key == "objective_tol") cfg.solver.objective_tol = parse_double(value, key, line);
        else if (key == "max_newton_iters") cfg.solver.max_newton_iters = parse_int(value, key, line);
        else throw ConfigError("unknown key 'solver." + std::string(key) + "'", line);
    } else if (section == "plant") {
        if (key == "alpha") sc.penetration.alpha = parse_double(value, key, line);
        else if (key == "theta_bound") sc.penetration.theta_bound = parse_double(value, key, line);
        else if (key == "mode") {
            const std::string_view v = trim(value);
            if (v == "bernoulli") sc.penetration.mode = PenetrationMode::bernoulli_tagging;
            else if (v == "synthetic") sc.penetration.mode = PenetrationMode::synthetic_theta;
            else throw ConfigError("mode must be bernoulli or synthetic", line);
        } else if (key == "q_capacity") sc.q_capacity = parse_double(value, key, line);
        else if (key == "delta_t") {
            // One cycle length everywhere: the design certificate only covers
            // the plant when both use the same dt.
            sc.dt = parse_double(value, key, line);
            cfg.solver.dt = sc.dt;
        } else if (key == "demand") sc.demand_profile = parse_profile(value, key, line);
        else if (key == "mainline") sc.mainline_profile = parse_profile(value, key, line);
        else if (key == "occupancy_exponent") sc.occupancy.exponent = parse_double(value, key, line);
        else if (key == "occupancy_coupling") sc.occupancy.coupling = parse_double(value, key, line);
        else throw ConfigError("unknown key 'plant." + std::string(key) + "'", line);
    } else if (section == "noise") {
        if (key == "window_start") sc.noise.window_start = parse_int(value, key, line);
        else if (key == "window_end") sc.noise.window_end = parse_int(value, key, line);
        else if (key == "flow_bound") sc.noise.flow_bound = parse_double(value, key, line);
        else if (key == "count_bound") sc.noise.count_bound = parse_double(value, key, line);
        else throw ConfigError("unknown key 'noise." + std::string(key) + "'", line);
    } else if (section == "metering") {
        if (key == "k_i") sc.metering.k_i = parse_double(value, key, line);
        else if (key == "o_m_target") sc.metering.o_m_target = parse_double(value, key, line);
        else if (key == "o_a_threshold") sc.metering.o_a_threshold = parse_double(value, key, line);
        else if (key == "r_min") sc.metering.r_min = parse_double(value, key, line);
        else if (key == "r_max") sc.metering.r_max = parse_double(value, key, line);
        else throw ConfigError("unknown key 'metering." + std::string(key) + "'", line);
    } else if (section == "harness") {
        if (key == "horizon") sc.horizon = parse_int(value, key, line);
        else if (key == "warmup") sc.warmup = parse_int(value, key, line);
        else if (key == "seed_count") seeds.count = parse_int(value, key, line);
        else if (key == "seed_base") seeds.base = static_cast<std::uint64_t>(parse_int(value, key, line));
        else if (key == "eps_flow") sc.eps_flow = parse_double(value, key, line);
        else if (key == "min_ratio_sum") sc.min_ratio_sum = parse_double(value, key, line);
        else if (key == "clamp_robust") sc.clamp_robust = parse_bool(value, key, line);
        else if (key == "per_cycle_ratio") sc.per_cycle_ratio = parse_bool(value, key, line);
        else if (key == "kalman_k_f") sc.kalman.k_f = parse_double(value, key, line);
        else if (key == "kalman_q_bb") sc.kalman.q_bb = parse_double(value, key, line);
        else if (key == "vehicle_length") sc.kalman.vehicle_length = parse_double(value, key, line);
        else if (key == "detector_length") sc.kalman.detector_length = parse_double(value, key, line);
        else if (key == "sweep_alphas") cfg.sweep.alphas = parse_list(value, key, line);
        else if (key == "sweep_thetas") cfg.sweep.thetas = parse_list(value, key, line);
        else if (key == "sweep_noise_bounds") cfg.sweep.noise_bounds = parse_list(value, key, line);
        else throw ConfigError("unknown key 'harness." + std::string(key) + "'", line);
    } else {
        throw ConfigError("unknown section '" + std::string(section) + "'", line);
    }
}

void materialize_seeds(AppConfig& cfg, const SeedSpec& seeds, int line) {
    if (seeds.count <= 0) throw ConfigError("seed_count must be positive", line);
    cfg.scenario.seeds.clear();
    for (int i = 0; i < seeds.count; ++i) {
        cfg.scenario.seeds.push_back(seeds.base + static_cast<std::uint64_t>(i));
    }
}

void check_profile(const std::vector<DemandSegment>& profile, std::string_view name) {
    if (profile.empty()) throw ConfigError(std::string(name) + " profile must be nonempty");
    for (std::size_t i = 1; i < profile.size(); ++i) {
        if (profile[i].start_cycle <= profile[i - 1].start_cycle) {
            throw ConfigError(std::string(name) + " profile starts must be strictly increasing");
        }
    }
}

[[nodiscard]] std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("0");
}

[[nodiscard]] std::string fmt_profile(const std::vector<DemandSegment>& profile) {
    std::string out;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (i > 0) out += ",";
        out += fmt(profile[i].start_cycle) + ":" + fmt(profile[i].rate);
    }
    return out;
}

[[nodiscard]] std::string fmt_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += fmt(values[i]);
    }
    return out;
}

} // namespace

AppConfig parse_config(std::string_view text) {
    AppConfig cfg;
    SeedSpec seeds;
    std::string section;
    int line_number = 0;
    std::string_view rest = text;
    bool saw_seed_key = false;
    while (!rest.empty() || line_number == 0) {
        std::string_view line;
        const std::size_t pos = rest.find('\n');
        if (pos == std::string_view::npos) {
            line = rest;
            rest = {};
        } else {
            line = rest.substr(0, pos);
            rest.remove_prefix(pos + 1);
        }
        ++line_number;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#' || t.front() == ';') {
            if (rest.empty()) break;
            continue;
        }
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw ConfigError("malformed section header", line_number);
            }
            section = std::string(trim(t.substr(1, t.size() - 2)));
        } else {
            const std::size_t eq = t.find('=');
            if (eq == std::string_view::npos) {
                throw ConfigError("expected 'key = value'", line_number);
            }
            if (section.empty()) {
                throw ConfigError("key outside any [section]", line_number);
            }
            const std::string_view key = trim(t.substr(0, eq));
            const std::string_view value = trim(t.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty key", line_number);
            if (key == "seed_count" || key == "seed_base") saw_seed_key = true;
            set_value(cfg, seeds, section, key, value, line_number);
        }
        if (rest.empty()) break;
    }
    if (saw_seed_key) materialize_seeds(cfg, seeds, 0);
    validate_config(cfg);
    return cfg;
}

void apply_override(AppConfig& cfg, std::string_view dotted_key, std::string_view value) {
    const std::vector<std::string_view> parts = split(dotted_key, '.');
    if (parts.size() < 2) {
        throw ConfigError("override key must look like section.key, got '" +
                          std::string(dotted_key) + "'");
    }
    const std::string_view section = parts[parts.size() - 2];
    const std::string_view key = parts.back();
    SeedSpec seeds;
    seeds.count = static_cast<int>(cfg.scenario.seeds.size());
    seeds.base = cfg.scenario.seeds.empty() ? 1 : cfg.scenario.seeds.front();
    set_value(cfg, seeds, section, key, value, 0);
    if (key == "seed_count" || key == "seed_base") materialize_seeds(cfg, seeds, 0);
}

void validate_config(const AppConfig& cfg) {
    const ScenarioConfig& sc = cfg.scenario;
    if (!(sc.penetration.alpha > 0.0 && sc.penetration.alpha <= 1.0)) {
        throw ConfigError("alpha must be in (0, 1]");
    }
    if (!(sc.penetration.theta_bound >= 0.0)) throw ConfigError("theta_bound must be >= 0");
    if (!(sc.dt > 0.0)) throw ConfigError("delta_t must be positive");
    if (!(sc.q_capacity > 0.0)) throw ConfigError("q_capacity must be positive");
    if (sc.warmup < 0 || sc.warmup >= sc.horizon) {
        throw ConfigError("requires 0 <= warmup < horizon");
    }
    if (!(sc.noise.flow_bound >= 0.0) || !(sc.noise.count_bound >= 0.0)) {
        throw ConfigError("noise bounds must be >= 0");
    }
    if (!(sc.metering.r_min > 0.0) || sc.metering.r_min > sc.metering.r_max) {
        throw ConfigError("requires 0 < r_min <= r_max");
    }
    if (sc.metering.o_m_target < 0.0 || sc.metering.o_m_target > 1.0 ||
        sc.metering.o_a_threshold < 0.0 || sc.metering.o_a_threshold > 1.0) {
        throw ConfigError("metering occupancy targets must be in [0, 1]");
    }
    if (!(sc.kalman.k_f > 0.0 && sc.kalman.k_f <= 1.0)) {
        throw ConfigError("kalman_k_f must be in (0, 1]");
    }
    if (!(sc.kalman.vehicle_length > 0.0) || !(sc.kalman.detector_length > 0.0)) {
        throw ConfigError("kalman lengths must be positive");
    }
    if (!(cfg.solver.beta > 0.0)) throw ConfigError("beta must be positive");
    if (!(cfg.solver.mu1_cap > 0.0)) throw ConfigError("mu1_cap must be positive");
    if (!(cfg.solver.epsilon_margin > 0.0)) throw ConfigError("epsilon_margin must be positive");
    if (sc.seeds.empty()) throw ConfigError("seed list must be nonempty");
    check_profile(sc.demand_profile, "demand");
    check_profile(sc.mainline_profile, "mainline");
    if (cfg.sweep.alphas.empty() || cfg.sweep.thetas.empty() || cfg.sweep.noise_bounds.empty()) {
        throw ConfigError("sweep grids must be nonempty");
    }
}

std::string emit_config(const AppConfig& cfg) {
    const ScenarioConfig& sc = cfg.scenario;
    std::string out;
    out += "[solver]\n";
    out += "beta = " + fmt(cfg.solver.beta) + "\n";
    out += "mu1_cap = " + fmt(cfg.solver.mu1_cap) + "\n";
    out += "epsilon_margin = " + fmt(cfg.solver.epsilon_margin) + "\n";
    out += "objective_tol = " + fmt(cfg.solver.objective_tol) + "\n";
    out += "max_newton_iters = " + std::to_string(cfg.solver.max_newton_iters) + "\n";
    out += "\n[plant]\n";
    out += "alpha = " + fmt(sc.penetration.alpha) + "\n";
    out += std::string("mode = ") +
           (sc.penetration.mode == PenetrationMode::bernoulli_tagging ? "bernoulli" : "synthetic") +
           "\n";
    out += "theta_bound = " + fmt(sc.penetration.theta_bound) + "\n";
    out += "q_capacity = " + fmt(sc.q_capacity) + "\n";
    out += "delta_t = " + fmt(sc.dt) + "\n";
    out += "demand = " + fmt_profile(sc.demand_profile) + "\n";
    out += "mainline = " + fmt_profile(sc.mainline_profile) + "\n";
    out += "occupancy_exponent = " + fmt(sc.occupancy.exponent) + "\n";
    out += "occupancy_coupling = " + fmt(sc.occupancy.coupling) + "\n";
    out += "\n[noise]\n";
    out += "window_start = " + std::to_string(sc.noise.window_start) + "\n";
    out += "window_end = " + std::to_string(sc.noise.window_end) + "\n";
    out += "flow_bound = " + fmt(sc.noise.flow_bound) + "\n";
    out += "count_bound = " + fmt(sc.noise.count_bound) + "\n";
    out += "\n[metering]\n";
    out += "k_i = " + fmt(sc.metering.k_i) + "\n";
    out += "o_m_target = " + fmt(sc.metering.o_m_target) + "\n";
    out += "o_a_threshold = " + fmt(sc.metering.o_a_threshold) + "\n";
    out += "r_min = " + fmt(sc.metering.r_min) + "\n";
    out += "r_max = " + fmt(sc.metering.r_max) + "\n";
    out += "\n[harness]\n";
    out += "horizon = " + std::to_string(sc.horizon) + "\n";
    out += "warmup = " + std::to_string(sc.warmup) + "\n";
    out += "seed_count = " + std::to_string(sc.seeds.size()) + "\n";
    out += "seed_base = " + std::to_string(sc.seeds.empty() ? 1 : sc.seeds.front()) + "\n";
    out += "eps_flow = " + fmt(sc.eps_flow) + "\n";
    out += "min_ratio_sum = " + fmt(sc.min_ratio_sum) + "\n";
    out += std::string("clamp_robust = ") + (sc.clamp_robust ? "true" : "false") + "\n";
    out += std::string("per_cycle_ratio = ") + (sc.per_cycle_ratio ? "true" : "false") + "\n";
    out += "kalman_k_f = " + fmt(sc.kalman.k_f) + "\n";
    out += "kalman_q_bb = " + fmt(sc.kalman.q_bb) + "\n";
    out += "vehicle_length = " + fmt(sc.kalman.vehicle_length) + "\n";
    out += "detector_length = " + fmt(sc.kalman.detector_length) + "\n";
    out += "sweep_alphas = " + fmt_list(cfg.sweep.alphas) + "\n";
    out += "sweep_thetas = " + fmt_list(cfg.sweep.thetas) + "\n";
    out += "sweep_noise_bounds = " + fmt_list(cfg.sweep.noise_bounds) + "\n";
    return out;
}

} // namespace ramp
