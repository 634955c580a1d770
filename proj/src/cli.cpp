#include "ramp_sentinel/cli.hpp"

#include "ramp_sentinel/config.hpp"
#include "ramp_sentinel/csv.hpp"
#include "ramp_sentinel/harness.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace ramp {
namespace {

namespace fs = std::filesystem;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file (INI sections)");
    cmd->add_option("--out", args.out_dir, "output directory for CSV files");
    cmd->add_option("--set", args.overrides, "override, e.g. --set noise.flow_bound=180");
}

[[nodiscard]] AppConfig load_config(const CommonArgs& args) {
    std::string text;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path, std::ios::binary);
        if (!in) throw ConfigError("cannot open config file '" + args.config_path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    AppConfig cfg = parse_config(text);
    for (const std::string& item : args.overrides) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override must look like section.key=value, got '" + item + "'");
        }
        apply_override(cfg, item.substr(0, eq), item.substr(eq + 1));
    }
    validate_config(cfg);
    return cfg;
}

// The environment variable takes precedence over --out so wrappers can
// redirect output without touching command lines.
[[nodiscard]] fs::path resolve_out_dir(const CommonArgs& args) {
    const char* env = std::getenv("RAMP_SENTINEL_OUT");
    fs::path dir = (env != nullptr && *env != '\0') ? fs::path(env) : fs::path(args.out_dir);
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    return dir;
}

template <typename WriteFn>
void write_csv_file(const fs::path& path, WriteFn&& write) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write(os);
    os.flush();
    if (!os) throw std::runtime_error("failed while writing '" + path.string() + "'");
}

[[nodiscard]] int cmd_design(const CommonArgs& common, double alpha, double theta,
                             const std::optional<double>& beta, const std::optional<double>& dt) {
    AppConfig cfg = load_config(common);
    if (beta) cfg.solver.beta = *beta;
    if (dt) cfg.solver.dt = *dt;
    validate_config(cfg);

    DesignRow row;
    row.alpha = alpha;
    row.theta = theta;
    row.beta = cfg.solver.beta;
    row.dt = cfg.solver.dt;
    try {
        row.design = solve_p1(alpha, theta, cfg.solver);
        row.feasible = true;
    } catch (const InfeasibleProgram& e) {
        row.error = e.what();
    }

    const fs::path out = resolve_out_dir(common) / "design.csv";
    write_csv_file(out, [&](std::ostream& os) {
        write_design_csv(os, std::span<const DesignRow>(&row, 1));
    });

    if (row.feasible) {
        std::cout << "design alpha=" << csv_number(alpha) << " theta=" << csv_number(theta)
                  << " sqrt_mu1=" << csv_number(std::sqrt(row.design.mu1))
                  << " mu2=" << csv_number(row.design.mu2) << " L=(" << csv_number(row.design.L(0, 0))
                  << "," << csv_number(row.design.L(1, 0)) << ") -> " << out.string() << "\n";
        return 0;
    }
    std::cout << "design alpha=" << csv_number(alpha) << " theta=" << csv_number(theta)
              << " infeasible: " << row.error << " -> " << out.string() << "\n";
    return 2;
}

[[nodiscard]] int cmd_simulate(const CommonArgs& common, const std::optional<std::uint64_t>& seed) {
    const AppConfig cfg = load_config(common);
    const FilterDesign design =
        solve_p1(cfg.scenario.penetration.alpha, cfg.scenario.penetration.theta_bound, cfg.solver);
    const std::uint64_t run_seed = seed ? *seed : cfg.scenario.seeds.front();
    const RunResult res = run_scenario(cfg.scenario, design, run_seed);
    const CriterionReport criterion = criterion_check(res.trace, design);

    const fs::path dir = resolve_out_dir(common);
    DesignRow row;
    row.alpha = design.alpha;
    row.theta = design.theta_bound;
    row.beta = design.beta;
    row.dt = design.dt;
    row.feasible = true;
    row.design = design;
    write_csv_file(dir / "design.csv", [&](std::ostream& os) {
        write_design_csv(os, std::span<const DesignRow>(&row, 1));
    });
    write_csv_file(dir / "trace.csv",
                   [&](std::ostream& os) { write_trace_csv(os, res.trace, criterion); });

    std::cout << "simulate seed=" << run_seed << " robust_rmse=" << csv_number(res.robust.rmse)
              << " robust_sqrt_mu1_hat=" << csv_number(res.robust.sqrt_mu1_hat)
              << " violations=" << res.robust.criterion_violations
              << " spillback=" << res.robust.spillback << " -> " << (dir / "trace.csv").string()
              << "\n";
    return 0;
}

[[nodiscard]] int cmd_sweep(const CommonArgs& common) {
    const AppConfig cfg = load_config(common);
    const std::vector<SweepRow> rows = sweep(cfg.sweep, cfg.scenario, cfg.solver);
    const fs::path out = resolve_out_dir(common) / "sweep.csv";
    write_csv_file(out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
    std::cout << "sweep " << rows.size() << " cells -> " << out.string() << "\n";
    return 0;
}

[[nodiscard]] int cmd_compare(const CommonArgs& common) {
    const AppConfig cfg = load_config(common);
    const std::vector<CompareRow> rows = compare_scenarios(cfg.scenario, cfg.solver);
    const fs::path out = resolve_out_dir(common) / "compare.csv";
    write_csv_file(out, [&](std::ostream& os) { write_compare_csv(os, rows); });
    for (const CompareRow& row : rows) {
        std::cout << "compare " << row.scenario << " alpha=" << csv_number(row.alpha)
                  << " sqrt_mu1_hat=" << csv_number(row.mean_sqrt_mu1_hat)
                  << " rmse=" << csv_number(row.mean_rmse) << "\n";
    }
    std::cout << "compare -> " << out.string() << "\n";
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"robust on-ramp queue estimation: filter design and simulation"};
    app.require_subcommand(1);

    CommonArgs common;
    double alpha = 0.5;
    double theta = 0.08;
    std::optional<double> beta;
    std::optional<double> dt;
    std::optional<std::uint64_t> seed;

    CLI::App* design = app.add_subcommand("design", "solve the filter design program");
    design->add_option("--alpha", alpha, "connected-vehicle penetration rate")->required();
    design->add_option("--theta", theta, "penetration fluctuation bound")->required();
    design->add_option("--beta", beta, "objective weight on the noise bound");
    design->add_option("--dt", dt, "cycle length in hours");
    add_common(design, common);

    CLI::App* simulate = app.add_subcommand("simulate", "run one closed-loop scenario");
    simulate->add_option("--seed", seed, "RNG seed (default: first configured seed)");
    add_common(simulate, common);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "design + simulate over a parameter grid");
    add_common(sweep_cmd, common);

    CLI::App* compare = app.add_subcommand("compare", "estimator comparison on matched seeds");
    add_common(compare, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(design)) return cmd_design(common, alpha, theta, beta, dt);
        if (app.got_subcommand(simulate)) return cmd_simulate(common, seed);
        if (app.got_subcommand(sweep_cmd)) return cmd_sweep(common);
        return cmd_compare(common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

int run_cli(std::span<const std::string> args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace ramp
