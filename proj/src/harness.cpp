#include "ramp_sentinel/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace ramp {
namespace {

void validate(const ScenarioConfig& cfg) {
    if (cfg.horizon <= 0 || cfg.warmup < 0 || cfg.warmup >= cfg.horizon) {
        throw std::invalid_argument("scenario requires 0 <= warmup < horizon");
    }
    if (!(cfg.q_capacity > 0.0)) throw std::invalid_argument("q_capacity must be positive");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (cfg.demand_profile.empty()) throw std::invalid_argument("demand profile is empty");
    if (cfg.mainline_profile.empty()) throw std::invalid_argument("mainline profile is empty");
}

[[nodiscard]] double estimate_error(const CycleRecord& rec, Estimator which) {
    switch (which) {
        case Estimator::robust: return rec.x_all - rec.robust_x_all;
        case Estimator::open_loop: return rec.x_all - rec.open_loop;
        case Estimator::kalman: return rec.x_all - rec.kalman;
    }
    return 0.0;
}

[[nodiscard]] Metrics metrics_for(const RunTrace& trace, Estimator which, bool per_cycle_ratio,
                                  std::int64_t spillback) {
    Metrics m;
    m.spillback = spillback;
    if (trace.records.empty()) return m;
    double sq = 0.0;
    for (const CycleRecord& rec : trace.records) {
        const double e = estimate_error(rec, which);
        sq += e * e;
    }
    m.rmse = std::sqrt(sq / static_cast<double>(trace.records.size()));
    try {
        m.mu1_hat = mu1_hat(trace, which, per_cycle_ratio);
        m.sqrt_mu1_hat = std::sqrt(m.mu1_hat);
    } catch (const std::domain_error&) {
        // Identically zero truth has no defined energy ratio; the run is
        // still valid, so surface the ratio as NaN instead of failing.
        m.mu1_hat = std::numeric_limits<double>::quiet_NaN();
        m.sqrt_mu1_hat = m.mu1_hat;
    }
    return m;
}

} // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const FilterDesign& design,
                       std::uint64_t seed) {
    validate(cfg);

    Rng rng_arrivals(seed, "arrivals");
    Rng rng_tag(seed, "tagging");
    Rng rng_theta(seed, "theta_walk");
    Rng rng_noise(seed, "noise");
    Rng& rng_plant =
        cfg.penetration.mode == PenetrationMode::bernoulli_tagging ? rng_tag : rng_theta;

    OccupancyParams occupancy = cfg.occupancy;
    occupancy.q_capacity = cfg.q_capacity;
    occupancy.r_max = cfg.metering.r_max;
    KalmanBaselineParams kalman_params = cfg.kalman;
    kalman_params.q_capacity = cfg.q_capacity;

    QueueState state;
    FlowRecord prev_flows;
    double r_integral = cfg.metering.r_min;

    RobustFilterState rob;
    double ol = 0.0;
    double kal = 0.0;

    RunResult result;
    result.trace.records.reserve(static_cast<std::size_t>(cfg.horizon - cfg.warmup));

    for (int t = 0; t < cfg.horizon; ++t) {
        const double base = demand(cfg.mainline_profile, t);
        const OccupancyReading occ = occupancy_proxy(state, prev_flows, base, occupancy);
        const double r_i = alinea_integral(r_integral, occ.o_m, cfg.metering);
        r_integral = r_i; // carry the clipped value: anti-windup
        const double rate = meter(r_i, queue_override(occ.o_a, cfg.metering));

        const int arrivals = rng_arrivals.poisson(demand(cfg.demand_profile, t) * cfg.dt);

        CycleRecord rec;
        rec.cycle = t;
        rec.x_all = state.x_all;
        rec.x_cv = state.x_cv;
        rec.theta = state.theta;
        rec.robust_x_all = rob.x_all;
        rec.robust_x_cv = rob.x_cv;
        rec.open_loop = ol;
        rec.kalman = kal;
        rec.meter_rate = rate;
        rec.occupancy = occ;

        auto [next_state, flows] =
            step(state, arrivals, rate, cfg.penetration, cfg.q_capacity, cfg.dt, rng_plant);
        const Observation obs = measure(state, flows, cfg.noise, t, rng_noise);
        rec.flows = flows;
        rec.z = obs.z;
        rec.w = obs.w;

        if (t >= cfg.warmup) {
            result.trace.records.push_back(rec);
            rob = robust_step(design, rob, obs.z,
                              cfg.clamp_robust ? std::optional(cfg.q_capacity) : std::nullopt);
            ol = open_loop_estimate(obs.z, ol, cfg.eps_flow, cfg.min_ratio_sum);
            kal = kalman_baseline_step(kal, obs.z, occ.o_a, kalman_params, cfg.dt);
        }

        state = std::move(next_state);
        prev_flows = flows;
    }

    result.robust =
        metrics_for(result.trace, Estimator::robust, cfg.per_cycle_ratio, state.spillback);
    result.open_loop =
        metrics_for(result.trace, Estimator::open_loop, cfg.per_cycle_ratio, state.spillback);
    result.kalman =
        metrics_for(result.trace, Estimator::kalman, cfg.per_cycle_ratio, state.spillback);
    result.robust.criterion_violations = criterion_check(result.trace, design).violations;
    return result;
}

double mu1_hat(const RunTrace& trace, Estimator which, bool per_cycle_ratio) {
    double esum = 0.0;
    double xsum = 0.0;
    double ratio_sum = 0.0;
    std::size_t ratio_count = 0;
    for (const CycleRecord& rec : trace.records) {
        double e2 = 0.0;
        double x2 = 0.0;
        if (which == Estimator::robust) {
            const double ea = rec.x_all - rec.robust_x_all;
            const double ec = rec.x_cv - rec.robust_x_cv;
            e2 = ea * ea + ec * ec;
            x2 = rec.x_all * rec.x_all + rec.x_cv * rec.x_cv;
        } else {
            const double e = estimate_error(rec, which);
            e2 = e * e;
            x2 = rec.x_all * rec.x_all;
        }
        esum += e2;
        xsum += x2;
        if (x2 > 0.0) {
            ratio_sum += e2 / x2;
            ++ratio_count;
        }
    }
    if (per_cycle_ratio) {
        if (ratio_count == 0) throw std::domain_error("mu1_hat: truth is identically zero");
        return ratio_sum / static_cast<double>(ratio_count);
    }
    if (xsum <= 0.0) throw std::domain_error("mu1_hat: truth is identically zero");
    return esum / xsum;
}

CriterionReport criterion_check(const RunTrace& trace, const FilterDesign& design) {
    CriterionReport rep;
    if (trace.records.empty()) return rep;
    rep.lhs.reserve(trace.records.size());
    rep.rhs.reserve(trace.records.size());

    const CycleRecord& first = trace.records.front();
    const double e0a = first.x_all - first.robust_x_all;
    const double e0c = first.x_cv - first.robust_x_cv;
    const double gamma = e0a * (design.P(0, 0) * e0a + design.P(0, 1) * e0c) +
                         e0c * (design.P(1, 0) * e0a + design.P(1, 1) * e0c);

    double lhs = 0.0;
    double xsum = 0.0;
    double wsum = 0.0;
    for (const CycleRecord& rec : trace.records) {
        const double ea = rec.x_all - rec.robust_x_all;
        const double ec = rec.x_cv - rec.robust_x_cv;
        lhs += ea * ea + ec * ec;
        xsum += rec.x_all * rec.x_all + rec.x_cv * rec.x_cv;
        for (const double wi : rec.w) wsum += wi * wi;
        const double rhs = design.mu1 * xsum + design.mu2 * wsum + gamma;
        rep.lhs.push_back(lhs);
        rep.rhs.push_back(rhs);
        if (lhs > rhs) ++rep.violations;
    }
    return rep;
}

std::vector<SweepRow> sweep(const SweepGrid& grid, const ScenarioConfig& base,
                            const SolveOptions& solver) {
    if (grid.alphas.empty() || grid.thetas.empty() || grid.noise_bounds.empty()) {
        throw std::invalid_argument("sweep grid must be nonempty in every dimension");
    }
    std::vector<SweepRow> rows;
    for (const double alpha : grid.alphas) {
        for (const double theta : grid.thetas) {
            bool feasible = false;
            FilterDesign design;
            std::string error;
            try {
                design = solve_p1(alpha, theta, solver);
                feasible = true;
            } catch (const std::exception& e) {
                error = e.what();
            }
            for (const double bound : grid.noise_bounds) {
                SweepRow row;
                row.alpha = alpha;
                row.theta = theta;
                row.noise_bound = bound;
                row.feasible = feasible;
                row.error = error;
                if (feasible) {
                    row.sqrt_mu1 = std::sqrt(design.mu1);
                    ScenarioConfig cfg = base;
                    cfg.penetration.alpha = alpha;
                    cfg.penetration.theta_bound = theta;
                    cfg.noise.flow_bound = bound;
                    double sum_sqrt = 0.0;
                    double sum_rmse = 0.0;
                    for (const std::uint64_t seed : cfg.seeds) {
                        const RunResult res = run_scenario(cfg, design, seed);
                        sum_sqrt += res.robust.sqrt_mu1_hat;
                        sum_rmse += res.robust.rmse;
                    }
                    const auto n = static_cast<double>(cfg.seeds.size());
                    row.mean_sqrt_mu1_hat = sum_sqrt / n;
                    row.mean_rmse = sum_rmse / n;
                    row.seeds = static_cast<int>(cfg.seeds.size());
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<CompareRow> compare_scenarios(const ScenarioConfig& base, const SolveOptions& solver) {
    const double alphas[2] = {0.25, 0.5};
    FilterDesign designs[2];
    for (int i = 0; i < 2; ++i) {
        designs[i] = solve_p1(alphas[i], base.penetration.theta_bound, solver);
    }

    // Accumulators: open-loop at each alpha, kalman on the alpha = 0.5 runs,
    // robust at each alpha.
    double sqrt_acc[5] = {};
    double rmse_acc[5] = {};
    for (const std::uint64_t seed : base.seeds) {
        for (int i = 0; i < 2; ++i) {
            ScenarioConfig cfg = base;
            cfg.penetration.alpha = alphas[i];
            const RunResult res = run_scenario(cfg, designs[i], seed);
            sqrt_acc[i] += res.open_loop.sqrt_mu1_hat;
            rmse_acc[i] += res.open_loop.rmse;
            sqrt_acc[3 + i] += res.robust.sqrt_mu1_hat;
            rmse_acc[3 + i] += res.robust.rmse;
            if (i == 1) {
                sqrt_acc[2] += res.kalman.sqrt_mu1_hat;
                rmse_acc[2] += res.kalman.rmse;
            }
        }
    }

    const char* names[5] = {"open_loop", "open_loop", "kalman", "robust", "robust"};
    const double row_alpha[5] = {0.25, 0.5, 0.5, 0.25, 0.5};
    const auto n = static_cast<double>(base.seeds.size());
    std::vector<CompareRow> rows;
    for (int i = 0; i < 5; ++i) {
        CompareRow row;
        row.scenario = names[i];
        row.alpha = row_alpha[i];
        row.mean_sqrt_mu1_hat = sqrt_acc[i] / n;
        row.mean_rmse = rmse_acc[i] / n;
        row.seeds = static_cast<int>(base.seeds.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace ramp
