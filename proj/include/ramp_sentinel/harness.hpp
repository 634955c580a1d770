#pragma once
// Scenario orchestration: closes the loop plant -> metering -> measurement
// -> estimators, records per-cycle traces, computes error metrics, checks
// the certified performance inequality, and runs sensitivity sweeps and
// estimator comparisons.

#include "ramp_sentinel/estimators.hpp"
#include "ramp_sentinel/metering.hpp"
#include "ramp_sentinel/plant.hpp"
#include "ramp_sentinel/sdp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ramp {

[[nodiscard]] inline std::vector<std::uint64_t> default_seeds() {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
    return seeds;
}

struct ScenarioConfig {
    int horizon = 780; // cycles
    int warmup = 60;   // cycles excluded from traces and metrics
    double dt = 1.0 / 120.0; // hours per cycle
    double q_capacity = 32.0;
    std::vector<DemandSegment> demand_profile{
        {0, 720}, {60, 900}, {240, 960}, {420, 840}, {600, 600}, {720, 480}};
    std::vector<DemandSegment> mainline_profile{
        {0, 0.22}, {120, 0.28}, {480, 0.30}, {660, 0.24}};
    PenetrationSpec penetration;
    NoiseSpec noise{240, 480, 60.0, 2.0};
    MeteringParams metering;
    OccupancyParams occupancy; // q_capacity and r_max are filled per run
    KalmanBaselineParams kalman;
    double eps_flow = 120.0;     // open-loop total-flow guard, veh/h
    double min_ratio_sum = 0.2;  // open-loop ratio-sum guard
    bool clamp_robust = false;
    bool per_cycle_ratio = false; // alternative mu1_hat aggregation
    std::vector<std::uint64_t> seeds = default_seeds();

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

enum class Estimator { robust, open_loop, kalman };

// One post-warmup cycle. Truth, estimates, and theta are the values at the
// cycle start; flows, measurement, noise, and the metering command are the
// values realized during the cycle.
struct CycleRecord {
    int cycle = 0;
    double x_all = 0.0;
    double x_cv = 0.0;
    double theta = 0.0;
    FlowRecord flows;
    Measurement z;
    std::array<double, 5> w{};
    double robust_x_all = 0.0;
    double robust_x_cv = 0.0;
    double open_loop = 0.0;
    double kalman = 0.0;
    double meter_rate = 0.0;
    OccupancyReading occupancy;
};

struct RunTrace {
    std::vector<CycleRecord> records; // length = horizon - warmup
};

struct Metrics {
    double rmse = 0.0; // on the x_all component
    double mu1_hat = 0.0; // NaN when the truth is identically zero
    double sqrt_mu1_hat = 0.0;
    int criterion_violations = 0;  // certified inequality; robust filter only
    std::int64_t spillback = 0;    // plant-level, identical across estimators
};

struct RunResult {
    RunTrace trace;
    Metrics robust;
    Metrics open_loop;
    Metrics kalman;
};

// One seeded closed-loop run. Deterministic given (cfg, design, seed): RNG
// streams are keyed by (seed, channel) so arrivals, tagging, the synthetic
// theta walk, and measurement noise never share draws. All three estimators
// cold-start at zero when the warmup ends.
[[nodiscard]] RunResult run_scenario(const ScenarioConfig& cfg, const FilterDesign& design,
                                     std::uint64_t seed);

// Energy ratio of estimation error to true state over the trace. The robust
// filter is scored on the full 2-vector; the scalar baselines on x_all only.
// Default is the ratio of sums; per_cycle_ratio averages per-cycle ratios
// instead (cycles with zero truth are skipped). Throws std::domain_error if
// the truth is identically zero.
[[nodiscard]] double mu1_hat(const RunTrace& trace, Estimator which, bool per_cycle_ratio = false);

struct CriterionReport {
    std::vector<double> lhs; // cumulative error energy at each horizon T
    std::vector<double> rhs; // cumulative certified budget at each horizon T
    int violations = 0;
};

// Pointwise check of the certified inequality for the robust filter: for
// every T, sum ||e||^2 <= mu1 * sum ||x||^2 + mu2 * sum ||w||^2 + e0' P e0.
[[nodiscard]] CriterionReport criterion_check(const RunTrace& trace, const FilterDesign& design);

struct SweepGrid {
    std::vector<double> alphas{0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> thetas{0.08};
    std::vector<double> noise_bounds{60.0};

    friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

struct SweepRow {
    double alpha = 0.0;
    double theta = 0.0;
    double noise_bound = 0.0;
    bool feasible = false;
    double sqrt_mu1 = 0.0;
    double mean_sqrt_mu1_hat = 0.0;
    double mean_rmse = 0.0;
    int seeds = 0;
    std::string error; // nonempty when the design step failed
};

// One design per (alpha, theta) cell plus seeded runs per noise bound.
// Design failures mark the row infeasible instead of aborting the sweep.
[[nodiscard]] std::vector<SweepRow> sweep(const SweepGrid& grid, const ScenarioConfig& base,
                                          const SolveOptions& solver);

struct CompareRow {
    std::string scenario;
    double alpha = 0.0;
    double mean_sqrt_mu1_hat = 0.0;
    double mean_rmse = 0.0;
    int seeds = 0;
};

// Five-row estimator comparison on matched seeds: open-loop and robust at
// alpha in {0.25, 0.5} plus the Kalman baseline on the alpha = 0.5 runs.
[[nodiscard]] std::vector<CompareRow> compare_scenarios(const ScenarioConfig& base,
                                                        const SolveOptions& solver);

} // namespace ramp
