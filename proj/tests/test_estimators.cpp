#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ramp_sentinel/estimators.hpp"
#include "ramp_sentinel/harness.hpp"

#include <cmath>
#include <optional>

using namespace ramp;

namespace {

// Uncertified hand design; model conformance tests only need (alpha, dt, L).
FilterDesign hand_design(double alpha, double dt, double l1, double l2) {
    FilterDesign d;
    d.alpha = alpha;
    d.theta_bound = 0.08;
    d.beta = 0.1;
    d.dt = dt;
    d.P = Mat(2, 2, {2.0, 0.0, 0.0, 2.0});
    d.L = Mat(2, 1, {l1, l2});
    d.mu1 = 0.5;
    d.mu2 = 5.0;
    d.mu3 = 0.25;
    return d;
}

Measurement meas(double fai, double fao, double fci, double fco, double xcv) {
    Measurement z;
    z.f_all_in = fai;
    z.f_all_out = fao;
    z.f_cv_in = fci;
    z.f_cv_out = fco;
    z.x_cv = xcv;
    return z;
}

} // namespace

TEST_CASE("robust filter hand example") {
    const FilterDesign d = hand_design(0.5, 1.0 / 120.0, 0.2, 0.5);
    const RobustFilterState s{10.0, 5.0};
    const RobustFilterState n = robust_step(d, s, meas(1200, 600, 600, 300, 6));

    // x_all: 10 + (1/120)(1200-600) + 0.2*(6-5) = 15.2
    // x_cv:  0.5*10 + (1/120)(600-300) + 0.5*(6-5) = 8.0
    CHECK(n.x_all == doctest::Approx(15.2));
    CHECK(n.x_cv == doctest::Approx(8.0));
}

TEST_CASE("robust filter degenerate gains and innovations") {
    // Zero gain and zero flows: pure model prediction.
    const FilterDesign open = hand_design(0.5, 1.0 / 120.0, 0.0, 0.0);
    const RobustFilterState s{10.0, 5.0};
    const RobustFilterState pred = robust_step(open, s, meas(0, 0, 0, 0, -999.0));
    CHECK(pred.x_all == 10.0);
    CHECK(pred.x_cv == 5.0);

    // Zero innovation: the measured count agrees with the estimate, so only
    // the flow integration acts.
    const FilterDesign d = hand_design(0.5, 1.0 / 120.0, 0.2, 0.5);
    const RobustFilterState s2{8.0, 3.0};
    const RobustFilterState n2 = robust_step(d, s2, meas(240, 120, 120, 0, 3.0));
    CHECK(n2.x_all == doctest::Approx(9.0));
    CHECK(n2.x_cv == doctest::Approx(5.0));
}

TEST_CASE("robust filter reporting clamp") {
    const FilterDesign d = hand_design(0.5, 1.0 / 120.0, 1.0, 1.0);
    const RobustFilterState zero{0.0, 0.0};

    // The certified recursion is unclamped and may go negative.
    const RobustFilterState raw = robust_step(d, zero, meas(0, 0, 0, 0, -50.0));
    CHECK(raw.x_all == doctest::Approx(-50.0));

    const RobustFilterState lo = robust_step(d, zero, meas(0, 0, 0, 0, -50.0), 32.0);
    CHECK(lo.x_all == 0.0);
    CHECK(lo.x_cv == 0.0);

    const RobustFilterState hi = robust_step(d, zero, meas(0, 0, 0, 0, 100.0), 32.0);
    CHECK(hi.x_all == 32.0);
    CHECK(hi.x_cv == 32.0);
}

TEST_CASE("filter error follows the certified error dynamics on a live trace") {
    // e(t+1) = (A - L C) e(t) + DeltaA(theta_t) x(t) + (D - L E) w(t), with
    // e = truth - estimate. The identity must hold cycle for cycle on a
    // noisy closed-loop run, which ties the estimator, the plant, and the
    // recorded bookkeeping to the synthesis model.
    ScenarioConfig cfg;
    cfg.horizon = 300;
    cfg.warmup = 60;
    const double dt = cfg.dt;
    const double l1 = 0.3;
    const double l2 = 0.4;
    const FilterDesign d = hand_design(0.5, dt, l1, l2);

    const RunResult run = run_scenario(cfg, d, 5);
    REQUIRE(run.trace.records.size() == 240);

    int noisy_cycles = 0;
    for (std::size_t k = 0; k + 1 < run.trace.records.size(); ++k) {
        const CycleRecord& r0 = run.trace.records[k];
        const CycleRecord& r1 = run.trace.records[k + 1];

        const double ea = r0.x_all - r0.robust_x_all;
        const double ec = r0.x_cv - r0.robust_x_cv;

        const double pred_all = (ea - l1 * ec) + (-dt * r0.w[0] + dt * r0.w[1] - l1 * r0.w[4]);
        const double pred_cv = (0.5 * ea - l2 * ec) + r0.theta * r0.x_all +
                               (-dt * r0.w[2] + dt * r0.w[3] - l2 * r0.w[4]);

        CHECK(r1.x_all - r1.robust_x_all == doctest::Approx(pred_all).epsilon(1e-8));
        CHECK(r1.x_cv - r1.robust_x_cv == doctest::Approx(pred_cv).epsilon(1e-8));

        if (r0.w[0] != 0.0) ++noisy_cycles;
    }
    CHECK(noisy_cycles >= 50); // the noise window overlapped the trace
}

TEST_CASE("deadbeat gain tracks exactly after two cycles without disturbance") {
    // With theta pinned at zero and no measurement noise, L = (1/alpha, 1)
    // makes A - L C nilpotent of degree 2: any cold-start error vanishes
    // after two updates and the filter then tracks the truth exactly.
    ScenarioConfig cfg;
    cfg.horizon = 150;
    cfg.warmup = 60;
    cfg.penetration.mode = PenetrationMode::synthetic_theta;
    cfg.penetration.alpha = 0.5;
    cfg.penetration.theta_bound = 0.0;
    cfg.noise = NoiseSpec{0, 0, 60.0, 2.0}; // empty window: no noise at all

    const FilterDesign d = hand_design(0.5, cfg.dt, 2.0, 1.0);
    const RunResult run = run_scenario(cfg, d, 9);
    REQUIRE(run.trace.records.size() == 90);

    double peak_truth = 0.0;
    for (std::size_t k = 2; k < run.trace.records.size(); ++k) {
        const CycleRecord& rec = run.trace.records[k];
        CHECK(std::abs(rec.x_all - rec.robust_x_all) <= 1e-9);
        CHECK(std::abs(rec.x_cv - rec.robust_x_cv) <= 1e-9);
        peak_truth = std::max(peak_truth, rec.x_all);
    }
    CHECK(peak_truth > 5.0); // the queue was actually exercised
    CHECK(run.robust.criterion_violations == 0);
}

// ============================================================================
// Open-loop flow-ratio baseline
// ============================================================================

TEST_CASE("open-loop estimate from balanced ratios") {
    // Ratios 0.5 + 0.5 sum to 1, so the estimate is 2 * 5 / 1 = 10.
    CHECK(open_loop_estimate(meas(600, 400, 300, 200, 5), 0.0) == doctest::Approx(10.0));
}

TEST_CASE("open-loop holds the previous value on degenerate cycles") {
    // Total inflow below the flow guard.
    CHECK(open_loop_estimate(meas(100, 400, 50, 200, 5), 7.5) == 7.5);
    // Total outflow below the flow guard.
    CHECK(open_loop_estimate(meas(400, 100, 200, 50, 5), 7.5) == 7.5);
    // Ratio sum too small to carry penetration information.
    CHECK(open_loop_estimate(meas(1200, 1200, 30, 30, 5), 7.5) == 7.5);
    // At the guard boundary the cycle counts as usable.
    CHECK(open_loop_estimate(meas(120, 120, 60, 60, 5), 7.5) == doctest::Approx(10.0));
}

TEST_CASE("open-loop estimate scales with the measurement") {
    const double base = open_loop_estimate(meas(600, 400, 300, 200, 5), 0.0);
    const double doubled = open_loop_estimate(meas(1200, 800, 600, 400, 10), 0.0);
    CHECK(doubled == doctest::Approx(2.0 * base));
}

// ============================================================================
// Occupancy Kalman baseline
// ============================================================================

TEST_CASE("kalman baseline hand example") {
    KalmanBaselineParams p;
    p.k_f = 0.1;
    p.vehicle_length = 5.0;
    p.detector_length = 5.0; // share 0.5
    p.q_bb = 40.0;
    p.q_capacity = 32.0;

    // 10 + (1/120)*240 + 0.1*(40*0.5*1.0 - 10) = 10 + 2 + 1 = 13
    const double next = kalman_baseline_step(10.0, meas(360, 120, 0, 0, 0), 1.0, p, 1.0 / 120.0);
    CHECK(next == doctest::Approx(13.0));
}

TEST_CASE("kalman baseline converges to the occupancy-implied queue") {
    KalmanBaselineParams p; // share = 5/15 = 1/3, q_bb = 32
    const double o_a = 0.75;
    double x = 0.0;
    for (int i = 0; i < 200; ++i) x = kalman_baseline_step(x, meas(0, 0, 0, 0, 0), o_a, p, 1.0 / 120.0);
    CHECK(x == doctest::Approx(32.0 * (1.0 / 3.0) * o_a).epsilon(1e-6));
}

TEST_CASE("kalman baseline clamps to the physical range") {
    KalmanBaselineParams p;
    CHECK(kalman_baseline_step(30.0, meas(100000, 0, 0, 0, 0), 0.0, p, 1.0 / 120.0) ==
          p.q_capacity);
    CHECK(kalman_baseline_step(0.5, meas(0, 100000, 0, 0, 0), 0.0, p, 1.0 / 120.0) == 0.0);
}

TEST_CASE("zero correction gain reduces to pure flow integration") {
    KalmanBaselineParams p;
    p.k_f = 0.0;
    const double next = kalman_baseline_step(10.0, meas(360, 120, 0, 0, 0), 1.0, p, 1.0 / 120.0);
    CHECK(next == doctest::Approx(12.0));
}
