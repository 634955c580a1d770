#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ramp_sentinel/plant.hpp"
#include "ramp_sentinel/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace ramp;

TEST_CASE("three-cycle hand trace with deterministic tagging") {
    // alpha = 1 makes every admitted vehicle a CV, so the Bernoulli draws
    // are pinned and the whole trace can be checked by hand.
    PenetrationSpec pen;
    pen.alpha = 1.0;
    Rng rng(7);
    const double q = 5.0;
    const double dt = 0.5;

    QueueState s;

    // Cycle 1: 4 veh/h of service accrues 2 vehicles of credit against an
    // empty queue (forfeited), 6 arrivals hit the 5-slot capacity.
    auto [s1, f1] = step(s, 6, 4.0, pen, q, dt, rng);
    CHECK(s1.x_all == 5.0);
    CHECK(s1.x_cv == 5.0);
    CHECK(s1.theta == 0.0);
    CHECK(s1.spillback == 1);
    CHECK(s1.discharge_credit == 0.0); // service offered to an empty queue
    CHECK(f1.f_all_in == 10.0);        // 5 vehicles / 0.5 h
    CHECK(f1.f_all_out == 0.0);
    CHECK(f1.f_cv_in == 10.0);
    CHECK(f1.f_cv_out == 0.0);

    // Cycle 2: 1.5 vehicles of credit discharges one whole vehicle and
    // banks the fraction.
    auto [s2, f2] = step(s1, 0, 3.0, pen, q, dt, rng);
    CHECK(s2.x_all == 4.0);
    CHECK(s2.x_cv == 4.0);
    CHECK(s2.spillback == 1);
    CHECK(s2.discharge_credit == doctest::Approx(0.5));
    CHECK(f2.f_all_in == 0.0);
    CHECK(f2.f_all_out == 2.0);
    CHECK(f2.f_cv_out == 2.0);

    // Cycle 3: banked 0.5 plus fresh 1.5 discharges two; two arrivals fit.
    auto [s3, f3] = step(s2, 2, 3.0, pen, q, dt, rng);
    CHECK(s3.x_all == 4.0);
    CHECK(s3.x_cv == 4.0);
    CHECK(s3.spillback == 1);
    CHECK(s3.discharge_credit == doctest::Approx(0.0));
    CHECK(f3.f_all_in == 4.0);
    CHECK(f3.f_all_out == 4.0);

    // Conservation across every cycle of the trace.
    CHECK(s1.x_all == doctest::Approx(s.x_all + dt * (f1.f_all_in - f1.f_all_out)));
    CHECK(s2.x_all == doctest::Approx(s1.x_all + dt * (f2.f_all_in - f2.f_all_out)));
    CHECK(s3.x_all == doctest::Approx(s2.x_all + dt * (f3.f_all_in - f3.f_all_out)));
}

TEST_CASE("zero-penetration tagging admits no connected vehicles") {
    PenetrationSpec pen;
    pen.alpha = 0.0;
    Rng rng(3);
    auto [s1, f1] = step(QueueState{}, 4, 0.0, pen, 10.0, 0.5, rng);
    CHECK(s1.x_all == 4.0);
    CHECK(s1.x_cv == 0.0);
    CHECK(f1.f_cv_in == 0.0);
    CHECK(s1.theta == 0.0); // 0/4 - 0
}

TEST_CASE("full queue rejects all arrivals as spillback") {
    PenetrationSpec pen;
    pen.alpha = 1.0;
    Rng rng(11);
    QueueState s;
    auto [s1, f1] = step(s, 3, 0.0, pen, 3.0, 0.5, rng);
    REQUIRE(s1.x_all == 3.0);
    auto [s2, f2] = step(s1, 5, 0.0, pen, 3.0, 0.5, rng);
    CHECK(s2.x_all == 3.0);
    CHECK(s2.spillback == 5);
    CHECK(f2.f_all_in == 0.0);
}

TEST_CASE("negative metering command accrues no credit") {
    PenetrationSpec pen;
    pen.alpha = 1.0;
    Rng rng(13);
    QueueState s;
    auto [s1, f1] = step(s, 2, 0.0, pen, 8.0, 0.5, rng);
    auto [s2, f2] = step(s1, 0, -600.0, pen, 8.0, 0.5, rng);
    CHECK(s2.x_all == 2.0);
    CHECK(s2.discharge_credit == 0.0);
    CHECK(f2.f_all_out == 0.0);
}

TEST_CASE("sub-vehicle credit is banked, not forfeited") {
    // 100 veh/h over 1/120 h accrues 5/6 vehicle per cycle; the first cycle
    // discharges nothing yet must keep the fraction because the queue was
    // not empty.
    PenetrationSpec pen;
    pen.alpha = 1.0;
    Rng rng(17);
    QueueState s;
    auto [s1, f1] = step(s, 10, 0.0, pen, 32.0, 1.0 / 120.0, rng);
    auto [s2, f2] = step(s1, 0, 100.0, pen, 32.0, 1.0 / 120.0, rng);
    CHECK(f2.f_all_out == 0.0);
    CHECK(s2.discharge_credit == doctest::Approx(100.0 / 120.0));
    auto [s3, f3] = step(s2, 0, 100.0, pen, 32.0, 1.0 / 120.0, rng);
    CHECK(f3.f_all_out == 120.0); // one vehicle this cycle
    CHECK(s3.discharge_credit == doctest::Approx(200.0 / 120.0 - 1.0));
}

TEST_CASE("bernoulli step invariants over random episodes") {
    PenetrationSpec pen;
    pen.alpha = 0.5;
    const double q = 32.0;
    const double dt = 1.0 / 120.0;
    Rng rng(101);
    Rng drive(202);

    QueueState s;
    for (int t = 0; t < 250000; ++t) {
        const int arrivals = static_cast<int>(drive.next() % 11);
        const double metered = drive.uniform(0.0, 1200.0);
        auto [next, flows] = step(s, arrivals, metered, pen, q, dt, rng);

        // Counts stay consistent with the FIFO tags and the capacity.
        CHECK(next.x_all == static_cast<double>(next.tags.size()));
        CHECK(next.x_cv >= 0.0);
        CHECK(next.x_cv <= next.x_all);
        CHECK(next.x_all <= q);

        // Exact conservation on both components.
        CHECK(std::abs(next.x_all - (s.x_all + dt * (flows.f_all_in - flows.f_all_out))) <=
              1e-9);
        CHECK(std::abs(next.x_cv - (s.x_cv + dt * (flows.f_cv_in - flows.f_cv_out))) <= 1e-9);

        // Channel ordering and sign.
        CHECK(flows.f_all_in >= flows.f_cv_in);
        CHECK(flows.f_all_out >= flows.f_cv_out);
        CHECK(flows.f_cv_in >= 0.0);
        CHECK(flows.f_cv_out >= 0.0);

        CHECK(next.spillback >= s.spillback);
        CHECK(next.discharge_credit >= 0.0);
        CHECK(next.discharge_credit < 1.0);
        CHECK(next.theta == emergent_theta(next, pen.alpha));

        s = std::move(next);
    }
}

TEST_CASE("synthetic step invariants over random episodes") {
    PenetrationSpec pen;
    pen.mode = PenetrationMode::synthetic_theta;
    pen.alpha = 0.5;
    pen.theta_bound = 0.08;
    const double bound = 0.08; // min(theta_bound, alpha, 1 - alpha)
    const double q = 32.0;
    const double dt = 1.0 / 120.0;
    Rng rng(303);
    Rng drive(404);

    QueueState s;
    for (int t = 0; t < 250000; ++t) {
        const int arrivals = static_cast<int>(drive.next() % 11);
        const double metered = drive.uniform(0.0, 1200.0);
        auto [next, flows] = step(s, arrivals, metered, pen, q, dt, rng);

        CHECK(next.x_cv >= 0.0);
        CHECK(next.x_cv <= next.x_all);
        CHECK(next.x_all <= q);

        CHECK(std::abs(next.x_all - (s.x_all + dt * (flows.f_all_in - flows.f_all_out))) <=
              1e-9);
        CHECK(std::abs(next.x_cv - (s.x_cv + dt * (flows.f_cv_in - flows.f_cv_out))) <= 1e-9);

        // The realized fluctuation and share stay inside the walk's bounds.
        CHECK(std::abs(next.theta) <= bound + 1e-9);
        if (next.x_all > 0.0)
            CHECK(next.x_cv ==
                  doctest::Approx((pen.alpha + next.theta) * next.x_all).epsilon(1e-9));

        s = std::move(next);
    }
}

TEST_CASE("bernoulli tagging realizes the requested penetration") {
    PenetrationSpec pen;
    pen.alpha = 0.5;
    Rng rng(515);
    Rng drive(616);

    QueueState s;
    double theta_sum = 0.0;
    int nonempty = 0;
    for (int t = 0; t < 10000; ++t) {
        const int arrivals = static_cast<int>(drive.next() % 8);
        auto [next, flows] = step(s, arrivals, drive.uniform(0.0, 1000.0), pen, 32.0,
                                  1.0 / 120.0, rng);
        s = std::move(next);
        if (s.x_all > 0.0) {
            theta_sum += s.theta;
            ++nonempty;
        }
    }
    REQUIRE(nonempty > 5000);
    CHECK(std::abs(theta_sum / nonempty) < 0.02);
}

TEST_CASE("synthetic walk stays bounded and strongly autocorrelated") {
    PenetrationSpec pen;
    pen.mode = PenetrationMode::synthetic_theta;
    pen.alpha = 0.3;
    pen.theta_bound = 0.08;
    const double bound = 0.08; // min(0.08, 0.3, 0.7)
    Rng rng(717);

    std::vector<double> walk;
    double theta = 0.0;
    for (int t = 0; t < 10000; ++t) {
        theta = synthesize_theta(pen, theta, rng);
        CHECK(std::abs(theta) <= bound);
        walk.push_back(theta);
    }

    double mean = 0.0;
    for (double v : walk) mean += v;
    mean /= static_cast<double>(walk.size());
    double var = 0.0;
    double cov = 0.0;
    for (std::size_t i = 0; i < walk.size(); ++i) {
        var += (walk[i] - mean) * (walk[i] - mean);
        if (i + 1 < walk.size()) cov += (walk[i] - mean) * (walk[i + 1] - mean);
    }
    REQUIRE(var > 0.0);
    CHECK(cov / var > 0.5); // a walk, not white noise
}

TEST_CASE("synthetic walk respects the share-feasibility clamp") {
    // At alpha = 0.95 the walk bound collapses to 1 - alpha even though
    // theta_bound asks for more.
    PenetrationSpec pen;
    pen.mode = PenetrationMode::synthetic_theta;
    pen.alpha = 0.95;
    pen.theta_bound = 0.2;
    Rng rng(818);
    double theta = 0.0;
    for (int t = 0; t < 2000; ++t) {
        theta = synthesize_theta(pen, theta, rng);
        CHECK(std::abs(theta) <= 0.05 + 1e-15);
    }

    // A zero bound degenerates to literal zero.
    PenetrationSpec frozen = pen;
    frozen.theta_bound = 0.0;
    CHECK(synthesize_theta(frozen, 0.3, rng) == 0.0);
}

TEST_CASE("synthesize_theta rejects the tagging mode") {
    PenetrationSpec pen; // bernoulli_tagging
    Rng rng(1);
    CHECK_THROWS_AS((void)synthesize_theta(pen, 0.0, rng), std::logic_error);
}

// ============================================================================
// Measurement
// ============================================================================

TEST_CASE("measurement is truth plus recorded noise, exactly") {
    QueueState s;
    s.x_cv = 7.0;
    s.x_all = 12.0;
    FlowRecord flows{840.0, 600.0, 360.0, 240.0};
    NoiseSpec noise{10, 20, 60.0, 2.0};
    Rng rng(919);

    for (int t = 0; t < 30; ++t) {
        const Observation obs = measure(s, flows, noise, t, rng);

        // The additive identity holds bit-exactly by construction.
        CHECK(obs.z.f_all_in == flows.f_all_in + obs.w[0]);
        CHECK(obs.z.f_all_out == flows.f_all_out + obs.w[1]);
        CHECK(obs.z.f_cv_in == flows.f_cv_in + obs.w[2]);
        CHECK(obs.z.f_cv_out == flows.f_cv_out + obs.w[3]);
        CHECK(obs.z.x_cv == s.x_cv + obs.w[4]);

        const bool in_window = t >= 10 && t < 20;
        if (!in_window) {
            for (double wi : obs.w) CHECK(wi == 0.0);
            CHECK(obs.z.f_all_in == flows.f_all_in);
            CHECK(obs.z.x_cv == s.x_cv);
        }
    }
}

TEST_CASE("noise draws respect their bounds and center on zero") {
    QueueState s;
    FlowRecord flows;
    NoiseSpec noise{0, 10000, 60.0, 2.0};
    Rng rng(111);

    double flow_sum = 0.0;
    double count_sum = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const Observation obs = measure(s, flows, noise, t, rng);
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(obs.w[i]) <= 60.0);
            flow_sum += obs.w[i];
        }
        CHECK(std::abs(obs.w[4]) <= 2.0);
        count_sum += obs.w[4];
    }
    CHECK(std::abs(flow_sum / 40000.0) < 3.0);  // bound * 0.05
    CHECK(std::abs(count_sum / 10000.0) < 0.1);
}

TEST_CASE("noise realization is shared across bound scalings") {
    // The raw draws are scale-free: the same (seed, cycle) with different
    // bounds yields proportional noise, which is what makes noise sweeps
    // comparable run to run.
    QueueState s;
    FlowRecord flows;
    NoiseSpec unit{0, 100, 1.0, 1.0};
    NoiseSpec scaled{0, 100, 90.0, 3.0};

    Rng rng_a(2024);
    Rng rng_b(2024);
    for (int t = 0; t < 100; ++t) {
        const Observation a = measure(s, flows, unit, t, rng_a);
        const Observation b = measure(s, flows, scaled, t, rng_b);
        for (int i = 0; i < 4; ++i) CHECK(b.w[i] == 90.0 * a.w[i]);
        CHECK(b.w[4] == 3.0 * a.w[4]);
    }
}

TEST_CASE("out-of-window cycles consume no draws") {
    QueueState s;
    FlowRecord flows;
    NoiseSpec noise{5, 6, 60.0, 2.0};

    Rng rng_a(77);
    for (int t = 0; t < 10; ++t) (void)measure(s, flows, noise, t, rng_a);

    // Only cycle 5 drew; a fresh stream that draws once must agree.
    Rng rng_b(77);
    const Observation direct = measure(s, flows, noise, 5, rng_b);
    Rng rng_c(77);
    for (int t = 0; t < 5; ++t) (void)measure(s, flows, noise, t, rng_c);
    const Observation replay = measure(s, flows, noise, 5, rng_c);
    for (int i = 0; i < 5; ++i) CHECK(replay.w[i] == direct.w[i]);
}

// ============================================================================
// Demand profile and occupancy proxies
// ============================================================================

TEST_CASE("demand holds segments and the last value") {
    const std::vector<DemandSegment> profile{{0, 720}, {60, 900}, {240, 960}};
    CHECK(demand(profile, 0.0) == 720.0);
    CHECK(demand(profile, 59.0) == 720.0);
    CHECK(demand(profile, 60.0) == 900.0);
    CHECK(demand(profile, 61.0) == 900.0);
    CHECK(demand(profile, 239.0) == 900.0);
    CHECK(demand(profile, 240.0) == 960.0);
    CHECK(demand(profile, 1e9) == 960.0);

    // Before the first start the first rate holds.
    const std::vector<DemandSegment> late{{10, 500}};
    CHECK(demand(late, 5.0) == 500.0);

    CHECK_THROWS_AS((void)demand(std::vector<DemandSegment>{}, 0.0), std::invalid_argument);
}

TEST_CASE("occupancy proxies") {
    OccupancyParams p;
    p.q_capacity = 32.0;
    p.coupling = 0.35;
    p.r_max = 900.0;

    QueueState s;
    FlowRecord prev;

    CHECK(occupancy_proxy(s, prev, 0.22, p).o_a == 0.0);
    s.x_all = 32.0;
    CHECK(occupancy_proxy(s, prev, 0.22, p).o_a == 1.0);
    s.x_all = 16.0;
    CHECK(occupancy_proxy(s, prev, 0.22, p).o_a == 0.5);
    s.x_all = 64.0; // beyond capacity still saturates at 1
    CHECK(occupancy_proxy(s, prev, 0.22, p).o_a == 1.0);

    p.exponent = 2.0;
    s.x_all = 16.0;
    CHECK(occupancy_proxy(s, prev, 0.22, p).o_a == doctest::Approx(0.25));
    p.exponent = 1.0;

    // Mainline: base plus merge share of the previous discharge.
    prev.f_all_out = 450.0;
    CHECK(occupancy_proxy(s, prev, 0.22, p).o_m == doctest::Approx(0.22 + 0.35 * 0.5));
    prev.f_all_out = 900.0;
    CHECK(occupancy_proxy(s, prev, 0.9, p).o_m == 1.0); // clamped
    prev.f_all_out = -100.0;
    CHECK(occupancy_proxy(s, prev, 0.4, p).o_m == doctest::Approx(0.4));
    p.r_max = 0.0;
    prev.f_all_out = 500.0;
    CHECK(occupancy_proxy(s, prev, 0.4, p).o_m == doctest::Approx(0.4));
}
