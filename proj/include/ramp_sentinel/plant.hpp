#pragma once
// Synthetic on-ramp ground truth: a discrete-vehicle FIFO queue with
// connected-vehicle tagging, conservation dynamics under capacity clipping,
// and the five-channel windowed-noise measurement model.

#include "ramp_sentinel/rng.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <span>
#include <utility>

namespace ramp {

enum class PenetrationMode {
    bernoulli_tagging, // each admitted vehicle is CV with probability alpha
    synthetic_theta,   // CV share follows a bounded random walk around alpha
};

struct PenetrationSpec {
    PenetrationMode mode = PenetrationMode::bernoulli_tagging;
    double alpha = 0.5;        // market penetration rate of connected vehicles
    double theta_bound = 0.08; // |theta| bound, synthetic mode only

    friend bool operator==(const PenetrationSpec&, const PenetrationSpec&) = default;
};

// Physical queue state. Invariant: 0 <= x_cv <= x_all <= capacity.
// `tags` holds the FIFO composition in bernoulli mode (front leaves first);
// the counts are kept in sync with it. `theta` is the penetration
// fluctuation at this cycle: the emergent ratio x_cv/x_all - alpha in
// bernoulli mode, the walk value in synthetic mode.
struct QueueState {
    double x_all = 0.0;
    double x_cv = 0.0;
    double theta = 0.0;
    double discharge_credit = 0.0; // fractional vehicle owed by the meter
    std::int64_t spillback = 0;    // cumulative arrivals rejected at capacity
    std::deque<bool> tags;
};

struct FlowRecord {
    double f_all_in = 0.0; // veh/h realized over one cycle
    double f_all_out = 0.0;
    double f_cv_in = 0.0;
    double f_cv_out = 0.0;
};

struct Measurement {
    double f_all_in = 0.0;
    double f_all_out = 0.0;
    double f_cv_in = 0.0;
    double f_cv_out = 0.0;
    double x_cv = 0.0; // noisy connected-vehicle count
};

// Measurement plus the noise actually injected (ordered as the channels
// above) so downstream energy bookkeeping is exact.
struct Observation {
    Measurement z;
    std::array<double, 5> w{};
};

struct NoiseSpec {
    int window_start = 0; // noise active on cycles [window_start, window_end)
    int window_end = 0;
    double flow_bound = 60.0; // veh/h, uniform on [-flow_bound, flow_bound]
    double count_bound = 2.0; // veh, uniform on [-count_bound, count_bound]

    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

struct DemandSegment {
    double start_cycle = 0.0;
    double rate = 0.0; // held from start_cycle until the next segment starts

    friend bool operator==(const DemandSegment&, const DemandSegment&) = default;
};

struct OccupancyParams {
    double q_capacity = 32.0; // filled from the scenario by the harness
    double exponent = 1.0;    // o_A = min(1, x_all/Q)^exponent
    double coupling = 0.35;   // mainline occupancy added per unit of outflow/r_max
    double r_max = 900.0;

    friend bool operator==(const OccupancyParams&, const OccupancyParams&) = default;
};

struct OccupancyReading {
    double o_a = 0.0; // ramp detector occupancy proxy
    double o_m = 0.0; // mainline detector occupancy proxy
};

// x_cv/x_all - alpha when the queue is nonempty, 0 otherwise.
[[nodiscard]] double emergent_theta(const QueueState& state, double alpha);

// Bounded random walk: clamp(theta_prev + N(0, theta_bound/10), -b, b) with
// b = min(theta_bound, alpha, 1 - alpha) so alpha + theta stays in [0, 1].
// Throws std::logic_error outside synthetic_theta mode.
[[nodiscard]] double synthesize_theta(const PenetrationSpec& pen, double theta_prev, Rng& rng);

// One conservation step: discharge whole vehicles against the metered-flow
// credit, then admit arrivals up to capacity (rejections are counted as
// spillback). Realized flows satisfy f_all >= f_cv >= 0 channelwise and the
// conservation identity x' = x + dt*(f_in - f_out) exactly.
[[nodiscard]] std::pair<QueueState, FlowRecord> step(const QueueState& state, int arrivals,
                                                     double metered_outflow,
                                                     const PenetrationSpec& pen, double q_capacity,
                                                     double dt, Rng& rng);

// Truth plus noise: inside [window_start, window_end) each flow channel gets
// an independent uniform draw scaled by flow_bound and the count channel one
// scaled by count_bound; outside the window w = 0 and no draws are consumed.
// The raw draws are scale-free, so runs differing only in the bounds share
// the same noise realization shape.
[[nodiscard]] Observation measure(const QueueState& state, const FlowRecord& flows,
                                  const NoiseSpec& noise, int t, Rng& rng);

// Piecewise-constant table lookup holding the last value; throws
// std::invalid_argument on an empty profile.
[[nodiscard]] double demand(std::span<const DemandSegment> profile, double t);

// Detector proxies: o_A from ramp fill, o_M from an exogenous mainline base
// plus the share of the previous cycle's ramp discharge merging in.
[[nodiscard]] OccupancyReading occupancy_proxy(const QueueState& state,
                                               const FlowRecord& prev_flows, double mainline_base,
                                               const OccupancyParams& p);

} // namespace ramp
