#include "ramp_sentinel/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ramp {

double emergent_theta(const QueueState& state, double alpha) {
    if (state.x_all <= 0.0) return 0.0;
    return state.x_cv / state.x_all - alpha;
}

double synthesize_theta(const PenetrationSpec& pen, double theta_prev, Rng& rng) {
    if (pen.mode != PenetrationMode::synthetic_theta) {
        throw std::logic_error("synthesize_theta requires synthetic_theta mode");
    }
    const double bound = std::min({pen.theta_bound, pen.alpha, 1.0 - pen.alpha});
    if (bound <= 0.0) return 0.0;
    const double sigma = pen.theta_bound / 10.0;
    return std::clamp(theta_prev + rng.normal(0.0, sigma), -bound, bound);
}

std::pair<QueueState, FlowRecord> step(const QueueState& state, int arrivals,
                                       double metered_outflow, const PenetrationSpec& pen,
                                       double q_capacity, double dt, Rng& rng) {
    QueueState next = state;
    FlowRecord flows;

    // Discharge: the meter accrues fractional-vehicle credit; only whole
    // vehicles leave, and service offered to an empty queue is forfeited.
    next.discharge_credit += std::max(0.0, metered_outflow) * dt;
    const int avail = static_cast<int>(std::llround(state.x_all));
    const int want = static_cast<int>(std::floor(next.discharge_credit));
    const int discharged = std::min(want, avail);
    next.discharge_credit -= discharged;
    if (discharged < want) next.discharge_credit = 0.0;

    int cv_out = 0;
    if (pen.mode == PenetrationMode::bernoulli_tagging) {
        for (int i = 0; i < discharged; ++i) {
            cv_out += next.tags.front() ? 1 : 0;
            next.tags.pop_front();
        }
    }

    // Admission: clip at capacity, count rejections as spillback.
    const int room =
        static_cast<int>(std::floor(q_capacity + 1e-9)) - (avail - discharged);
    const int admitted = std::clamp(arrivals, 0, std::max(0, room));
    next.spillback += arrivals - admitted;

    if (pen.mode == PenetrationMode::bernoulli_tagging) {
        int cv_in = 0;
        for (int i = 0; i < admitted; ++i) {
            const bool cv = rng.bernoulli(pen.alpha);
            cv_in += cv ? 1 : 0;
            next.tags.push_back(cv);
        }
        next.x_all = static_cast<double>(next.tags.size());
        next.x_cv = state.x_cv - cv_out + cv_in;
        next.theta = emergent_theta(next, pen.alpha);
        flows.f_cv_in = cv_in / dt;
        flows.f_cv_out = cv_out / dt;
    } else {
        next.x_all = static_cast<double>(avail - discharged + admitted);
        // The CV share tracks the synthetic walk as closely as the realized
        // vehicle movements allow; theta is then re-derived from the clamped
        // share so x_cv = (alpha + theta) * x_all holds exactly.
        const double walk = synthesize_theta(pen, state.theta, rng);
        const double lo = std::max(0.0, state.x_cv - discharged);
        const double hi = std::min(next.x_all, state.x_cv + admitted);
        const double target = (pen.alpha + walk) * next.x_all;
        next.x_cv = std::clamp(target, lo, hi);
        next.theta = next.x_all > 0.0 ? next.x_cv / next.x_all - pen.alpha : walk;
        flows.f_cv_in = std::max(0.0, next.x_cv - state.x_cv) / dt;
        flows.f_cv_out = std::max(0.0, state.x_cv - next.x_cv) / dt;
    }

    flows.f_all_in = admitted / dt;
    flows.f_all_out = discharged / dt;
    return {std::move(next), flows};
}

Observation measure(const QueueState& state, const FlowRecord& flows, const NoiseSpec& noise,
                    int t, Rng& rng) {
    Observation obs;
    if (t >= noise.window_start && t < noise.window_end) {
        for (int i = 0; i < 4; ++i) obs.w[i] = noise.flow_bound * rng.uniform(-1.0, 1.0);
        obs.w[4] = noise.count_bound * rng.uniform(-1.0, 1.0);
    }
    obs.z.f_all_in = flows.f_all_in + obs.w[0];
    obs.z.f_all_out = flows.f_all_out + obs.w[1];
    obs.z.f_cv_in = flows.f_cv_in + obs.w[2];
    obs.z.f_cv_out = flows.f_cv_out + obs.w[3];
    obs.z.x_cv = state.x_cv + obs.w[4];
    return obs;
}

double demand(std::span<const DemandSegment> profile, double t) {
    if (profile.empty()) throw std::invalid_argument("demand profile is empty");
    double rate = profile.front().rate;
    for (const DemandSegment& seg : profile) {
        if (seg.start_cycle > t) break;
        rate = seg.rate;
    }
    return rate;
}

OccupancyReading occupancy_proxy(const QueueState& state, const FlowRecord& prev_flows,
                                 double mainline_base, const OccupancyParams& p) {
    OccupancyReading r;
    const double fill = std::clamp(state.x_all / p.q_capacity, 0.0, 1.0);
    r.o_a = p.exponent == 1.0 ? fill : std::pow(fill, p.exponent);
    const double merge = p.r_max > 0.0 ? std::max(0.0, prev_flows.f_all_out) / p.r_max : 0.0;
    r.o_m = std::clamp(mainline_base + p.coupling * merge, 0.0, 1.0);
    return r;
}

} // namespace ramp
