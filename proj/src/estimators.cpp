#include "ramp_sentinel/estimators.hpp"

#include <algorithm>

namespace ramp {

RobustFilterState robust_step(const FilterDesign& design, const RobustFilterState& state,
                              const Measurement& z, std::optional<double> clamp_capacity) {
    const double innovation = z.x_cv - state.x_cv;
    const double l1 = design.L(0, 0);
    const double l2 = design.L(1, 0);
    RobustFilterState next;
    next.x_all = state.x_all + design.dt * (z.f_all_in - z.f_all_out) + l1 * innovation;
    next.x_cv = design.alpha * state.x_all + design.dt * (z.f_cv_in - z.f_cv_out) + l2 * innovation;
    if (clamp_capacity) {
        next.x_all = std::clamp(next.x_all, 0.0, *clamp_capacity);
        next.x_cv = std::clamp(next.x_cv, 0.0, *clamp_capacity);
    }
    return next;
}

double open_loop_estimate(const Measurement& z, double prev_estimate, double eps_flow,
                          double min_ratio_sum) {
    if (z.f_all_in < eps_flow || z.f_all_out < eps_flow) return prev_estimate;
    const double ratio_sum = z.f_cv_in / z.f_all_in + z.f_cv_out / z.f_all_out;
    if (ratio_sum < min_ratio_sum) return prev_estimate;
    return 2.0 * z.x_cv / ratio_sum;
}

double kalman_baseline_step(double prev, const Measurement& z, double o_a_prev,
                            const KalmanBaselineParams& p, double dt) {
    const double share = p.vehicle_length / (p.vehicle_length + p.detector_length);
    const double occupancy_queue = p.q_bb * share * o_a_prev;
    const double next = prev + dt * (z.f_all_in - z.f_all_out) + p.k_f * (occupancy_queue - prev);
    return std::clamp(next, 0.0, p.q_capacity);
}

} // namespace ramp
