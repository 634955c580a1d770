#pragma once
// The three queue-length estimators: the certified robust filter, the
// open-loop flow-ratio estimator, and the occupancy-driven Kalman baseline.

#include "ramp_sentinel/plant.hpp"
#include "ramp_sentinel/sdp.hpp"

#include <optional>

namespace ramp {

// Robust filter state (x_all, x_cv estimates, vehicles).
struct RobustFilterState {
    double x_all = 0.0;
    double x_cv = 0.0;
};

struct KalmanBaselineParams {
    double k_f = 0.1;             // correction gain, in (0, 1]
    double vehicle_length = 5.0;  // average physical vehicle length, m
    double detector_length = 10.0; // sensor zone length, m
    double q_bb = 32.0;           // back-of-queue capacity, vehicles
    double q_capacity = 32.0;     // clamp bound for the estimate

    friend bool operator==(const KalmanBaselineParams&, const KalmanBaselineParams&) = default;
};

// One filter update: model prediction from the four noisy flow channels plus
// gain times the innovation y - x_cv_hat. Clamping to [0, clamp_capacity] is
// available as a reporting option; the certified guarantee is for the
// unclamped recursion, so it defaults off.
[[nodiscard]] RobustFilterState robust_step(const FilterDesign& design,
                                            const RobustFilterState& state, const Measurement& z,
                                            std::optional<double> clamp_capacity = std::nullopt);

// Flow-ratio estimate 2*x_cv_tilde / (f_cv_in/f_all_in + f_cv_out/f_all_out).
// Holds the previous estimate when either total flow is below eps_flow or
// the ratio sum is below min_ratio_sum (degenerate cycles carry no usable
// penetration information).
[[nodiscard]] double open_loop_estimate(const Measurement& z, double prev_estimate,
                                        double eps_flow = 120.0, double min_ratio_sum = 0.2);

// Flow integration corrected toward an occupancy-implied queue:
// prev + dt*(f_all_in - f_all_out) + k_f*(q_bb*share*o_a_prev - prev) with
// share = vehicle_length / (vehicle_length + detector_length), clamped to
// [0, q_capacity].
[[nodiscard]] double kalman_baseline_step(double prev, const Measurement& z, double o_a_prev,
                                          const KalmanBaselineParams& p, double dt);

} // namespace ramp
