#pragma once
// ALINEA-style integral ramp metering with a queue override, producing the
// metered flow command that closes the loop on the plant.

namespace ramp {

struct MeteringParams {
    double k_i = 7000.0;         // integral gain, veh/h per unit occupancy error
    double o_m_target = 0.25;    // critical mainline occupancy
    double o_a_threshold = 0.75; // ramp occupancy that triggers the override
    double r_min = 200.0;        // veh/h
    double r_max = 900.0;        // veh/h

    friend bool operator==(const MeteringParams&, const MeteringParams&) = default;
};

// mid{r_min, r_prev + k_i*(o_m_target - o_m), r_max}. Carrying the returned
// (clipped) value as the next r_prev is what prevents integrator wind-up.
[[nodiscard]] double alinea_integral(double r_prev, double o_m, const MeteringParams& p);

// r_min below the threshold, r_max at or above it (the boundary discharges).
[[nodiscard]] double queue_override(double o_a, const MeteringParams& p);

// Final command: the more permissive of the two requests.
[[nodiscard]] double meter(double r_i, double r_o);

} // namespace ramp
