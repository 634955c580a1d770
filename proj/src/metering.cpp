#include "ramp_sentinel/metering.hpp"

#include <algorithm>

namespace ramp {

double alinea_integral(double r_prev, double o_m, const MeteringParams& p) {
    return std::clamp(r_prev + p.k_i * (p.o_m_target - o_m), p.r_min, p.r_max);
}

double queue_override(double o_a, const MeteringParams& p) {
    return o_a >= p.o_a_threshold ? p.r_max : p.r_min;
}

double meter(double r_i, double r_o) {
    return std::max(r_i, r_o);
}

} // namespace ramp
