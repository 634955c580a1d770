#include "ramp_sentinel/lmi.hpp"

#include <array>
#include <stdexcept>

namespace ramp {

namespace {

Mat p_matrix(const LmiPoint& v) {
    return Mat(2, 2, {v.p11, v.p12, v.p12, v.p22});
}

Mat r_matrix(const LmiPoint& v) {
    return Mat(2, 1, {v.r1, v.r2});
}

// L = P^{-1} R by the 2x2 inverse; P must be positive definite.
Mat gain_from(const LmiPoint& v) {
    const double det = v.p11 * v.p22 - v.p12 * v.p12;
    if (!(v.p11 > 0.0) || !(det > 0.0))
        throw std::invalid_argument("gain recovery needs positive definite P");
    return Mat(2, 1, {(v.p22 * v.r1 - v.p12 * v.r2) / det, (v.p11 * v.r2 - v.p12 * v.r1) / det});
}

Mat delta_a(double theta) {
    return Mat(2, 2, {0.0, 0.0, theta, 0.0});
}

}  // namespace

SystemMatrices system_matrices(double alpha, double dt) {
    if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("alpha must be in (0, 1]");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    SystemMatrices s;
    s.A = Mat(2, 2, {1.0, 0.0, alpha, 0.0});
    s.B = Mat(2, 5, {dt, -dt, 0.0, 0.0, 0.0, 0.0, 0.0, dt, -dt, 0.0});
    s.C = Mat(1, 2, {0.0, 1.0});
    s.D = -1.0 * s.B;
    s.E = Mat(1, 5, {0.0, 0.0, 0.0, 0.0, 1.0});
    return s;
}

SymMatrix assemble_theorem_lmi(const LmiPoint& v, double alpha, double theta_bound, double dt) {
    const SystemMatrices s = system_matrices(alpha, dt);
    const Mat P = p_matrix(v);
    const Mat R = r_matrix(v);
    const Mat I2 = Mat::identity(2);

    const std::array<int, 5> bands{2, 2, 2, 2, 5};
    const std::array<Block, 8> blocks{{
        {0, 0, -v.mu3 * I2},
        {0, 1, theta_bound * P},
        {1, 1, -1.0 * P},
        {1, 2, P * s.A - R * s.C},
        {1, 4, P * s.D - R * s.E},
        {2, 2, -1.0 * P + I2},
        {3, 3, (v.mu3 - v.mu1) * I2},
        {4, 4, (-v.mu2) * Mat::identity(5)},
    }};
    return assemble_blocks(bands, blocks);
}

CertificateMatrices certificate_matrices(const LmiPoint& v, double theta, double alpha,
                                         double dt) {
    const SystemMatrices s = system_matrices(alpha, dt);
    const Mat P = p_matrix(v);
    const Mat L = gain_from(v);
    const Mat AmLC = s.A - L * s.C;
    const Mat DmLE = s.D - L * s.E;
    const Mat dA = delta_a(theta);

    CertificateMatrices out;
    out.W = Mat(2, 9);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.W(i, j) = AmLC(i, j);
            out.W(i, 2 + j) = dA(i, j);
        }
        for (int j = 0; j < 5; ++j) out.W(i, 4 + j) = DmLE(i, j);
    }

    out.U = SymMatrix(9);
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) out.U.set(i, j, -P(i, j) + (i == j ? 1.0 : 0.0));
    for (int i = 2; i < 4; ++i) out.U.set(i, i, -v.mu1);
    for (int i = 4; i < 9; ++i) out.U.set(i, i, -v.mu2);

    const Mat PW = P * out.W;
    out.coupled = SymMatrix(11);
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) out.coupled.set(i, j, -P(i, j));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 9; ++j) out.coupled.set(i, 2 + j, PW(i, j));
    for (int i = 0; i < 9; ++i)
        for (int j = i; j < 9; ++j) out.coupled.set(2 + i, 2 + j, out.U(i, j));
    return out;
}

SymMatrix young_certificate(const LmiPoint& v, double theta, double theta_bound) {
    if (!(theta_bound > 0.0))
        throw std::invalid_argument("young certificate needs theta_bound > 0");
    if (!(v.mu3 > 0.0)) throw std::invalid_argument("young certificate needs mu3 > 0");

    const Mat P = p_matrix(v);

    // Pt = [Tb*P; 0] (11x2), It selects the third band (2x11), F = DeltaA/Tb.
    Mat Pt(11, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) Pt(i, j) = theta_bound * P(i, j);
    Mat It(2, 11);
    It(0, 4) = 1.0;
    It(1, 5) = 1.0;
    const Mat F = (1.0 / theta_bound) * delta_a(theta);

    const Mat cross = Pt * F * It;
    const Mat quad = (1.0 / v.mu3) * (Pt * transpose(Pt)) + v.mu3 * (transpose(It) * It);

    SymMatrix out(11);
    for (int i = 0; i < 11; ++i)
        for (int j = i; j < 11; ++j) out.set(i, j, quad(i, j) - cross(i, j) - cross(j, i));
    return out;
}

}  // namespace ramp
