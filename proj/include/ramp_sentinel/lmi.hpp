#pragma once

#include "ramp_sentinel/matops.hpp"

namespace ramp {

// ============================================================================
// Queue state model
// ============================================================================
//
// State x = (x_all, x_cv) in vehicles, flows f in veh/h, dt in hours:
//
//   x(t+1) = (A + DeltaA(t)) x(t) + B f(t),   DeltaA(t) = [[0,0],[theta(t),0]]
//   y(t)   = C x(t) + E w(t)
//
// f stacks the four measured flows plus a zero slot for the count channel;
// w is the 5-channel measurement noise. D = -B carries flow noise into the
// state equation, E picks the count noise out of the measurement.

struct SystemMatrices {
    Mat A;  // 2x2
    Mat B;  // 2x5
    Mat C;  // 1x2
    Mat D;  // 2x5
    Mat E;  // 1x5
};

[[nodiscard]] SystemMatrices system_matrices(double alpha, double dt);

// ============================================================================
// Synthesis LMI
// ============================================================================

// Decision variables of the filter synthesis program. P = [[p11,p12],[p12,p22]]
// is the Lyapunov matrix, R = P*L substitutes the filter gain, mu1 bounds the
// state-energy transfer, mu2 the noise-energy transfer, mu3 is the multiplier
// absorbing the penetration fluctuation.
struct LmiPoint {
    double p11 = 0.0, p12 = 0.0, p22 = 0.0;
    double r1 = 0.0, r2 = 0.0;
    double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0;
};

// The 13x13 symmetric synthesis matrix, block bands of sizes (2,2,2,2,5):
//
//   [ -mu3 I  Tb P    0        0            0        ]
//   [   .     -P      P A-R C  0            P D-R E  ]
//   [   .      .      -P + I   0            0        ]
//   [   .      .       .       (mu3-mu1) I  0        ]
//   [   .      .       .        .           -mu2 I   ]
//
// with Tb the penetration fluctuation bound. Negative definiteness at a point
// certifies the filter L = P^{-1} R with the point's (mu1, mu2) error bounds.
[[nodiscard]] SymMatrix assemble_theorem_lmi(const LmiPoint& v, double alpha, double theta_bound,
                                             double dt);

// ============================================================================
// Certificates behind the LMI
// ============================================================================

// The pieces the stability proof runs on, at a concrete fluctuation theta:
// the coupled matrix is the Schur-complement lift of W'PW + U < 0, so its
// negative definiteness at every |theta| <= theta_bound is what the single
// synthesis LMI guarantees.
struct CertificateMatrices {
    Mat W;              // 2x9:  [A - L C,  DeltaA(theta),  D - L E]
    SymMatrix U;        // 9x9:  diag(-P + I, -mu1 I, -mu2 I)
    SymMatrix coupled;  // 11x11: [[-P, P W], [W'P, U]]
};

[[nodiscard]] CertificateMatrices certificate_matrices(const LmiPoint& v, double theta,
                                                       double alpha, double dt);

// Completion-of-squares slack of the fluctuation bound: with
// Pt = [Tb*P; 0] (11x2), It = [0 0 I 0] (2x11) and F = DeltaA(theta)/Tb,
//
//   (1/mu3) Pt Pt' + mu3 It'It - Pt F It - It'F'Pt'
//
// is positive semidefinite for every |theta| <= theta_bound; it is the exact
// gap between the coupled certificate and its theta-independent bound.
// Requires theta_bound > 0 and mu3 > 0.
[[nodiscard]] SymMatrix young_certificate(const LmiPoint& v, double theta, double theta_bound);

}  // namespace ramp
