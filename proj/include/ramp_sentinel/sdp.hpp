#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ramp_sentinel/lmi.hpp"
#include "ramp_sentinel/matops.hpp"

namespace ramp {

struct SolveOptions {
    double beta = 0.1;             // noise-bound weight in the objective mu1 + beta*mu2
    double dt = 1.0 / 120.0;       // cycle length in hours
    double mu1_cap = 1.0;          // hard upper bound on mu1 (relative error bound <= 1)
    double epsilon_margin = 1e-7;  // post-hoc certification margin
    double objective_tol = 1e-6;   // relative duality-gap stopping tolerance
    int max_newton_iters = 4000;   // total Newton budget across phases and restarts

    friend bool operator==(const SolveOptions&, const SolveOptions&) = default;
};

// A certified filter design: P, L and the error bounds, together with the
// parameters it was solved for. Invariants established by solve_p1:
// P > I, 0 < mu3 < mu1 <= mu1_cap, mu2 > 0, and the synthesis LMI is
// negative definite with margin epsilon_margin.
struct FilterDesign {
    double alpha = 0.0;
    double theta_bound = 0.0;
    double beta = 0.0;
    double dt = 0.0;
    Mat P;  // 2x2
    Mat L;  // 2x1
    double mu1 = 0.0;
    double mu2 = 0.0;
    double mu3 = 0.0;
    double objective = 0.0;  // mu1 + beta*mu2
    int newton_iters = 0;

    [[nodiscard]] LmiPoint point() const;
};

// No strictly feasible point exists (for this alpha, theta_bound, and mu1 cap).
struct InfeasibleProgram : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The method ran out of budget before certifying; carries the best iterate.
struct ConvergenceFailure : std::runtime_error {
    ConvergenceFailure(const std::string& what, const LmiPoint& best_point, double best_objective)
        : std::runtime_error(what), best(best_point), objective(best_objective) {}
    LmiPoint best;
    double objective;
};

// Minimizes mu1 + beta*mu2 subject to the synthesis LMI being negative
// definite, P positive definite, and mu1 <= mu1_cap, by a log-det barrier
// path-following method over the 8 scalar decision variables. The returned
// design is re-certified from scratch by Cholesky with epsilon_margin.
// Degenerate geometries (theta_bound near zero pins the multipliers at their
// margins) can exhaust double precision before objective_tol is met; such a
// solve is accepted if its duality gap is already below 1e-4 relative, and
// reported as a ConvergenceFailure otherwise.
[[nodiscard]] FilterDesign solve_p1(double alpha, double theta_bound,
                                    const SolveOptions& opts = {});

struct OracleResult {
    bool feasible = false;
    double objective = 0.0;
    LmiPoint best;
    std::uint64_t feasible_samples = 0;
};

// Solver-independent reference: adaptive random search over the same decision
// variables, accepting a sample iff a Cholesky check certifies the shifted
// LMI. Sampling re-centers on the incumbent with a shrinking radius and
// restarts from heuristic centers on stall; it never consults solve_p1.
[[nodiscard]] OracleResult random_search_oracle(double alpha, double theta_bound,
                                                const SolveOptions& opts, std::uint64_t budget,
                                                std::uint64_t seed);

}  // namespace ramp
