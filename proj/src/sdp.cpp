#include "ramp_sentinel/sdp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace ramp {

namespace {

constexpr int kVars = 8;  // p11 p12 p22 r1 r2 mu1 mu2 mu3

double& field(LmiPoint& v, int k) {
    switch (k) {
        case 0: return v.p11;
        case 1: return v.p12;
        case 2: return v.p22;
        case 3: return v.r1;
        case 4: return v.r2;
        case 5: return v.mu1;
        case 6: return v.mu2;
        default: return v.mu3;
    }
}

LmiPoint to_point(const std::vector<double>& x) {
    LmiPoint v;
    for (int k = 0; k < kVars; ++k) field(v, k) = x[k];
    return v;
}

void validate_inputs(double alpha, double theta_bound, const SolveOptions& opts) {
    if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("alpha must be in (0, 1]");
    if (!(theta_bound >= 0.0) || theta_bound >= 1.0)
        throw std::invalid_argument("theta_bound must be in [0, 1)");
    if (!(opts.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(opts.beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    if (!(opts.mu1_cap > 0.0)) throw std::invalid_argument("mu1_cap must be positive");
    if (!(opts.epsilon_margin > 0.0) || !(opts.objective_tol > 0.0))
        throw std::invalid_argument("tolerances must be positive");
}

// ----------------------------------------------------------------------------
// Barrier subproblem shared by both phases
// ----------------------------------------------------------------------------
//
// Variables x in R^n, LMI part G(x) = -(m0 + sum x_k mk) - eps_lmi*I > 0,
// optional 2x2 cone P(x) - eps_p*I > 0 on variables (0,1,2), optional scalar
// cap on one variable. Barrier parameter nu = 13 + 2 + 1.

struct BarrierProblem {
    int nvars = 0;
    SymMatrix m0;
    std::vector<SymMatrix> mk;
    double eps_lmi = 0.0;
    bool has_pcone = false;
    double eps_p = 0.0;
    bool has_cap = false;
    int cap_var = 5;
    double cap = 0.0;
    // Symmetric box |v_k| <= box[k] per variable. The boxes sit far outside
    // any meaningful design; they exist because the log-det barrier alone is
    // unbounded below along directions that only inflate slack (mu2 always,
    // and the whole P scale when theta_bound = 0).
    std::vector<double> box;
    std::vector<double> cost;

    [[nodiscard]] double nu() const {
        return 13.0 + (has_pcone ? 2.0 : 0.0) + (has_cap ? 1.0 : 0.0) +
               2.0 * static_cast<double>(box.size());
    }
};

struct Eval {
    bool ok = false;
    double phi = 0.0;
    std::vector<double> grad;
    std::vector<double> hess;  // nvars x nvars, row-major
};

void build_lmi_value(const BarrierProblem& pb, const std::vector<double>& x, SymMatrix& g) {
    const int n = pb.m0.dim();
    g = SymMatrix(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = pb.m0(i, j);
            for (int k = 0; k < pb.nvars; ++k) v += x[k] * pb.mk[k](i, j);
            g.set(i, j, -v - (i == j ? pb.eps_lmi : 0.0));
        }
}

// Inverse of an SPD matrix from its lower Cholesky factor, by solving for
// basis vectors. Sizes here are at most 13.
void spd_inverse(int n, const std::vector<double>& l, std::vector<double>& inv) {
    inv.assign(std::size_t(n) * n, 0.0);
    std::vector<double> y(n), z(n);
    for (int col = 0; col < n; ++col) {
        for (int i = 0; i < n; ++i) {
            double s = (i == col) ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k) s -= l[std::size_t(i) * n + k] * y[k];
            y[i] = s / l[std::size_t(i) * n + i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = y[i];
            for (int k = i + 1; k < n; ++k) s -= l[std::size_t(k) * n + i] * z[k];
            z[i] = s / l[std::size_t(i) * n + i];
        }
        for (int i = 0; i < n; ++i) inv[std::size_t(i) * n + col] = z[i];
    }
}

bool eval_barrier(const BarrierProblem& pb, const std::vector<double>& x, bool with_derivatives,
                  Eval& e) {
    e.ok = false;
    e.phi = 0.0;
    const int nv = pb.nvars;

    // Scalar cap
    double cap_slack = 1.0;
    if (pb.has_cap) {
        cap_slack = pb.cap - x[pb.cap_var];
        if (!(cap_slack > 0.0)) return false;
        e.phi -= std::log(cap_slack);
    }

    // Boxes
    if (!pb.box.empty()) {
        for (int k = 0; k < nv; ++k) {
            const double hi = pb.box[k] - x[k];
            const double lo = pb.box[k] + x[k];
            if (!(hi > 0.0) || !(lo > 0.0)) return false;
            e.phi -= std::log(hi) + std::log(lo);
        }
    }

    // 2x2 P cone
    double pa = 0, pb12 = 0, pc = 0, pdet = 0;
    if (pb.has_pcone) {
        pa = x[0] - pb.eps_p;
        pb12 = x[1];
        pc = x[2] - pb.eps_p;
        pdet = pa * pc - pb12 * pb12;
        if (!(pa > 0.0) || !(pdet > 0.0)) return false;
        e.phi -= std::log(pdet);
    }

    // LMI cone
    SymMatrix g;
    build_lmi_value(pb, x, g);
    static thread_local std::vector<double> l;
    if (!cholesky_factor(g, l)) return false;
    const int n = g.dim();
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += std::log(l[std::size_t(i) * n + i]);
    e.phi -= 2.0 * logdet;

    if (with_derivatives) {
        e.grad.assign(nv, 0.0);
        e.hess.assign(std::size_t(nv) * nv, 0.0);

        static thread_local std::vector<double> ginv;
        spd_inverse(n, l, ginv);

        // S_k = Ginv * Mk; grad_k = tr(Ginv Mk), hess_kl = tr(S_k S_l).
        static thread_local std::vector<double> s_all;
        s_all.assign(std::size_t(nv) * n * n, 0.0);
        for (int k = 0; k < nv; ++k) {
            const SymMatrix& mk = pb.mk[k];
            double* sk = s_all.data() + std::size_t(k) * n * n;
            double tr = 0.0;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int m = 0; m < n; ++m) acc += ginv[std::size_t(i) * n + m] * mk(m, j);
                    sk[std::size_t(i) * n + j] = acc;
                }
                tr += sk[std::size_t(i) * n + i];
            }
            e.grad[k] += tr;
        }
        for (int k = 0; k < nv; ++k) {
            const double* sk = s_all.data() + std::size_t(k) * n * n;
            for (int m = k; m < nv; ++m) {
                const double* sm = s_all.data() + std::size_t(m) * n * n;
                double acc = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        acc += sk[std::size_t(i) * n + j] * sm[std::size_t(j) * n + i];
                e.hess[std::size_t(k) * nv + m] += acc;
                if (m != k) e.hess[std::size_t(m) * nv + k] += acc;
            }
        }

        if (pb.has_pcone) {
            // Pinv of the shifted 2x2 block; basis E11, E12+E21, E22.
            const double i11 = pc / pdet, i12 = -pb12 / pdet, i22 = pa / pdet;
            const double tr_grad[3] = {i11, 2.0 * i12, i22};
            for (int k = 0; k < 3; ++k) e.grad[k] -= tr_grad[k];
            // tr(Pinv Ek Pinv El) for the three basis elements.
            const double h[3][3] = {
                {i11 * i11, 2.0 * i11 * i12, i12 * i12},
                {2.0 * i11 * i12, 2.0 * (i11 * i22 + i12 * i12), 2.0 * i12 * i22},
                {i12 * i12, 2.0 * i12 * i22, i22 * i22},
            };
            for (int k = 0; k < 3; ++k)
                for (int m = 0; m < 3; ++m) e.hess[std::size_t(k) * nv + m] += h[k][m];
        }

        if (pb.has_cap) {
            e.grad[pb.cap_var] += 1.0 / cap_slack;
            e.hess[std::size_t(pb.cap_var) * nv + pb.cap_var] += 1.0 / (cap_slack * cap_slack);
        }

        if (!pb.box.empty()) {
            for (int k = 0; k < nv; ++k) {
                const double hi = pb.box[k] - x[k];
                const double lo = pb.box[k] + x[k];
                e.grad[k] += 1.0 / hi - 1.0 / lo;
                e.hess[std::size_t(k) * nv + k] += 1.0 / (hi * hi) + 1.0 / (lo * lo);
            }
        }
    }

    e.ok = true;
    return true;
}

bool feasible_at(const BarrierProblem& pb, const std::vector<double>& x) {
    Eval e;
    return eval_barrier(pb, x, false, e);
}

// Solve H d = rhs for symmetric positive definite H (small n), with a ridge
// escalation fallback when H is numerically singular.
bool solve_newton_system(int n, std::vector<double> h, const std::vector<double>& rhs,
                         std::vector<double>& d) {
    double maxdiag = 0.0;
    for (int i = 0; i < n; ++i) maxdiag = std::max(maxdiag, std::abs(h[std::size_t(i) * n + i]));
    for (double ridge = 0.0;;) {
        SymMatrix hs(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                hs.set(i, j, h[std::size_t(i) * n + j] + (i == j ? ridge : 0.0));
        std::vector<double> l;
        if (cholesky_factor(hs, l)) {
            d.assign(n, 0.0);
            std::vector<double> y(n);
            for (int i = 0; i < n; ++i) {
                double s = rhs[i];
                for (int k = 0; k < i; ++k) s -= l[std::size_t(i) * n + k] * y[k];
                y[i] = s / l[std::size_t(i) * n + i];
            }
            for (int i = n - 1; i >= 0; --i) {
                double s = y[i];
                for (int k = i + 1; k < n; ++k) s -= l[std::size_t(k) * n + i] * d[k];
                d[i] = s / l[std::size_t(i) * n + i];
            }
            return true;
        }
        ridge = (ridge == 0.0) ? 1e-12 * (1.0 + maxdiag) : ridge * 100.0;
        if (ridge > 1e-2 * (1.0 + maxdiag)) return false;
    }
}

enum class CenterStatus { kCentered, kStalled, kBudget, kFloor };

// Damped Newton minimization of t*cost'x + phi(x) from a strictly feasible x.
// kFloor reports the double-precision limit: three consecutive accepted steps
// each moved the objective by less than 1e-12 relative, so the ridge-damped
// Newton direction can no longer make numerically visible progress.
CenterStatus center(const BarrierProblem& pb, std::vector<double>& x, double t,
                    int& budget) {
    const int nv = pb.nvars;
    Eval e;
    int floor_hits = 0;
    for (;;) {
        if (budget <= 0) return CenterStatus::kBudget;
        --budget;
        if (!eval_barrier(pb, x, true, e)) return CenterStatus::kStalled;

        std::vector<double> g(nv), rhs(nv);
        for (int k = 0; k < nv; ++k) {
            g[k] = t * pb.cost[k] + e.grad[k];
            rhs[k] = -g[k];
        }
        std::vector<double> d;
        if (!solve_newton_system(nv, e.hess, rhs, d)) return CenterStatus::kStalled;

        double gd = 0.0;
        for (int k = 0; k < nv; ++k) gd += g[k] * d[k];
        const double decrement2 = -gd;
        if (decrement2 / 2.0 < 1e-9) return CenterStatus::kCentered;

        const double f0 = [&] {
            double c = 0.0;
            for (int k = 0; k < nv; ++k) c += pb.cost[k] * x[k];
            return t * c + e.phi;
        }();

        double step = 1.0;
        std::vector<double> xn(nv);
        Eval etrial;
        double f_new = f0;
        for (;;) {
            for (int k = 0; k < nv; ++k) xn[k] = x[k] + step * d[k];
            if (eval_barrier(pb, xn, false, etrial)) {
                double c = 0.0;
                for (int k = 0; k < nv; ++k) c += pb.cost[k] * xn[k];
                const double f_trial = t * c + etrial.phi;
                if (f_trial <= f0 + 0.01 * step * gd) {
                    f_new = f_trial;
                    break;
                }
            }
            step *= 0.5;
            if (step < 1e-13) return CenterStatus::kStalled;
        }
        x = xn;
        if (f0 - f_new <= 1e-12 * (1.0 + std::abs(f0))) {
            if (++floor_hits >= 3) return CenterStatus::kFloor;
        } else {
            floor_hits = 0;
        }
    }
}

struct AffineLmi {
    SymMatrix m0;
    std::vector<SymMatrix> mk;
};

AffineLmi build_affine(double alpha, double theta_bound, double dt) {
    AffineLmi a;
    a.m0 = assemble_theorem_lmi(LmiPoint{}, alpha, theta_bound, dt);
    a.mk.reserve(kVars);
    for (int k = 0; k < kVars; ++k) {
        LmiPoint unit;
        field(unit, k) = 1.0;
        a.mk.push_back(assemble_theorem_lmi(unit, alpha, theta_bound, dt) - a.m0);
    }
    return a;
}

BarrierProblem main_problem(const AffineLmi& a, const SolveOptions& opts) {
    BarrierProblem pb;
    pb.nvars = kVars;
    pb.m0 = a.m0;
    pb.mk = a.mk;
    pb.eps_lmi = std::max(10.0 * opts.epsilon_margin, 1e-6);
    pb.has_pcone = true;
    pb.eps_p = opts.epsilon_margin;
    pb.has_cap = true;
    pb.cap_var = 5;
    pb.cap = opts.mu1_cap;
    pb.cost.assign(kVars, 0.0);
    pb.cost[5] = 1.0;
    pb.cost[6] = opts.beta;
    pb.box.assign(kVars, 1e6);
    pb.box[6] = 1e12;  // mu2 starts at 1e6 and may legitimately sit high
    return pb;
}

std::vector<double> suggested_start(double alpha, const SolveOptions& opts) {
    // P = 10 I, R = P*[0, alpha]', mu3 = 0.5, mu1 = min(2 mu3, 0.9 cap),
    // mu2 large. Usually outside the feasible set; phase 1 repairs it.
    std::vector<double> x(kVars, 0.0);
    x[0] = 10.0;
    x[1] = 0.0;
    x[2] = 10.0;
    x[3] = 0.0;
    x[4] = 10.0 * alpha;
    x[7] = 0.5;
    x[5] = std::min(2.0 * x[7], 0.9 * opts.mu1_cap);
    if (x[5] <= x[7]) x[7] = 0.5 * x[5];
    x[6] = 1e6;
    return x;
}

double gershgorin_upper(const SymMatrix& m) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m.dim(); ++i) {
        double row = m(i, i);
        for (int j = 0; j < m.dim(); ++j)
            if (j != i) row += std::abs(m(i, j));
        best = std::max(best, row);
    }
    return best;
}

// Phase 1: minimize s subject to M(x) + eps_lmi*I < s*I plus the cap and P
// cone, stopping as soon as s is safely negative. Throws InfeasibleProgram
// when the duality gap proves min s > 0.
void phase1(const BarrierProblem& main_pb, std::vector<double>& x, int& budget) {
    BarrierProblem pb;
    pb.nvars = kVars + 1;
    pb.m0 = main_pb.m0;
    pb.mk = main_pb.mk;
    {
        SymMatrix minus_i(pb.m0.dim());
        for (int i = 0; i < pb.m0.dim(); ++i) minus_i.set(i, i, -1.0);
        pb.mk.push_back(minus_i);  // G = -(M - s I) - eps = sI - M - eps
    }
    pb.eps_lmi = main_pb.eps_lmi;
    pb.has_pcone = main_pb.has_pcone;
    pb.eps_p = main_pb.eps_p;
    pb.has_cap = main_pb.has_cap;
    pb.cap_var = main_pb.cap_var;
    pb.cap = main_pb.cap;
    pb.box = main_pb.box;
    pb.box.push_back(1e9);  // the lift variable s
    pb.cost.assign(pb.nvars, 0.0);
    pb.cost[kVars] = 1.0;

    // Lift: s0 strictly above lambda_max(M(x) + eps I).
    SymMatrix shifted;
    build_lmi_value(main_pb, x, shifted);  // -(M + eps I)
    std::vector<double> xs(x);
    xs.push_back(gershgorin_upper(-1.0 * shifted) + 1.0);

    if (!feasible_at(pb, xs))
        throw ConvergenceFailure("phase 1 lift failed to produce a feasible start", to_point(x),
                                 std::numeric_limits<double>::infinity());

    double t = pb.nu() / std::max(1.0, std::abs(xs[kVars]));
    for (int outer = 0; outer < 200; ++outer) {
        const CenterStatus st = center(pb, xs, t, budget);
        if (st == CenterStatus::kBudget)
            throw ConvergenceFailure("newton budget exhausted in phase 1", to_point(xs),
                                     std::numeric_limits<double>::infinity());
        const double s = xs[kVars];
        if (s < -1e-7) {
            x.assign(xs.begin(), xs.begin() + kVars);
            return;
        }
        // The duality-gap bound min s >= s - nu/t is only trusted at centered
        // points; a stall with s still positive is reported as such.
        if (st == CenterStatus::kCentered && s - pb.nu() / t > 0.0)
            throw InfeasibleProgram("no strictly feasible point: phase 1 bound " +
                                    std::to_string(s - pb.nu() / t) + " > 0");
        if (st == CenterStatus::kStalled || st == CenterStatus::kFloor)
            throw ConvergenceFailure("phase 1 stalled before reaching feasibility", to_point(xs),
                                     std::numeric_limits<double>::infinity());
        t *= 5.0;
    }
    throw ConvergenceFailure("phase 1 outer iterations exhausted", to_point(xs),
                             std::numeric_limits<double>::infinity());
}

// Phase 2: path-following on the main program from a strictly feasible x.
CenterStatus phase2(const BarrierProblem& pb, std::vector<double>& x, double objective_tol,
                    int& budget) {
    auto objective = [&](const std::vector<double>& xx) {
        double c = 0.0;
        for (int k = 0; k < pb.nvars; ++k) c += pb.cost[k] * xx[k];
        return c;
    };
    double t = pb.nu() / std::max(1.0, std::abs(objective(x)));
    for (int outer = 0; outer < 200; ++outer) {
        const CenterStatus st = center(pb, x, t, budget);
        if (st == CenterStatus::kFloor) {
            // Double precision cannot follow the path any further (degenerate
            // geometries pin some multipliers at their margins). Accept the
            // iterate when the gap bound is already physically negligible,
            // report a stall otherwise.
            return pb.nu() / t <= 1e-4 * std::max(1.0, std::abs(objective(x)))
                       ? CenterStatus::kCentered
                       : CenterStatus::kStalled;
        }
        if (st != CenterStatus::kCentered) return st;
        if (pb.nu() / t <= objective_tol * std::max(1.0, std::abs(objective(x))))
            return CenterStatus::kCentered;
        t *= 3.0;
    }
    return CenterStatus::kStalled;
}

}  // namespace

LmiPoint FilterDesign::point() const {
    LmiPoint v;
    v.p11 = P(0, 0);
    v.p12 = P(0, 1);
    v.p22 = P(1, 1);
    const Mat R = P * L;
    v.r1 = R(0, 0);
    v.r2 = R(1, 0);
    v.mu1 = mu1;
    v.mu2 = mu2;
    v.mu3 = mu3;
    return v;
}

FilterDesign solve_p1(double alpha, double theta_bound, const SolveOptions& opts) {
    validate_inputs(alpha, theta_bound, opts);

    const AffineLmi affine = build_affine(alpha, theta_bound, opts.dt);
    const BarrierProblem pb = main_problem(affine, opts);

    int budget = opts.max_newton_iters;
    std::vector<double> x = suggested_start(alpha, opts);

    if (!feasible_at(pb, x)) phase1(pb, x, budget);

    CenterStatus st = phase2(pb, x, opts.objective_tol, budget);
    if (st == CenterStatus::kStalled) {
        // One restart: re-lift through phase 1 from the stalled iterate, which
        // re-centers the path, then follow it again.
        phase1(pb, x, budget);
        st = phase2(pb, x, opts.objective_tol, budget);
    }
    const LmiPoint v = to_point(x);
    const double obj = v.mu1 + opts.beta * v.mu2;
    if (st != CenterStatus::kCentered)
        throw ConvergenceFailure(st == CenterStatus::kBudget
                                     ? "newton budget exhausted in phase 2"
                                     : "phase 2 stalled after restart",
                                 v, obj);

    // Re-certify from scratch; the solver's own slack never substitutes for
    // the Cholesky certificate.
    const SymMatrix m = assemble_theorem_lmi(v, alpha, theta_bound, opts.dt);
    if (!is_negative_definite(m, opts.epsilon_margin))
        throw ConvergenceFailure("converged point failed certification", v, obj);

    FilterDesign d;
    d.alpha = alpha;
    d.theta_bound = theta_bound;
    d.beta = opts.beta;
    d.dt = opts.dt;
    d.P = Mat(2, 2, {v.p11, v.p12, v.p12, v.p22});
    {
        const double det = v.p11 * v.p22 - v.p12 * v.p12;
        d.L = Mat(2, 1, {(v.p22 * v.r1 - v.p12 * v.r2) / det,
                         (v.p11 * v.r2 - v.p12 * v.r1) / det});
    }
    d.mu1 = v.mu1;
    d.mu2 = v.mu2;
    d.mu3 = v.mu3;
    d.objective = obj;
    d.newton_iters = opts.max_newton_iters - budget;

    SymMatrix p_sym(2);
    p_sym.set(0, 0, v.p11);
    p_sym.set(0, 1, v.p12);
    p_sym.set(1, 1, v.p22);
    if (!is_positive_definite(p_sym, 1.0))
        throw ConvergenceFailure("returned P is not above identity", v, obj);
    if (!(d.mu3 > 0.0) || !(d.mu3 < d.mu1) || !(d.mu1 <= opts.mu1_cap) || !(d.mu2 > 0.0))
        throw ConvergenceFailure("returned multipliers violate ordering", v, obj);
    return d;
}

OracleResult random_search_oracle(double alpha, double theta_bound, const SolveOptions& opts,
                                  std::uint64_t budget, std::uint64_t seed) {
    validate_inputs(alpha, theta_bound, opts);

    const AffineLmi affine = build_affine(alpha, theta_bound, opts.dt);
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1ULL);
    std::normal_distribution<double> gauss;

    // Work buffers reused across samples.
    SymMatrix neg(13);
    std::vector<double> chol_scratch;

    auto feasible = [&](const LmiPoint& v) -> bool {
        if (!(v.p11 > 0.0) || !(v.p22 > 0.0)) return false;
        if (!(v.p11 * v.p22 - v.p12 * v.p12 > 0.0)) return false;
        if (!(v.mu3 > 0.0) || !(v.mu1 > v.mu3) || !(v.mu2 > 0.0)) return false;
        if (!(v.mu1 < opts.mu1_cap)) return false;
        const double vals[kVars] = {v.p11, v.p12, v.p22, v.r1, v.r2, v.mu1, v.mu2, v.mu3};
        for (int i = 0; i < 13; ++i)
            for (int j = i; j < 13; ++j) {
                double m = affine.m0(i, j);
                for (int k = 0; k < kVars; ++k) m += vals[k] * affine.mk[k](i, j);
                neg.set(i, j, -m - (i == j ? opts.epsilon_margin : 0.0));
            }
        return cholesky_factor(neg, chol_scratch);
    };

    // Heuristic centers: a deadbeat observer gain L = (1/alpha, 1) puts both
    // error eigenvalues at zero, which is a natural hand-design for this pair
    // (A, C); the multipliers start loose.
    LmiPoint center;
    center.p11 = 6.0;
    center.p12 = -6.0;
    center.p22 = 14.0;
    center.r1 = center.p11 / alpha + center.p12;
    center.r2 = center.p12 / alpha + center.p22;
    center.mu3 = std::min(0.4, 0.6 * opts.mu1_cap);
    center.mu1 = std::min(2.0 * center.mu3, 0.95 * opts.mu1_cap);
    center.mu2 = 300.0;

    OracleResult out;
    out.objective = std::numeric_limits<double>::infinity();

    double radius = 1.0;
    const std::uint64_t epoch = std::max<std::uint64_t>(budget / 50, 500);
    double best_at_epoch_start = out.objective;
    int stale_epochs = 0;

    for (std::uint64_t n = 0; n < budget; ++n) {
        LmiPoint v;
        v.p11 = center.p11 * std::exp(0.6 * radius * gauss(rng));
        v.p22 = center.p22 * std::exp(0.6 * radius * gauss(rng));
        v.p12 = center.p12 + 0.6 * radius * std::sqrt(v.p11 * v.p22) * gauss(rng);
        v.r1 = center.r1 + radius * (0.4 * std::abs(center.r1) + 0.05 * (v.p11 + v.p22)) * gauss(rng);
        v.r2 = center.r2 + radius * (0.4 * std::abs(center.r2) + 0.05 * (v.p11 + v.p22)) * gauss(rng);
        v.mu3 = center.mu3 * std::exp(0.8 * radius * gauss(rng));
        const double gap = std::max(center.mu1 - center.mu3, 1e-7);
        v.mu1 = v.mu3 + gap * std::exp(radius * gauss(rng));
        v.mu2 = center.mu2 * std::exp(0.8 * radius * gauss(rng));

        if (feasible(v)) {
            ++out.feasible_samples;
            const double obj = v.mu1 + opts.beta * v.mu2;
            if (obj < out.objective) {
                out.objective = obj;
                out.best = v;
                out.feasible = true;
            }
        }

        if ((n + 1) % epoch == 0) {
            if (out.feasible && out.objective < best_at_epoch_start) {
                center = out.best;
                stale_epochs = 0;
            } else if (!out.feasible) {
                radius = std::min(radius * 1.8, 10.0);  // still hunting for the cone
            } else {
                radius = std::max(radius * 0.55, 3e-4);
                if (++stale_epochs >= 3 && radius <= 3e-4) {
                    radius = 0.3;  // pulse to escape a local shelf
                    stale_epochs = 0;
                }
            }
            best_at_epoch_start = out.objective;
        }
    }
    return out;
}

}  // namespace ramp
