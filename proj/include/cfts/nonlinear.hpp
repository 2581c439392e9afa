#pragma once

// Picard iteration for the nonlinear CF initial value problem
//
//     (CF_a Delta^alpha x)(t) = f(t, x(t)),   x(a) = x0,   t in [a, b] of T,
//
// through the fixed point of
//
//     (N x)(t) = x0 + alpha * integral over [a, t) of f(tau, x(tau))
//                   + (1 - alpha) (f(t, x(t)) - f(a, x0)).
//
// N is a contraction in the sup norm when q = ((1 - alpha) + alpha (b - a)) L < 1.

#include <cstddef>
#include <functional>
#include <vector>

#include "cfts/cf_operators.hpp"
#include "cfts/signal.hpp"
#include "cfts/timescale.hpp"
#include "cfts/tolerances.hpp"

namespace cfts {

using RightHandSide = std::function<double(double t, double x)>;

class NonlinearCFProblem {
public:
    /// Throws DomainError unless a < b both lie in ts and L > 0.
    NonlinearCFProblem(TimeScale ts, RightHandSide rhs, double lipschitz_l, double a, double b,
                       double x0, CFOrder ord);

    const TimeScale& timescale() const noexcept { return ts_; }
    const RightHandSide& rhs() const noexcept { return rhs_; }
    double lipschitz() const noexcept { return l_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double x0() const noexcept { return x0_; }
    const CFOrder& order() const noexcept { return ord_; }

private:
    TimeScale ts_;
    RightHandSide rhs_;
    double l_;
    double a_;
    double b_;
    double x0_;
    CFOrder ord_;
};

struct PicardOptions {
    double tol = 1e-10;
    std::size_t max_iter = 200;
    /// Dense-run mesh step; <= 0 uses interval length / 256.
    double dense_step = 0.0;
    /// Starting iterate; x == x0 when empty.
    std::function<double(double)> initial;
    /// Spot-check the supplied Lipschitz constant on a (t, x) grid.
    bool sample_lipschitz = true;
};

struct PicardResult {
    Signal solution;
    std::size_t iterations = 0;
    /// Sup norm of the last update.
    double final_defect = 0.0;
    double contraction_q = 0.0;
    /// Sup norm of every update, in order.
    std::vector<double> update_norms;
    /// q^n / (1 - q) * ||x_1 - x_0||
    double a_priori_bound = 0.0;
    double sampled_lipschitz = 0.0;
    bool lipschitz_warning = false;
};

/// q = ((1 - alpha) + alpha (b - a)) L
double contraction_check(const NonlinearCFProblem& prob);

/// Longest window b - a satisfying the contraction condition: (1/L - (1 - alpha)) / alpha.
double max_contractive_window(double lipschitz_l, double alpha);

/// Throws NotContractive when q >= 1 and MaxIterationsExceeded when the
/// update norm stays above tol.
PicardResult picard_solve(const NonlinearCFProblem& prob, const PicardOptions& opts = {});
PicardResult picard_solve(const NonlinearCFProblem& prob, double tol, std::size_t max_iter);

/// (CF_a Delta^alpha x)(t) - f(t, x(t))
double residual_nonlinear(const NonlinearCFProblem& prob, const Signal& x, double t,
                          const Tolerances& tol = {});

}  // namespace cfts
