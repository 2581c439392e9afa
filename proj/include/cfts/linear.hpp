#pragma once

// Closed-form solutions of the scalar linear CF equation
//
//     (CF Delta^alpha x)(t) = lambda x(t) + u(t),   x(0) = x0,
//
// with M(alpha) = 1, K(alpha) = 1 - lambda (1 - alpha) and
// p(alpha) = lambda alpha / K(alpha).

#include "cfts/cf_operators.hpp"
#include "cfts/signal.hpp"
#include "cfts/timescale.hpp"
#include "cfts/tolerances.hpp"

namespace cfts {

class LinearCFProblem {
public:
    /// Throws DomainError when 0 is not in ts or M(alpha) != 1, and
    /// NotRegressive when K(alpha) = 0 or p(alpha) is not regressive on ts.
    LinearCFProblem(TimeScale ts, double lambda, Signal u, double x0, CFOrder ord,
                    const Tolerances& tol = {});

    const TimeScale& timescale() const noexcept { return ts_; }
    double lambda() const noexcept { return lambda_; }
    const Signal& forcing() const noexcept { return u_; }
    double x0() const noexcept { return x0_; }
    const CFOrder& order() const noexcept { return ord_; }
    double k_alpha() const noexcept { return k_; }
    double p_alpha() const noexcept { return p_; }

private:
    TimeScale ts_;
    double lambda_;
    Signal u_;
    double x0_;
    CFOrder ord_;
    double k_;
    double p_;
};

/// K(alpha) = 1 - lambda (1 - alpha)
double k_alpha(double lambda, double alpha);
/// p(alpha) = lambda alpha / K(alpha)
double p_alpha(double lambda, double alpha);

/// x0 - (1 - e_p(t,0)) x0 / K + (1-alpha)(u(t) - u(0)) / K
///    + alpha / K^2 * integral over [0, t) of e_p(t, sigma(tau)) u(tau).
/// Returns x0 exactly at t = 0.
double solve_linear(const LinearCFProblem& prob, double t, const Tolerances& tol = {});

/// The transform-domain form e_p x0 / K + (1-alpha) u(t) / K + alpha / K^2 * integral,
/// shifted by C = (1 - 1/K) x0 - (1-alpha) u(0) / K. Algebraically equal to
/// solve_linear; evaluated along an independent path.
double solve_linear_shifted(const LinearCFProblem& prob, double t, const Tolerances& tol = {});

/// solve_linear on every mesh point of [0, horizon], using the one-step
/// recurrences I(sigma(t)) = (1 + mu p) I(t) + mu u(t) on jumps and the
/// exponential-weighted quadrature on dense runs.
Signal solve_linear_trajectory(const LinearCFProblem& prob, double horizon, double dense_step = 0.0,
                               const Tolerances& tol = {});

/// (CF Delta^alpha x)(t) - lambda x(t) - u(t), the derivative taken from 0.
double residual_linear(const LinearCFProblem& prob, const Signal& x, double t,
                       const Tolerances& tol = {});

/// The alpha = 1 limit x^Delta = lambda x + u, x(0) = x0, on the mesh of [0, horizon]:
/// x(t) = e_lambda(t,0) x0 + integral over [0, t) of e_lambda(t, sigma(tau)) u(tau).
Signal solve_classical_trajectory(const TimeScale& ts, double lambda, const Signal& u, double x0,
                                  double horizon, double dense_step = 0.0,
                                  const Tolerances& tol = {});

/// x^Delta(t) - lambda x(t) - u(t)
double residual_classical(const TimeScale& ts, double lambda, const Signal& u, const Signal& x,
                          double t, const Tolerances& tol = {});

}  // namespace cfts
