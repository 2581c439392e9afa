#pragma once

// Delta calculus on a TimeScale: derivative, Cauchy integral, regressivity
// and the exponential function e_p(t, t0) for a constant p.

#include "cfts/signal.hpp"
#include "cfts/timescale.hpp"
#include "cfts/tolerances.hpp"

namespace cfts {

/// f^Delta(t) for t in T^kappa. Scattered points use the exact forward
/// quotient; dense points use the supplied derivative, the sampled slope, or
/// a Richardson-extrapolated difference quotient.
double delta_derivative(const TimeScale& ts, const Signal& f, double t, const Tolerances& tol = {});

/// Cauchy integral of f over [a, b).
double delta_integral(const TimeScale& ts, const Signal& f, double a, double b,
                      const Tolerances& tol = {});

/// 1 + mu(t) p != 0 on all of T^kappa.
bool is_regressive(const TimeScale& ts, double p, const Tolerances& tol = {});

/// e_p(t, t0). For t < t0 the reciprocal e_p(t0, t)^{-1} is returned.
/// A negative factor 1 + mu p enters as a signed real.
double exp_ts(const TimeScale& ts, double p, double t, double t0, const Tolerances& tol = {});

enum class Integrand { value, delta_derivative };

/// Integral over [a, t) of g(tau) e_q(t, sigma(tau)) (or g^Delta in place of g).
/// The kernel is a forward product, so factors 1 + mu q = 0 are allowed.
double kernel_integral_left(const TimeScale& ts, const Signal& g, Integrand kind, double a,
                            double t, double q, const Tolerances& tol = {});

/// Integral over [t, b) of g(tau) e_q(t, sigma(tau)). The kernel is the
/// reciprocal of a forward product; throws NonRegressiveParameter when a
/// factor vanishes.
double kernel_integral_right(const TimeScale& ts, const Signal& g, Integrand kind, double t,
                             double b, double q, const Tolerances& tol = {});

/// Richardson extrapolation of central (or one-sided, sign = +1 forward,
/// -1 backward) difference quotients starting from step h0.
double richardson_derivative(const Signal::Function& f, double t, double h0, int side,
                             double target);

}  // namespace cfts
