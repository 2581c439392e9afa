#pragma once

// Caputo-Fabrizio fractional delta derivative (left and right sided) and the
// CF fractional delta integral of order alpha in [0, 1) on a time scale.

#include <vector>

#include "cfts/signal.hpp"
#include "cfts/timescale.hpp"
#include "cfts/tolerances.hpp"

namespace cfts {

class CFOrder {
public:
    /// 0 <= alpha < 1, m_alpha > 0. Throws DomainError otherwise.
    explicit CFOrder(double alpha, double m_alpha = 1.0);

    double alpha() const noexcept { return alpha_; }
    double m_alpha() const noexcept { return m_alpha_; }
    /// Kernel rate alpha / (alpha - 1), always <= 0.
    double alpha_bar() const noexcept { return alpha_bar_; }
    /// M(alpha) / (1 - alpha)
    double scale() const noexcept { return m_alpha_ / (1.0 - alpha_); }

private:
    double alpha_;
    double m_alpha_;
    double alpha_bar_;
};

/// (M/(1-alpha)) * integral over [a, t) of f^Delta(tau) e_abar(t, sigma(tau)).
/// alpha = 0 returns f(t) - f(a) without quadrature.
double cf_delta_left(const TimeScale& ts, const Signal& f, double a, double t, const CFOrder& ord,
                     const Tolerances& tol = {});

/// (M/(1-alpha)) * integral over [t, b) of f^Delta(tau) e_abar(t, sigma(tau)).
/// Throws NonRegressiveKernel when some graininess in [t, b) equals (1-alpha)/alpha.
double cf_delta_right(const TimeScale& ts, const Signal& f, double t, double b,
                      const CFOrder& ord, const Tolerances& tol = {});

/// ((1-alpha)/M) u(t) + (alpha/M) * integral over [0, t) of u. Requires alpha in (0, 1).
double cf_integral(const TimeScale& ts, const Signal& u, double t, const CFOrder& ord,
                   const Tolerances& tol = {});

struct LimitSample {
    double alpha;
    double value;
    double abs_error;
};

struct LimitReport {
    double delta_derivative;
    std::vector<LimitSample> samples;
    /// abs_error is non-increasing along the alpha sequence.
    bool monotone = false;
};

/// Distance of cf_delta_left from f^Delta(t) along an increasing alpha sequence.
LimitReport cf_limit_check(const TimeScale& ts, const Signal& f, double a, double t,
                           const std::vector<double>& alphas, const Tolerances& tol = {});

}  // namespace cfts
