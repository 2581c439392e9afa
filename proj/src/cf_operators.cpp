#include "cfts/cf_operators.hpp"

#include <cmath>
#include <string>

#include "cfts/calculus.hpp"
#include "cfts/errors.hpp"

namespace cfts {

CFOrder::CFOrder(double alpha, double m_alpha) : alpha_(alpha), m_alpha_(m_alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw DomainError("CF order alpha must lie in [0, 1), got " + std::to_string(alpha));
    }
    if (!(m_alpha > 0.0) || !std::isfinite(m_alpha)) {
        throw DomainError("normalization M(alpha) must be positive");
    }
    alpha_bar_ = alpha / (alpha - 1.0);
}

double cf_delta_left(const TimeScale& ts, const Signal& f, double a, double t, const CFOrder& ord,
                     const Tolerances& tol) {
    const double lo = ts.snap(a);
    const double hi = ts.snap(t);
    if (lo > hi) throw DomainError("left CF derivative needs a <= t");
    if (ord.alpha() == 0.0) return f(hi) - f(lo);
    return ord.scale() *
           kernel_integral_left(ts, f, Integrand::delta_derivative, lo, hi, ord.alpha_bar(), tol);
}

double cf_delta_right(const TimeScale& ts, const Signal& f, double t, double b,
                      const CFOrder& ord, const Tolerances& tol) {
    const double lo = ts.snap(t);
    const double hi = ts.snap(b);
    if (lo > hi) throw DomainError("right CF derivative needs t <= b");
    if (ord.alpha() == 0.0) return f(hi) - f(lo);
    try {
        return ord.scale() * kernel_integral_right(ts, f, Integrand::delta_derivative, lo, hi,
                                                   ord.alpha_bar(), tol);
    } catch (const NonRegressiveParameter& e) {
        throw NonRegressiveKernel(std::string("CF kernel is not invertible: ") + e.what());
    }
}

double cf_integral(const TimeScale& ts, const Signal& u, double t, const CFOrder& ord,
                   const Tolerances& tol) {
    if (ord.alpha() == 0.0) throw DomainError("CF integral needs alpha in (0, 1)");
    if (!ts.contains(0.0)) throw DomainError("CF integral is anchored at 0, which is not in the time scale");
    const double x = ts.snap(t);
    if (x < 0.0) throw DomainError("CF integral needs t >= 0");
    const double m = ord.m_alpha();
    return (1.0 - ord.alpha()) / m * u(x) + ord.alpha() / m * delta_integral(ts, u, 0.0, x, tol);
}

LimitReport cf_limit_check(const TimeScale& ts, const Signal& f, double a, double t,
                           const std::vector<double>& alphas, const Tolerances& tol) {
    LimitReport report;
    report.delta_derivative = delta_derivative(ts, f, t, tol);
    report.monotone = true;
    double previous_alpha = -1.0;
    for (double alpha : alphas) {
        if (!(alpha > previous_alpha)) {
            throw DomainError("alpha sequence must be strictly increasing");
        }
        previous_alpha = alpha;
        const double value = cf_delta_left(ts, f, a, t, CFOrder(alpha), tol);
        const double err = std::abs(value - report.delta_derivative);
        if (!report.samples.empty() && err > report.samples.back().abs_error) {
            report.monotone = false;
        }
        report.samples.push_back({alpha, value, err});
    }
    return report;
}

}  // namespace cfts
