#include "cfts/linear.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cfts/calculus.hpp"
#include "cfts/errors.hpp"

namespace cfts {

double k_alpha(double lambda, double alpha) { return 1.0 - lambda * (1.0 - alpha); }

double p_alpha(double lambda, double alpha) { return lambda * alpha / k_alpha(lambda, alpha); }

LinearCFProblem::LinearCFProblem(TimeScale ts, double lambda, Signal u, double x0, CFOrder ord,
                                 const Tolerances& tol)
    : ts_(std::move(ts)), lambda_(lambda), u_(std::move(u)), x0_(x0), ord_(ord) {
    if (!ts_.contains(0.0)) throw DomainError("the linear problem is posed from t = 0, which is not in the time scale");
    if (ord_.m_alpha() != 1.0) throw DomainError("the linear solver assumes M(alpha) = 1");
    if (!std::isfinite(lambda) || !std::isfinite(x0)) throw DomainError("lambda and x0 must be finite");
    k_ = cfts::k_alpha(lambda, ord_.alpha());
    if (std::abs(k_) <= tol.regressivity) {
        throw NotRegressive("K(alpha) = 1 - lambda (1 - alpha) vanishes: lambda is not CF(alpha)-fractionally regressive");
    }
    p_ = lambda * ord_.alpha() / k_;
    if (!is_regressive(ts_, p_, tol)) {
        throw NotRegressive("p(alpha) = " + std::to_string(p_) +
                            " is not regressive: 1 + mu p(alpha) vanishes on the time scale");
    }
}

namespace {

struct KernelState {
    double exp_factor;  // e_q(t, 0)
    double integral;    // integral over [0, t) of e_q(t, sigma(tau)) u(tau)
};

std::vector<KernelState> propagate(const TimeScale& ts, double q, const Signal& u,
                                   const std::vector<double>& mesh, const Tolerances& tol) {
    std::vector<KernelState> out;
    out.reserve(mesh.size());
    KernelState s{1.0, 0.0};
    out.push_back(s);
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double t = mesh[k];
        const double m = ts.mu(t);
        if (m > 0.0) {
            const double f = 1.0 + m * q;
            s.exp_factor *= f;
            s.integral = f * s.integral + m * u(t);
        } else {
            const double next = mesh[k + 1];
            const double f = std::exp(q * (next - t));
            s.exp_factor *= f;
            s.integral = f * s.integral + u.weighted_integral(t, next, q, next, tol);
        }
        out.push_back(s);
    }
    return out;
}

double theorem_form(const LinearCFProblem& prob, double t, double e, double integral) {
    const double k = prob.k_alpha();
    const double a = prob.order().alpha();
    const double x0 = prob.x0();
    const Signal& u = prob.forcing();
    return x0 - (1.0 - e) * x0 / k + (1.0 - a) * (u(t) - u(0.0)) / k + a / (k * k) * integral;
}

double check_time(const TimeScale& ts, double t) {
    const double x = ts.snap(t);
    if (x < 0.0) throw DomainError("solutions are defined for t >= 0");
    return x;
}

}  // namespace

double solve_linear(const LinearCFProblem& prob, double t, const Tolerances& tol) {
    const TimeScale& ts = prob.timescale();
    const double x = check_time(ts, t);
    if (x == 0.0) return prob.x0();
    const double p = prob.p_alpha();
    const double e = exp_ts(ts, p, x, 0.0, tol);
    const double integral = kernel_integral_left(ts, prob.forcing(), Integrand::value, 0.0, x, p, tol);
    return theorem_form(prob, x, e, integral);
}

double solve_linear_shifted(const LinearCFProblem& prob, double t, const Tolerances& tol) {
    const TimeScale& ts = prob.timescale();
    const double x = check_time(ts, t);
    const double k = prob.k_alpha();
    const double a = prob.order().alpha();
    const double x0 = prob.x0();
    const Signal& u = prob.forcing();
    const double p = prob.p_alpha();
    const double e = exp_ts(ts, p, x, 0.0, tol);
    const double integral = kernel_integral_left(ts, u, Integrand::value, 0.0, x, p, tol);
    const double transform = e * x0 / k + (1.0 - a) * u(x) / k + a / (k * k) * integral;
    const double shift = (1.0 - 1.0 / k) * x0 - (1.0 - a) * u(0.0) / k;
    return transform + shift;
}

Signal solve_linear_trajectory(const LinearCFProblem& prob, double horizon, double dense_step,
                               const Tolerances& tol) {
    const TimeScale& ts = prob.timescale();
    const double end = check_time(ts, horizon);
    std::vector<double> mesh = ts.mesh(0.0, end, dense_step);
    const auto states = propagate(ts, prob.p_alpha(), prob.forcing(), mesh, tol);
    std::vector<double> values(mesh.size());
    values[0] = prob.x0();
    for (std::size_t k = 1; k < mesh.size(); ++k) {
        values[k] = theorem_form(prob, mesh[k], states[k].exp_factor, states[k].integral);
    }
    return Signal::sampled(ts, std::move(mesh), std::move(values));
}

double residual_linear(const LinearCFProblem& prob, const Signal& x, double t,
                       const Tolerances& tol) {
    const double s = prob.timescale().snap(t);
    return cf_delta_left(prob.timescale(), x, 0.0, s, prob.order(), tol) - prob.lambda() * x(s) -
           prob.forcing()(s);
}

Signal solve_classical_trajectory(const TimeScale& ts, double lambda, const Signal& u, double x0,
                                  double horizon, double dense_step, const Tolerances& tol) {
    if (!ts.contains(0.0)) throw DomainError("the classical problem is posed from t = 0, which is not in the time scale");
    if (!is_regressive(ts, lambda, tol)) {
        throw NotRegressive("lambda = " + std::to_string(lambda) +
                            " is not regressive: 1 + mu lambda vanishes on the time scale");
    }
    const double end = check_time(ts, horizon);
    std::vector<double> mesh = ts.mesh(0.0, end, dense_step);
    const auto states = propagate(ts, lambda, u, mesh, tol);
    std::vector<double> values(mesh.size());
    values[0] = x0;
    for (std::size_t k = 1; k < mesh.size(); ++k) {
        values[k] = states[k].exp_factor * x0 + states[k].integral;
    }
    return Signal::sampled(ts, std::move(mesh), std::move(values));
}

double residual_classical(const TimeScale& ts, double lambda, const Signal& u, const Signal& x,
                          double t, const Tolerances& tol) {
    const double s = ts.snap(t);
    return delta_derivative(ts, x, s, tol) - lambda * x(s) - u(s);
}

}  // namespace cfts
