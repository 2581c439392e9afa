#include "cfts/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "cfts/errors.hpp"

namespace cfts {

NonlinearCFProblem::NonlinearCFProblem(TimeScale ts, RightHandSide rhs, double lipschitz_l,
                                       double a, double b, double x0, CFOrder ord)
    : ts_(std::move(ts)), rhs_(std::move(rhs)), l_(lipschitz_l), x0_(x0), ord_(ord) {
    if (!rhs_) throw DomainError("nonlinear problem needs a right-hand side");
    if (!(lipschitz_l > 0.0) || !std::isfinite(lipschitz_l)) {
        throw DomainError("Lipschitz constant must be positive");
    }
    a_ = ts_.snap(a);
    b_ = ts_.snap(b);
    if (!(a_ < b_)) throw DomainError("nonlinear problem needs a < b");
    if (!std::isfinite(x0)) throw DomainError("x0 must be finite");
}

double contraction_check(const NonlinearCFProblem& prob) {
    const double alpha = prob.order().alpha();
    return ((1.0 - alpha) + alpha * (prob.b() - prob.a())) * prob.lipschitz();
}

double max_contractive_window(double lipschitz_l, double alpha) {
    if (alpha == 0.0) return std::numeric_limits<double>::infinity();
    return (1.0 / lipschitz_l - (1.0 - alpha)) / alpha;
}

namespace {

double sup_distance(const std::vector<double>& x, const std::vector<double>& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
    return d;
}

// Largest difference quotient of f in x over a (t, x) grid around x0.
double sample_slope(const NonlinearCFProblem& prob, const std::vector<double>& mesh,
                    double radius) {
    constexpr int kXPoints = 16;
    constexpr std::size_t kTPoints = 64;
    const auto& f = prob.rhs();
    const std::size_t stride = std::max<std::size_t>(1, mesh.size() / kTPoints);
    const double dx = 2.0 * radius / (kXPoints - 1);
    double slope = 0.0;
    for (std::size_t i = 0; i < mesh.size(); i += stride) {
        double prev = f(mesh[i], prob.x0() - radius);
        for (int j = 1; j < kXPoints; ++j) {
            const double cur = f(mesh[i], prob.x0() - radius + j * dx);
            slope = std::max(slope, std::abs(cur - prev) / dx);
            prev = cur;
        }
    }
    return slope;
}

}  // namespace

PicardResult picard_solve(const NonlinearCFProblem& prob, const PicardOptions& opts) {
    const double q = contraction_check(prob);
    const double alpha = prob.order().alpha();
    if (q >= 1.0) {
        const double window = max_contractive_window(prob.lipschitz(), alpha);
        std::ostringstream os;
        os.precision(17);
        os << "contraction condition fails: q = ((1 - alpha) + alpha (b - a)) L = " << q
           << " >= 1; ";
        if (window > 0.0) {
            os << "windows with b - a < " << window << " satisfy it";
        } else {
            os << "no window length satisfies it for this L and alpha";
        }
        throw NotContractive(os.str(), q, window);
    }

    const TimeScale& ts = prob.timescale();
    const auto& f = prob.rhs();
    const std::vector<double> mesh = ts.mesh(prob.a(), prob.b(), opts.dense_step);
    const std::size_t n = mesh.size();
    std::vector<bool> jump(n, false);
    for (std::size_t k = 0; k + 1 < n; ++k) jump[k] = ts.mu(mesh[k]) > 0.0;

    std::vector<double> x(n, prob.x0());
    if (opts.initial) {
        for (std::size_t k = 0; k < n; ++k) x[k] = opts.initial(mesh[k]);
    }
    const double f0 = f(prob.a(), prob.x0());

    PicardResult result{Signal::constant(prob.x0()), 0, 0.0, q, {}, 0.0, 0.0, false};
    std::vector<double> rhs(n);
    std::vector<double> next(n);
    double first_update = 0.0;
    for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
        for (std::size_t k = 0; k < n; ++k) rhs[k] = f(mesh[k], x[k]);
        double integral = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            next[k] = prob.x0() + alpha * integral + (1.0 - alpha) * (rhs[k] - f0);
            if (k + 1 < n) {
                const double step = mesh[k + 1] - mesh[k];
                integral += jump[k] ? step * rhs[k] : 0.5 * step * (rhs[k] + rhs[k + 1]);
            }
        }
        const double update = sup_distance(next, x);
        x.swap(next);
        result.update_norms.push_back(update);
        if (iter == 1) first_update = update;
        if (update <= opts.tol) {
            result.iterations = iter;
            result.final_defect = update;
            result.a_priori_bound =
                std::pow(q, static_cast<double>(iter)) / (1.0 - q) * first_update;
            if (opts.sample_lipschitz) {
                const double radius = first_update > 0.0 ? first_update / (1.0 - q) : 1.0;
                result.sampled_lipschitz = sample_slope(prob, mesh, radius);
                result.lipschitz_warning =
                    result.sampled_lipschitz > prob.lipschitz() * (1.0 + 1e-9);
            }
            result.solution = Signal::sampled(ts, mesh, x);
            return result;
        }
    }
    std::ostringstream os;
    os << "Picard iteration did not reach tol = " << opts.tol << " in " << opts.max_iter
       << " iterations (last update " << result.update_norms.back() << ")";
    throw MaxIterationsExceeded(os.str());
}

PicardResult picard_solve(const NonlinearCFProblem& prob, double tol, std::size_t max_iter) {
    PicardOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    return picard_solve(prob, opts);
}

double residual_nonlinear(const NonlinearCFProblem& prob, const Signal& x, double t,
                          const Tolerances& tol) {
    const double s = prob.timescale().snap(t);
    return cf_delta_left(prob.timescale(), x, prob.a(), s, prob.order(), tol) -
           prob.rhs()(s, x(s));
}

}  // namespace cfts
