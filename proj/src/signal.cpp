#include "cfts/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cfts/errors.hpp"

namespace cfts {

namespace detail {

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    if (a == b) return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 20, 1e-13, &error, &l1);
    if (!std::isfinite(value) || error > std::max(abs_tol, 1e-12 * l1)) {
        throw QuadratureNonConvergence("adaptive quadrature on [" + std::to_string(a) + ", " +
                                       std::to_string(b) + "] stopped with error estimate " +
                                       std::to_string(error));
    }
    return value;
}

double phi1(double z) {
    if (std::abs(z) < 1e-8) return 1.0 + 0.5 * z;
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 0.1) {
        // sum_k z^k / (k! (k + 2))
        double term = 1.0;
        double sum = 0.5;
        for (int k = 1; k < 14; ++k) {
            term *= z / k;
            sum += term / (k + 2);
        }
        return sum;
    }
    return (std::exp(z) * (z - 1.0) + 1.0) / (z * z);
}

}  // namespace detail

Signal Signal::closure(Function f, Function derivative) {
    if (!f) throw DomainError("closure signal needs an evaluator");
    return Signal(Closure{std::move(f), std::move(derivative)});
}

Signal Signal::constant(double c) {
    return closure([c](double) { return c; }, [](double) { return 0.0; });
}

Signal Signal::sampled(TimeScale ts, std::vector<double> mesh, std::vector<double> values) {
    if (mesh.empty() || mesh.size() != values.size()) {
        throw DomainError("sampled signal needs matching, non-empty mesh and values");
    }
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        mesh[i] = ts.snap(mesh[i]);
        if (!std::isfinite(values[i])) {
            throw DomainError("sampled value at t = " + std::to_string(mesh[i]) + " is not finite");
        }
        if (i > 0 && !(mesh[i] > mesh[i - 1])) {
            throw DomainError("sample mesh must be strictly increasing");
        }
    }
    // every piece boundary inside the mesh span must be sampled
    for (const Piece& p : ts.pieces()) {
        if (p.start < mesh.front() || p.start > mesh.back()) continue;
        if (!std::binary_search(mesh.begin(), mesh.end(), p.start)) {
            throw DomainError("sample mesh misses the scattered point t = " +
                              std::to_string(p.start));
        }
    }
    return Signal(Sampled{std::move(ts), std::move(mesh), std::move(values)});
}

bool Signal::is_sampled() const noexcept { return std::holds_alternative<Sampled>(rep_); }

const Signal::Function* Signal::derivative() const noexcept {
    if (const auto* c = std::get_if<Closure>(&rep_)) return c->df ? &c->df : nullptr;
    return nullptr;
}

const Signal::Sampled& Signal::sampled_rep() const {
    const auto* s = std::get_if<Sampled>(&rep_);
    if (!s) throw DomainError("signal is not sampled");
    return *s;
}

const std::vector<double>& Signal::mesh() const { return sampled_rep().mesh; }
const std::vector<double>& Signal::values() const { return sampled_rep().values; }

namespace {

struct Bracket {
    std::size_t lo;
    bool exact;
};

// Locates t (already snapped) in a mesh: exact hit, or m[lo] < t < m[lo + 1].
Bracket bracket(const std::vector<double>& m, double t, double tol) {
    const auto it = std::lower_bound(m.begin(), m.end(), t - tol);
    if (it != m.end() && std::abs(*it - t) <= tol) {
        return {static_cast<std::size_t>(it - m.begin()), true};
    }
    if (it == m.begin() || it == m.end()) {
        throw DomainError("t = " + std::to_string(t) + " lies outside the sample mesh");
    }
    return {static_cast<std::size_t>(it - m.begin()) - 1, false};
}

}  // namespace

double Signal::operator()(double t) const {
    if (const auto* c = std::get_if<Closure>(&rep_)) return c->f(t);
    const Sampled& s = std::get<Sampled>(rep_);
    const double x = s.ts.snap(t);
    const double tol = s.ts.membership_tolerance() * std::max(1.0, std::abs(x));
    const Bracket b = bracket(s.mesh, x, tol);
    if (b.exact) return s.values[b.lo];
    const double w = (x - s.mesh[b.lo]) / (s.mesh[b.lo + 1] - s.mesh[b.lo]);
    return s.values[b.lo] + w * (s.values[b.lo + 1] - s.values[b.lo]);
}

std::optional<double> Signal::sampled_slope(double t) const {
    const Sampled& s = sampled_rep();
    const double x = s.ts.snap(t);
    if (s.ts.mu(x) > 0.0) return std::nullopt;
    const double tol = s.ts.membership_tolerance() * std::max(1.0, std::abs(x));
    const Bracket b = bracket(s.mesh, x, tol);
    const auto& m = s.mesh;
    const auto& v = s.values;
    if (b.lo + 1 < m.size()) {
        // the next sample is in the same dense run unless t is the run's end
        if (s.ts.mu(m[b.lo]) == 0.0) return (v[b.lo + 1] - v[b.lo]) / (m[b.lo + 1] - m[b.lo]);
        return std::nullopt;
    }
    if (b.exact && b.lo > 0 && s.ts.mu(m[b.lo - 1]) == 0.0) {
        return (v[b.lo] - v[b.lo - 1]) / (m[b.lo] - m[b.lo - 1]);
    }
    return std::nullopt;
}

double Signal::weighted_integral(double c, double d, double q, double anchor,
                                 const Tolerances& tol) const {
    if (d <= c) return 0.0;
    if (const auto* cl = std::get_if<Closure>(&rep_)) {
        if (q == 0.0) return detail::integrate(cl->f, c, d, tol.quadrature);
        const auto& f = cl->f;
        return detail::integrate([&](double s) { return f(s) * std::exp(q * (anchor - s)); }, c,
                                 d, tol.quadrature);
    }
    const Sampled& s = std::get<Sampled>(rep_);
    const auto& m = s.mesh;
    const double eps = s.ts.membership_tolerance() * std::max(1.0, std::abs(d));
    if (c < m.front() - eps || d > m.back() + eps) {
        throw DomainError("weighted integral range exceeds the sample mesh");
    }
    auto it = std::upper_bound(m.begin(), m.end(), c);
    std::size_t i = it == m.begin() ? 0 : static_cast<std::size_t>(it - m.begin()) - 1;
    double sum = 0.0;
    for (; i + 1 < m.size() && m[i] < d; ++i) {
        const double l = std::max(m[i], c);
        const double r = std::min(m[i + 1], d);
        if (!(r > l)) continue;
        const double span = m[i + 1] - m[i];
        const double slope = (s.values[i + 1] - s.values[i]) / span;
        const double vr = s.values[i] + slope * (r - m[i]);
        const double delta = r - l;
        const double z = q * delta;
        const double er = std::exp(q * (anchor - r));
        sum += er * delta * (vr * detail::phi1(z) - slope * delta * detail::phi2(z));
    }
    return sum;
}

double Signal::weighted_derivative_integral(double c, double d, double q, double anchor,
                                            const Tolerances& tol) const {
    if (d <= c) return 0.0;
    if (const auto* cl = std::get_if<Closure>(&rep_)) {
        if (cl->df) {
            const auto& df = cl->df;
            return detail::integrate(
                [&](double s) { return df(s) * std::exp(q * (anchor - s)); }, c, d,
                tol.quadrature);
        }
        // integration by parts keeps numerical differentiation out of the kernel
        const double boundary =
            cl->f(d) * std::exp(q * (anchor - d)) - cl->f(c) * std::exp(q * (anchor - c));
        if (q == 0.0) return boundary;
        return boundary + q * weighted_integral(c, d, q, anchor, tol);
    }
    const Sampled& s = std::get<Sampled>(rep_);
    const auto& m = s.mesh;
    const double eps = s.ts.membership_tolerance() * std::max(1.0, std::abs(d));
    if (c < m.front() - eps || d > m.back() + eps) {
        throw DomainError("weighted integral range exceeds the sample mesh");
    }
    auto it = std::upper_bound(m.begin(), m.end(), c);
    std::size_t i = it == m.begin() ? 0 : static_cast<std::size_t>(it - m.begin()) - 1;
    double sum = 0.0;
    for (; i + 1 < m.size() && m[i] < d; ++i) {
        const double l = std::max(m[i], c);
        const double r = std::min(m[i + 1], d);
        if (!(r > l)) continue;
        const double slope = (s.values[i + 1] - s.values[i]) / (m[i + 1] - m[i]);
        const double delta = r - l;
        sum += slope * std::exp(q * (anchor - r)) * delta * detail::phi1(q * delta);
    }
    return sum;
}

}  // namespace cfts
