#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "cfts/timescale.hpp"
#include "cfts/tolerances.hpp"

namespace cfts {

/// A real-valued function on a time scale: either a closed-form evaluator or
/// samples on a mesh with linear interpolation inside continuous intervals.
class Signal {
public:
    using Function = std::function<double(double)>;

    static Signal closure(Function f, Function derivative = nullptr);
    static Signal constant(double c);
    /// The mesh must lie in ts, be strictly increasing and contain every
    /// scattered point between its first and last entry.
    static Signal sampled(TimeScale ts, std::vector<double> mesh, std::vector<double> values);

    double operator()(double t) const;

    bool is_sampled() const noexcept;
    /// Exact derivative of a closure, if one was supplied.
    const Function* derivative() const noexcept;
    /// Sampled only.
    const std::vector<double>& mesh() const;
    const std::vector<double>& values() const;

    /// Integral over the dense run [c, d] of f(tau) exp(q (anchor - tau)).
    double weighted_integral(double c, double d, double q, double anchor,
                             const Tolerances& tol = {}) const;
    /// Integral over the dense run [c, d] of f'(tau) exp(q (anchor - tau)).
    double weighted_derivative_integral(double c, double d, double q, double anchor,
                                        const Tolerances& tol = {}) const;

    /// Slope of the interpolant at a dense point t (forward, or backward at the
    /// last sample). nullopt when no neighbouring sample shares t's interval.
    std::optional<double> sampled_slope(double t) const;

private:
    struct Closure {
        Function f;
        Function df;
    };
    struct Sampled {
        TimeScale ts;
        std::vector<double> mesh;
        std::vector<double> values;
    };

    explicit Signal(Closure c) : rep_(std::move(c)) {}
    explicit Signal(Sampled s) : rep_(std::move(s)) {}

    const Sampled& sampled_rep() const;

    std::variant<Closure, Sampled> rep_;
};

namespace detail {

/// Adaptive Gauss-Kronrod (15 point) integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol);

/// (e^z - 1) / z
double phi1(double z);
/// integral over [0, 1] of x e^{z x}
double phi2(double z);

}  // namespace detail

}  // namespace cfts
