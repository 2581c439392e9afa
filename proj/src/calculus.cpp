#include "cfts/calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "cfts/errors.hpp"

namespace cfts {

double richardson_derivative(const Signal::Function& f, double t, double h0, int side,
                             double target) {
    constexpr int kMax = 12;
    constexpr double kShrink = 1.4;
    const double base = side == 0 ? kShrink * kShrink : kShrink;
    auto quotient = [&](double h) {
        if (side == 0) return (f(t + h) - f(t - h)) / (2.0 * h);
        return (f(t + side * h) - f(t)) / (side * h);
    };

    std::array<std::array<double, kMax>, kMax> table{};
    double h = h0;
    double best = quotient(h);
    double best_err = std::numeric_limits<double>::infinity();
    table[0][0] = best;
    for (int i = 1; i < kMax; ++i) {
        h /= kShrink;
        table[0][i] = quotient(h);
        double fac = base;
        for (int j = 1; j <= i; ++j) {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= base;
            const double err = std::max(std::abs(table[j][i] - table[j - 1][i]),
                                        std::abs(table[j][i] - table[j - 1][i - 1]));
            if (err <= best_err) {
                best_err = err;
                best = table[j][i];
            }
        }
        if (best_err <= target) break;
        // higher orders stopped helping: round-off dominates
        if (std::abs(table[i][i] - table[i - 1][i - 1]) >= 2.0 * best_err) break;
    }
    return best;
}

double delta_derivative(const TimeScale& ts, const Signal& f, double t, const Tolerances& tol) {
    const double s = ts.snap(t);
    if (!ts.in_kappa(s)) {
        throw OutsideKappaDomain("t = " + std::to_string(s) +
                                 " is the left-scattered maximum of the window");
    }
    const double m = ts.mu(s);
    if (m > 0.0) return (f(ts.sigma(s)) - f(s)) / m;

    if (const auto* df = f.derivative()) return (*df)(s);
    if (f.is_sampled()) {
        if (auto slope = f.sampled_slope(s)) return *slope;
        throw DenseDerivativeUnavailable("no samples next to dense point t = " + std::to_string(s));
    }

    const auto& pieces = ts.pieces();
    std::size_t i = ts.piece_index(s);
    if (i == pieces.size()) {
        if (pieces.empty()) {
            throw OutsideKappaDomain("single-point time scale has no dense derivative");
        }
        i = pieces.size() - 1;
    }
    const double c = pieces[i].start;
    const double d = pieces[i].end;
    double h = 1e-4 * std::max(1.0, std::abs(s));
    const double room_left = s - c;
    const double room_right = d - s;
    int side = 0;
    if (room_left < h || room_right < h) {
        side = room_right >= room_left ? 1 : -1;
        h = std::min(h, 0.5 * std::max(room_left, room_right));
    }
    const auto fn = [&f](double x) { return f(x); };
    return richardson_derivative(fn, s, h, side, tol.derivative);
}

double delta_integral(const TimeScale& ts, const Signal& f, double a, double b,
                      const Tolerances& tol) {
    const double lo = ts.snap(a);
    const double hi = ts.snap(b);
    if (lo > hi) return -delta_integral(ts, f, hi, lo, tol);
    const auto& pieces = ts.pieces();
    double sum = 0.0;
    for (std::size_t i = ts.piece_index(lo); i < pieces.size() && pieces[i].start < hi; ++i) {
        const Piece& p = pieces[i];
        if (p.is_jump()) {
            sum += p.length() * f(p.start);
        } else {
            sum += f.weighted_integral(std::max(p.start, lo), std::min(p.end, hi), 0.0, 0.0, tol);
        }
    }
    return sum;
}

bool is_regressive(const TimeScale& ts, double p, const Tolerances& tol) {
    const auto g = ts.graininess_values();
    return std::none_of(g.begin(), g.end(),
                        [&](double m) { return std::abs(1.0 + m * p) <= tol.regressivity; });
}

double exp_ts(const TimeScale& ts, double p, double t, double t0, const Tolerances& tol) {
    if (!is_regressive(ts, p, tol)) {
        throw NonRegressiveParameter("p = " + std::to_string(p) +
                                     " is not regressive: 1 + mu p vanishes on the time scale");
    }
    const double hi = ts.snap(t);
    const double lo = ts.snap(t0);
    if (hi < lo) return 1.0 / exp_ts(ts, p, lo, hi, tol);
    const auto& pieces = ts.pieces();
    double product = 1.0;
    double dense_length = 0.0;
    for (std::size_t i = ts.piece_index(lo); i < pieces.size() && pieces[i].start < hi; ++i) {
        const Piece& q = pieces[i];
        if (q.is_jump()) {
            product *= 1.0 + q.length() * p;
        } else {
            dense_length += std::min(q.end, hi) - std::max(q.start, lo);
        }
    }
    return dense_length == 0.0 ? product : product * std::exp(p * dense_length);
}

namespace {

double jump_term(const Signal& g, Integrand kind, const Piece& p) {
    return kind == Integrand::value ? p.length() * g(p.start) : g(p.end) - g(p.start);
}

double dense_term(const Signal& g, Integrand kind, double c, double d, double q, double anchor,
                  const Tolerances& tol) {
    return kind == Integrand::value ? g.weighted_integral(c, d, q, anchor, tol)
                                    : g.weighted_derivative_integral(c, d, q, anchor, tol);
}

}  // namespace

double kernel_integral_left(const TimeScale& ts, const Signal& g, Integrand kind, double a,
                            double t, double q, const Tolerances& tol) {
    const double lo = ts.snap(a);
    const double hi = ts.snap(t);
    if (lo > hi) throw DomainError("kernel integral needs a <= t");
    if (lo == hi) return 0.0;
    const auto& pieces = ts.pieces();
    const std::size_t first = ts.piece_index(lo);
    std::size_t last = ts.piece_index(hi);
    if (last == pieces.size() || pieces[last].start >= hi) --last;

    // running factor e_q(t, end of the current piece), built right to left
    double factor = 1.0;
    double sum = 0.0;
    for (std::size_t k = last + 1; k-- > first;) {
        const Piece& p = pieces[k];
        if (p.is_jump()) {
            sum += factor * jump_term(g, kind, p);
            factor *= 1.0 + p.length() * q;
        } else {
            const double c = std::max(p.start, lo);
            const double d = std::min(p.end, hi);
            if (factor != 0.0) sum += factor * dense_term(g, kind, c, d, q, d, tol);
            factor *= std::exp(q * (d - c));
        }
    }
    return sum;
}

double kernel_integral_right(const TimeScale& ts, const Signal& g, Integrand kind, double t,
                             double b, double q, const Tolerances& tol) {
    const double lo = ts.snap(t);
    const double hi = ts.snap(b);
    if (lo > hi) throw DomainError("kernel integral needs t <= b");
    const auto& pieces = ts.pieces();
    // running factor e_q(t, start of the current piece), built left to right
    double factor = 1.0;
    double sum = 0.0;
    for (std::size_t k = ts.piece_index(lo); k < pieces.size() && pieces[k].start < hi; ++k) {
        const Piece& p = pieces[k];
        if (p.is_jump()) {
            const double step = 1.0 + p.length() * q;
            if (std::abs(step) <= tol.regressivity) {
                throw NonRegressiveParameter("1 + mu q vanishes at t = " + std::to_string(p.start));
            }
            factor /= step;
            sum += factor * jump_term(g, kind, p);
        } else {
            const double c = std::max(p.start, lo);
            const double d = std::min(p.end, hi);
            sum += factor * dense_term(g, kind, c, d, q, c, tol);
            factor *= std::exp(-q * (d - c));
        }
    }
    return sum;
}

}  // namespace cfts
