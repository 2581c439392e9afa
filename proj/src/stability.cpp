#include "cfts/stability.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "cfts/calculus.hpp"
#include "cfts/errors.hpp"
#include "cfts/linear.hpp"

namespace cfts {

namespace {

constexpr double kBoundaryTol = 1e-12;

bool near(double x, double endpoint) {
    return std::isfinite(endpoint) &&
           std::abs(x - endpoint) <= kBoundaryTol * std::max(1.0, std::abs(endpoint));
}

std::string real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string_view to_string(StabilityStatus s) {
    switch (s) {
        case StabilityStatus::stable: return "stable";
        case StabilityStatus::unstable: return "unstable";
        case StabilityStatus::boundary: return "boundary";
        case StabilityStatus::regressivity_violation: return "regressivity-violation";
    }
    return "unknown";
}

std::string_view to_string(StabilityMechanism m) {
    switch (m) {
        case StabilityMechanism::in_s_c: return "in-S_C";
        case StabilityMechanism::in_s_r: return "in-S_R";
        case StabilityMechanism::outside: return "outside";
    }
    return "unknown";
}

std::string_view to_string(StabilityBranch b) {
    switch (b) {
        case StabilityBranch::none: return "none";
        case StabilityBranch::a: return "a";
        case StabilityBranch::b: return "b";
        case StabilityBranch::continuous: return "continuous";
    }
    return "unknown";
}

std::string verdict_csv_header() {
    return "lambda,alpha,h,status,mechanism,p_alpha,threshold_low,threshold_high,branch";
}

std::string verdict_csv_row(const StabilityVerdict& v) {
    std::string row;
    row += real(v.lambda) + ',' + real(v.alpha) + ',' + real(v.h) + ',';
    row += std::string(to_string(v.status)) + ',' + std::string(to_string(v.mechanism)) + ',';
    row += real(v.p_alpha) + ',' + real(v.threshold_low) + ',' + real(v.threshold_high) + ',';
    row += to_string(v.branch);
    return row;
}

StabilityVerdict classify_hz(double lambda, double alpha, double h) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("classify_hz needs alpha in (0, 1]");
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("classify_hz needs h > 0");
    if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");

    StabilityVerdict v;
    v.lambda = lambda;
    v.alpha = alpha;
    v.h = h;
    if (h > 2.0 * (1.0 / alpha - 1.0)) {
        v.branch = StabilityBranch::a;
        v.threshold_low = -2.0 / (h * alpha - 2.0 * (1.0 - alpha));
        v.threshold_high = 0.0;
    } else {
        v.branch = StabilityBranch::b;
        const double denom = 2.0 * (1.0 - alpha) - h * alpha;
        v.threshold_low = 0.0;
        v.threshold_high = denom > 0.0 ? 2.0 / denom : std::numeric_limits<double>::infinity();
    }

    const double k = k_alpha(lambda, alpha);
    if (std::abs(k) <= kBoundaryTol) {
        v.status = StabilityStatus::regressivity_violation;
        v.p_alpha = std::numeric_limits<double>::quiet_NaN();
        return v;
    }
    v.p_alpha = lambda * alpha / k;
    if (std::abs(1.0 + h * v.p_alpha) <= kBoundaryTol) {
        v.status = StabilityStatus::regressivity_violation;
        v.mechanism = StabilityMechanism::in_s_r;
        return v;
    }
    if (near(lambda, v.threshold_low) || near(lambda, v.threshold_high)) {
        v.status = StabilityStatus::boundary;
        return v;
    }
    const bool stable = v.branch == StabilityBranch::a
                            ? (lambda > v.threshold_low && lambda < 0.0)
                            : (lambda < 0.0 || lambda > v.threshold_high);
    v.status = stable ? StabilityStatus::stable : StabilityStatus::unstable;
    v.mechanism = stable ? StabilityMechanism::in_s_c : StabilityMechanism::outside;
    return v;
}

StabilityVerdict classify_r(double lambda, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("classify_r needs alpha in (0, 1)");
    if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");

    StabilityVerdict v;
    v.lambda = lambda;
    v.alpha = alpha;
    v.h = 0.0;
    v.branch = StabilityBranch::continuous;
    v.threshold_low = 0.0;
    v.threshold_high = 1.0 / (1.0 - alpha);
    const double k = std::fma(-lambda, 1.0 - alpha, 1.0);
    if (k == 0.0 || lambda == v.threshold_high) {
        v.status = StabilityStatus::regressivity_violation;
        v.p_alpha = std::numeric_limits<double>::quiet_NaN();
        return v;
    }
    v.p_alpha = lambda * alpha / k;
    if (near(lambda, 0.0)) {
        v.status = StabilityStatus::boundary;
        return v;
    }
    const bool stable = lambda < 0.0 || lambda > v.threshold_high;
    v.status = stable ? StabilityStatus::stable : StabilityStatus::unstable;
    v.mechanism = stable ? StabilityMechanism::in_s_c : StabilityMechanism::outside;
    return v;
}

double estimate_sc(const TimeScale& ts, double p, double horizon) {
    if (!is_regressive(ts, p)) {
        throw NonRegressiveParameter("p = " + std::to_string(p) + " is not regressive on the time scale");
    }
    const double t0 = ts.min();
    const double end = ts.snap(horizon);
    if (!(end > t0)) throw DomainError("estimate_sc needs a horizon beyond the window start");
    double sum = 0.0;
    const auto& pieces = ts.pieces();
    for (std::size_t i = 0; i < pieces.size() && pieces[i].start < end; ++i) {
        const Piece& q = pieces[i];
        if (q.is_jump()) {
            sum += std::log(std::abs(1.0 + q.length() * p));
        } else {
            sum += p * (std::min(q.end, end) - q.start);
        }
    }
    return sum / (end - t0);
}

}  // namespace cfts
