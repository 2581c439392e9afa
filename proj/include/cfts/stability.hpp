#pragma once

// Exponential stability of the linear CF equation with constant forcing.
//
// On hZ the equation is stable iff the real p(alpha) lies in the open disc
// |1 + h p| < 1, i.e. p in (-2/h, 0). Rewritten in lambda this splits into
//   (a) h > 2(1/alpha - 1):  lambda in (-2 / (h alpha - 2(1 - alpha)), 0)
//   (b) h <= 2(1/alpha - 1): lambda < 0 or lambda > 2 / (2(1 - alpha) - h alpha).
// On R it is stable iff lambda < 0 or lambda > 1 / (1 - alpha).

#include <string>
#include <string_view>

#include "cfts/timescale.hpp"

namespace cfts {

enum class StabilityStatus { stable, unstable, boundary, regressivity_violation };
enum class StabilityMechanism { in_s_c, in_s_r, outside };
enum class StabilityBranch { none, a, b, continuous };

std::string_view to_string(StabilityStatus s);
std::string_view to_string(StabilityMechanism m);
std::string_view to_string(StabilityBranch b);

struct StabilityVerdict {
    double lambda = 0.0;
    double alpha = 0.0;
    /// 0 for the continuous time scale.
    double h = 0.0;
    StabilityStatus status = StabilityStatus::unstable;
    StabilityMechanism mechanism = StabilityMechanism::outside;
    StabilityBranch branch = StabilityBranch::none;
    double p_alpha = 0.0;
    /// Endpoints of the lambda criterion: branch (a) uses (low, high = 0) as
    /// the stable interval; branch (b) and R use [low = 0, high] as the
    /// unstable band. high may be +inf.
    double threshold_low = 0.0;
    double threshold_high = 0.0;
};

/// Header matching verdict_csv_row.
std::string verdict_csv_header();
/// lambda,alpha,h,status,mechanism,p_alpha,threshold_low,threshold_high,branch
std::string verdict_csv_row(const StabilityVerdict& v);

/// alpha in (0, 1], h > 0. Throws DomainError on invalid arguments.
StabilityVerdict classify_hz(double lambda, double alpha, double h);

/// alpha in (0, 1).
StabilityVerdict classify_r(double lambda, double alpha);

/// (1/(T - t0)) * integral over [t0, T) of g, where g = log|1 + mu p| / mu on
/// jumps and g = p on dense runs; t0 is the window minimum. Finite-horizon
/// evidence for p in S_C: negative means decay.
double estimate_sc(const TimeScale& ts, double p, double horizon);

}  // namespace cfts
