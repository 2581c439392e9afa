#pragma once

// Scenario configs and the `cfts` command-line driver.
//
// Config grammar (one key per line, `#` starts a comment):
//
//   [name]                      starts a scenario
//   segment   = interval a b | grid start h count | point t     (repeatable)
//   equation  = linear | nonlinear
//   lambda    = <real>                                          (linear)
//   u         = constant c | polynomial c0 c1 ... | sinusoid A w phi
//               | table t0:v0 t1:v1 ...                         (linear)
//   rhs       = zero | sine A | affine k <u-spec>               (nonlinear)
//   lipschitz = <real>                                          (nonlinear)
//   interval  = a b                                             (nonlinear, default whole window)
//   x0        = <real>
//   alphas    = a1 a2 ...        values in [0, 1]; 1 selects the classical equation
//   horizon   = <point>  |  steps = <count>
//   outputs   = trajectory verdict residuals
//   dense_step, tol, max_iter    numerical settings

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfts/nonlinear.hpp"
#include "cfts/signal.hpp"
#include "cfts/timescale.hpp"
#include "cfts/tolerances.hpp"

namespace cfts::cli {

enum class Equation { linear, nonlinear };

struct Scenario {
    std::string name;
    int line = 0;
    std::vector<Segment> segments;
    Equation equation = Equation::linear;
    double lambda = 0.0;
    double x0 = 0.0;
    Signal u = Signal::constant(0.0);
    RightHandSide rhs;
    std::optional<double> lipschitz;
    std::optional<std::pair<double, double>> interval;
    std::vector<double> alphas;
    std::optional<double> horizon;
    std::optional<std::size_t> steps;
    bool want_trajectory = true;
    bool want_verdict = false;
    bool want_residuals = false;
    double dense_step = 0.0;
    std::optional<double> tol;
    std::size_t max_iter = 200;

    TimeScale timescale() const;
    /// End of the simulated window: horizon, or `steps` forward jumps from the start.
    double end_point(const TimeScale& ts, double start) const;
};

/// Throws ParseError carrying the offending line.
std::vector<Scenario> parse_config(std::string_view text);
std::vector<Scenario> load_config(const std::string& path);

struct Trajectory {
    std::vector<double> t;
    std::vector<double> x;
    /// Equation residual at each mesh point; NaN where it is undefined.
    std::vector<double> residual;

    /// Largest |residual| over the points after the initial one.
    double max_residual() const;
};

/// alpha < 1 uses the closed-form CF solution, alpha == 1 the classical equation.
Trajectory simulate_linear(const Scenario& s, double alpha, const Tolerances& tol = {});

struct NonlinearRun {
    Trajectory trajectory;
    PicardResult picard;
};
NonlinearRun simulate_nonlinear(const Scenario& s, double alpha, const Tolerances& tol = {});

/// "t,x,residual" then one "%.17g" row per point, "\n" line endings.
std::string trajectory_csv(const Trajectory& tr);
std::string csv_file_name(const std::string& scenario, double alpha);

/// Built-in scenario configs behind `cfts figures`.
std::string figure_config(int which);

/// Tolerances from CFTS_TOL, if set. Throws DomainError on a malformed value.
Tolerances tolerances_from_env();

/// Process exit codes.
enum Exit : int {
    ok = 0,
    failure = 1,
    config_error = 2,
    regressivity_error = 3,
    not_contractive = 4,
    residual_error = 5,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cfts::cli
