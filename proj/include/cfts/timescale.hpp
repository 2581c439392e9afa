#pragma once

// Hybrid time scales on a bounded working window.
//
// A time scale is stored as an ordered union of continuous intervals, uniform
// grids and isolated points. Internally the window [min, max) is partitioned
// into pieces: dense runs [c, d) where the graininess vanishes, and jumps
// [s, sigma(s)) contributed by right-scattered points. Every integral, the
// exponential function and the CF kernels are sums over these pieces.

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "cfts/tolerances.hpp"

namespace cfts {

struct ContinuousInterval {
    double a;
    double b;
};

struct UniformGrid {
    double start;
    double step;
    std::size_t count;
};

struct IsolatedPoint {
    double t;
};

using Segment = std::variant<ContinuousInterval, UniformGrid, IsolatedPoint>;

enum class PointClass {
    dense,
    right_scattered,
    left_scattered,
    isolated,
    right_dense_left_scattered,
    left_dense_right_scattered,
};

std::string_view to_string(PointClass c);

struct Piece {
    enum class Kind { dense, jump };
    Kind kind;
    double start;
    double end;

    double length() const noexcept { return end - start; }
    bool is_jump() const noexcept { return kind == Kind::jump; }
};

class TimeScale {
public:
    /// Segments may be given in any order; they must be pairwise disjoint
    /// except for shared endpoints, which are merged.
    explicit TimeScale(std::vector<Segment> segments, double membership_tol = 1e-12);

    /// Parses one segment per line: `interval a b`, `grid start h count`,
    /// `point t`. Blank lines and `#` comments are ignored.
    static TimeScale parse(std::string_view description);
    static Segment parse_segment(std::string_view line, int line_no = 0);

    static TimeScale interval(double a, double b);
    /// {start, start + h, ..., start + (count - 1) h}
    static TimeScale uniform(double start, double step, std::size_t count);

    double min() const noexcept;
    double max() const noexcept;
    const std::vector<Segment>& segments() const noexcept;
    const std::vector<Piece>& pieces() const noexcept;
    double membership_tolerance() const noexcept;

    bool contains(double t) const;
    /// Canonical representative of t; throws PointNotInTimeScale.
    double snap(double t) const;

    double sigma(double t) const;
    double rho(double t) const;
    double mu(double t) const;
    PointClass classify(double t) const;
    bool right_scattered(double t) const { return mu(t) > 0.0; }
    /// Membership in T^kappa (the window minus a left-scattered maximum).
    bool in_kappa(double t) const;

    /// Distinct positive graininess values over T^kappa.
    std::vector<double> graininess_values() const;
    bool is_discrete() const noexcept;
    /// Step h when the scale is a single uniform grid.
    std::optional<double> uniform_step() const noexcept;

    /// Ordered points of [from, to]: every scattered point plus a uniform
    /// subdivision of each dense run. dense_step <= 0 uses length / 256 of
    /// the enclosing interval.
    std::vector<double> mesh(double from, double to, double dense_step = 0.0) const;

    /// Index of the piece whose [start, end) contains the snapped t, or
    /// pieces().size() when t == max().
    std::size_t piece_index(double t) const;

private:
    struct Data;
    std::shared_ptr<const Data> data_;
};

double sigma(const TimeScale& ts, double t);
double rho(const TimeScale& ts, double t);
double mu(const TimeScale& ts, double t);

}  // namespace cfts
