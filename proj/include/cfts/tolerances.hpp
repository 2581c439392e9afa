#pragma once

#include <cstddef>

namespace cfts {

struct Tolerances {
    /// Absolute target of the adaptive quadrature on dense pieces.
    double quadrature = 1e-10;
    /// Target of the Richardson-extrapolated difference quotient at dense points.
    double derivative = 1e-8;
    /// Relative distance under which a real is identified with a time-scale point.
    double membership = 1e-12;
    /// |1 + mu p| at or below this counts as zero.
    double regressivity = 1e-12;
    /// Sub-intervals per continuous interval for sampled meshes (length / n).
    std::size_t dense_subdivisions = 256;
};

}  // namespace cfts
