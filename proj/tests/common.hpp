#pragma once

#include <doctest.h>

#include "psh/measure.hpp"

namespace psh::test {

// built once per process; paper-u takes ~30 s on one core
inline const BoundaryDensity& paper_density() {
    static BoundaryDensityPtr bd = [] {
        DensityOptions o;
        o.grid = 1024;
        return boundary_density(paper_exhaustion(), o);
    }();
    return *bd;
}

inline const BoundaryDensity& green_density() {
    static BoundaryDensityPtr bd = boundary_density(green_exhaustion(ConformalFrame::unit_disc()));
    return *bd;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace psh::test
