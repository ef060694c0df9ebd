#pragma once

#include <cstddef>
#include <vector>

namespace sibif {

/// Uniform interior mesh of (0,1); the Dirichlet end points are not stored.
struct Grid {
    std::size_t n_interior = 0;
    double h = 0.0;
    std::vector<double> nodes; // x_i = i*h, i = 1..n_interior

    std::size_t size() const { return n_interior; }
};

/// Throws std::invalid_argument when n_interior < 3.
Grid build_grid(std::size_t n_interior);

/// Grid without the n >= 3 restriction, used for sub-interval problems and
/// degenerate operator checks.
Grid build_grid_unchecked(std::size_t n_interior);

} // namespace sibif
