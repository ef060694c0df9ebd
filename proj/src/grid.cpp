#include "sibif/grid.hpp"

#include <stdexcept>
#include <string>

namespace sibif {

Grid build_grid_unchecked(std::size_t n_interior)
{
    if (n_interior == 0) {
        throw std::invalid_argument("grid needs at least one interior node");
    }
    Grid g;
    g.n_interior = n_interior;
    g.h = 1.0 / static_cast<double>(n_interior + 1);
    g.nodes.resize(n_interior);
    for (std::size_t i = 0; i < n_interior; ++i) {
        g.nodes[i] = static_cast<double>(i + 1) / static_cast<double>(n_interior + 1);
    }
    return g;
}

Grid build_grid(std::size_t n_interior)
{
    if (n_interior < 3) {
        throw std::invalid_argument("build_grid: n_interior must be >= 3, got " +
                                    std::to_string(n_interior));
    }
    return build_grid_unchecked(n_interior);
}

} // namespace sibif
