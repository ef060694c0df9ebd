#include "sibif/discretization.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sibif {

TridiagonalSym neg_laplacian(const Grid& grid)
{
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    TridiagonalSym t;
    t.diag.assign(grid.size(), 2.0 * inv_h2);
    t.off.assign(grid.size() - 1, -inv_h2);
    return t;
}

std::vector<double> dirichlet_eigenvalues(const Grid& grid, int k)
{
    if (k < 1 || static_cast<std::size_t>(k) > grid.size()) {
        throw std::invalid_argument("dirichlet_eigenvalues: k must lie in [1, n_interior]");
    }
    const auto t = neg_laplacian(grid);
    const double tol = 1e-15 * 4.0 / (grid.h * grid.h);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        out.push_back(sturm_eigenvalue(t, i, tol));
    }
    return out;
}

double discrete_dirichlet_eigenvalue(double h, int n)
{
    const double s = std::sin(0.5 * n * std::numbers::pi * h);
    return 4.0 / (h * h) * s * s;
}

double dirichlet_eigenvalue(int n)
{
    const double v = n * std::numbers::pi;
    return v * v;
}

} // namespace sibif
