#pragma once

#include "sibif/grid.hpp"
#include "sibif/tridiag.hpp"

#include <vector>

namespace sibif {

/// Centered second-difference approximation of -d^2/dx^2 with the Dirichlet
/// rows eliminated: diag 2/h^2, off -1/h^2.
TridiagonalSym neg_laplacian(const Grid& grid);

/// The k smallest eigenvalues of neg_laplacian(grid), ascending, computed by
/// Sturm bisection on the assembled matrix.
std::vector<double> dirichlet_eigenvalues(const Grid& grid, int k);

/// Closed form (4/h^2) sin^2(n pi h / 2) of the n-th discrete eigenvalue.
double discrete_dirichlet_eigenvalue(double h, int n);

/// sigma_n = (n pi)^2, the n-th eigenvalue of the continuous problem.
double dirichlet_eigenvalue(int n);

} // namespace sibif
