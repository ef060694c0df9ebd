#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sibif {

/// Symmetric tridiagonal matrix: off[i] couples rows i and i+1.
struct TridiagonalSym {
    std::vector<double> diag;
    std::vector<double> off; // size() == diag.size() - 1

    std::size_t size() const { return diag.size(); }
    /// y = T x
    void multiply(std::span<const double> x, std::span<double> y) const;
    TridiagonalSym scaled(double factor) const;
};

/// Thomas algorithm (no pivoting). Throws SingularJacobian when a pivot falls
/// below pivot_tol in magnitude.
std::vector<double> thomas_solve(const TridiagonalSym& t, std::span<const double> rhs,
                                 double pivot_tol);

/// Gaussian elimination with adjacent-row partial pivoting (LAPACK gtsv style).
/// Works for indefinite and nearly singular matrices; throws SingularJacobian
/// only on an exactly zero pivot.
std::vector<double> pivoted_solve(const TridiagonalSym& t, std::span<const double> rhs);

/// Solves the bordered system
///     [ T    b ] [x]   [f]
///     [ c^T  d ] [y] = [g]
/// in O(n). Row pivoting is restricted to the tridiagonal block and the last
/// tridiagonal unknown is eliminated together with y by a pivoted 2x2 solve,
/// so the solve stays stable when T itself is singular (folds).
/// Throws SingularBordered when the full matrix is numerically singular.
struct BorderedSolution {
    std::vector<double> x;
    double y = 0.0;
};
BorderedSolution bordered_solve(const TridiagonalSym& t, std::span<const double> b,
                                std::span<const double> c, double d, std::span<const double> f,
                                double g);

/// Number of eigenvalues of t strictly below shift (Sylvester inertia of t - shift*I
/// from the LDL^T pivots, i.e. the Sturm sequence sign count).
int sturm_count(const TridiagonalSym& t, double shift);

/// k-th smallest eigenvalue (0-based) by Sturm bisection to absolute tolerance tol.
double sturm_eigenvalue(const TridiagonalSym& t, int k, double tol);

} // namespace sibif
