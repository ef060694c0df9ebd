#pragma once

#include "sibif/grid.hpp"
#include "sibif/tridiag.hpp"
#include "sibif/weight.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sibif {

/// Bump code d_1...d_s over the positive intervals of the weight.
struct BumpCode {
    std::string digits;

    int peak_count() const;
    bool operator==(const BumpCode&) const = default;
};

/// One solution of the discretized boundary value problem.
struct SolutionPoint {
    double lambda = 0.0;
    std::vector<double> u;
    double uprime0 = 0.0;
    double residual_norm = 0.0; // h^2 * max|r|, see residual_norm()
    std::optional<int> morse_index;
    std::optional<BumpCode> bump_code;
    bool type_ambiguous = false; // bump_code is tentative
};

struct NewtonConfig {
    double tol_newton = 1e-10;
    int max_iter = 60;
    double damping_min = 1.0 / 1024.0;

    void validate() const;
};

/// Per-iteration history, for convergence-rate diagnostics.
struct NewtonStats {
    int iterations = 0;
    std::vector<double> residual_history;
};

/// Discrete residual of -u'' = lambda u + a u^2 on the interior nodes.
std::vector<double> residual(double lambda, std::span<const double> u, const Weight& weight,
                             const Grid& grid);

/// Residual measured on the h^2-scaled stencil, h^2 * max_i |r_i|. This is the
/// quantity compared with tol_newton: the raw residual carries O(1/h^2)
/// cancellation error, which for |u| ~ 10^3 is far above 1e-10.
double residual_norm(double lambda, std::span<const double> u, const Weight& weight,
                     const Grid& grid);

/// diag_i = 2/h^2 - lambda - 2 a_i u_i, off = -1/h^2.
TridiagonalSym jacobian(double lambda, std::span<const double> u, const Weight& weight,
                        const Grid& grid);

/// Second-order one-sided u'(0) = (4u_1 - u_2)/(2h).
double boundary_derivative(std::span<const double> u, const Grid& grid);

/// Damped Newton at fixed lambda. Each step halves the update until the residual
/// norm decreases. Throws NoConvergence or SingularJacobian.
SolutionPoint newton_solve(double lambda, std::span<const double> u0, const Weight& weight,
                           const Grid& grid, const NewtonConfig& cfg,
                           NewtonStats* stats = nullptr);

/// Low-level variant on an explicit weight sample and spacing (sub-interval problems).
std::vector<double> newton_solve_raw(double lambda, std::span<const double> u0,
                                     std::span<const double> a, double h,
                                     const NewtonConfig& cfg, NewtonStats* stats = nullptr);

/// Pivot threshold used by the Thomas solves: 1e-12 * (2/h^2).
double pivot_tolerance(double h);

/// Builds a SolutionPoint (u'(0) and residual filled) without annotations.
SolutionPoint make_point(double lambda, std::vector<double> u, const Weight& weight,
                         const Grid& grid);

/// u reflected about x = 1/2: v_i = u_{n+1-i}.
std::vector<double> reflect(std::span<const double> u);

} // namespace sibif
