#include "sibif/nonlinear.hpp"

#include "sibif/error.hpp"
#include "sibif/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sibif {

int BumpCode::peak_count() const
{
    return static_cast<int>(std::count(digits.begin(), digits.end(), '1'));
}

void NewtonConfig::validate() const
{
    if (!(tol_newton > 0.0) || max_iter < 1 || !(damping_min > 0.0 && damping_min <= 1.0)) {
        throw std::invalid_argument("invalid NewtonConfig");
    }
}

namespace {

void check_dims(std::span<const double> u, const Weight& weight, const Grid& grid)
{
    if (u.size() != grid.size() || weight.values.size() != grid.size()) {
        throw std::invalid_argument("dimension mismatch: u has " + std::to_string(u.size()) +
                                    " entries, grid has " + std::to_string(grid.size()));
    }
}

double scaled_norm(std::span<const double> u, std::span<const double> a, double h, double lambda,
                   std::vector<double>& r)
{
    kernels::residual(u, a, h, lambda, r);
    return h * h * kernels::max_abs(r);
}

TridiagonalSym raw_jacobian(double lambda, std::span<const double> u, std::span<const double> a,
                            double h)
{
    TridiagonalSym t;
    t.diag.resize(u.size());
    kernels::jacobian_diagonal(u, a, h, lambda, t.diag);
    t.off.assign(u.size() - 1, -1.0 / (h * h));
    return t;
}

} // namespace

double pivot_tolerance(double h)
{
    return 1e-12 * 2.0 / (h * h);
}

std::vector<double> residual(double lambda, std::span<const double> u, const Weight& weight,
                             const Grid& grid)
{
    check_dims(u, weight, grid);
    std::vector<double> r(u.size());
    kernels::residual(u, weight.values, grid.h, lambda, r);
    return r;
}

double residual_norm(double lambda, std::span<const double> u, const Weight& weight,
                     const Grid& grid)
{
    check_dims(u, weight, grid);
    std::vector<double> r(u.size());
    return scaled_norm(u, weight.values, grid.h, lambda, r);
}

TridiagonalSym jacobian(double lambda, std::span<const double> u, const Weight& weight,
                        const Grid& grid)
{
    check_dims(u, weight, grid);
    return raw_jacobian(lambda, u, weight.values, grid.h);
}

double boundary_derivative(std::span<const double> u, const Grid& grid)
{
    if (u.size() < 2) {
        throw std::invalid_argument("boundary_derivative needs two interior values");
    }
    return (4.0 * u[0] - u[1]) / (2.0 * grid.h);
}

std::vector<double> newton_solve_raw(double lambda, std::span<const double> u0,
                                     std::span<const double> a, double h,
                                     const NewtonConfig& cfg, NewtonStats* stats)
{
    cfg.validate();
    for (double v : u0) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("newton_solve: non-finite initial iterate");
        }
    }
    const std::size_t n = u0.size();
    std::vector<double> u(u0.begin(), u0.end());
    std::vector<double> r(n);
    std::vector<double> trial(n);
    std::vector<double> r_trial(n);
    double norm = scaled_norm(u, a, h, lambda, r);
    if (stats) {
        stats->residual_history.assign(1, norm);
        stats->iterations = 0;
    }
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (norm <= cfg.tol_newton) {
            if (stats) {
                stats->iterations = it;
            }
            return u;
        }
        const auto jac = raw_jacobian(lambda, u, a, h);
        for (auto& v : r) {
            v = -v;
        }
        const auto du = thomas_solve(jac, r, pivot_tolerance(h));
        double step = 1.0;
        while (true) {
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] = u[i] + step * du[i];
            }
            const double trial_norm = scaled_norm(trial, a, h, lambda, r_trial);
            if (std::isfinite(trial_norm) && trial_norm < norm) {
                u.swap(trial);
                r.swap(r_trial);
                norm = trial_norm;
                break;
            }
            step *= 0.5;
            if (step < cfg.damping_min) {
                throw NoConvergence("newton_solve: damping underflow at lambda = " +
                                    std::to_string(lambda));
            }
        }
        if (stats) {
            stats->residual_history.push_back(norm);
        }
    }
    if (norm <= cfg.tol_newton) {
        if (stats) {
            stats->iterations = cfg.max_iter;
        }
        return u;
    }
    throw NoConvergence("newton_solve: no convergence after " + std::to_string(cfg.max_iter) +
                        " iterations at lambda = " + std::to_string(lambda));
}

SolutionPoint newton_solve(double lambda, std::span<const double> u0, const Weight& weight,
                           const Grid& grid, const NewtonConfig& cfg, NewtonStats* stats)
{
    check_dims(u0, weight, grid);
    auto u = newton_solve_raw(lambda, u0, weight.values, grid.h, cfg, stats);
    return make_point(lambda, std::move(u), weight, grid);
}

SolutionPoint make_point(double lambda, std::vector<double> u, const Weight& weight,
                         const Grid& grid)
{
    SolutionPoint p;
    p.lambda = lambda;
    p.residual_norm = residual_norm(lambda, u, weight, grid);
    p.uprime0 = boundary_derivative(u, grid);
    p.u = std::move(u);
    return p;
}

std::vector<double> reflect(std::span<const double> u)
{
    return {u.rbegin(), u.rend()};
}

} // namespace sibif
