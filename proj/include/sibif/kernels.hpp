#pragma once

// Data-parallel inner loops of the solver. Every kernel has a serial reference
// version and an OpenMP version with identical per-element arithmetic, so the
// two agree bit for bit; tests compare them and bench/ times them.

#include <cstddef>
#include <span>

namespace sibif::kernels {

/// Below this size the OpenMP variants run on one thread.
inline constexpr std::size_t kParallelThreshold = 4096;

namespace serial {

/// r_i = (-u_{i-1} + 2u_i - u_{i+1})/h^2 - lambda*u_i - a_i*u_i^2, u_0 = u_{n+1} = 0.
void residual(std::span<const double> u, std::span<const double> a, double h, double lambda,
              std::span<double> r);

/// diag_i = 2/h^2 - lambda - 2 a_i u_i (off-diagonal is the constant -1/h^2).
void jacobian_diagonal(std::span<const double> u, std::span<const double> a, double h,
                       double lambda, std::span<double> diag);

/// rhs_i = u_i + dt*a_i*u_i^2 (explicit part of the IMEX step).
void imex_rhs(std::span<const double> u, std::span<const double> a, double dt,
              std::span<double> rhs);

double max_abs(std::span<const double> v);

void sample(double (*f)(double, const void*), const void* ctx, std::span<const double> x,
            std::span<double> out);

} // namespace serial

namespace omp {

void residual(std::span<const double> u, std::span<const double> a, double h, double lambda,
              std::span<double> r);
void jacobian_diagonal(std::span<const double> u, std::span<const double> a, double h,
                       double lambda, std::span<double> diag);
void imex_rhs(std::span<const double> u, std::span<const double> a, double dt,
              std::span<double> rhs);
double max_abs(std::span<const double> v);
void sample(double (*f)(double, const void*), const void* ctx, std::span<const double> x,
            std::span<double> out);

} // namespace omp

// Default dispatch used by the solver.
using omp::imex_rhs;
using omp::jacobian_diagonal;
using omp::max_abs;
using omp::residual;
using omp::sample;

} // namespace sibif::kernels
