#include "sibif/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace sibif::kernels::omp {

namespace {
using index_t = std::int64_t;
}

void residual(std::span<const double> u, std::span<const double> a, double h, double lambda,
              std::span<double> r)
{
    const auto n = static_cast<index_t>(u.size());
    const double inv_h2 = 1.0 / (h * h);
#pragma omp parallel for schedule(static) if (u.size() >= kParallelThreshold)
    for (index_t i = 0; i < n; ++i) {
        const double left = i > 0 ? u[i - 1] : 0.0;
        const double right = i + 1 < n ? u[i + 1] : 0.0;
        r[i] = (-left + 2.0 * u[i] - right) * inv_h2 - lambda * u[i] - a[i] * u[i] * u[i];
    }
}

void jacobian_diagonal(std::span<const double> u, std::span<const double> a, double h,
                       double lambda, std::span<double> diag)
{
    const auto n = static_cast<index_t>(u.size());
    const double two_inv_h2 = 2.0 / (h * h);
#pragma omp parallel for schedule(static) if (u.size() >= kParallelThreshold)
    for (index_t i = 0; i < n; ++i) {
        diag[i] = two_inv_h2 - lambda - 2.0 * a[i] * u[i];
    }
}

void imex_rhs(std::span<const double> u, std::span<const double> a, double dt,
              std::span<double> rhs)
{
    const auto n = static_cast<index_t>(u.size());
#pragma omp parallel for schedule(static) if (u.size() >= kParallelThreshold)
    for (index_t i = 0; i < n; ++i) {
        rhs[i] = u[i] + dt * a[i] * u[i] * u[i];
    }
}

double max_abs(std::span<const double> v)
{
    const auto n = static_cast<index_t>(v.size());
    double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) if (v.size() >= kParallelThreshold)
    for (index_t i = 0; i < n; ++i) {
        m = std::max(m, std::abs(v[i]));
    }
    return m;
}

void sample(double (*f)(double, const void*), const void* ctx, std::span<const double> x,
            std::span<double> out)
{
    const auto n = static_cast<index_t>(x.size());
#pragma omp parallel for schedule(static) if (x.size() >= kParallelThreshold)
    for (index_t i = 0; i < n; ++i) {
        out[i] = f(x[i], ctx);
    }
}

} // namespace sibif::kernels::omp
