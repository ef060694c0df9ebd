#include "sibif/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace sibif::kernels::serial {

void residual(std::span<const double> u, std::span<const double> a, double h, double lambda,
              std::span<double> r)
{
    const std::size_t n = u.size();
    assert(a.size() == n && r.size() == n);
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? u[i - 1] : 0.0;
        const double right = i + 1 < n ? u[i + 1] : 0.0;
        r[i] = (-left + 2.0 * u[i] - right) * inv_h2 - lambda * u[i] - a[i] * u[i] * u[i];
    }
}

void jacobian_diagonal(std::span<const double> u, std::span<const double> a, double h,
                       double lambda, std::span<double> diag)
{
    const std::size_t n = u.size();
    const double two_inv_h2 = 2.0 / (h * h);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = two_inv_h2 - lambda - 2.0 * a[i] * u[i];
    }
}

void imex_rhs(std::span<const double> u, std::span<const double> a, double dt,
              std::span<double> rhs)
{
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = u[i] + dt * a[i] * u[i] * u[i];
    }
}

double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

void sample(double (*f)(double, const void*), const void* ctx, std::span<const double> x,
            std::span<double> out)
{
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = f(x[i], ctx);
    }
}

} // namespace sibif::kernels::serial
