#include "sibif/tridiag.hpp"

#include "sibif/error.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sibif {

void TridiagonalSym::multiply(std::span<const double> x, std::span<double> y) const
{
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) {
            s += off[i - 1] * x[i - 1];
        }
        if (i + 1 < n) {
            s += off[i] * x[i + 1];
        }
        y[i] = s;
    }
}

TridiagonalSym TridiagonalSym::scaled(double factor) const
{
    TridiagonalSym t = *this;
    for (auto& v : t.diag) {
        v *= factor;
    }
    for (auto& v : t.off) {
        v *= factor;
    }
    return t;
}

std::vector<double> thomas_solve(const TridiagonalSym& t, std::span<const double> rhs,
                                 double pivot_tol)
{
    const std::size_t n = t.size();
    if (rhs.size() != n) {
        throw std::invalid_argument("thomas_solve: dimension mismatch");
    }
    std::vector<double> c(n, 0.0);
    std::vector<double> x(rhs.begin(), rhs.end());
    double pivot = t.diag[0];
    if (std::abs(pivot) < pivot_tol) {
        throw SingularJacobian("thomas_solve: zero pivot at row 0");
    }
    x[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        c[i - 1] = t.off[i - 1] / pivot;
        pivot = t.diag[i] - t.off[i - 1] * c[i - 1];
        if (std::abs(pivot) < pivot_tol) {
            throw SingularJacobian("thomas_solve: zero pivot at row " + std::to_string(i));
        }
        x[i] = (x[i] - t.off[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= c[i] * x[i + 1];
    }
    return x;
}

std::vector<double> pivoted_solve(const TridiagonalSym& t, std::span<const double> rhs)
{
    const std::size_t n = t.size();
    if (rhs.size() != n) {
        throw std::invalid_argument("pivoted_solve: dimension mismatch");
    }
    // Row i of U holds d[i] (col i), u1[i] (col i+1), u2[i] (col i+2).
    std::vector<double> d(t.diag);
    std::vector<double> u1(n, 0.0);
    std::vector<double> u2(n, 0.0);
    std::vector<double> x(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i + 1 < n; ++i) {
        u1[i] = t.off[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double low = t.off[i]; // entry (i+1, i)
        if (std::abs(low) > std::abs(d[i])) {
            // swap rows i and i+1; row i+1 currently holds (low, d[i+1], u1[i+1]).
            const double r_d = low;
            const double r_u1 = d[i + 1];
            const double r_u2 = u1[i + 1];
            const double r_x = x[i + 1];
            low = d[i];
            d[i + 1] = u1[i];
            u1[i + 1] = u2[i];
            x[i + 1] = x[i];
            d[i] = r_d;
            u1[i] = r_u1;
            u2[i] = r_u2;
            x[i] = r_x;
        }
        if (d[i] == 0.0) {
            throw SingularJacobian("pivoted_solve: zero pivot at row " + std::to_string(i));
        }
        const double m = low / d[i];
        d[i + 1] -= m * u1[i];
        u1[i + 1] -= m * u2[i];
        x[i + 1] -= m * x[i];
    }
    if (d[n - 1] == 0.0) {
        throw SingularJacobian("pivoted_solve: singular matrix");
    }
    x[n - 1] /= d[n - 1];
    if (n >= 2) {
        x[n - 2] = (x[n - 2] - u1[n - 2] * x[n - 1]) / d[n - 2];
    }
    for (std::size_t i = n - 2; i-- > 0;) {
        x[i] = (x[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / d[i];
    }
    return x;
}

BorderedSolution bordered_solve(const TridiagonalSym& t, std::span<const double> b,
                                std::span<const double> c, double dd, std::span<const double> f,
                                double g)
{
    const std::size_t n = t.size();
    if (b.size() != n || c.size() != n || f.size() != n) {
        throw std::invalid_argument("bordered_solve: dimension mismatch");
    }
    std::vector<double> d(t.diag);
    std::vector<double> u1(n, 0.0);
    std::vector<double> u2(n, 0.0);
    std::vector<double> bc(b.begin(), b.end()); // last column, row-permuted
    std::vector<double> x(f.begin(), f.end());
    std::vector<double> row(c.begin(), c.end()); // border row being reduced
    for (std::size_t i = 0; i + 1 < n; ++i) {
        u1[i] = t.off[i];
    }
    double corner = dd;
    double rhs_g = g;

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        scale = std::max({scale, std::abs(t.diag[i]), std::abs(b[i]), std::abs(c[i])});
    }
    scale = std::max(scale, std::abs(dd));

    for (std::size_t i = 0; i + 1 < n; ++i) {
        double low = t.off[i];
        if (std::abs(low) > std::abs(d[i])) {
            const double r_d = low;
            const double r_u1 = d[i + 1];
            const double r_u2 = u1[i + 1];
            const double r_b = bc[i + 1];
            const double r_x = x[i + 1];
            low = d[i];
            d[i + 1] = u1[i];
            u1[i + 1] = u2[i];
            bc[i + 1] = bc[i];
            x[i + 1] = x[i];
            d[i] = r_d;
            u1[i] = r_u1;
            u2[i] = r_u2;
            bc[i] = r_b;
            x[i] = r_x;
        }
        if (d[i] == 0.0) {
            throw SingularBordered("bordered_solve: zero pivot at row " + std::to_string(i));
        }
        const double m = low / d[i];
        d[i + 1] -= m * u1[i];
        u1[i + 1] -= m * u2[i];
        bc[i + 1] -= m * bc[i];
        x[i + 1] -= m * x[i];

        const double mr = row[i] / d[i];
        if (mr != 0.0) {
            row[i + 1] -= mr * u1[i];
            if (i + 2 < n) {
                row[i + 2] -= mr * u2[i];
            }
            corner -= mr * bc[i];
            rhs_g -= mr * x[i];
        }
    }

    // Remaining 2x2 block in (x_{n-1}, y).
    std::array<std::array<double, 2>, 2> m{{{d[n - 1], bc[n - 1]}, {row[n - 1], corner}}};
    std::array<double, 2> r{x[n - 1], rhs_g};
    if (std::abs(m[1][0]) > std::abs(m[0][0])) {
        std::swap(m[0], m[1]);
        std::swap(r[0], r[1]);
    }
    if (m[0][0] == 0.0) {
        throw SingularBordered("bordered_solve: singular final block");
    }
    const double l = m[1][0] / m[0][0];
    const double piv = m[1][1] - l * m[0][1];
    if (std::abs(piv) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
        throw SingularBordered("bordered_solve: bordered matrix is numerically singular");
    }
    BorderedSolution sol;
    sol.y = (r[1] - l * r[0]) / piv;
    x[n - 1] = (r[0] - m[0][1] * sol.y) / m[0][0];
    if (n >= 2) {
        x[n - 2] = (x[n - 2] - u1[n - 2] * x[n - 1] - bc[n - 2] * sol.y) / d[n - 2];
    }
    for (std::size_t i = n - 2; i-- > 0;) {
        x[i] = (x[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2] - bc[i] * sol.y) / d[i];
    }
    sol.x = std::move(x);
    return sol;
}

int sturm_count(const TridiagonalSym& t, double shift)
{
    const std::size_t n = t.size();
    const double tiny = std::numeric_limits<double>::min() * 1e4;
    int count = 0;
    double q = t.diag[0] - shift;
    if (q == 0.0) {
        q = -tiny;
    }
    if (q < 0.0) {
        ++count;
    }
    for (std::size_t i = 1; i < n; ++i) {
        q = t.diag[i] - shift - t.off[i - 1] * t.off[i - 1] / q;
        if (q == 0.0) {
            q = -tiny;
        }
        if (q < 0.0) {
            ++count;
        }
    }
    return count;
}

double sturm_eigenvalue(const TridiagonalSym& t, int k, double tol)
{
    const std::size_t n = t.size();
    if (k < 0 || static_cast<std::size_t>(k) >= n) {
        throw std::invalid_argument("sturm_eigenvalue: index out of range");
    }
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0) {
            radius += std::abs(t.off[i - 1]);
        }
        if (i + 1 < n) {
            radius += std::abs(t.off[i]);
        }
        lo = std::min(lo, t.diag[i] - radius);
        hi = std::max(hi, t.diag[i] + radius);
    }
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (sturm_count(t, mid) > k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace sibif
