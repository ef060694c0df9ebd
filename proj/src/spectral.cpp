#include "sibif/spectral.hpp"

#include "sibif/error.hpp"
#include "sibif/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sibif {

using std::numbers::pi;

MorseResult morse_index(const SolutionPoint& point, const Weight& weight, const Grid& grid)
{
    // h^2-scaled Jacobian: same inertia, better conditioned bisection.
    const auto jac = jacobian(point.lambda, point.u, weight, grid).scaled(grid.h * grid.h);
    MorseResult res;
    res.index = sturm_count(jac, 0.0);
    const double tol = 1e-12;
    const int n = static_cast<int>(jac.size());
    double closest = std::numeric_limits<double>::infinity();
    if (res.index < n) {
        closest = std::min(closest, std::abs(sturm_eigenvalue(jac, res.index, tol)));
    }
    if (res.index > 0) {
        closest = std::min(closest, std::abs(sturm_eigenvalue(jac, res.index - 1, tol)));
    }
    res.min_abs_eigenvalue = closest / (grid.h * grid.h);
    res.near_degenerate = closest < 1e-8 * 2.0;
    return res;
}

int morse_count(double lambda, std::span<const double> u, const Weight& weight,
                const Grid& grid)
{
    return sturm_count(jacobian(lambda, u, weight, grid), 0.0);
}

namespace {

// u at x by linear interpolation, with the Dirichlet zeros at 0 and 1.
double interpolate(std::span<const double> u, const Grid& grid, double x)
{
    const double pos = x / grid.h; // node i sits at pos = i + 1
    const auto n = static_cast<long>(u.size());
    const long k = static_cast<long>(std::floor(pos));
    auto at = [&](long j) { return j <= 0 || j > n ? 0.0 : u[static_cast<std::size_t>(j - 1)]; };
    const double t = pos - static_cast<double>(k);
    return (1.0 - t) * at(k) + t * at(k + 1);
}

} // namespace

BumpClassification classify(std::span<const double> u, const Weight& weight, const Grid& grid,
                            double threshold_fraction, TypeRule rule)
{
    const auto positive = weight.positive_intervals();
    BumpClassification out;
    out.code.digits.assign(positive.size(), '0');
    out.interval_height.assign(positive.size(), 0.0);
    double global = 0.0;
    for (double v : u) {
        global = std::max(global, v);
    }
    for (std::size_t k = 0; k < positive.size(); ++k) {
        double m = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = grid.nodes[i];
            if (x > positive[k].left && x < positive[k].right) {
                m = std::max(m, u[i]);
            }
        }
        if (rule == TypeRule::Prominence) {
            const double ends = std::max(interpolate(u, grid, positive[k].left),
                                         interpolate(u, grid, positive[k].right));
            m = std::max(0.0, m - ends);
        }
        out.interval_height[k] = m;
    }
    if (global <= 0.0) {
        return out;
    }
    const double threshold = threshold_fraction * global;
    for (std::size_t k = 0; k < positive.size(); ++k) {
        const double m = out.interval_height[k];
        out.code.digits[k] = m > threshold ? '1' : '0';
        if (std::abs(m - threshold) <= 0.2 * threshold) {
            out.ambiguous = true;
        }
    }
    return out;
}

BumpCode classify_type(const SolutionPoint& point, const Weight& weight, const Grid& grid,
                       double threshold_fraction, TypeRule rule)
{
    auto c = classify(point.u, weight, grid, threshold_fraction, rule);
    if (c.ambiguous) {
        throw AmbiguousType("bump type ambiguous at lambda = " + std::to_string(point.lambda) +
                            " (tentative " + c.code.digits + ")");
    }
    return c.code;
}

double simpson(std::span<const double> f, double dx)
{
    const std::size_t m = f.size();
    if (m < 3 || m % 2 == 0) {
        throw std::invalid_argument("simpson: need an odd number (>= 3) of samples");
    }
    double s = f[0] + f[m - 1];
    for (std::size_t i = 1; i + 1 < m; ++i) {
        s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    }
    return s * dx / 3.0;
}

namespace {

// Uniform mesh of [0,1] whose panel count is even on every sign interval, so
// that kinks of the weight at the interval end points fall on mesh nodes.
int aligned_panels(const WeightDescriptor& weight, int min_panels)
{
    const int pieces = static_cast<int>(sign_intervals(weight).size());
    const int unit = 2 * pieces;
    return ((std::max(min_panels, unit) + unit - 1) / unit) * unit;
}

std::vector<double> mesh(int panels)
{
    std::vector<double> x(static_cast<std::size_t>(panels) + 1);
    for (int i = 0; i <= panels; ++i) {
        x[static_cast<std::size_t>(i)] = static_cast<double>(i) / panels;
    }
    return x;
}

// Cumulative integral F(x_i) = int_0^{x_i} f on a uniform mesh: Simpson at even
// nodes, a three-point half-panel rule at odd ones.
std::vector<double> cumulative(std::span<const double> f, double dx)
{
    const std::size_t m = f.size();
    std::vector<double> out(m, 0.0);
    for (std::size_t i = 0; i + 2 < m; i += 2) {
        out[i + 1] = out[i] + dx * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]) / 12.0;
        out[i + 2] = out[i] + dx * (f[i] + 4.0 * f[i + 1] + f[i + 2]) / 3.0;
    }
    return out;
}

} // namespace

double bifurcation_direction_d1(const WeightDescriptor& weight, int min_panels)
{
    const int panels = aligned_panels(weight, min_panels);
    const auto x = mesh(panels);
    std::vector<double> f(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = std::sin(pi * x[i]);
        f[i] = evaluate_weight(weight, x[i]) * s * s * s;
    }
    return -2.0 * simpson(f, 1.0 / panels);
}

W1Samples compute_w1(const WeightDescriptor& weight, int min_panels)
{
    const double d1 = bifurcation_direction_d1(weight, min_panels);
    if (std::abs(d1) > kD1ZeroTol) {
        throw std::invalid_argument("compute_w1: D1 = " + std::to_string(d1) +
                                    " is not zero; w1 is only defined when D1 = 0");
    }
    const int panels = aligned_panels(weight, min_panels);
    const double dx = 1.0 / panels;
    W1Samples out;
    out.x = mesh(panels);
    const std::size_t m = out.x.size();
    std::vector<double> fa(m);
    std::vector<double> fb(m);
    std::vector<double> s(m);
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i) {
        s[i] = std::sin(pi * out.x[i]);
        c[i] = std::cos(pi * out.x[i]);
        const double a = evaluate_weight(weight, out.x[i]);
        fa[i] = a * s[i] * s[i] * s[i];
        fb[i] = a * s[i] * s[i] * c[i];
    }
    const auto big_a = cumulative(fa, dx);
    const auto big_b = cumulative(fb, dx);
    // particular part: (1/pi) int_0^x a sin^2(pi s) [sin(pi s)cos(pi x) - cos(pi s)sin(pi x)] ds
    std::vector<double> particular(m);
    for (std::size_t i = 0; i < m; ++i) {
        particular[i] = (c[i] * big_a[i] - s[i] * big_b[i]) / pi;
    }
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) {
        g[i] = s[i] * particular[i];
    }
    out.c2 = -2.0 * simpson(g, dx);
    out.w.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        out.w[i] = out.c2 * s[i] + particular[i];
    }
    return out;
}

double bifurcation_direction_d2(const WeightDescriptor& weight, int min_panels)
{
    const auto w1 = compute_w1(weight, min_panels);
    const double dx = 1.0 / static_cast<double>(w1.x.size() - 1);
    std::vector<double> f(w1.x.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double s = std::sin(pi * w1.x[i]);
        f[i] = evaluate_weight(weight, w1.x[i]) * w1.w[i] * s * s;
    }
    return -2.0 * simpson(f, dx);
}

BifurcationDirection bifurcation_direction(const WeightDescriptor& weight, int min_panels)
{
    BifurcationDirection out;
    out.d1 = bifurcation_direction_d1(weight, min_panels);
    if (std::abs(out.d1) <= kD1ZeroTol) {
        out.d2 = bifurcation_direction_d2(weight, min_panels);
    }
    return out;
}

} // namespace sibif
