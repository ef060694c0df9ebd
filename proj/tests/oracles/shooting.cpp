#include "shooting.hpp"

#include <array>
#include <cmath>

namespace oracle {

namespace {

using State = std::array<double, 4>; // u, u', du/ds, du'/ds

State rhs(const sibif::WeightDescriptor& w, double lambda, double x, const State& y)
{
    const double a = sibif::evaluate_weight(w, x);
    return {y[1], -lambda * y[0] - a * y[0] * y[0], y[3], -(lambda + 2.0 * a * y[0]) * y[2]};
}

State axpy(const State& y, double s, const State& k)
{
    State out;
    for (int i = 0; i < 4; ++i) {
        out[i] = y[i] + s * k[i];
    }
    return out;
}

// Integrates over [0,1]; samples u at the cell boundaries.
State integrate(const sibif::WeightDescriptor& w, double lambda, double slope, int cells,
                int substeps, std::vector<double>* samples)
{
    State y{0.0, slope, 0.0, 1.0};
    const int steps = cells * substeps;
    const double dx = 1.0 / steps;
    if (samples) {
        samples->clear();
    }
    for (int k = 0; k < steps; ++k) {
        const double x = k * dx;
        const State k1 = rhs(w, lambda, x, y);
        const State k2 = rhs(w, lambda, x + 0.5 * dx, axpy(y, 0.5 * dx, k1));
        const State k3 = rhs(w, lambda, x + 0.5 * dx, axpy(y, 0.5 * dx, k2));
        const State k4 = rhs(w, lambda, x + dx, axpy(y, dx, k3));
        for (int i = 0; i < 4; ++i) {
            y[i] += dx / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (samples && (k + 1) % substeps == 0 && k + 1 < steps) {
            samples->push_back(y[0]);
        }
        if (!std::isfinite(y[0]) || std::abs(y[0]) > 1e12) {
            break;
        }
    }
    return y;
}

} // namespace

ShootingResult shoot(const sibif::WeightDescriptor& w, double lambda, double slope_guess,
                     int n_interior, int substeps)
{
    ShootingResult res;
    double s = slope_guess;
    const int cells = n_interior + 1;
    for (int it = 0; it < 50; ++it) {
        const State y = integrate(w, lambda, s, cells, substeps, nullptr);
        if (!std::isfinite(y[0]) || !std::isfinite(y[2]) || y[2] == 0.0) {
            return res;
        }
        const double ds = -y[0] / y[2];
        s += ds;
        if (std::abs(ds) <= 1e-14 * std::max(1.0, std::abs(s))) {
            res.converged = true;
            break;
        }
    }
    res.slope = s;
    const State y = integrate(w, lambda, s, cells, substeps, &res.u);
    res.endpoint_miss = std::abs(y[0]);
    return res;
}

} // namespace oracle
