#include "sibif/parabolic.hpp"

#include "sibif/error.hpp"
#include "sibif/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sibif {

void ParabolicConfig::validate() const
{
    if (!(dt > 0.0) || !(steady_tol > 0.0) || !(t_max > 0.0) || !(blowup_threshold > 0.0) ||
        !(growth_limit > 1.0) || snapshot_every < 0) {
        throw std::invalid_argument("invalid ParabolicConfig");
    }
    newton.validate();
}

namespace {

std::vector<double> solve_sub(double lambda, double amplitude, double length,
                              std::span<const double> a, double h, const NewtonConfig& cfg)
{
    std::vector<double> seed(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        seed[k] = amplitude * std::sin(std::numbers::pi * (k + 1) * h / length);
    }
    return newton_solve_raw(lambda, seed, a, h, cfg);
}

} // namespace

SubBump single_bump_steady(double lambda, std::size_t interval_index, const Weight& weight,
                           const Grid& grid, const ParabolicConfig& cfg)
{
    const auto positive = weight.positive_intervals();
    if (interval_index >= positive.size()) {
        throw std::invalid_argument("single_bump_steady: interval index out of range");
    }
    const auto iv = positive[interval_index];
    SubBump out;
    std::size_t last = 0;
    bool any = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid.nodes[i] > iv.left && grid.nodes[i] < iv.right) {
            if (!any) {
                out.first = i;
                any = true;
            }
            last = i;
        }
    }
    if (!any || last - out.first < 2) {
        throw std::invalid_argument("single_bump_steady: interval not resolved by the grid");
    }
    const std::size_t m = last - out.first + 1;
    std::vector<double> a(weight.values.begin() + static_cast<std::ptrdiff_t>(out.first),
                          weight.values.begin() + static_cast<std::ptrdiff_t>(last + 1));
    double amax = 0.0;
    for (auto& v : a) {
        v = std::max(v, 0.0);
        amax = std::max(amax, v);
    }
    const double length = static_cast<double>(m + 1) * grid.h;
    const double sigma = std::pow(std::numbers::pi / length, 2);
    if (lambda >= sigma) {
        throw NoConvergence("single_bump_steady: lambda above the sub-problem principal eigenvalue");
    }

    auto accept = [&](const std::vector<double>& u) {
        double umax = 0.0;
        double umin = 0.0;
        for (double v : u) {
            umax = std::max(umax, v);
            umin = std::min(umin, v);
        }
        return umax > 1e-8 && umin >= -cfg.tol_pos * std::max(1.0, umax);
    };

    // Seeds in order: the -lambda/max(a+) amplitude suggested by the rescaling
    // u = -lambda U, then one based on the distance to the principal eigenvalue.
    std::vector<double> amplitudes;
    if (lambda < 0.0) {
        amplitudes.push_back(-lambda / amax);
    }
    amplitudes.push_back(1.5 * (sigma - lambda) / amax);
    for (double amp : amplitudes) {
        try {
            auto u = solve_sub(lambda, amp, length, a, grid.h, cfg.newton);
            if (accept(u)) {
                out.values = std::move(u);
                return out;
            }
        } catch (const Error&) {
        }
    }

    // March down from just below the principal eigenvalue of the sub-problem.
    double lam = sigma - 0.01 * std::max(1.0, sigma);
    auto u = solve_sub(lam, 1.5 * (sigma - lam) / amax, length, a, grid.h, cfg.newton);
    double dl = std::max(0.05 * std::abs(sigma - lambda), 1e-3);
    while (lam > lambda) {
        const double next = std::max(lambda, lam - dl);
        try {
            auto v = newton_solve_raw(next, u, a, grid.h, cfg.newton);
            if (!accept(v)) {
                throw NoConvergence("single_bump_steady: march left the positive cone");
            }
            u = std::move(v);
            lam = next;
            dl *= 1.5;
        } catch (const Error&) {
            dl *= 0.25;
            if (dl < 1e-6) {
                throw NoConvergence("single_bump_steady: lambda march stalled at " +
                                    std::to_string(lam));
            }
        }
    }
    double umin = 0.0;
    double umax = 0.0;
    for (double v : u) {
        umin = std::min(umin, v);
        umax = std::max(umax, v);
    }
    if (umin < -cfg.tol_pos * std::max(1.0, umax)) {
        throw NonPositive("single_bump_steady: solution dips below zero");
    }
    out.values = std::move(u);
    return out;
}

SubsolutionSpec make_subsolution_spec(const BumpCode& code, double lambda, const Weight& weight,
                                      const Grid& grid, const ParabolicConfig& cfg)
{
    const auto positive = weight.positive_intervals();
    if (code.digits.size() != positive.size()) {
        throw std::invalid_argument("bump code length " + std::to_string(code.digits.size()) +
                                    " does not match " + std::to_string(positive.size()) +
                                    " positive intervals");
    }
    SubsolutionSpec spec;
    spec.code = code;
    spec.lambda = lambda;
    for (std::size_t i = 0; i < code.digits.size(); ++i) {
        if (code.digits[i] == '1') {
            spec.component_steadies.push_back(single_bump_steady(lambda, i, weight, grid, cfg));
        } else if (code.digits[i] != '0') {
            throw std::invalid_argument("bump code digits must be 0 or 1");
        }
    }
    return spec;
}

std::vector<double> build_subsolution(const SubsolutionSpec& spec, const Grid& grid)
{
    std::vector<double> u(grid.size(), 0.0);
    for (const auto& bump : spec.component_steadies) {
        std::copy(bump.values.begin(), bump.values.end(),
                  u.begin() + static_cast<std::ptrdiff_t>(bump.first));
    }
    return u;
}

EvolutionState step(const EvolutionState& state, double lambda, const Weight& weight,
                    const Grid& grid, const ParabolicConfig& cfg)
{
    const std::size_t n = grid.size();
    if (state.u.size() != n) {
        throw std::invalid_argument("step: state size does not match the grid");
    }
    const double before = kernels::max_abs(state.u);
    double dt = state.dt;
    std::vector<double> rhs(n);
    while (true) {
        TridiagonalSym m;
        m.diag.assign(n, 1.0 + dt * (2.0 / (grid.h * grid.h) - lambda));
        m.off.assign(n - 1, -dt / (grid.h * grid.h));
        kernels::imex_rhs(state.u, weight.values, dt, rhs);
        auto u_new = thomas_solve(m, rhs, 1e-14);
        const double after = kernels::max_abs(u_new);
        if (!std::isfinite(after) || after > cfg.blowup_threshold) {
            throw BlowUp("step: max|u| exceeded " + std::to_string(cfg.blowup_threshold) +
                             " at t = " + std::to_string(state.t),
                         state.t + dt);
        }
        if (before > 0.0 && after > cfg.growth_limit * before && dt > 1e-12) {
            dt *= 0.5;
            continue;
        }
        EvolutionState next;
        next.t = state.t + dt;
        next.dt = dt;
        double viol = state.monotone_violation;
        for (std::size_t i = 0; i < n; ++i) {
            viol = std::max(viol, state.u[i] - u_new[i]);
        }
        next.monotone_violation = viol;
        next.u = std::move(u_new);
        return next;
    }
}

EvolutionResult evolve_to_steady(std::span<const double> u0, double lambda, const Weight& weight,
                                 const Grid& grid, const ParabolicConfig& cfg)
{
    cfg.validate();
    EvolutionResult res;
    EvolutionState s;
    s.u.assign(u0.begin(), u0.end());
    s.dt = cfg.dt;
    res.trajectory_max = kernels::max_abs(s.u);
    if (res.trajectory_max == 0.0) {
        res.point = make_point(lambda, s.u, weight, grid);
        return res;
    }
    if (cfg.snapshot_every > 0) {
        res.snapshots.push_back({0.0, s.u});
    }
    long k = 0;
    while (true) {
        auto next = step(s, lambda, weight, grid, cfg);
        ++k;
        double change = 0.0;
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            change = std::max(change, std::abs(next.u[i] - s.u[i]));
        }
        const double rate = change / next.dt;
        s = std::move(next);
        res.trajectory_max = std::max(res.trajectory_max, kernels::max_abs(s.u));
        if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0) {
            res.snapshots.push_back({s.t, s.u});
        }
        if (rate < cfg.steady_tol) {
            break;
        }
        if (s.t > cfg.t_max) {
            throw Timeout("evolve_to_steady: no steady state by t = " + std::to_string(cfg.t_max));
        }
    }
    if (cfg.snapshot_every > 0 && res.snapshots.back().t != s.t) {
        res.snapshots.push_back({s.t, s.u});
    }
    res.t_final = s.t;
    res.monotone_violation = s.monotone_violation;
    res.point = newton_solve(lambda, s.u, weight, grid, cfg.newton);
    return res;
}

EvolutionState evolve_until(std::span<const double> u0, double lambda, double t_end,
                            const Weight& weight, const Grid& grid, const ParabolicConfig& cfg,
                            std::vector<Snapshot>* snapshots)
{
    cfg.validate();
    EvolutionState s;
    s.u.assign(u0.begin(), u0.end());
    s.dt = cfg.dt;
    if (snapshots) {
        snapshots->push_back({0.0, s.u});
    }
    long k = 0;
    while (s.t < t_end - 1e-14) {
        const double nominal = s.dt;
        const double clipped = std::min(nominal, t_end - s.t);
        s.dt = clipped;
        s = step(s, lambda, weight, grid, cfg);
        if (s.dt == clipped) {
            s.dt = nominal;
        }
        ++k;
        if (snapshots && cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0) {
            snapshots->push_back({s.t, s.u});
        }
    }
    if (snapshots && snapshots->back().t != s.t) {
        snapshots->push_back({s.t, s.u});
    }
    return s;
}

double check_monotone(std::span<const Snapshot> snapshots)
{
    double viol = 0.0;
    for (std::size_t k = 1; k < snapshots.size(); ++k) {
        const auto& a = snapshots[k - 1].u;
        const auto& b = snapshots[k].u;
        for (std::size_t i = 0; i < a.size(); ++i) {
            viol = std::max(viol, a[i] - b[i]);
        }
    }
    return viol;
}

std::vector<Region> negative_regions(const Weight& weight)
{
    std::vector<Region> out;
    for (const auto& iv : weight.negative_intervals()) {
        out.push_back({iv.left, iv.right});
    }
    return out;
}

std::vector<DecayRow>
decay_profile(std::span<const double> lambdas,
              const std::function<std::optional<std::vector<double>>(double)>& source,
              std::span<const Region> regions, const Grid& grid, double inset)
{
    if (inset < 0.0) {
        inset = 2.0 * grid.h;
    }
    std::vector<DecayRow> rows;
    for (double lambda : lambdas) {
        DecayRow row;
        row.lambda = lambda;
        std::optional<std::vector<double>> u;
        try {
            u = source(lambda);
        } catch (const Error&) {
            u.reset();
        }
        if (u) {
            double m = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double x = grid.nodes[i];
                for (const auto& r : regions) {
                    if (x >= r.left + inset && x <= r.right - inset) {
                        m = std::max(m, (*u)[i]);
                    }
                }
            }
            row.max_value = m;
        }
        rows.push_back(row);
    }
    return rows;
}

bool strictly_decreasing(std::span<const DecayRow> rows)
{
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (!rows[k].max_value || !rows[k - 1].max_value ||
            !(*rows[k].max_value < *rows[k - 1].max_value)) {
            return false;
        }
    }
    return !rows.empty();
}

} // namespace sibif
