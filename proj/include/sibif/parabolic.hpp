#pragma once

#include "sibif/grid.hpp"
#include "sibif/nonlinear.hpp"
#include "sibif/weight.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace sibif {

struct ParabolicConfig {
    double dt = 1e-4;
    double steady_tol = 1e-9;   // on max|u_{k+1} - u_k| / dt
    double t_max = 100.0;
    double blowup_threshold = 1e12;
    double growth_limit = 10.0; // per-step max-norm growth that triggers dt halving
    double tol_pos = 1e-8;      // NonPositive threshold for sub-problem solutions
    int snapshot_every = 0;     // 0: no snapshots
    NewtonConfig newton;
    void validate() const;
};

struct EvolutionState {
    double t = 0.0;
    std::vector<double> u;
    double dt = 1e-4;
    double monotone_violation = 0.0; // max over steps and nodes of u_prev - u_new
};

/// Single-bump steady state of -u'' = lambda u + a^+ u^2 on one positive interval.
/// The sub-grid is the run of grid nodes strictly inside the interval, with
/// homogeneous Dirichlet values on the neighbouring nodes outside it.
struct SubBump {
    std::size_t first = 0;      // grid index of values[0]
    std::vector<double> values;
};

SubBump single_bump_steady(double lambda, std::size_t interval_index, const Weight& weight,
                           const Grid& grid, const ParabolicConfig& cfg = {});

struct SubsolutionSpec {
    BumpCode code;
    double lambda = 0.0;
    std::vector<SubBump> component_steadies; // one per digit 1, in interval order
};

SubsolutionSpec make_subsolution_spec(const BumpCode& code, double lambda, const Weight& weight,
                                      const Grid& grid, const ParabolicConfig& cfg = {});

/// The component steadies placed on their intervals, exact zeros elsewhere.
std::vector<double> build_subsolution(const SubsolutionSpec& spec, const Grid& grid);

/// One IMEX step: (I + dt(A - lambda I)) u_new = u + dt a u^2. Halves dt (and
/// retries) when max|u| grows by more than growth_limit in one step; throws
/// BlowUp past blowup_threshold.
EvolutionState step(const EvolutionState& state, double lambda, const Weight& weight,
                    const Grid& grid, const ParabolicConfig& cfg = {});

struct Snapshot {
    double t = 0.0;
    std::vector<double> u;
};

struct EvolutionResult {
    SolutionPoint point;
    double t_final = 0.0;
    double trajectory_max = 0.0;
    double monotone_violation = 0.0;
    std::vector<Snapshot> snapshots;
};

/// Steps until max|u_{k+1} - u_k| / dt < steady_tol, then polishes with Newton.
/// Throws BlowUp or Timeout (t > t_max).
EvolutionResult evolve_to_steady(std::span<const double> u0, double lambda, const Weight& weight,
                                 const Grid& grid, const ParabolicConfig& cfg = {});

/// Fixed-horizon evolution; returns the state at t_end. Throws BlowUp.
EvolutionState evolve_until(std::span<const double> u0, double lambda, double t_end,
                            const Weight& weight, const Grid& grid, const ParabolicConfig& cfg,
                            std::vector<Snapshot>* snapshots = nullptr);

/// max over consecutive snapshots and nodes of (u_earlier - u_later).
double check_monotone(std::span<const Snapshot> snapshots);

struct Region {
    double left;
    double right;
};

/// Negative intervals of the weight.
std::vector<Region> negative_regions(const Weight& weight);

struct DecayRow {
    double lambda = 0.0;
    std::optional<double> max_value; // empty: solver failure (Missing)
};

/// For each lambda, the max of source(lambda) over the nodes lying inside
/// [left + inset, right - inset] of some region. inset < 0 selects 2h.
std::vector<DecayRow>
decay_profile(std::span<const double> lambdas,
              const std::function<std::optional<std::vector<double>>(double)>& source,
              std::span<const Region> regions, const Grid& grid, double inset = -1.0);

bool strictly_decreasing(std::span<const DecayRow> rows);

} // namespace sibif
