#pragma once

#include "sibif/grid.hpp"
#include "sibif/nonlinear.hpp"
#include "sibif/parabolic.hpp"
#include "sibif/weight.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sibif {

/// Unit extended tangent in the metric u_scale*|du|^2 + dlambda^2.
struct Tangent {
    std::vector<double> du;
    double dlambda = 0.0;
};

struct ContinuationConfig {
    double ds_init = 0.1;
    double ds_min = 1e-6;
    double ds_max = 2.0;
    double lambda_min = -100.0;
    double lambda_max = 20.0;
    int max_steps = 2000;
    double u_scale = 0.0;          // <= 0: 1/n_interior
    int corrector_max_iter = 15;
    double max_turn_cos = 0.9;     // reject steps whose tangents turn more than this
    double event_lambda_tol = 1e-4;
    int snapshot_every = 10;       // K: full u kept every K points
    NewtonConfig newton;
    void validate() const;
    double metric_weight(const Grid& grid) const;
};

enum class EventKind { Fold, SimpleBifurcation };

struct BranchPointEvent {
    EventKind kind = EventKind::Fold;
    SolutionPoint location;
    Tangent tangent;               // parent tangent at the located point
    std::size_t step_index = 0;    // event lies between points step_index and step_index+1
    int morse_before = 0;
    int morse_after = 0;
};

enum class ProvenanceKind { Trivial, FromZero, Seeded, Switched };

struct Provenance {
    ProvenanceKind kind = ProvenanceKind::Seeded;
    double sigma = 0.0;                 // FromZero
    std::string code;                   // Seeded
    double seed_lambda = 0.0;           // Seeded
    int parent_branch = -1;             // Switched
    int parent_event = -1;              // Switched
    int direction = 0;                  // Switched: +1 / -1 along the kernel
};

enum class StopReason { LambdaWindow, MaxSteps, ClosedLoop, LeftPositiveCone, ReachedZero, Stalled };

struct Branch {
    int id = -1;
    std::vector<SolutionPoint> points;
    std::vector<Tangent> tangents;
    std::vector<BranchPointEvent> events;
    Provenance provenance;
    StopReason stop = StopReason::MaxSteps;
    std::string failure;                 // diagnostic for Stalled
};

std::string to_string(EventKind k);
std::string to_string(StopReason r);
std::string to_string(const Provenance& p);

double metric_dot(const Tangent& a, const Tangent& b, double u_scale);

/// Solves [h^2 J, -h^2 u; u_scale*prev_u^T, prev_l] (du, dl) = (0, 1) and
/// normalizes; orientation keeps the metric product with prev positive.
/// Throws SingularBordered.
Tangent extended_tangent(const SolutionPoint& point, const Tangent& prev, const Weight& weight,
                         const Grid& grid, const ContinuationConfig& cfg);

/// Corrector for {F = 0, <(u,l) - predictor, normal> = 0}, started from the
/// predictor. Throws StepFailed.
SolutionPoint plane_corrector(const std::vector<double>& u_pred, double lambda_pred,
                              const Tangent& normal, const Weight& weight, const Grid& grid,
                              const ContinuationConfig& cfg);

/// Predictor point + ds*tangent, then plane_corrector. Throws StepFailed.
SolutionPoint arclength_step(const SolutionPoint& point, const Tangent& tangent, double ds,
                             const Weight& weight, const Grid& grid, const ContinuationConfig& cfg);

/// Morse index and bump-code annotation of a converged point.
void annotate(SolutionPoint& point, const Weight& weight, const Grid& grid);

/// Events between consecutive points a -> b (b reached by a step of size ds
/// from a along ta). Both points must carry morse_index. Throws AmbiguousEvent.
std::vector<BranchPointEvent> detect_events(const SolutionPoint& a, const Tangent& ta,
                                            const SolutionPoint& b, const Tangent& tb, double ds,
                                            std::size_t step_index, const Weight& weight,
                                            const Grid& grid, const ContinuationConfig& cfg);

/// Follows the branch through start. The first tangent is the extended tangent
/// oriented along guess (default (0, +1) scaled by direction).
Branch trace_branch(const SolutionPoint& start, int direction, const Weight& weight,
                    const Grid& grid, const ContinuationConfig& cfg,
                    const std::optional<Tangent>& guess = std::nullopt);

struct SwitchResult {
    std::vector<SolutionPoint> points;  // converged points on the bifurcating branch
    std::vector<Tangent> directions;    // initial tangents pointing away from the event
    std::vector<int> signs;             // +1 / -1 along the kernel
};

/// Kernel vector of J at the point by inverse iteration (unit max-norm).
std::vector<double> kernel_vector(const SolutionPoint& point, const Weight& weight,
                                  const Grid& grid);

/// Two points on the branch crossing the parent at a SimpleBifurcation. The
/// kernel direction is made orthogonal to the parent tangent and each seed
/// X* +- delta psi is corrected on the plane through it normal to psi. A side
/// whose corrector lands back on the parent is retried with 10*delta; if it
/// still fails, SwitchFailed is thrown.
SwitchResult branch_switch(const BranchPointEvent& event, const Weight& weight, const Grid& grid,
                           const ContinuationConfig& cfg);

/// Initial iterate for a multi-bump solution: single-bump sub-problem solutions
/// on the positive intervals selected by the code, zero elsewhere.
std::vector<double> seed_multibump(const BumpCode& code, double lambda, const Weight& weight,
                                   const Grid& grid, const ParabolicConfig& cfg = {});

} // namespace sibif
