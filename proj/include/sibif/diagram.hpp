#pragma once

#include "sibif/continuation.hpp"
#include "sibif/parabolic.hpp"
#include "sibif/spectral.hpp"
#include "sibif/weight.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sibif {

struct SeedSpec {
    BumpCode code;
    double lambda = 0.0;
};

/// Optional plot window; unset bounds follow the data.
struct SvgAxes {
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    std::optional<double> uprime_min;
    std::optional<double> uprime_max;
};

struct CampaignConfig {
    WeightDescriptor weight = SinWeight{1};
    std::size_t n_interior = 999;
    ContinuationConfig continuation;
    ParabolicConfig parabolic;
    std::vector<SeedSpec> seeds;
    std::vector<double> probes;
    std::string output_dir = "out";
    bool write_csv = true;
    bool write_svg = true;
    bool write_snapshots = false;
    SvgAxes axes;
    int max_branches = 64;
    void validate() const;
};

struct CensusEntry {
    SolutionPoint point;
    int branch_id = -1;
};

struct Census {
    double lambda = 0.0;
    std::vector<CensusEntry> entries; // sorted by decreasing u'(0)
};

struct EventRef {
    int branch_id = -1;
    int event_index = -1;
};

struct BifurcationDiagram {
    WeightDescriptor weight;
    std::size_t n_interior = 0;
    ContinuationConfig continuation;
    BifurcationDirection direction;
    std::vector<Branch> branches;     // branch id == index
    std::vector<EventRef> events;     // flattened, in branch order
    std::vector<Census> census;
    std::vector<std::string> failures;
    int components = 0;               // components of positive solutions
    std::vector<int> component_of;    // per branch, -1 for the trivial branch
};

/// Trivial branch, C+ from sigma_1, branch switching at every simple
/// bifurcation, seeded folds, census at the probes, component count.
BifurcationDiagram run_campaign(const CampaignConfig& cfg);

/// Distinct positive solutions at lambda reachable from the traced branches
/// (Newton at fixed lambda from the interpolated crossings).
Census build_census(const BifurcationDiagram& diagram, double lambda, const Weight& weight,
                    const Grid& grid);

/// Two census entries are the same solution when u'(0) and the max-norm
/// distance both agree to 1e-3 relative.
bool same_solution(const SolutionPoint& a, const SolutionPoint& b);

/// True when Newton at point.lambda, started from the branch interpolated at
/// that lambda, reproduces point (relative max-norm distance below rel_tol).
bool lies_on_branch(const SolutionPoint& point, const Branch& branch, const Weight& weight,
                    const Grid& grid, const NewtonConfig& newton, double rel_tol = 1e-2);

/// Union-find over switched-from links and shared points; fills
/// components / component_of.
void count_components(BifurcationDiagram& diagram, const Weight& weight, const Grid& grid);

/// Branch traced both ways from a converged point (backward half reversed and
/// prepended; tangents of that half flipped).
Branch trace_both_ways(const SolutionPoint& start, const Weight& weight, const Grid& grid,
                       const ContinuationConfig& cfg);

struct TypeTransition {
    std::string from; // e.g. "100(1)"
    std::string to;
    EventKind across = EventKind::Fold;
    double lambda = 0.0;
};

/// Type changes across the events of a branch, oriented from the lower to the
/// higher Morse index.
std::vector<TypeTransition> type_transitions(const Branch& branch);

std::string type_label(const SolutionPoint& p);

/// Code of the last unambiguously classified point of the branch. Points next
/// to a branch point still read as the parent's type, so this is the code a
/// switched branch is known by.
std::optional<BumpCode> settled_code(const Branch& branch);

/// Every nonzero code over the positive intervals of the weight, in binary
/// counting order (001, 010, 011, ...).
std::vector<BumpCode> nonzero_codes(const WeightDescriptor& weight);

} // namespace sibif
