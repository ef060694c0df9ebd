#pragma once

#include "sibif/grid.hpp"
#include "sibif/nonlinear.hpp"
#include "sibif/weight.hpp"

#include <optional>
#include <span>
#include <vector>

namespace sibif {

struct MorseResult {
    int index = 0;
    bool near_degenerate = false;  // smallest |tau| below 1e-8 * (2/h^2)
    double min_abs_eigenvalue = 0.0;
};

/// Number of negative eigenvalues tau of the linearization
/// -v'' - lambda v - 2 a u v = tau v, from the Sturm count at shift 0.
MorseResult morse_index(const SolutionPoint& point, const Weight& weight, const Grid& grid);

/// Index only, without locating the eigenvalue closest to zero.
int morse_count(double lambda, std::span<const double> u, const Weight& weight,
                const Grid& grid);

/// How the height of a bump on I_i^+ is measured.
///  Prominence: max of u over I_i^+ minus the larger end-point value of u on
///              that interval (a monotone tail from a neighbouring peak scores 0).
///  PeakMax:    max of u over I_i^+.
enum class TypeRule { Prominence, PeakMax };

struct BumpClassification {
    BumpCode code;
    bool ambiguous = false;
    std::vector<double> interval_height; // bump height per positive interval under the rule
};

inline constexpr double kDefaultTypeThreshold = 0.05;

/// Digit i is 1 when the bump height on I_i^+ exceeds threshold_fraction * max(u).
/// A digit is ambiguous when its height lies within +-20% of the threshold.
BumpClassification classify(std::span<const double> u, const Weight& weight, const Grid& grid,
                            double threshold_fraction = kDefaultTypeThreshold,
                            TypeRule rule = TypeRule::Prominence);

/// Throws AmbiguousType instead of returning an ambiguous code.
BumpCode classify_type(const SolutionPoint& point, const Weight& weight, const Grid& grid,
                       double threshold_fraction = kDefaultTypeThreshold,
                       TypeRule rule = TypeRule::Prominence);

// Local bifurcation direction of the positive branch at (pi^2, 0).

inline constexpr double kD1ZeroTol = 1e-10;
inline constexpr int kDefaultPanels = 4096;

/// D1 = -2 int_0^1 a(x) sin^3(pi x) dx (composite Simpson, panels split at the
/// sign-change points of the weight).
double bifurcation_direction_d1(const WeightDescriptor& weight, int min_panels = kDefaultPanels);

struct W1Samples {
    std::vector<double> x;  // uniform quadrature mesh on [0,1], end points included
    std::vector<double> w;  // w1(x)
    double c2 = 0.0;
};

/// First-order correction w1 of the bifurcating curve when D1 = 0:
///   w1(x) = c2 sin(pi x) + (1/pi) int_0^x a(s) sin^2(pi s) sin(pi s - pi x) ds,
/// with c2 fixed by orthogonality to sin(pi x). Throws std::invalid_argument
/// when |D1| > kD1ZeroTol.
W1Samples compute_w1(const WeightDescriptor& weight, int min_panels = kDefaultPanels);

/// D2 = -2 int_0^1 a(x) w1(x) sin^2(pi x) dx.
double bifurcation_direction_d2(const WeightDescriptor& weight, int min_panels = kDefaultPanels);

struct BifurcationDirection {
    double d1 = 0.0;
    std::optional<double> d2; // only when d1 is declared zero
};

BifurcationDirection bifurcation_direction(const WeightDescriptor& weight,
                                           int min_panels = kDefaultPanels);

/// Composite Simpson on a uniform mesh (odd number of samples).
double simpson(std::span<const double> f, double dx);

} // namespace sibif
