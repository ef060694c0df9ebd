#pragma once

#include "sibif/grid.hpp"

#include <string>
#include <variant>
#include <vector>

namespace sibif {

/// a(x) = sin((2n+1) pi x): n+1 positive and n negative bumps.
struct SinWeight {
    int n = 1;
};

/// a(x) = mu*sin(5 pi x) on [0,0.2) and (0.8,1], sin(5 pi x) on [0.2,0.8].
struct MuSinWeight {
    double mu = 1.0;
};

/// a(x) = c. Only used as a toy weight (c < 0 gives a purely absorbing problem).
struct ConstantWeight {
    double c = -1.0;
};

using WeightDescriptor = std::variant<SinWeight, MuSinWeight, ConstantWeight>;

struct SignInterval {
    double left;
    double right;
    int sign; // +1 or -1
};

struct Weight {
    WeightDescriptor descriptor;
    std::vector<double> values; // a(x_i) on the grid nodes
    std::vector<SignInterval> sign_intervals;

    /// Positive intervals I_i^+ in left-to-right order.
    std::vector<SignInterval> positive_intervals() const;
    std::vector<SignInterval> negative_intervals() const;
};

double evaluate_weight(const WeightDescriptor& d, double x);

/// Sign decomposition of (0,1); exact for the analytic families.
std::vector<SignInterval> sign_intervals(const WeightDescriptor& d);

/// Throws std::invalid_argument for MuSin with mu < 1 or Sin with n < 1.
Weight sample_weight(const WeightDescriptor& d, const Grid& grid);

/// {"kind":"sin","n":2} style JSON text, or the short forms "sin:2", "musin:4.5",
/// "const:-1".
WeightDescriptor parse_weight_spec(const std::string& text);
std::string to_json(const WeightDescriptor& d);
std::string describe(const WeightDescriptor& d);

} // namespace sibif
