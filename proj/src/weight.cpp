#include "sibif/weight.hpp"

#include "sibif/kernels.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sibif {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate(const WeightDescriptor& d)
{
    std::visit(overloaded{
                   [](const SinWeight& w) {
                       if (w.n < 1) {
                           throw std::invalid_argument("Sin weight needs n >= 1");
                       }
                   },
                   [](const MuSinWeight& w) {
                       if (!(w.mu >= 1.0)) {
                           throw std::invalid_argument("MuSin weight needs mu >= 1");
                       }
                   },
                   [](const ConstantWeight& w) {
                       if (w.c == 0.0) {
                           throw std::invalid_argument("constant weight must be nonzero");
                       }
                   },
               },
               d);
}

double eval_thunk(double x, const void* ctx)
{
    return evaluate_weight(*static_cast<const WeightDescriptor*>(ctx), x);
}

std::vector<SignInterval> alternating(int pieces)
{
    std::vector<SignInterval> out;
    out.reserve(static_cast<std::size_t>(pieces));
    for (int k = 1; k <= pieces; ++k) {
        out.push_back({static_cast<double>(k - 1) / pieces, static_cast<double>(k) / pieces,
                       (k % 2 == 1) ? +1 : -1});
    }
    return out;
}

} // namespace

double evaluate_weight(const WeightDescriptor& d, double x)
{
    using std::numbers::pi;
    return std::visit(overloaded{
                          [x](const SinWeight& w) { return std::sin((2 * w.n + 1) * pi * x); },
                          [x](const MuSinWeight& w) {
                              const double s = std::sin(5.0 * pi * x);
                              return (x >= 0.2 && x <= 0.8) ? s : w.mu * s;
                          },
                          [](const ConstantWeight& w) { return w.c; },
                      },
                      d);
}

std::vector<SignInterval> sign_intervals(const WeightDescriptor& d)
{
    return std::visit(overloaded{
                          [](const SinWeight& w) { return alternating(2 * w.n + 1); },
                          [](const MuSinWeight&) { return alternating(5); },
                          [](const ConstantWeight& w) {
                              return std::vector<SignInterval>{{0.0, 1.0, w.c > 0 ? 1 : -1}};
                          },
                      },
                      d);
}

Weight sample_weight(const WeightDescriptor& d, const Grid& grid)
{
    validate(d);
    Weight w;
    w.descriptor = d;
    w.values.resize(grid.size());
    kernels::sample(&eval_thunk, &w.descriptor, grid.nodes, w.values);
    w.sign_intervals = sign_intervals(d);
    return w;
}

std::vector<SignInterval> Weight::positive_intervals() const
{
    std::vector<SignInterval> out;
    for (const auto& s : sign_intervals) {
        if (s.sign > 0) {
            out.push_back(s);
        }
    }
    return out;
}

std::vector<SignInterval> Weight::negative_intervals() const
{
    std::vector<SignInterval> out;
    for (const auto& s : sign_intervals) {
        if (s.sign < 0) {
            out.push_back(s);
        }
    }
    return out;
}

WeightDescriptor parse_weight_spec(const std::string& text)
{
    WeightDescriptor d;
    const auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && text[first] == '{') {
        const auto j = nlohmann::json::parse(text);
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "sin") {
            d = SinWeight{j.at("n").get<int>()};
        } else if (kind == "musin") {
            d = MuSinWeight{j.at("mu").get<double>()};
        } else if (kind == "const") {
            d = ConstantWeight{j.at("c").get<double>()};
        } else {
            throw std::invalid_argument("unknown weight kind '" + kind + "'");
        }
    } else {
        const auto colon = text.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("weight spec must be JSON or kind:value, got '" + text +
                                        "'");
        }
        const auto kind = text.substr(0, colon);
        const auto value = text.substr(colon + 1);
        if (kind == "sin") {
            d = SinWeight{std::stoi(value)};
        } else if (kind == "musin") {
            d = MuSinWeight{std::stod(value)};
        } else if (kind == "const") {
            d = ConstantWeight{std::stod(value)};
        } else {
            throw std::invalid_argument("unknown weight kind '" + kind + "'");
        }
    }
    validate(d);
    return d;
}

std::string to_json(const WeightDescriptor& d)
{
    nlohmann::ordered_json j;
    std::visit(overloaded{
                   [&j](const SinWeight& w) {
                       j["kind"] = "sin";
                       j["n"] = w.n;
                   },
                   [&j](const MuSinWeight& w) {
                       j["kind"] = "musin";
                       j["mu"] = w.mu;
                   },
                   [&j](const ConstantWeight& w) {
                       j["kind"] = "const";
                       j["c"] = w.c;
                   },
               },
               d);
    return j.dump();
}

std::string describe(const WeightDescriptor& d)
{
    std::ostringstream os;
    std::visit(overloaded{
                   [&os](const SinWeight& w) { os << "sin(" << 2 * w.n + 1 << " pi x)"; },
                   [&os](const MuSinWeight& w) { os << "mu-sin(5 pi x), mu = " << w.mu; },
                   [&os](const ConstantWeight& w) { os << "constant " << w.c; },
               },
               d);
    return os.str();
}

} // namespace sibif
