#include "sibif/discretization.hpp"
#include "sibif/error.hpp"
#include "sibif/spectral.hpp"

#include "oracles/dense.hpp"
#include "oracles/perturbation.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace sibif;

namespace {

const double pi = std::numbers::pi;

// Independent check of w1: second differences of the samples against the ODE
// -w'' - pi^2 w = a sin^2(pi x).
double w1_ode_residual(const WeightDescriptor& d, const W1Samples& w)
{
    const double dx = w.x[1] - w.x[0];
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < w.x.size(); ++i) {
        const double wpp = (w.w[i - 1] - 2.0 * w.w[i] + w.w[i + 1]) / (dx * dx);
        const double s = std::sin(pi * w.x[i]);
        worst = std::max(worst, std::abs(-wpp - pi * pi * w.w[i] - evaluate_weight(d, w.x[i]) * s * s));
    }
    return worst;
}

double d1_musin_closed_form(double mu)
{
    const double r5 = std::sqrt(5.0);
    return -std::sqrt(0.5 * (5.0 - r5)) * (5.0 - r5) * (5.0 - r5) * (mu - 1.0) / (128.0 * pi);
}

} // namespace

TEST_CASE("morse index of the trivial solution")
{
    const auto g = build_grid(499);
    const auto w = sample_weight(SinWeight{1}, g);
    SolutionPoint p;
    p.u.assign(g.size(), 0.0);
    for (int n = 1; n <= 4; ++n) {
        const double s = dirichlet_eigenvalue(n);
        p.lambda = s - 0.5;
        CHECK(morse_index(p, w, g).index == n - 1);
        p.lambda = s + 0.5;
        CHECK(morse_index(p, w, g).index == n);
    }
    p.lambda = 5.0;
    const auto m = morse_index(p, w, g);
    CHECK(m.index == 0);
    CHECK_FALSE(m.near_degenerate);
    CHECK(m.min_abs_eigenvalue == doctest::Approx(discrete_dirichlet_eigenvalue(g.h, 1) - 5.0).epsilon(1e-8));
}

TEST_CASE("morse index equals the dense negative count on random samples")
{
    const auto g = build_grid(200);
    const auto w = sample_weight(SinWeight{2}, g);
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> lam(-80.0, 120.0);
    std::uniform_real_distribution<double> amp(0.0, 150.0);
    for (int k = 0; k < 50; ++k) {
        SolutionPoint p;
        p.lambda = lam(rng);
        p.u.resize(g.size());
        const double A = amp(rng);
        for (std::size_t i = 0; i < g.size(); ++i) {
            p.u[i] = A * std::pow(std::sin(pi * g.nodes[i]), 2) * (1.0 + 0.3 * std::sin(7.0 * g.nodes[i] * k));
        }
        const auto jac = jacobian(p.lambda, p.u, w, g);
        CHECK(morse_index(p, w, g).index == oracle::dense_negative_count(jac));
    }
}

TEST_CASE("bump classification")
{
    const auto g = build_grid(999);
    const auto w = sample_weight(SinWeight{1}, g);
    std::vector<double> u(g.size(), 0.0);
    CHECK(classify(u, w, g).code.digits == "00");
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.nodes[i];
        u[i] = x < 1.0 / 3.0 ? std::sin(3.0 * pi * x) : 0.0;
    }
    CHECK(classify(u, w, g).code.digits == "10");
    // second bump at exactly the threshold is ambiguous
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.nodes[i];
        if (x > 2.0 / 3.0) {
            u[i] = 0.05 * std::sin(3.0 * pi * (x - 2.0 / 3.0));
        }
    }
    SolutionPoint p;
    p.u = u;
    CHECK(classify(u, w, g).ambiguous);
    CHECK_THROWS_AS(classify_type(p, w, g), AmbiguousType);
}

TEST_CASE("a decaying tail is not a bump under the prominence rule")
{
    // Sin{2}: peak centred in I_2^+, monotone tails reaching 10% of the peak
    // into the outer positive intervals.
    const auto g = build_grid(999);
    const auto w = sample_weight(SinWeight{2}, g);
    std::vector<double> u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.nodes[i];
        u[i] = std::exp(-7.7 * std::abs(x - 0.5)) * std::sin(pi * x);
    }
    CHECK(classify(u, w, g).code.digits == "010");
    CHECK(classify(u, w, g, 0.05, TypeRule::PeakMax).code.digits == "111");
}

TEST_CASE("bifurcation directions")
{
    CHECK(bifurcation_direction_d1(SinWeight{1}) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(bifurcation_direction_d1(SinWeight{2})) < 1e-12);
    for (double mu : {1.0, 2.0, 4.5}) {
        CHECK(std::abs(bifurcation_direction_d1(MuSinWeight{mu}) - d1_musin_closed_form(mu)) < 1e-8);
    }
    CHECK(std::abs(bifurcation_direction_d2(SinWeight{2}) + 5.0 / (256.0 * pi * pi)) < 1e-6);
    // Sin{3}: the nested-integral formula and an independent finite-difference
    // solve both give -11/(1280 pi^2), not +1/(128 pi^2).
    CHECK(std::abs(bifurcation_direction_d2(SinWeight{3}) + 11.0 / (1280.0 * pi * pi)) < 1e-9);
    CHECK_THROWS_AS(compute_w1(SinWeight{1}), std::invalid_argument);

    const auto bd = bifurcation_direction(SinWeight{1});
    CHECK_FALSE(bd.d2.has_value());
    CHECK(bifurcation_direction(SinWeight{2}).d2.has_value());
}

TEST_CASE("D2 against the finite-difference oracle")
{
    for (const WeightDescriptor d : {WeightDescriptor{SinWeight{2}}, WeightDescriptor{SinWeight{3}},
                                     WeightDescriptor{MuSinWeight{1.0}}}) {
        const double fd = oracle::d2_finite_difference(d, 4000);
        CHECK(std::abs(bifurcation_direction_d2(d) - fd) < 1e-6);
    }
}

TEST_CASE("quadrature is converged at the default panel count")
{
    for (const WeightDescriptor d : {WeightDescriptor{SinWeight{2}}, WeightDescriptor{SinWeight{3}}}) {
        CHECK(std::abs(bifurcation_direction_d2(d, 4096) - bifurcation_direction_d2(d, 8192)) < 1e-9);
    }
    CHECK(std::abs(bifurcation_direction_d1(MuSinWeight{4.5}, 4096) -
                   bifurcation_direction_d1(MuSinWeight{4.5}, 8192)) < 1e-9);
}

TEST_CASE("w1 satisfies its defining problem")
{
    for (const WeightDescriptor d : {WeightDescriptor{SinWeight{2}}, WeightDescriptor{SinWeight{3}}}) {
        const auto w = compute_w1(d);
        CHECK(std::abs(w.w.front()) < 1e-8);
        CHECK(std::abs(w.w.back()) < 1e-8);
        std::vector<double> f(w.x.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            f[i] = w.w[i] * std::sin(pi * w.x[i]);
        }
        CHECK(std::abs(simpson(f, w.x[1] - w.x[0])) < 1e-8);
        CHECK(w1_ode_residual(d, w) < 1e-4);
    }
}
