#include "sibif/discretization.hpp"
#include "sibif/error.hpp"
#include "sibif/nonlinear.hpp"
#include "sibif/parabolic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace sibif;

namespace {

const double pi = std::numbers::pi;

std::vector<double> sine(const Grid& g, double amp, int k = 1)
{
    std::vector<double> u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        u[i] = amp * std::sin(k * pi * g.nodes[i]);
    }
    return u;
}

// -u'' - lambda u - a u^2 on the stencil with zero Dirichlet ends.
std::vector<double> stencil_residual(double lambda, const std::vector<double>& u,
                                     const Weight& w, const Grid& g)
{
    const std::size_t n = g.size();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double l = i > 0 ? u[i - 1] : 0.0;
        const double rr = i + 1 < n ? u[i + 1] : 0.0;
        r[i] = (2 * u[i] - l - rr) / (g.h * g.h) - lambda * u[i] - w.values[i] * u[i] * u[i];
    }
    return r;
}

} // namespace

TEST_CASE("IMEX step on the heat equation multiplies sin(pi x) by 1/(1 + dt sigma_1^h)")
{
    const auto g = build_grid(199);
    auto w = sample_weight(ConstantWeight{1.0}, g);
    std::fill(w.values.begin(), w.values.end(), 0.0);
    EvolutionState s;
    s.u = sine(g, 1.0);
    s.dt = 1e-3;
    const auto next = step(s, 0.0, w, g);
    const double factor = 1.0 / (1.0 + s.dt * discrete_dirichlet_eigenvalue(g.h, 1));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, std::abs(next.u[i] - factor * s.u[i]));
    }
    CHECK(worst < 1e-13);
    CHECK(next.t == doctest::Approx(1e-3));
}

TEST_CASE("steady state is preserved by the flow")
{
    const auto g = build_grid(399);
    const auto w = sample_weight(ConstantWeight{-1.0}, g);
    const auto p = newton_solve(30.0, sine(g, 20.0), w, g, {});
    const auto s = evolve_until(p.u, 30.0, 0.05, w, g, {});
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, std::abs(s.u[i] - p.u[i]));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("logistic flow from small data reaches the stable steady state")
{
    const auto g = build_grid(199);
    const auto w = sample_weight(ConstantWeight{-1.0}, g);
    const auto ref = newton_solve(30.0, sine(g, 20.0), w, g, {});
    ParabolicConfig cfg;
    cfg.dt = 1e-3;
    cfg.snapshot_every = 20;
    const auto r = evolve_to_steady(sine(g, 0.1), 30.0, w, g, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, std::abs(r.point.u[i] - ref.u[i]));
    }
    CHECK(worst < 1e-6);
    // 0.1 sin(pi x) lies below the steady state, so the flow increases.
    CHECK(check_monotone(r.snapshots) <= 1e-8);
    CHECK(r.monotone_violation <= 1e-8);
}

TEST_CASE("check_monotone reports the largest decrease")
{
    std::vector<Snapshot> s = {{0.0, {1.0, 2.0}}, {0.1, {1.5, 2.0}}, {0.2, {1.5, 2.5}}};
    CHECK(check_monotone(s) == 0.0);
    s.push_back({0.3, {1.2, 2.5}});
    CHECK(check_monotone(s) == doctest::Approx(0.3));
}

TEST_CASE("bump subsolutions satisfy the discrete subsolution inequality")
{
    const auto g = build_grid(999);
    const auto w = sample_weight(SinWeight{2}, g);
    for (const char* code : {"100", "010", "101", "111"}) {
        const auto spec = make_subsolution_spec(BumpCode{code}, -60.0, w, g);
        const auto u = build_subsolution(spec, g);
        const auto r = stencil_residual(-60.0, u, w, g);
        const double scale = *std::max_element(u.begin(), u.end()) / (g.h * g.h);
        for (std::size_t i = 0; i < g.size(); ++i) {
            REQUIRE(r[i] <= 1e-9 * scale);
            REQUIRE(u[i] >= 0.0);
        }
        // zero outside the selected positive intervals
        const auto pos = w.positive_intervals();
        for (std::size_t i = 0; i < g.size(); ++i) {
            bool inside = false;
            for (std::size_t k = 0; k < pos.size(); ++k) {
                inside = inside || (code[k] == '1' && g.nodes[i] > pos[k].left &&
                                    g.nodes[i] < pos[k].right);
            }
            if (!inside) {
                REQUIRE(u[i] == 0.0);
            }
        }
    }
}

TEST_CASE("flow from a subsolution is non-decreasing until it blows up")
{
    const auto g = build_grid(499);
    const auto w = sample_weight(SinWeight{1}, g);
    const auto u0 = build_subsolution(make_subsolution_spec(BumpCode{"10"}, -21.0, w, g), g);
    ParabolicConfig cfg;
    cfg.snapshot_every = 10;
    std::vector<Snapshot> snaps;
    const auto s = evolve_until(u0, -21.0, 0.01, w, g, cfg, &snaps);
    CHECK(s.monotone_violation <= 1e-8);
    CHECK(check_monotone(snaps) <= 1e-8);
    CHECK_THROWS_AS(evolve_to_steady(u0, -21.0, w, g, cfg), BlowUp);
}

TEST_CASE("large data blow up")
{
    const auto g = build_grid(99);
    const auto w = sample_weight(ConstantWeight{1.0}, g);
    try {
        evolve_until(sine(g, 500.0), 0.0, 1.0, w, g, {});
        FAIL("expected BlowUp");
    } catch (const BlowUp& e) {
        CHECK(e.time > 0.0);
        CHECK(e.time < 1.0);
    }
}

TEST_CASE("decay_profile takes the max over inset regions")
{
    const auto g = build_grid(99);
    const auto w = sample_weight(SinWeight{1}, g);
    const auto regions = negative_regions(w);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].left == doctest::Approx(1.0 / 3.0));
    const std::vector<double> lambdas = {-1.0, -2.0, -3.0};
    const auto src = [&](double l) -> std::optional<std::vector<double>> {
        if (l == -3.0) {
            return std::nullopt;
        }
        std::vector<double> u(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            u[i] = -l * g.nodes[i]; // max at the right end of the region
        }
        return u;
    };
    const auto rows = decay_profile(lambdas, src, regions, g);
    REQUIRE(rows.size() == 3);
    // nodes up to 2/3 - 2h
    const double xr = 2.0 / 3.0 - 2 * g.h;
    double expect = 0.0;
    for (double x : g.nodes) {
        if (x > 1.0 / 3.0 + 2 * g.h - 1e-12 && x < xr + 1e-12) {
            expect = std::max(expect, x);
        }
    }
    CHECK(*rows[0].max_value == doctest::Approx(expect));
    CHECK(*rows[1].max_value == doctest::Approx(2 * expect));
    CHECK(!rows[2].max_value);
    CHECK(!strictly_decreasing(rows));
    std::vector<DecayRow> dec = {{-1, 3.0}, {-2, 2.0}, {-3, 1.0}};
    CHECK(strictly_decreasing(dec));
    dec[2].max_value = 2.0;
    CHECK(!strictly_decreasing(dec));
}
