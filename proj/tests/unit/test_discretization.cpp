#include "sibif/discretization.hpp"
#include "sibif/weight.hpp"

#include "oracles/dense.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace sibif;

TEST_CASE("grid nodes and spacing")
{
    const auto g = build_grid(999);
    CHECK(g.h == doctest::Approx(1e-3));
    CHECK(g.nodes.front() == doctest::Approx(1e-3));
    CHECK(g.nodes.back() == doctest::Approx(0.999));
    CHECK_THROWS_AS(build_grid(2), std::invalid_argument);
    CHECK(build_grid_unchecked(1).nodes.at(0) == doctest::Approx(0.5));
}

TEST_CASE("neg_laplacian stencil")
{
    const auto g = build_grid(9);
    const auto t = neg_laplacian(g);
    CHECK(t.diag[3] == doctest::Approx(200.0));
    CHECK(t.off[3] == doctest::Approx(-100.0));
}

TEST_CASE("discrete eigenvalues against closed form and dense solver")
{
    const auto g = build_grid(120);
    const auto ev = dirichlet_eigenvalues(g, 6);
    const auto dense = oracle::dense_eigenvalues(neg_laplacian(g));
    for (int n = 1; n <= 6; ++n) {
        const double closed = discrete_dirichlet_eigenvalue(g.h, n);
        CHECK(ev[n - 1] == doctest::Approx(closed).epsilon(1e-9));
        CHECK(dense[n - 1] == doctest::Approx(closed).epsilon(1e-10));
    }
    CHECK_THROWS_AS(dirichlet_eigenvalues(g, 121), std::invalid_argument);
}

TEST_CASE("principal eigenvalue converges at second order")
{
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double e1 = std::abs(dirichlet_eigenvalues(build_grid(999), 1)[0] - pi2);
    const double e2 = std::abs(dirichlet_eigenvalues(build_grid(1999), 1)[0] - pi2);
    CHECK(e2 <= 5e-3);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("weight families")
{
    const WeightDescriptor s1 = SinWeight{1};
    CHECK(evaluate_weight(s1, 1.0 / 6.0) == doctest::Approx(1.0));
    const auto iv = sign_intervals(SinWeight{2});
    REQUIRE(iv.size() == 5);
    CHECK(iv[1].left == doctest::Approx(0.2));
    CHECK(iv[1].sign == -1);
    const WeightDescriptor m = MuSinWeight{4.5};
    CHECK(evaluate_weight(m, 0.1) == doctest::Approx(4.5));
    CHECK(evaluate_weight(m, 0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(sample_weight(MuSinWeight{0.5}, build_grid(9)), std::invalid_argument);
    CHECK_THROWS_AS(sample_weight(SinWeight{0}, build_grid(9)), std::invalid_argument);

    // even symmetry about x = 1/2 on the grid
    const auto g = build_grid(999);
    for (const WeightDescriptor d : {WeightDescriptor{SinWeight{3}}, WeightDescriptor{MuSinWeight{3.9}}}) {
        const auto w = sample_weight(d, g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(w.values[i] == doctest::Approx(w.values[g.size() - 1 - i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("weight spec parsing")
{
    CHECK(std::get<SinWeight>(parse_weight_spec("sin:2")).n == 2);
    CHECK(std::get<MuSinWeight>(parse_weight_spec("musin:4.5")).mu == doctest::Approx(4.5));
    CHECK(std::get<SinWeight>(parse_weight_spec(R"({"kind":"sin","n":3})")).n == 3);
    CHECK(std::get<ConstantWeight>(parse_weight_spec("const:-1")).c == doctest::Approx(-1.0));
    CHECK_THROWS(parse_weight_spec("cos:1"));
    const auto round = parse_weight_spec(to_json(MuSinWeight{3.91}));
    CHECK(std::get<MuSinWeight>(round).mu == doctest::Approx(3.91));
}
