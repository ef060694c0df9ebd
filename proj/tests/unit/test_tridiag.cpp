#include "sibif/error.hpp"
#include "sibif/tridiag.hpp"

#include "oracles/dense.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sibif;

namespace {

TridiagonalSym random_tridiag(std::mt19937& rng, std::size_t n, double shift)
{
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    TridiagonalSym t;
    t.diag.resize(n);
    t.off.resize(n - 1);
    for (auto& v : t.diag) {
        v = 2.0 * d(rng) + shift;
    }
    for (auto& v : t.off) {
        v = d(rng);
    }
    return t;
}

double max_residual(const TridiagonalSym& t, const std::vector<double>& x,
                    const std::vector<double>& f)
{
    std::vector<double> y(x.size());
    t.multiply(x, y);
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        m = std::max(m, std::abs(y[i] - f[i]));
    }
    return m;
}

} // namespace

TEST_CASE("thomas and pivoted solves")
{
    std::mt19937 rng(7);
    const auto t = random_tridiag(rng, 50, 6.0); // diagonally dominant
    std::vector<double> f(50);
    std::iota(f.begin(), f.end(), 1.0);
    CHECK(max_residual(t, thomas_solve(t, f, 1e-14), f) < 1e-10);
    const auto ti = random_tridiag(rng, 50, 0.0); // indefinite
    CHECK(max_residual(ti, pivoted_solve(ti, f), f) < 1e-8);

    TridiagonalSym sing{{1.0, 1.0}, {1.0}};
    CHECK_THROWS_AS(thomas_solve(sing, std::vector<double>{1.0, 2.0}, 1e-12), SingularJacobian);
}

TEST_CASE("bordered solve matches dense elimination")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 30;
        auto t = random_tridiag(rng, n, trial % 2 == 0 ? 0.0 : 5.0);
        std::vector<double> b(n), c(n), f(n);
        for (std::size_t i = 0; i < n; ++i) {
            b[i] = d(rng);
            c[i] = d(rng);
            f[i] = d(rng);
        }
        const double dd = d(rng);
        const double g = d(rng);
        const auto sol = bordered_solve(t, b, c, dd, f, g);
        std::vector<double> y(n);
        t.multiply(sol.x, y);
        double err = 0.0;
        double last = dd * sol.y - g;
        for (std::size_t i = 0; i < n; ++i) {
            err = std::max(err, std::abs(y[i] + b[i] * sol.y - f[i]));
            last += c[i] * sol.x[i];
        }
        CHECK(err < 1e-9);
        CHECK(std::abs(last) < 1e-9);
    }
}

TEST_CASE("bordered solve with singular tridiagonal block")
{
    // T singular (zero eigenvalue of the discrete Laplacian shifted by its
    // principal eigenvalue); the border makes the full system regular.
    const std::size_t n = 40;
    const double h = 1.0 / (n + 1);
    const double s1 = 4.0 / (h * h) * std::pow(std::sin(M_PI * h / 2.0), 2);
    TridiagonalSym t;
    t.diag.assign(n, 2.0 / (h * h) - s1);
    t.off.assign(n - 1, -1.0 / (h * h));
    std::vector<double> phi(n), zero(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        phi[i] = std::sin(M_PI * (i + 1) * h);
    }
    const auto sol = bordered_solve(t, phi, phi, 0.0, zero, 1.0);
    CHECK(std::abs(sol.y) < 1e-8);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dot += phi[i] * sol.x[i];
    }
    CHECK(dot == doctest::Approx(1.0).epsilon(1e-8));
    std::vector<double> y(n);
    t.multiply(sol.x, y);
    double m = 0.0;
    for (double v : y) {
        m = std::max(m, std::abs(v));
    }
    CHECK(m * h * h < 1e-10);
}

TEST_CASE("sturm count equals dense negative count")
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = random_tridiag(rng, 60, 0.3 * (trial % 5 - 2));
        CHECK(sturm_count(t, 0.0) == oracle::dense_negative_count(t));
        const auto ev = oracle::dense_eigenvalues(t);
        CHECK(sturm_eigenvalue(t, 7, 1e-13) == doctest::Approx(ev[7]).epsilon(1e-10));
    }
}
