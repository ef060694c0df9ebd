// Serial reference vs OpenMP kernels at grid sizes around the threshold.

#include "sibif/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace k = sibif::kernels;

namespace {

struct Data {
    explicit Data(std::size_t n) : u(n), a(n), out(n)
    {
        h = 1.0 / static_cast<double>(n + 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(i + 1) * h;
            u[i] = 50.0 * std::sin(M_PI * x);
            a[i] = std::sin(3.0 * M_PI * x);
        }
    }
    std::vector<double> u, a, out;
    double h = 0.0;
};

double weight_fn(double x, const void*)
{
    return std::sin(5.0 * M_PI * x) + 0.1;
}

template <auto Fn>
void residual(benchmark::State& st)
{
    Data d(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        Fn(d.u, d.a, d.h, -20.0, d.out);
        benchmark::DoNotOptimize(d.out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Fn>
void jacobian_diagonal(benchmark::State& st)
{
    Data d(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        Fn(d.u, d.a, d.h, -20.0, d.out);
        benchmark::DoNotOptimize(d.out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Fn>
void imex_rhs(benchmark::State& st)
{
    Data d(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        Fn(d.u, d.a, 1e-5, d.out);
        benchmark::DoNotOptimize(d.out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Fn>
void max_abs(benchmark::State& st)
{
    Data d(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(Fn(d.u));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Fn>
void sample(benchmark::State& st)
{
    Data d(static_cast<std::size_t>(st.range(0)));
    for (std::size_t i = 0; i < d.u.size(); ++i) {
        d.u[i] = static_cast<double>(i + 1) * d.h;
    }
    for (auto _ : st) {
        Fn(weight_fn, nullptr, d.u, d.out);
        benchmark::DoNotOptimize(d.out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

#define SIBIF_PAIR(name)                                                                   \
    BENCHMARK(name<k::serial::name>)->Name(#name "/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22); \
    BENCHMARK(name<k::omp::name>)->Name(#name "/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22)

SIBIF_PAIR(residual);
SIBIF_PAIR(jacobian_diagonal);
SIBIF_PAIR(imex_rhs);
SIBIF_PAIR(max_abs);
SIBIF_PAIR(sample);

} // namespace

BENCHMARK_MAIN();
