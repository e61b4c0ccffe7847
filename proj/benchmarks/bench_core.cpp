#include <benchmark/benchmark.h>

#include <cmath>

#include "gcoup/conjugate.hpp"
#include "gcoup/coupling.hpp"
#include "gcoup/expr.hpp"
#include "gcoup/grid.hpp"
#include "gcoup/proper_fn.hpp"

namespace {

using namespace gcoup;

void BM_grid_sup_1d(benchmark::State& state) {
    GridSpec grid{Box::interval(-20.0, 20.0), 201, 0};
    PointFn phi = [](std::span<const double> x) { return ExtReal(-(x[0] - 3.0) * (x[0] - 3.0)); };
    for (auto _ : state) {
        OptResult r = optimize_over_grid(phi, grid, OptMode::sup);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_grid_sup_1d);

void BM_grid_inf_2d(benchmark::State& state) {
    GridSpec grid{Box::centered(2, 20.0), 41, 0};
    PointFn phi = [](std::span<const double> x) {
        return ExtReal(x[0] * x[0] + 0.5 * x[1] * x[1] - x[0]);
    };
    for (auto _ : state) {
        OptResult r = optimize_over_grid(phi, grid, OptMode::inf);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_grid_inf_2d);

void BM_expr_eval(benchmark::State& state) {
    ExprFn e = ExprFn::parse("x1^2 + exp(x2) - if(x1 > 0, x1 * x2, 0)", {"x1", "x2"});
    double p[2] = {1.25, -0.5};
    for (auto _ : state) {
        ExtReal v = e.eval(p);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_expr_eval);

void BM_conjugate_quadratic(benchmark::State& state) {
    ProperFn f(1, [](std::span<const double> x) { return ExtReal(x[0] * x[0]); }, "sq");
    Coupling g = builtin_coupling("square_product");
    GridSpec xgrid{Box::interval(-20.0, 20.0), 201, 0};
    GridSpec cgrid{Box::interval(-2.0, 2.0), 41, 0};
    for (auto _ : state) {
        SampledFn fg = g_conjugate(f, g, xgrid, cgrid);
        benchmark::DoNotOptimize(fg.values.size());
    }
}
BENCHMARK(BM_conjugate_quadratic);

}  // namespace

BENCHMARK_MAIN();
