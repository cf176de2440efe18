#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "lobkit/gaussian.hpp"
#include "lobkit/hedge.hpp"
#include "lobkit/ito.hpp"
#include "lobkit/order_book.hpp"
#include "lobkit/sfe.hpp"
#include "lobkit/shape.hpp"
#include "lobkit/synthetic.hpp"
#include "lobkit/trade_tape.hpp"

using namespace lobkit;

namespace {

OrderBook deep_book(int levels)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> vol(1, 1000);
    std::vector<Level> bids, asks;
    for (int i = levels; i > 0; --i) {
        bids.push_back({500000 - 10 * i, vol(rng) / 4.0});
    }
    for (int i = 1; i <= levels; ++i) {
        asks.push_back({500000 + 10 * i, vol(rng) / 4.0});
    }
    return OrderBook(1e-4, bids, asks);
}

}  // namespace

static void BM_MarketOrder(benchmark::State& state)
{
    const OrderBook book = deep_book(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(execute_market_order(book, 100.0));
    }
}
BENCHMARK(BM_MarketOrder)->Arg(10)->Arg(100)->Arg(1000);

static void BM_Legendre(benchmark::State& state)
{
    const ShapeFunction gamma = shape_from_book(deep_book(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(legendre(gamma));
    }
}
BENCHMARK(BM_Legendre)->Arg(10)->Arg(100)->Arg(1000);

static void BM_IngestTape(benchmark::State& state)
{
    SyntheticTapeParams p;
    p.n_trades = static_cast<std::size_t>(state.range(0));
    const auto recs = generate_synthetic_tape(p, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_series(recs));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IngestTape)->Arg(10000)->Arg(100000);

static void BM_Reconstruct(benchmark::State& state)
{
    SyntheticTapeParams p;
    p.n_trades = static_cast<std::size_t>(state.range(0));
    const TradeClockSeries s = build_series(generate_synthetic_tape(p, 1)).series;
    for (auto _ : state) {
        benchmark::DoNotOptimize(reconstruct_wealth_fixed(s, WealthKind::Proposed));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Reconstruct)->Arg(10000)->Arg(100000);

static void BM_SimulatePaths(benchmark::State& state)
{
    SimConfig cfg;
    cfg.steps_per_unit = static_cast<std::size_t>(state.range(0));
    cfg.paths = 16;
    const ItoCoefficients c = ItoCoefficients::constant(0, 1, 0, 1, -0.3, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_paths(c, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 16);
}
BENCHMARK(BM_SimulatePaths)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_PhiQuadrature(benchmark::State& state)
{
    const auto f = [](double y) { return y * std::sin(y); };
    for (auto _ : state) {
        benchmark::DoNotOptimize(phi_quadrature(1.7, f));
    }
}
BENCHMARK(BM_PhiQuadrature);

static void BM_HedgePde(benchmark::State& state)
{
    HedgeProblem prob;
    prob.payoff = call_payoff(100.0);
    prob.sigma = constant_state_fn(20.0);
    prob.lambda_s = 0.75;
    prob.grid.price_steps = static_cast<std::size_t>(state.range(0));
    prob.grid.time_steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hedge_pde_solve(prob));
    }
}
BENCHMARK(BM_HedgePde)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
