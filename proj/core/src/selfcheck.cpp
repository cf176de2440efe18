#include "lobkit/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "lobkit/covariation.hpp"
#include "lobkit/hedge.hpp"
#include "lobkit/limits.hpp"
#include "lobkit/market_maker.hpp"
#include "lobkit/parallel.hpp"
#include "lobkit/sfe.hpp"
#include "lobkit/shape.hpp"
#include "lobkit/supply_demand.hpp"
#include "lobkit/synthetic.hpp"

namespace lobkit {

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

CriterionResult timed(int id, std::string title, const std::function<void(CriterionResult&)>& body)
{
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

OrderBook random_book(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> levels(1, 10);
    std::uniform_int_distribution<int> gap(1, 5);
    std::uniform_real_distribution<double> vol(0.5, 50.0);
    const std::int64_t bid = 1000000;
    const std::int64_t ask = bid + gap(rng) * 2;
    std::vector<Level> bids, asks;
    std::int64_t px = bid;
    for (int i = levels(rng); i > 0; --i) {
        bids.push_back({px, std::round(vol(rng))});
        px -= gap(rng);
    }
    px = ask;
    for (int i = levels(rng); i > 0; --i) {
        asks.push_back({px, std::round(vol(rng))});
        px += gap(rng);
    }
    return OrderBook(1e-4, bids, asks);
}

void accounting(CriterionResult& r, const SelfcheckOptions& o, std::size_t tapes, std::size_t max_trades)
{
    std::mt19937_64 rng(o.seed);
    std::size_t mismatches = 0, trades = 0;
    for (std::size_t i = 0; i < tapes; ++i) {
        SyntheticTapeParams p;
        p.n_trades = 1 + rng() % max_trades;
        p.impact_compliance = 0.9;
        p.recovery_compliance = 0.9;
        trades += p.n_trades;
        const SeriesBuild sb = build_series(generate_synthetic_tape(p, o.seed + i));
        const ProviderLedger L = build_ledger(sb.series);
        const auto X = reconstruct_wealth_fixed(sb.series, WealthKind::Proposed);
        for (std::size_t n = 0; n < X.size(); ++n) {
            mismatches += std::llabs(X[n] - L.X_half_ticks[n]) > 1;
        }
    }
    r.passed = mismatches == 0;
    r.detail = std::to_string(tapes) + " tapes, " + std::to_string(trades) + " trades, " +
               std::to_string(mismatches) + " steps off by more than 1 ulp";
}

void frictionless(CriterionResult& r, const SelfcheckOptions& o, std::size_t tapes)
{
    std::size_t diffs = 0;
    for (std::size_t i = 0; i < tapes; ++i) {
        SyntheticTapeParams p;
        p.n_trades = 2000;
        p.recovery_mode = RecoveryMode::ExactHalfSpread;
        p.min_spread = 2;
        p.max_spread = 6;
        const SeriesBuild sb = build_series(generate_synthetic_tape(p, o.seed + 1000 + i));
        const auto a = reconstruct_wealth_fixed(sb.series, WealthKind::Proposed);
        const auto b = reconstruct_wealth_fixed(sb.series, WealthKind::Frictionless);
        for (std::size_t n = 0; n < a.size(); ++n) {
            diffs += a[n] != b[n];
        }
    }
    r.passed = diffs == 0;
    r.detail = std::to_string(tapes) + " exact half-spread tapes, " + std::to_string(diffs) + " differing steps";
}

void legendre_consistency(CriterionResult& r, const SelfcheckOptions& o, std::size_t books)
{
    std::mt19937_64 rng(o.seed + 7);
    double worst = 0.0;
    for (std::size_t b = 0; b < books; ++b) {
        const OrderBook book = random_book(rng);
        const ShapeFunction g = shape_from_book(book);
        const CostFunction c = legendre(g);
        const double p = g.quoted_price();
        std::vector<std::int64_t> prices;
        for (const Level& l : book.bids()) {
            prices.push_back(l.price_ticks);
        }
        for (const Level& l : book.asks()) {
            prices.push_back(l.price_ticks);
        }
        for (std::int64_t t : prices) {
            const double alpha = book.price(t);
            const Execution e = execute_market_order(book, alpha).execution;
            const double rhs = -p * e.delta_L + c(-e.delta_L);
            worst = std::max(worst, std::abs(e.delta_K - rhs) / std::max(1.0, std::abs(e.delta_K)));
            const double u = alpha - p;
            const double slope = g.executed_slope(u);
            const double fenchel = u * slope - g(u) - c(slope);
            worst = std::max(worst, std::abs(fenchel) / std::max(1.0, std::abs(u * slope)));
        }
    }
    r.passed = worst <= 1e-12;
    r.detail = std::to_string(books) + " books, worst relative residual " + fmt("%.3e", worst);
}

void hedging(CriterionResult& r, std::size_t grid)
{
    double worst = 0.0;
    for (double lambda : {0.75, 1.0, 1.5}) {
        HedgeProblem pr;
        pr.payoff = call_payoff(100.0);
        pr.sigma = [](double, double p) { return 0.2 * p; };
        pr.lambda_s = lambda;
        pr.center = 100.0;
        pr.grid.price_steps = grid;
        pr.grid.time_steps = grid;
        const HedgeSurface s = hedge_pde_solve(pr);
        const double vol = std::sqrt(2.0 * lambda - 1.0) * 0.2;
        for (double m : {0.8, 0.9, 1.0, 1.1, 1.2}) {
            const double bs = black_scholes_call(100.0 * m, 100.0, vol, 1.0);
            worst = std::max(worst, std::abs(s.value_at(0, 100.0 * m) - bs) / bs);
        }
    }
    r.passed = worst <= 1e-3;
    r.detail = fmt("worst relative error %.3e on %.0f x %.0f", worst, static_cast<double>(grid), static_cast<double>(grid));
}

void market_maker(CriterionResult& r, std::size_t grid_points)
{
    const auto f = inverse_square_intensity();
    const auto rho = inverse_correlation();
    bool ok = true;
    double prev_M = std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (double a : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const MmOptimum opt = mm_optimal_rescaled_spread(a, f, rho);
        ok = ok && opt.m > 0.0 && opt.M < prev_M;
        prev_M = opt.M;
        const double hi = 8.0 * (a + 1.0);
        double best_x = 0.0, best_f = -1e300;
        std::size_t best_i = 0;
        for (std::size_t i = 0; i <= grid_points; ++i) {
            const double x = hi * static_cast<double>(i) / static_cast<double>(grid_points);
            const double v = mm_objective(a, x, f, rho);
            if (v > best_f) {
                best_f = v;
                best_x = x;
                best_i = i;
            }
        }
        if (best_i > 0 && best_i < grid_points) {
            const double h = hi / static_cast<double>(grid_points);
            const double fl = mm_objective(a, best_x - h, f, rho);
            const double fr = mm_objective(a, best_x + h, f, rho);
            const double den = fl - 2.0 * best_f + fr;
            if (den < 0.0) {
                best_x += 0.5 * h * (fl - fr) / den;
            }
        }
        worst = std::max(worst, std::abs(best_x - opt.m));
    }
    MmProblem prob{f, rho, price_model::Martingale{}, 1.0, {}};
    std::vector<MmPathPoint> path;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> vol(0.05, 0.5);
    for (int k = 0; k <= 50; ++k) {
        path.push_back({k / 50.0, 100.0, vol(rng)});
    }
    const MmSolution sol = mm_solve(prob, path);
    double spread_dev = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        spread_dev = std::max(spread_dev, std::abs(sol.spread[k] / path[k].sigma - sol.rescaled[0]));
    }
    ok = ok && spread_dev <= 1e-12 && worst <= 1e-6;
    r.passed = ok;
    r.detail = fmt("argmax vs grid scan max diff %.2e, s/sigma deviation %.1e, m(1) = %.6f", worst, spread_dev,
                   sol.rescaled[0]);
    r.notes.push_back(fmt("m(1) closed forms: sqrt(1 + 3 sqrt(2 pi)) = %.6f, sqrt(1 + 3) = %.6f",
                          explicit_rescaled_spread(1.0), explicit_rescaled_spread_unscaled(1.0)));
}

void flat_book(CriterionResult& r, const SelfcheckOptions& o, std::size_t steps)
{
    SimConfig cfg;
    cfg.steps_per_unit = steps;
    cfg.paths = 4;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    const FlatBookReport rep = flat_book_identity_check(cfg, 1.0, 1.0, ItoCoefficients::constant(0, 1, 0, 1, 0, 1));
    r.passed = rep.passed;
    r.detail = fmt("identity error %.2e, round trip %.2e, printed form off by %.3g", rep.max_identity_error,
                   rep.max_round_trip_error, rep.max_printed_form_error);
}

void report_fidelity(CriterionResult& r)
{
    CovariationTestReport rep;
    rep.overall_rejection = 0.98766953;
    rep.impact_violations = 72;
    rep.n_trades = 20362;
    rep.n_steps = 20361;
    rep.recovery_violations = 2837;
    std::vector<ReportRow> rows{make_report_row("KO", rep)};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        rows.push_back(quantize({"S" + std::to_string(i), u(rng), rng() % 500, 1000 + rng() % 50000, 100 * u(rng),
                                 100 * u(rng)}));
    }
    std::istringstream in(report_table_csv(rows));
    const auto back = parse_report_csv(in);
    const auto& cols = report_columns();
    const std::vector<std::string> expected{"Stock", "proba reject", "nb false", "nb trades", "percent false",
                                            "recovery rejection"};
    r.passed = back == rows && cols == expected && rows[0].percent_false == 0.3535998;
    r.detail = std::to_string(rows.size()) + " rows round-tripped" + (back == rows ? " exactly" : " with differences");
}

void spread_limit(CriterionResult& r, const SelfcheckOptions& o)
{
    SimConfig cfg{10000, 200, 1.0, o.seed, o.threads};
    const ConvergenceReport c = spread_cost_limit_check(ItoCoefficients::constant(0, 1, 0, 1, 0, 0.02), cfg);
    const double target = 0.02 / std::sqrt(2.0 * std::numbers::pi);
    r.passed = std::abs(c.mean - target) <= 3.0 * c.std_error + c.bias_allowance;
    r.detail = fmt("mean %.7f vs %.7f, 3 se + allowance %.2e", c.mean, target, 3.0 * c.std_error + c.bias_allowance);
}

void recovery_boundary(CriterionResult& r, const SelfcheckOptions& o)
{
    SimConfig cfg{10000, 200, 1.0, o.seed, o.threads};
    const double s = 1.0;
    const ConvergenceReport c =
        recovery_limit_check(ItoCoefficients::constant(0, std::sqrt(2.0 / std::numbers::pi) * s, 0, 1, 0, s), cfg, 0.0, 1.0);
    r.passed = std::abs(c.mean) <= 3.0 * c.std_error;
    r.detail = fmt("mean %.3e, 3 se %.3e", c.mean, 3.0 * c.std_error);
}

void general_cost(CriterionResult& r, const SelfcheckOptions& o)
{
    SimConfig cfg{10000, 200, 1.0, o.seed, o.threads};
    const GeneralCostReport g = general_cost_limit_check(ItoCoefficients::constant(0, 1, 0, 1, 0, 1),
                                                         CostProcess(CostFunction::quadratic(1.0)), cfg);
    r.passed = std::abs(g.cost.mean - 0.5) <= 3.0 * g.cost.std_error;
    r.detail = fmt("mean %.6f vs 0.5, 3 se %.2e", g.cost.mean, 3.0 * g.cost.std_error);
}

void supply_demand(CriterionResult& r, const SelfcheckOptions& o)
{
    SimConfig cfg{10000, 200, 1.0, o.seed, o.threads};
    bool ok = true;
    std::ostringstream d;
    for (double lambda : {0.5, 1.0}) {
        ItoCoefficients c = ItoCoefficients::constant(0, 1, 0, 1, 0, 1);
        c.lambda_r = lambda;
        const SupplyDemandReport rep =
            supply_demand_moments(c, CostProcess(CostFunction::quadratic(1.0)), cfg, SupplyDemandDriver::InventoryGiven);
        const bool vol_ok = std::abs(rep.volatility.mean - lambda) <= 3.0 * rep.volatility.std_error;
        const bool cov_ok = std::abs(rep.covariation.mean + 1.0) <= 3.0 * rep.covariation.std_error;
        ok = ok && vol_ok && cov_ok;
        d << fmt("lambda %.1f: vol %.5f, [p,L] %.5f (target -1); ", lambda, rep.volatility.mean, rep.covariation.mean);
        r.notes.push_back(fmt("lambda %.1f: [p,L]_1 vs -lambda Phi(id c') = %.3f: |diff| = %.2e", lambda, -lambda,
                              std::abs(rep.covariation.mean + lambda)));
    }
    r.passed = ok;
    r.detail = d.str();
}

void clt(CriterionResult& r, const SelfcheckOptions& o)
{
    const std::size_t reps = 500;
    bool ok = true;
    std::ostringstream d;
    for (double rho : {-0.5, 0.0, 0.5}) {
        SimConfig cfg{10000, reps, 1.0, o.seed + 17, o.threads};
        std::vector<int> hit(reps);
        for_each_path(ItoCoefficients::constant(0, 1, 0, 1, rho, 1), cfg,
                      [&](std::size_t i, std::span<const double> p, std::span<const double> L) {
                          const CltStats s = clt_stats(p, L, 10000.0);
                          const auto [lo, hi] = ci(s.C.back(), s.V.back(), 10000.0, 0.95);
                          hit[i] = lo <= rho && rho <= hi;
                      });
        const double cover = 100.0 * std::count(hit.begin(), hit.end(), 1) / static_cast<double>(reps);
        ok = ok && std::abs(cover - 95.0) <= 3.0;
        d << fmt("rho %.1f: %.1f%%; ", rho, cover);
    }
    SimConfig cfg{10000, 1, 1.0, o.seed + 19, o.threads};
    const PathBundle b = simulate_paths(ItoCoefficients::constant(0, 1, 0, 1, -0.8, 1), cfg);
    const double rej = reject_null(b).overall_rejection;
    ok = ok && rej >= 0.99;
    d << fmt("reject_null(rho -0.8) = %.7f", rej);
    r.passed = ok;
    r.detail = d.str();
}

}  // namespace

std::vector<CriterionResult> run_selfcheck(const SelfcheckOptions& o)
{
    std::vector<CriterionResult> out;
    const bool full = o.full;
    out.push_back(timed(1, "accounting exactness", [&](auto& r) { accounting(r, o, full ? 1000 : 50, full ? 20000 : 2000); }));
    out.push_back(timed(2, "frictionless recovery", [&](auto& r) { frictionless(r, o, full ? 100 : 10); }));
    out.push_back(timed(3, "Legendre/execution consistency", [&](auto& r) { legendre_consistency(r, o, full ? 500 : 100); }));
    if (full) {
        out.push_back(timed(4, "spread-cost diffusion limit", [&](auto& r) { spread_limit(r, o); }));
        out.push_back(timed(5, "recovery-bound boundary", [&](auto& r) { recovery_boundary(r, o); }));
        out.push_back(timed(6, "general-cost limit", [&](auto& r) { general_cost(r, o); }));
    }
    out.push_back(timed(7, "hedging PDE", [&](auto& r) { hedging(r, full ? 400 : 200); }));
    out.push_back(timed(8, "market maker", [&](auto& r) { market_maker(r, full ? 1000000 : 100000); }));
    if (full) {
        out.push_back(timed(9, "supply-demand moments", [&](auto& r) { supply_demand(r, o); }));
    }
    out.push_back(timed(10, "flat-book identity", [&](auto& r) { flat_book(r, o, 10000); }));
    if (full) {
        out.push_back(timed(11, "CLT coverage", [&](auto& r) { clt(r, o); }));
    }
    out.push_back(timed(12, "report fidelity", [&](auto& r) { report_fidelity(r); }));
    return out;
}

}  // namespace lobkit
