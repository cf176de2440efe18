#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lobkit/error.hpp"
#include "lobkit/hedge.hpp"
#include "lobkit/market_maker.hpp"
#include "oracles.hpp"

using namespace lobkit;

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

HedgeProblem lognormal_problem(Payoff payoff, double sigma, double lambda, std::size_t n = 400)
{
    HedgeProblem pr;
    pr.payoff = std::move(payoff);
    pr.sigma = [sigma](double, double p) { return sigma * p; };
    pr.lambda_s = lambda;
    pr.maturity = 1.0;
    pr.center = 100.0;
    pr.grid.price_steps = n;
    pr.grid.time_steps = n;
    return pr;
}

double F_oracle(double a, double x)
{
    return x / ((1 + x) * (1 + x) * kSqrt2Pi) - a / ((1 + x) * (1 + x) * (1 + x));
}

}  // namespace

TEST(HedgePde, BlackScholesWithEffectiveVolatility)
{
    const double sigma = 0.2;
    for (double lambda : {1.0, 5.0 / 8.0, 0.75, 1.5}) {
        const double eff = sigma * std::sqrt(2.0 * lambda - 1.0);
        const HedgeSurface s = hedge_pde_solve(lognormal_problem(call_payoff(100.0), sigma, lambda));
        ASSERT_EQ(s.t.front(), 0.0);
        for (double spot : {90.0, 100.0, 110.0}) {
            EXPECT_NEAR(s.value_at(0, spot), oracle::bs_call(spot, 100.0, eff, 1.0), 2e-3)
                << "lambda " << lambda << " spot " << spot;
        }
        const HedgeSurface put = hedge_pde_solve(lognormal_problem(put_payoff(100.0), sigma, lambda));
        EXPECT_NEAR(put.value_at(0, 100.0), oracle::bs_put(100.0, 100.0, eff, 1.0), 2e-3);
    }
    EXPECT_NEAR(black_scholes_call(100.0, 100.0, 0.2, 1.0), oracle::bs_call(100.0, 100.0, 0.2, 1.0), 1e-12);
    EXPECT_NEAR(black_scholes_put(95.0, 100.0, 0.3, 0.5), oracle::bs_put(95.0, 100.0, 0.3, 0.5), 1e-12);
}

TEST(HedgePde, DeltaMatchesClosedForm)
{
    const HedgeSurface s = hedge_pde_solve(lognormal_problem(call_payoff(100.0), 0.2, 1.0));
    const double d1 = 0.5 * 0.2;
    EXPECT_NEAR(s.delta_at(0, 100.0), oracle::norm_cdf(d1), 1e-3);
    const double gamma = std::exp(-0.5 * d1 * d1) / kSqrt2Pi / (100.0 * 0.2);
    EXPECT_NEAR(s.gamma_at(0, 100.0), gamma, 1e-4);
}

TEST(HedgePde, AffinePayoffIsExact)
{
    const HedgeSurface s = hedge_pde_solve(lognormal_problem(linear_payoff(3.0, 0.5), 0.3, 1.2, 100));
    for (std::size_t k = 0; k < s.t.size(); k += 10) {
        for (std::size_t i = 0; i < s.p.size(); ++i) {
            ASSERT_NEAR(s.value[k][i], 3.0 + 0.5 * s.p[i], 1e-9);
        }
    }
    const HedgeInventory inv = hedge_inventory_vol(s, [](double, double p) { return 0.3 * p; }, 1e-6);
    for (const auto& row : inv.order_type) {
        for (OrderType o : row) {
            ASSERT_EQ(o, OrderType::None);
        }
    }
}

TEST(HedgePde, SecondOrderConvergence)
{
    const double exact = oracle::bs_call(100.0, 100.0, 0.2, 1.0);
    double prev = 0.0;
    for (std::size_t n : {50u, 100u, 200u}) {
        const double err = std::abs(hedge_pde_solve(lognormal_problem(call_payoff(100.0), 0.2, 1.0, n)).value_at(0, 100.0) - exact);
        if (prev > 0.0) {
            EXPECT_GE(prev / err, 3.0) << "n " << n;
        }
        prev = err;
    }
}

TEST(HedgePde, InventoryVolatilitySign)
{
    const StateFunction vol = [](double, double p) { return 0.2 * p; };
    const HedgeSurface lng = hedge_pde_solve(lognormal_problem(call_payoff(100.0), 0.2, 1.0, 200));
    const HedgeSurface sht = hedge_pde_solve(lognormal_problem([](double p) { return -std::max(p - 100.0, 0.0); }, 0.2, 1.0, 200));
    const HedgeInventory a = hedge_inventory_vol(lng, vol);
    const HedgeInventory b = hedge_inventory_vol(sht, vol);
    std::size_t i100 = 0;
    while (lng.p[i100] < 100.0) {
        ++i100;
    }
    EXPECT_EQ(a.order_type[0][i100], OrderType::Market);
    EXPECT_EQ(b.order_type[0][i100], OrderType::Limit);
    for (std::size_t k = 0; k + 1 < lng.t.size(); k += 7) {
        for (std::size_t i = 0; i < lng.p.size(); ++i) {
            const double g = lng.gamma[k][i];
            ASSERT_TRUE(g * a.l[k][i] >= 0.0);
            ASSERT_NEAR(a.l[k][i], g * 0.2 * lng.p[i], 1e-12 * (1 + std::abs(a.l[k][i])));
        }
    }
    EXPECT_EQ(to_string(OrderType::Limit), "LIMIT");
    EXPECT_EQ(to_string(OrderType::Market), "MARKET");
    EXPECT_EQ(to_string(OrderType::None), "NONE");
}

TEST(HedgePde, Validation)
{
    HedgeProblem pr = lognormal_problem(call_payoff(100.0), 0.2, 0.5);
    EXPECT_THROW(hedge_pde_solve(pr), ValidationError);
    pr.lambda_s = 1.0;
    pr.maturity = 0.0;
    EXPECT_THROW(hedge_pde_solve(pr), ValidationError);
    pr.maturity = 1.0;
    pr.grid.price_steps = 2;
    EXPECT_THROW(hedge_pde_solve(pr), ValidationError);
}

TEST(HedgePde, TabulatedPayoff)
{
    const Payoff f = tabulated_payoff({90.0, 100.0, 110.0}, {0.0, 0.0, 10.0});
    EXPECT_EQ(f(105.0), 5.0);
    EXPECT_EQ(f(120.0), 20.0);
    EXPECT_EQ(f(80.0), 0.0);
    const Payoff g = call_payoff(100.0);
    EXPECT_NEAR(hedge_pde_solve(lognormal_problem(f, 0.2, 1.0)).value_at(0, 100.0),
                hedge_pde_solve(lognormal_problem(g, 0.2, 1.0)).value_at(0, 100.0), 1e-6);
}

TEST(MarketMaker, ObjectiveExamples)
{
    const auto f = inverse_square_intensity();
    const auto rho = inverse_correlation();
    EXPECT_EQ(mm_objective(2.0, 0.0, f, rho), -2.0);
    EXPECT_NEAR(mm_objective(1.0, 2.0, f, rho), F_oracle(1.0, 2.0), 1e-15);
    EXPECT_NEAR(mm_objective(1.0, 2.0, f, [](double) { return 0.0; }), 2.0 / 9.0 / kSqrt2Pi, 1e-15);
}

TEST(MarketMaker, ExplicitPairOptimum)
{
    const auto f = inverse_square_intensity();
    const auto rho = inverse_correlation();
    double prevM = std::numeric_limits<double>::infinity();
    for (double a : {0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0}) {
        const MmOptimum o = mm_optimal_rescaled_spread(a, f, rho);
        EXPECT_GT(o.m, 0.0);
        EXPECT_NEAR(o.m, std::sqrt(1.0 + 3.0 * kSqrt2Pi * a), 1e-6);
        EXPECT_NEAR(o.m, explicit_rescaled_spread(a), 1e-6);
        EXPECT_NEAR(o.M, F_oracle(a, o.m), 1e-14);
        const double grid = oracle::grid_argmax([a](double x) { return F_oracle(a, x); }, 4.0 * o.m, 200000);
        EXPECT_NEAR(o.m, grid, 1e-5);
        EXPECT_LT(o.M, prevM);
        prevM = o.M;
    }
    EXPECT_EQ(explicit_rescaled_spread_unscaled(1.0), 2.0);
}

TEST(MarketMaker, ArgmaxInvariantUnderScaling)
{
    const auto f = inverse_square_intensity();
    const auto rho = inverse_correlation();
    const MmOptimum base = mm_optimal_rescaled_spread(0.7, f, rho);
    const MmOptimum scaled = mm_optimal_rescaled_spread(0.7, [&](double x) { return 5.0 * f(x); }, rho);
    EXPECT_NEAR(base.m, scaled.m, 1e-7);
    EXPECT_NEAR(5.0 * base.M, scaled.M, 1e-12);
}

TEST(MarketMaker, OtherPairAgainstGrid)
{
    const ScalarFunction f = [](double x) { return std::exp(-x); };
    const ScalarFunction rho = [](double x) { return 1.0 / (1.0 + x * x); };
    for (double a : {0.2, 1.0, 3.0}) {
        const MmOptimum o = mm_optimal_rescaled_spread(a, f, rho);
        const auto F = [&](double x) { return mm_objective(a, x, f, rho); };
        EXPECT_NEAR(o.m, oracle::grid_argmax(F, 20.0, 400000), 1e-4);
        EXPECT_GE(o.M, F(oracle::grid_argmax(F, 20.0, 400000)) - 1e-12);
    }
}

TEST(MarketMaker, SolverValidation)
{
    const auto f = inverse_square_intensity();
    const auto rho = inverse_correlation();
    EXPECT_THROW(mm_optimal_rescaled_spread(0.0, f, rho), ValidationError);
    EXPECT_THROW(mm_optimal_rescaled_spread(1.0, [](double x) { return x; }, rho), ValidationError);
}

TEST(MarketMaker, AlphaClosedForms)
{
    EXPECT_EQ(mm_alpha(price_model::Martingale{}, 0.3, 5.0, 1.0), 1.0);
    EXPECT_NEAR(mm_alpha(price_model::BlackScholes{0.0, 0.2}, 0.0, 100.0, 1.0), 1.0, 1e-15);
    const double mu = 0.1, sig = 0.3, tau = 0.6;
    const double g = std::exp(mu * tau);
    EXPECT_NEAR(mm_alpha(price_model::BlackScholes{mu, sig}, 0.4, 100.0, 1.0), mu / (sig * sig) * (g - 1) + g, 1e-12);
    // OU at its mean
    const price_model::OrnsteinUhlenbeck ou{2.0, 1.0, 0.5};
    EXPECT_NEAR(mm_alpha(ou, 0.0, 1.0, 1.0), std::exp(-2.0), 1e-15);
    EXPECT_GT(mm_alpha(ou, 0.0, 3.0, 1.0), mm_alpha(ou, 0.0, 1.5, 1.0));
    EXPECT_THROW(mm_alpha(price_model::Martingale{}, 2.0, 0.0, 1.0), ValidationError);
    EXPECT_THROW(mm_alpha(price_model::BlackScholes{0.0, 0.0}, 0.0, 1.0, 1.0), ValidationError);
}

TEST(MarketMaker, MartingaleSolution)
{
    MmProblem pr;
    pr.f = inverse_square_intensity();
    pr.rho = inverse_correlation();
    pr.model = price_model::Martingale{};
    pr.horizon = 2.0;
    std::vector<MmPathPoint> path;
    for (int k = 0; k <= 20; ++k) {
        path.push_back({0.1 * k, 1.0 + 0.01 * k, 0.4});
    }
    const MmSolution s = mm_solve(pr, path);
    const double m1 = explicit_rescaled_spread(1.0);
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        EXPECT_NEAR(s.spread[k], 0.4 * m1, 1e-6);
        EXPECT_NEAR(s.inventory_vol[k], 0.4 / ((1 + s.rescaled[k]) * (1 + s.rescaled[k])), 1e-14);
    }
    EXPECT_NEAR(s.expected_pnl, F_oracle(1.0, m1) * 0.16 * 2.0, 1e-10);
}

TEST(MarketMaker, MeanReversionWidensSpreadAwayFromMean)
{
    MmProblem pr;
    pr.f = inverse_square_intensity();
    pr.rho = inverse_correlation();
    pr.model = price_model::OrnsteinUhlenbeck{1.5, 0.0, 1.0};
    const MmSolution s = mm_solve(pr, {{0.0, 0.0, 1.0}, {0.1, 2.0, 1.0}});
    EXPECT_GT(s.spread[1], s.spread[0]);
}
