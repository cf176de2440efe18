#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lobkit/error.hpp"
#include "lobkit/gaussian.hpp"
#include "lobkit/limits.hpp"
#include "lobkit/parallel.hpp"
#include "lobkit/supply_demand.hpp"
#include "lobkit/time_change.hpp"
#include "oracles.hpp"

using namespace lobkit;

namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

ItoCoefficients flat(double sigma = 1.0, double l = 1.0, double rho = 0.0, double s = 1.0)
{
    return ItoCoefficients::constant(0.0, sigma, 0.0, l, rho, s);
}

SimConfig config(std::size_t N, std::size_t M, std::uint64_t seed = 42)
{
    SimConfig c;
    c.steps_per_unit = N;
    c.paths = M;
    c.seed = seed;
    return c;
}

// convex cost with linear-growth derivative through the origin
CostFunction random_cost(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<Knot> k;
    double x = 0.0, y = 0.0;
    std::vector<Knot> right, left;
    for (int i = 0; i < 4; ++i) {
        x += u(rng);
        y += u(rng);
        right.push_back({x, y});
    }
    x = 0.0;
    y = 0.0;
    for (int i = 0; i < 4; ++i) {
        x -= u(rng);
        y -= u(rng);
        left.insert(left.begin(), Knot{x, y});
    }
    k = left;
    k.push_back({0.0, 0.0});
    k.insert(k.end(), right.begin(), right.end());
    return CostFunction(MonotoneGraph(k, Tail::Linear, Tail::Linear));
}

// odd c' (even c), the class the supply-demand limits are stated for
CostFunction random_symmetric_cost(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<Knot> right{{0.0, 0.0}};
    for (int i = 0; i < 4; ++i) {
        right.push_back({right.back().x + u(rng), right.back().y + u(rng)});
    }
    std::vector<Knot> k;
    for (std::size_t i = right.size() - 1; i > 0; --i) {
        k.push_back({-right[i].x, -right[i].y});
    }
    k.insert(k.end(), right.begin(), right.end());
    return CostFunction(MonotoneGraph(k, Tail::Linear, Tail::Linear));
}

}  // namespace

TEST(Phi, ClosedFormExamples)
{
    EXPECT_NEAR(phi(1.0, functional::Abs{}), 0.7978845608028654, 1e-15);
    for (double s : {0.1, 1.0, 7.5}) {
        EXPECT_NEAR(phi(s, functional::Square{}), s * s, 1e-12 * s * s);
        EXPECT_NEAR(phi(s, functional::SquareMinusAbs{2.0}), s * s - 2.0 * s * kSqrt2OverPi, 1e-12 * (1 + s * s));
    }
    EXPECT_NEAR(phi(kSqrt2OverPi * 3.0, functional::SquareMinusAbs{3.0}), 0.0, 1e-14);
}

TEST(Phi, ClosedFormsMatchQuadratureAcrossScales)
{
    for (double s : {1e-3, 1e-2, 0.3, 1.0, 10.0, 1e2, 1e3}) {
        auto relerr = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
        EXPECT_LT(relerr(phi_quadrature(s, [](double y) { return std::abs(y); }), phi(s, functional::Abs{})), 1e-10);
        EXPECT_LT(relerr(phi_quadrature(s, [](double y) { return y * y; }), phi(s, functional::Square{})), 1e-10);
        const double c = 0.5 * s;
        EXPECT_LT(relerr(phi_quadrature(s, [c](double y) { return y * y - c * std::abs(y); }),
                         phi(s, functional::SquareMinusAbs{c})),
                  1e-10);
        // y * sin(y) through integration by parts
        const double ibp = phi(s, functional::IdTimes{[](double y) { return std::sin(y); },
                                                      [](double y) { return std::cos(y); }});
        EXPECT_NEAR(ibp, s * s * std::exp(-0.5 * s * s), 1e-12 * std::max(1.0, s * s));
    }
}

TEST(Phi, PiecewiseAgainstSimpsonOracle)
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 10; ++i) {
        const CostFunction c = random_cost(rng);
        std::vector<double> kinks;
        for (const Knot& k : c.derivative().knots()) {
            kinks.push_back(k.x);
        }
        for (double l : {0.3, 1.0, 2.5}) {
            const double a = oracle::gauss_expect(l, [&](double y) { return c(y); }, kinks);
            const double b = oracle::gauss_expect(l, [&](double y) { return std::pow(c.marginal(y), 2); }, kinks);
            const double d = oracle::gauss_expect(l, [&](double y) { return y * c.marginal(y); }, kinks);
            EXPECT_NEAR(phi_cost(l, c), a, 1e-9 * std::max(1.0, a));
            EXPECT_NEAR(phi_marginal_square(l, c), b, 1e-9 * std::max(1.0, b));
            EXPECT_NEAR(phi_identity_marginal(l, c), d, 1e-9 * std::max(1.0, d));
        }
    }
}

TEST(Phi, CostFunctionals)
{
    EXPECT_NEAR(phi_cost(1.0, CostFunction::quadratic(1.0)), 0.5, 1e-14);
    EXPECT_NEAR(phi_cost(2.0, CostFunction::proportional(0.01)), 0.02 * 2.0 / kSqrt2Pi, 1e-15);
    EXPECT_NEAR(phi_marginal_square(1.0, CostFunction::quadratic(2.0)), 0.25, 1e-14);
    EXPECT_NEAR(phi_identity_marginal(1.0, CostFunction::quadratic(2.0)), 0.5, 1e-14);
    EXPECT_NEAR(phi_second_derivative(3.0, CostFunction::quadratic(2.0)), 0.5, 1e-14);
    const CostFunction bounded(MonotoneGraph({{-1, -1}, {-1, 0}, {1, 0}, {1, 1}}, Tail::Vertical, Tail::Vertical));
    EXPECT_THROW(phi_cost(1.0, bounded), ValidationError);
    EXPECT_THROW(check_cost_growth(bounded), ValidationError);
    EXPECT_NO_THROW(check_cost_growth(CostFunction::quadratic(1.0)));
}

TEST(Simulate, GoldenPaths)
{
    SimConfig cfg = config(4, 2, 2024);
    const PathBundle b = simulate_paths(flat(), cfg);
    const std::vector<double> p0{0, 1.0688783419332781, 2.5883744637906703, 1.9897946284293608, 2.2913565711924164};
    const std::vector<double> L0{0, 1.0360974858883516, 0.39412831545516513, 1.7060130709670189, 1.3738143562784524};
    const std::vector<double> p1{0, -0.34114873424531889, 0.35214641274959668, -0.093166801846009395,
                                 -0.30553948990210456};
    const std::vector<double> L1{0, 0.19567218943839587, 0.39700451419733246, -0.6717645271690591,
                                 -0.23562749239819147};
    EXPECT_EQ(b.p[0], p0);
    EXPECT_EQ(b.L[0], L0);
    EXPECT_EQ(b.p[1], p1);
    EXPECT_EQ(b.L[1], L1);
}

TEST(Simulate, MatchesStraightLineReimplementation)
{
    const std::uint64_t seed = 99;
    const double mu = 0.3, sigma = 0.7, bb = -0.2, l = 1.3, rho = -0.4;
    SimConfig cfg = config(50, 3, seed);
    cfg.horizon = 2.0;
    ItoCoefficients c = ItoCoefficients::constant(mu, sigma, bb, l, rho, 1.0);
    c.p0 = 10.0;
    c.L0 = -2.0;
    const PathBundle b = simulate_paths(c, cfg);
    for (std::uint64_t i = 0; i < 3; ++i) {
        std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
        std::mt19937_64 eng(sq);
        std::normal_distribution<double> z;
        const double dt = 1.0 / 50.0;
        double p = 10.0, L = -2.0;
        ASSERT_EQ(b.p[i].size(), 101u);
        for (std::size_t k = 1; k <= 100; ++k) {
            const double z1 = z(eng), z2 = z(eng);
            p += mu * dt + sigma * std::sqrt(dt) * z1;
            L += bb * dt + l * std::sqrt(dt) * (rho * z1 + std::sqrt(1 - rho * rho) * z2);
            EXPECT_NEAR(b.p[i][k], p, 1e-12);
            EXPECT_NEAR(b.L[i][k], L, 1e-12);
        }
    }
}

TEST(Simulate, ThreadCountDoesNotChangePaths)
{
    SimConfig a = config(100, 37, 5);
    SimConfig b = a;
    b.threads = 4;
    const PathBundle x = simulate_paths(flat(1.0, 1.0, 0.3), a);
    const PathBundle y = simulate_paths(flat(1.0, 1.0, 0.3), b);
    EXPECT_EQ(x.p, y.p);
    EXPECT_EQ(x.L, y.L);
    const ConvergenceReport r1 = spread_cost_limit_check(flat(), a);
    const ConvergenceReport r4 = spread_cost_limit_check(flat(), b);
    EXPECT_EQ(r1.mean, r4.mean);
    EXPECT_EQ(r1.std_error, r4.std_error);
}

TEST(Simulate, PerfectNegativeCorrelation)
{
    const PathBundle b = simulate_paths(flat(1.0, 1.0, -1.0), config(200, 1));
    std::vector<double> dp, dL;
    for (std::size_t k = 0; k + 1 < b.p[0].size(); ++k) {
        dp.push_back(b.p[0][k + 1] - b.p[0][k]);
        dL.push_back(b.L[0][k + 1] - b.L[0][k]);
    }
    const double mp = oracle::mean(dp), mL = oracle::mean(dL);
    double spp = 0, sLL = 0, spL = 0;
    for (std::size_t k = 0; k < dp.size(); ++k) {
        spp += (dp[k] - mp) * (dp[k] - mp);
        sLL += (dL[k] - mL) * (dL[k] - mL);
        spL += (dp[k] - mp) * (dL[k] - mL);
    }
    EXPECT_NEAR(spL / std::sqrt(spp * sLL), -1.0, 1e-12);
}

TEST(Simulate, VarianceOfIncrement)
{
    const double sigma = 1.7;
    const PathBundle b = simulate_paths(flat(sigma), config(16, 10000, 7));
    std::vector<double> d, d2;
    for (std::size_t i = 0; i < b.paths(); ++i) {
        d.push_back(b.p[i].back() - b.p[i].front());
    }
    const double m = oracle::mean(d);
    for (double x : d) {
        d2.push_back((x - m) * (x - m) * 10000.0 / 9999.0);
    }
    EXPECT_NEAR(oracle::mean(d2), sigma * sigma, 3.0 * oracle::std_error(d2));
}

TEST(Simulate, SpreadAndValidation)
{
    const PathBundle b = simulate_paths(flat(1.0, 1.0, 0.0, 0.02), config(400, 1));
    EXPECT_NEAR(b.spread[0][3], 0.02 / 20.0, 1e-17);
    EXPECT_EQ(b.p[0].size(), 401u);
    EXPECT_THROW(simulate_paths(flat(), config(1, 1)), ValidationError);
    EXPECT_THROW(simulate_paths(flat(), config(4, 0)), ValidationError);
    SimConfig c = config(4, 1);
    c.horizon = 0.0;
    EXPECT_THROW(simulate_paths(flat(), c), ValidationError);
    EXPECT_THROW(simulate_paths(flat(1.0, 1.0, 1.5), config(4, 1)), ValidationError);
    ItoCoefficients bad = flat();
    bad.sigma = [](double, double) { return std::nan(""); };
    EXPECT_THROW(simulate_paths(bad, config(4, 1)), ValidationError);
}

TEST(SpreadLimit, ConvergesToClosedForm)
{
    const ConvergenceReport r = spread_cost_limit_check(flat(1.0, 1.0, 0.0, 0.02), config(10000, 200));
    EXPECT_NEAR(r.target, 0.02 / kSqrt2Pi, 1e-15);
    EXPECT_TRUE(r.passed);
    EXPECT_LE(std::abs(r.mean - r.target), 3.0 * r.std_error + r.bias_allowance);
}

TEST(SpreadLimit, NoTradingAndLinearity)
{
    const ConvergenceReport zero = spread_cost_limit_check(flat(1.0, 0.0), config(1000, 20));
    EXPECT_EQ(zero.mean, 0.0);
    EXPECT_EQ(zero.target, 0.0);
    const ConvergenceReport a = spread_cost_limit_check(flat(1.0, 1.0, 0.0, 0.5), config(1000, 20));
    const ConvergenceReport b = spread_cost_limit_check(flat(1.0, 1.0, 0.0, 1.0), config(1000, 20));
    EXPECT_NEAR(b.target, 2.0 * a.target, 1e-15);
    EXPECT_NEAR(b.mean, 2.0 * a.mean, 1e-15);
}

TEST(SpreadLimit, BiasShrinksWithN)
{
    const ConvergenceReport lo = spread_cost_limit_check(flat(), config(10000, 200, 3));
    const ConvergenceReport hi = spread_cost_limit_check(flat(), config(40000, 200, 3));
    EXPECT_LE(std::abs(hi.bias), std::abs(lo.bias) + 3.0 * hi.std_error);
}

TEST(Recovery, BoundaryAndClosedForms)
{
    const double s = 1.0;
    const ConvergenceReport b = recovery_limit_check(flat(kSqrt2OverPi * s, 1.0, 0.0, s), config(10000, 200), 0.0, 1.0);
    EXPECT_NEAR(b.target, 0.0, 1e-15);
    EXPECT_LE(std::abs(b.mean), 3.0 * b.std_error);

    const ConvergenceReport w = recovery_limit_check(flat(1.0, 1.0, 0.0, 2.0), config(10000, 200), 0.25, 0.75);
    EXPECT_NEAR(w.target, (1.0 - 2.0 * kSqrt2OverPi) * 0.5, 1e-12);
    EXPECT_TRUE(w.passed);

    const ConvergenceReport q = recovery_limit_check(flat(1.3, 1.0, 0.0, 0.0), config(10000, 100), 0.0, 0.5);
    EXPECT_NEAR(q.target, 1.69 * 0.5, 1e-12);
    EXPECT_TRUE(q.passed);
    EXPECT_THROW(recovery_statistic(flat(), config(100, 1), 0.6, 0.5), ValidationError);
}

TEST(GeneralCost, QuadraticAndProportional)
{
    const GeneralCostReport q =
        general_cost_limit_check(flat(), CostProcess(CostFunction::quadratic(1.0)), config(10000, 200));
    EXPECT_NEAR(q.cost.target, 0.5, 1e-14);
    EXPECT_LE(std::abs(q.cost.mean - 0.5), 3.0 * q.cost.std_error);
    // sigma^2 - Phi((c')^2) = 1 - 1
    EXPECT_NEAR(q.volatility_bound.target, 0.0, 1e-14);

    const ItoCoefficients c = flat(1.0, 1.0, 0.0, 0.02);
    const GeneralCostReport g = general_cost_limit_check(c, CostProcess(CostFunction::proportional(0.01)), config(10000, 50));
    const ConvergenceReport s = spread_cost_limit_check(c, config(10000, 50));
    EXPECT_NEAR(g.cost.target, s.target, 1e-15);
    EXPECT_NEAR(g.cost.mean, s.mean, 1e-12);
}

TEST(GeneralCost, RandomPiecewiseCostAgainstQuadrature)
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 3; ++i) {
        const CostFunction cf = random_cost(rng);
        const GeneralCostReport r = general_cost_limit_check(flat(1.0, 0.8), CostProcess(cf), config(10000, 100, 50 + i));
        EXPECT_NEAR(r.cost.target, oracle::gauss_expect(0.8, [&](double y) { return cf(y); }), 1e-9);
        EXPECT_TRUE(r.cost.passed) << r.cost.mean << " vs " << r.cost.target;
    }
}

TEST(GeneralCost, TimeDependentCosts)
{
    const CostProcess cp({0.0, 0.5}, {CostFunction::quadratic(1.0), CostFunction::quadratic(0.5)});
    EXPECT_EQ(cp.at(0.2)(2.0), 2.0);
    EXPECT_EQ(cp.at(0.7)(2.0), 4.0);
    const GeneralCostReport r = general_cost_limit_check(flat(), cp, config(10000, 100));
    EXPECT_NEAR(r.cost.target, 0.5 * 0.5 + 0.5 * 1.0, 1e-3);
    EXPECT_TRUE(r.cost.passed);
}

TEST(Covariation, SignAndTakerSymmetry)
{
    const ConvergenceReport neg = covariation_limit_check(flat(1.0, 1.0, -0.5), config(10000, 100));
    EXPECT_NEAR(neg.target, -0.5, 1e-12);
    EXPECT_LE(neg.mean, neg.target + 3.0 * neg.std_error);
    EXPECT_TRUE(neg.passed);
    // the taker holds -L: same paths, covariation of opposite sign, same spread cost
    const ConvergenceReport taker = covariation_limit_check(flat(1.0, -1.0, -0.5), config(10000, 100));
    EXPECT_NEAR(taker.mean, -neg.mean, 1e-12);
    EXPECT_NEAR(taker.target, 0.5, 1e-12);
    EXPECT_EQ(spread_cost_limit_check(flat(1.0, -1.0, -0.5), config(1000, 10)).mean,
              spread_cost_limit_check(flat(1.0, 1.0, -0.5), config(1000, 10)).mean);
}

TEST(TimeChange, ConstantRate)
{
    ItoCoefficients c;
    c.mu = [](double t, double p) { return t + p; };
    c.sigma = [](double t, double) { return 1.0 + t; };
    c.b = [](double t) { return 2.0 * t; };
    c.l = [](double t) { return 3.0 - t; };
    c.s = [](double t, double) { return 0.5 + t; };
    c.rho = [](double t) { return -0.1 * t; };
    const ItoCoefficients d = time_change(c, constant_fn(2.0), 1.0);
    for (double t : {0.0, 0.1, 0.25}) {
        EXPECT_NEAR(d.mu(t, 1.0), 4.0 * c.mu(4.0 * t, 1.0), 1e-12);
        EXPECT_NEAR(d.sigma(t, 1.0), 2.0 * c.sigma(4.0 * t, 1.0), 1e-12);
        EXPECT_NEAR(d.b(t), 4.0 * c.b(4.0 * t), 1e-12);
        EXPECT_NEAR(d.l(t), 2.0 * c.l(4.0 * t), 1e-12);
        EXPECT_NEAR(d.s(t, 1.0), 2.0 * c.s(4.0 * t, 1.0), 1e-12);
        EXPECT_NEAR(d.rho(t), c.rho(4.0 * t), 1e-12);
    }
    const ItoCoefficients id = time_change(c, constant_fn(1.0), 1.0);
    for (double t : {0.0, 0.3, 0.9}) {
        EXPECT_NEAR(id.mu(t, 2.0), c.mu(t, 2.0), 1e-14);
        EXPECT_NEAR(id.s(t, 2.0), c.s(t, 2.0), 1e-14);
    }
}

TEST(TimeChange, ClockQuadratureAndSpreadModelStability)
{
    const TradingClock clock([](double t) { return 1.0 + t; }, 2.0);
    for (double t : {0.0, 0.3, 1.0, 1.77, 2.0}) {
        EXPECT_NEAR(clock(t), t + t * t + t * t * t / 3.0, 1e-12);
    }
    EXPECT_THROW(TradingClock([](double t) { return 1.0 - t; }, 2.0), ValidationError);

    const double lambda = 1.3;
    ItoCoefficients c;
    c.sigma = [](double t, double p) { return 0.2 + 0.1 * std::sin(t) + 0.01 * p; };
    c.s = [lambda, sig = c.sigma](double t, double p) { return lambda * sig(t, p); };
    const ItoCoefficients d = time_change(c, [](double t) { return 1.5 + std::cos(3 * t); }, 1.0);
    for (int k = 0; k <= 20; ++k) {
        const double t = k / 20.0;
        EXPECT_NEAR(d.s(t, 3.0), lambda * d.sigma(t, 3.0), 1e-14);
    }
}

TEST(SupplyDemand, FlatBookLinearImpact)
{
    ItoCoefficients c = flat();
    c.lambda_r = 0.7;
    const double m = 2.5;
    const PathBundle b =
        supply_demand_simulate(c, CostProcess(CostFunction::quadratic(m)), config(1000, 3), SupplyDemandDriver::InventoryGiven);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k + 1 < b.p[i].size(); ++k) {
            const double dL = b.L[i][k + 1] - b.L[i][k];
            const double dp = b.p[i][k + 1] - b.p[i][k];
            ASSERT_NEAR(dp, -(0.7 / m) * dL, 1e-15);
        }
    }
    c.lambda_r = 1e-12;
    const PathBundle still =
        supply_demand_simulate(c, CostProcess(CostFunction::quadratic(m)), config(1000, 1), SupplyDemandDriver::InventoryGiven);
    for (double p : still.p[0]) {
        EXPECT_NEAR(p, still.p[0][0], 1e-10);
    }
    EXPECT_EQ(parse_driver("price"), SupplyDemandDriver::PriceGiven);
    EXPECT_THROW(parse_driver("other"), ValidationError);
}

TEST(SupplyDemand, PriceDriverInvertsTheBook)
{
    ItoCoefficients c = flat(0.5);
    c.lambda_r = 0.8;
    const PathBundle b =
        supply_demand_simulate(c, CostProcess(CostFunction::quadratic(2.0)), config(1000, 2), SupplyDemandDriver::PriceGiven);
    for (std::size_t k = 0; k + 1 < b.p[0].size(); ++k) {
        const double dL = b.L[0][k + 1] - b.L[0][k];
        const double dp = b.p[0][k + 1] - b.p[0][k];
        ASSERT_NEAR(dL, -2.0 * dp / 0.8, 1e-13);
    }
}

TEST(SupplyDemand, MomentsAtFullRecovery)
{
    for (auto driver : {SupplyDemandDriver::InventoryGiven, SupplyDemandDriver::PriceGiven}) {
        ItoCoefficients c = ItoCoefficients::constant(0.1, 1.0, 0.2, 1.0, 0.0, 1.0);
        const SupplyDemandReport r =
            supply_demand_moments(c, CostProcess(CostFunction::quadratic(1.0)), config(10000, 200), driver);
        EXPECT_NEAR(r.volatility.target, 1.0, 1e-12);
        EXPECT_TRUE(r.volatility.passed) << to_string(driver);
        EXPECT_TRUE(r.drift.passed) << to_string(driver);
        EXPECT_TRUE(r.covariation.passed) << to_string(driver);
        EXPECT_NEAR(r.covariation.target, -1.0, 1e-12);
    }
}

TEST(SupplyDemand, NonlinearBookInventoryDriver)
{
    std::mt19937_64 rng(31);
    const CostFunction cf = random_symmetric_cost(rng);
    ItoCoefficients c = ItoCoefficients::constant(0.0, 1.0, 0.3, 0.9, 0.0, 1.0);
    c.lambda_r = 0.6;
    const SupplyDemandReport r =
        supply_demand_moments(c, CostProcess(cf), config(10000, 200), SupplyDemandDriver::InventoryGiven);
    const double vol = 0.6 * std::sqrt(oracle::gauss_expect(0.9, [&](double y) { return std::pow(cf.marginal(y), 2); }));
    EXPECT_NEAR(r.volatility.target, vol, 1e-8);
    EXPECT_TRUE(r.volatility.passed);
    EXPECT_TRUE(r.drift.passed);
    EXPECT_TRUE(r.covariation.passed);
}

TEST(FlatBook, OneStepAndRoundTrip)
{
    const std::vector<double> L{0.0, 1.0};
    const auto X = flat_book_wealth(L, 1.0, 1.0);
    EXPECT_EQ(X[1], -0.5);
    const std::vector<double> trip{0.0, 1.5, -0.25, 3.0, 1.5, 0.0};
    const auto Y = flat_book_wealth(trip, 1.0, 1.0);
    EXPECT_NEAR(Y.back(), 0.0, 1e-15);
    const auto I = flat_book_identity(trip, 1.0, 1.0);
    for (std::size_t n = 0; n < trip.size(); ++n) {
        EXPECT_NEAR(Y[n], -(trip[n] * trip[n]) / 2.0, 1e-15);
        EXPECT_NEAR(Y[n], I[n], 1e-15);
    }
}

TEST(FlatBook, IdentityOverRandomWalk)
{
    SimConfig cfg = config(10000, 5);
    const FlatBookReport r = flat_book_identity_check(cfg, 1.0, 1.0, flat());
    EXPECT_TRUE(r.passed);
    EXPECT_LE(r.max_identity_error, 1e-12);
    EXPECT_LE(r.max_round_trip_error, 1e-12);
    EXPECT_GT(r.max_printed_form_error, 0.1);
    // lambda < 1 keeps the (1 - lambda) sum of squared steps
    const FlatBookReport partial = flat_book_identity_check(cfg, 0.5, 2.0, flat());
    EXPECT_LE(partial.max_identity_error, 1e-12);
}
