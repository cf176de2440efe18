#include "lobkit/market_maker.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "lobkit/error.hpp"

namespace lobkit {

namespace {
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
}

double mm_objective(double a, double x, const ScalarFunction& f, const ScalarFunction& rho)
{
    const double fx = f(x);
    return x * fx * kInvSqrt2Pi - a * rho(x) * fx;
}

MmOptimum mm_optimal_rescaled_spread(double a, const ScalarFunction& f, const ScalarFunction& rho,
                                     MmSolverOptions options)
{
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ValidationError("mm: a must be positive");
    }
    if (!f || !rho || options.scan_points < 8) {
        throw ValidationError("mm: f, rho and at least 8 scan points are required");
    }
    auto F = [&](double x) { return mm_objective(a, x, f, rho); };

    double upper = a + 1.0;
    for (int falls = 0; falls < 3;) {
        if (upper > options.max_upper) {
            throw ValidationError("mm: F_a does not decay; check that x f(x) -> 0");
        }
        falls = F(2.0 * upper) < F(upper) ? falls + 1 : 0;
        upper *= 2.0;
    }

    const std::size_t n = options.scan_points;
    std::vector<double> xs(n + 1), Fs(n + 1);
    double prev_f = f(0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        xs[i] = upper * static_cast<double>(i) / static_cast<double>(n);
        const double fx = f(xs[i]);
        if (!(fx > 0.0) || !std::isfinite(fx)) {
            throw ValidationError("mm: fill intensity f must be positive");
        }
        if (fx > prev_f * (1.0 + 1e-12)) {
            throw ValidationError("mm: fill intensity f must be decreasing (increase near x = " +
                                  std::to_string(xs[i]) + ")");
        }
        prev_f = fx;
        Fs[i] = F(xs[i]);
    }

    MmOptimum out;
    out.scan_upper = upper;
    out.M = -std::numeric_limits<double>::infinity();
    const int bits = std::numeric_limits<double>::digits / 2;
    for (std::size_t i = 0; i <= n; ++i) {
        const bool left_ok = i == 0 || Fs[i] >= Fs[i - 1];
        const bool right_ok = i == n || Fs[i] > Fs[i + 1];
        if (!left_ok || !right_ok) {
            continue;
        }
        double x_best = xs[i];
        double f_best = Fs[i];
        if (i > 0 && i < n) {
            double lo = xs[i - 1];
            double hi = xs[i + 1];
            std::uintmax_t iters = 200;
            const auto r = boost::math::tools::brent_find_minima([&](double x) { return -F(x); }, lo, hi, bits, iters);
            if (-r.second >= f_best) {
                x_best = r.first;
                f_best = -r.second;
            }
        }
        out.local_maxima.push_back(x_best);
        if (f_best > out.M + options.tolerance * std::max(1.0, std::abs(f_best))) {
            out.M = f_best;
            out.m = x_best;
        }
    }
    return out;
}

double mm_alpha(const PriceModel& model, double t, double p_t, double T)
{
    if (!(t <= T)) {
        throw ValidationError("mm: alpha needs t <= T");
    }
    const double tau = T - t;
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, price_model::Martingale>) {
                return 1.0;
            } else if constexpr (std::is_same_v<M, price_model::BlackScholes>) {
                if (!(m.sigma > 0.0)) {
                    throw ValidationError("mm: Black-Scholes sigma must be positive");
                }
                const double g = std::exp(m.mu * tau);
                return m.mu / (m.sigma * m.sigma) * (g - 1.0) + g;
            } else {
                if (!(m.sigma > 0.0) || !(m.reversion > 0.0)) {
                    throw ValidationError("mm: OU sigma and reversion must be positive");
                }
                const double g = std::exp(-m.reversion * tau);
                const double d = p_t - m.p0;
                return -m.reversion / (m.sigma * m.sigma) * d * d * (g - 1.0) + g;
            }
        },
        model);
}

ScalarFunction inverse_square_intensity()
{
    return [](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); };
}

ScalarFunction inverse_correlation()
{
    return [](double x) { return 1.0 / (1.0 + x); };
}

double explicit_rescaled_spread(double a)
{
    return std::sqrt(1.0 + 3.0 * std::sqrt(2.0 * std::numbers::pi) * a);
}

double explicit_rescaled_spread_unscaled(double a)
{
    return std::sqrt(1.0 + 3.0 * a);
}

MmSolution mm_solve(const MmProblem& problem, const std::vector<MmPathPoint>& path)
{
    if (path.empty()) {
        throw ValidationError("mm: empty path");
    }
    MmSolution out;
    std::map<double, MmOptimum> cache;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const MmPathPoint& pt = path[k];
        if (k > 0 && !(pt.t >= path[k - 1].t)) {
            throw ValidationError("mm: path times must be non-decreasing");
        }
        if (!(pt.sigma > 0.0)) {
            throw ValidationError("mm: sigma_t must be positive");
        }
        const double alpha = mm_alpha(problem.model, pt.t, pt.p, problem.horizon);
        auto it = cache.find(alpha);
        if (it == cache.end()) {
            it = cache.emplace(alpha, mm_optimal_rescaled_spread(alpha, problem.f, problem.rho, problem.options)).first;
        }
        const MmOptimum& opt = it->second;
        out.t.push_back(pt.t);
        out.alpha.push_back(alpha);
        out.rescaled.push_back(opt.m);
        out.spread.push_back(pt.sigma * opt.m);
        out.inventory_vol.push_back(pt.sigma * problem.f(opt.m));
        out.pnl_rate.push_back(opt.M * pt.sigma * pt.sigma);
    }
    for (std::size_t k = 1; k < path.size(); ++k) {
        out.expected_pnl += 0.5 * (out.t[k] - out.t[k - 1]) * (out.pnl_rate[k] + out.pnl_rate[k - 1]);
    }
    return out;
}

}  // namespace lobkit
