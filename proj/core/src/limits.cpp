#include "lobkit/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lobkit/error.hpp"
#include "lobkit/gaussian.hpp"
#include "lobkit/parallel.hpp"

namespace lobkit {

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);
const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

void require_unbounded(const CostFunction& c)
{
    if (!c.unbounded_domain()) {
        throw ValidationError("cost function has a bounded domain; Gaussian functional is infinite");
    }
}

}  // namespace

bool ConvergenceReport::within(double sigmas) const noexcept
{
    return std::abs(mean - target) <= sigmas * std_error + bias_allowance;
}

CostProcess::CostProcess(CostFunction constant) : CostProcess({0.0}, {std::move(constant)}) {}

CostProcess::CostProcess(std::vector<double> starts, std::vector<CostFunction> costs)
    : starts_(std::move(starts)), costs_(std::move(costs))
{
    if (starts_.empty() || starts_.size() != costs_.size()) {
        throw ValidationError("cost process needs one start time per cost function");
    }
    if (starts_.front() != 0.0 || !std::is_sorted(starts_.begin(), starts_.end())) {
        throw ValidationError("cost process start times must begin at 0 and increase");
    }
    for (const CostFunction& c : costs_) {
        shapes_.push_back(c.derivative().inverse());
    }
}

std::size_t CostProcess::index(double t) const
{
    const auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
    return it == starts_.begin() ? 0 : static_cast<std::size_t>(it - starts_.begin()) - 1;
}

const CostFunction& CostProcess::at(double t) const
{
    return costs_[index(t)];
}

const MonotoneGraph& CostProcess::shape_derivative(double t) const
{
    return shapes_[index(t)];
}

double phi_cost(double l, const CostFunction& c)
{
    require_unbounded(c);
    return gaussian_expectation(c.derivative().integral_pieces(), std::abs(l));
}

double phi_marginal_square(double l, const CostFunction& c)
{
    require_unbounded(c);
    return gaussian_expectation(c.derivative().square_pieces(), std::abs(l));
}

double phi_identity_marginal(double l, const CostFunction& c)
{
    require_unbounded(c);
    return gaussian_expectation(c.derivative().identity_times_pieces(), std::abs(l));
}

double phi_second_derivative(double l, const CostFunction& c)
{
    if (l == 0.0) {
        throw ValidationError("Phi_0(c'') needs a pointwise second derivative at 0");
    }
    return phi_identity_marginal(l, c) / (l * l);
}

void check_cost_growth(const CostFunction& c)
{
    require_unbounded(c);
    if (!c.derivative().passes_through_origin()) {
        throw ValidationError("cost function must satisfy c(0) = 0 with 0 in c'(0)");
    }
    // c convex piecewise quadratic: c(l) / l^2 must stay bounded far out
    double prev_ratio = 0.0;
    for (double l = 1.0; l <= 1e12; l *= 10.0) {
        for (double sgn : {-1.0, 1.0}) {
            const double v = c(sgn * l);
            if (!std::isfinite(v) || v < 0.0) {
                throw ValidationError("cost function violates the growth condition at l = " +
                                      std::to_string(sgn * l));
            }
            prev_ratio = std::max(prev_ratio, v / (l * l));
        }
    }
    if (!std::isfinite(prev_ratio)) {
        throw ValidationError("cost function grows faster than quadratically");
    }
}

namespace detail {

bool has_coarse_level(const SimConfig& cfg)
{
    return cfg.steps_per_unit % 4 == 0 && cfg.steps() >= 4;
}

ConvergenceReport assemble_report(std::string name, const SimConfig& cfg, std::span<const double> fine,
                                  std::span<const double> coarse, std::span<const double> target)
{
    std::vector<double> diff(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
        diff[i] = fine[i] - target[i];
    }
    ConvergenceReport r;
    r.name = std::move(name);
    r.steps_per_unit = cfg.steps_per_unit;
    r.paths = fine.size();
    r.mean = summarize(fine).mean;
    r.target = summarize(target).mean;
    r.std_error = summarize(diff).std_error;
    r.bias = r.mean - r.target;
    if (!coarse.empty()) {
        r.coarse_mean = summarize(coarse).mean;
        r.coarse_bias = r.coarse_mean - r.target;
        r.bias_allowance = std::abs(r.coarse_bias - r.bias);
    } else {
        r.coarse_mean = r.mean;
        r.coarse_bias = r.bias;
    }
    r.passed = r.within(3.0);
    return r;
}

ConvergenceReport run_convergence(std::string name, const ItoCoefficients& coeffs, const SimConfig& cfg,
                                  const GridStatistic& statistic, const GridStatistic& target)
{
    cfg.validate();
    const std::size_t steps = cfg.steps();
    const bool with_coarse = has_coarse_level(cfg);
    std::vector<double> fine(cfg.paths), coarse(with_coarse ? cfg.paths : 0), goal(cfg.paths);
    for_each_path(coeffs, cfg, [&](std::size_t i, std::span<const double> p, std::span<const double> L) {
        GridView view{p, L, 1, steps, static_cast<double>(cfg.steps_per_unit)};
        fine[i] = statistic(view);
        goal[i] = target(view);
        if (with_coarse) {
            GridView c{p, L, 4, steps / 4, static_cast<double>(cfg.steps_per_unit) / 4.0};
            coarse[i] = statistic(c);
        }
    });
    return assemble_report(std::move(name), cfg, fine, coarse, goal);
}

}  // namespace detail

using detail::GridView;

ConvergenceReport spread_cost_limit_check(const ItoCoefficients& coeffs, const SimConfig& cfg)
{
    auto stat = [&](const GridView& g) {
        std::vector<double> terms(g.steps);
        const double inv_sqrt_n = 1.0 / std::sqrt(g.n);
        for (std::size_t k = 0; k < g.steps; ++k) {
            const double s = coeffs.s(g.time(k), g.price(k));
            terms[k] = 0.5 * s * std::abs(g.inventory(k + 1) - g.inventory(k)) * inv_sqrt_n;
        }
        return pairwise_sum(terms);
    };
    auto target = [&](const GridView& g) {
        std::vector<double> terms(g.steps);
        for (std::size_t k = 0; k < g.steps; ++k) {
            const double t = g.time(k);
            terms[k] = coeffs.s(t, g.price(k)) * std::abs(coeffs.l(t)) / kSqrt2Pi / g.n;
        }
        return pairwise_sum(terms);
    };
    return detail::run_convergence("spread-cost", coeffs, cfg, stat, target);
}

namespace {

void check_window(const SimConfig& cfg, double t1, double t2)
{
    if (!(t1 >= 0.0) || !(t2 > t1) || t2 > cfg.horizon + 1e-12) {
        throw ValidationError("recovery window needs 0 <= t1 < t2 <= T");
    }
}

std::pair<std::size_t, std::size_t> index_range(const GridView& g, double t1, double t2)
{
    const auto lo = static_cast<std::size_t>(std::floor(t1 * g.n + 1e-9));
    const auto hi = std::min(g.steps, static_cast<std::size_t>(std::floor(t2 * g.n + 1e-9)));
    return {lo, std::max(lo, hi)};
}

double recovery_on_grid(const ItoCoefficients& coeffs, const GridView& g, double t1, double t2)
{
    const auto [lo, hi] = index_range(g, t1, t2);
    std::vector<double> terms(hi - lo);
    const double root_n = std::sqrt(g.n);
    for (std::size_t k = lo; k < hi; ++k) {
        const double y = root_n * (g.price(k + 1) - g.price(k));
        terms[k - lo] = (y * y - coeffs.s(g.time(k), g.price(k)) * std::abs(y)) / g.n;
    }
    return pairwise_sum(terms);
}

}  // namespace

std::vector<double> recovery_statistic(const ItoCoefficients& coeffs, const SimConfig& cfg, double t1, double t2)
{
    cfg.validate();
    check_window(cfg, t1, t2);
    std::vector<double> out(cfg.paths);
    for_each_path(coeffs, cfg, [&](std::size_t i, std::span<const double> p, std::span<const double> L) {
        GridView g{p, L, 1, cfg.steps(), static_cast<double>(cfg.steps_per_unit)};
        out[i] = recovery_on_grid(coeffs, g, t1, t2);
    });
    return out;
}

ConvergenceReport recovery_limit_check(const ItoCoefficients& coeffs, const SimConfig& cfg, double t1, double t2)
{
    check_window(cfg, t1, t2);
    auto stat = [&](const GridView& g) { return recovery_on_grid(coeffs, g, t1, t2); };
    auto target = [&](const GridView& g) {
        const auto [lo, hi] = index_range(g, t1, t2);
        std::vector<double> terms(hi - lo);
        for (std::size_t k = lo; k < hi; ++k) {
            const double t = g.time(k);
            const double sigma = coeffs.sigma(t, g.price(k));
            terms[k - lo] = (sigma - kSqrt2OverPi * coeffs.s(t, g.price(k))) * sigma / g.n;
        }
        return pairwise_sum(terms);
    };
    return detail::run_convergence("recovery", coeffs, cfg, stat, target);
}

GeneralCostReport general_cost_limit_check(const ItoCoefficients& coeffs, const CostProcess& costs,
                                           const SimConfig& cfg)
{
    cfg.validate();
    const double dt = 1.0 / static_cast<double>(cfg.steps_per_unit);
    for (std::size_t k = 0; k < cfg.steps(); ++k) {
        check_cost_growth(costs.at(static_cast<double>(k) * dt));
    }
    // limits are deterministic given l_t; tabulate once on the fine grid
    const std::size_t steps = cfg.steps();
    std::vector<double> phi_c(steps), phi_sq(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double l = coeffs.l(t);
        phi_c[k] = phi_cost(l, costs.at(t));
        phi_sq[k] = phi_marginal_square(l, costs.at(t));
    }

    GeneralCostReport out;
    auto cost_stat = [&](const GridView& g) {
        std::vector<double> terms(g.steps);
        const double root_n = std::sqrt(g.n);
        for (std::size_t k = 0; k < g.steps; ++k) {
            const double y = root_n * (g.inventory(k + 1) - g.inventory(k));
            terms[k] = costs.at(g.time(k))(y) / g.n;
        }
        return pairwise_sum(terms);
    };
    auto cost_target = [&](const GridView& g) { return pairwise_sum(phi_c) / g.n; };
    out.cost = detail::run_convergence("general-cost", coeffs, cfg, cost_stat, cost_target);

    auto vol_stat = [&](const GridView& g) {
        std::vector<double> terms(g.steps);
        const double root_n = std::sqrt(g.n);
        for (std::size_t k = 0; k < g.steps; ++k) {
            const double y = root_n * (g.price(k + 1) - g.price(k));
            const double z = root_n * (g.inventory(k + 1) - g.inventory(k));
            const double cm = costs.at(g.time(k)).marginal(z);
            terms[k] = (y * y - cm * cm) / g.n;
        }
        return pairwise_sum(terms);
    };
    auto vol_target = [&](const GridView& g) {
        std::vector<double> terms(g.steps);
        for (std::size_t k = 0; k < g.steps; ++k) {
            const double sigma = coeffs.sigma(g.time(k), g.price(k));
            terms[k] = (sigma * sigma - phi_sq[k]) / g.n;
        }
        return pairwise_sum(terms);
    };
    out.volatility_bound = detail::run_convergence("volatility-bound", coeffs, cfg, vol_stat, vol_target);
    return out;
}

ConvergenceReport covariation_limit_check(const ItoCoefficients& coeffs, const SimConfig& cfg)
{
    auto stat = [&](const GridView& g) {
        std::vector<double> terms(g.steps);
        for (std::size_t k = 0; k < g.steps; ++k) {
            terms[k] = (g.price(k + 1) - g.price(k)) * (g.inventory(k + 1) - g.inventory(k));
        }
        return pairwise_sum(terms);
    };
    auto target = [&](const GridView& g) {
        std::vector<double> terms(g.steps);
        for (std::size_t k = 0; k < g.steps; ++k) {
            const double t = g.time(k);
            terms[k] = coeffs.rho(t) * coeffs.sigma(t, g.price(k)) * coeffs.l(t) / g.n;
        }
        return pairwise_sum(terms);
    };
    return detail::run_convergence("covariation", coeffs, cfg, stat, target);
}

}  // namespace lobkit
