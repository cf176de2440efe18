#include "lobkit/ito.hpp"

#include <cmath>
#include <string>

#include "lobkit/error.hpp"
#include "lobkit/parallel.hpp"

namespace lobkit {

TimeFunction constant_fn(double value)
{
    return [value](double) { return value; };
}

StateFunction constant_state_fn(double value)
{
    return [value](double, double) { return value; };
}

ItoCoefficients ItoCoefficients::constant(double mu, double sigma, double b, double l, double rho, double s)
{
    ItoCoefficients c;
    c.mu = constant_state_fn(mu);
    c.sigma = constant_state_fn(sigma);
    c.b = constant_fn(b);
    c.l = constant_fn(l);
    c.rho = constant_fn(rho);
    c.s = constant_state_fn(s);
    return c;
}

std::size_t SimConfig::steps() const
{
    return static_cast<std::size_t>(std::floor(static_cast<double>(steps_per_unit) * horizon + 1e-9));
}

void SimConfig::validate() const
{
    if (steps_per_unit < 2) {
        throw ValidationError("steps per unit time N must be >= 2");
    }
    if (paths < 1) {
        throw ValidationError("path count M must be >= 1");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ValidationError("horizon T must be positive");
    }
    if (steps() < 1) {
        throw ValidationError("N T must allow at least one step");
    }
}

void simulate_path(const ItoCoefficients& coeffs, const SimConfig& cfg, std::size_t index,
                   std::span<double> p, std::span<double> L)
{
    const std::size_t n = cfg.steps();
    if (p.size() != n + 1 || L.size() != n + 1) {
        throw ValidationError("path buffers must have length steps + 1");
    }
    auto engine = path_engine(cfg.seed, index);
    std::normal_distribution<double> normal;
    const double dt = 1.0 / static_cast<double>(cfg.steps_per_unit);
    const double sqrt_dt = std::sqrt(dt);
    p[0] = coeffs.p0;
    L[0] = coeffs.L0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double z1 = normal(engine);
        const double z2 = normal(engine);
        const double rho = coeffs.rho(t);
        if (!(std::abs(rho) <= 1.0)) {
            throw ValidationError("correlation outside [-1, 1] at t = " + std::to_string(t));
        }
        const double mu = coeffs.mu(t, p[k]);
        const double sigma = coeffs.sigma(t, p[k]);
        const double b = coeffs.b(t);
        const double l = coeffs.l(t);
        if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(b) || !std::isfinite(l)) {
            throw ValidationError("non-finite coefficient at t = " + std::to_string(t));
        }
        const double dW = sqrt_dt * z1;
        const double dW_prime = sqrt_dt * (rho * z1 + std::sqrt(1.0 - rho * rho) * z2);
        p[k + 1] = p[k] + mu * dt + sigma * dW;
        L[k + 1] = L[k] + b * dt + l * dW_prime;
    }
}

PathBundle simulate_paths(const ItoCoefficients& coeffs, const SimConfig& cfg)
{
    cfg.validate();
    const std::size_t n = cfg.steps();
    PathBundle bundle;
    bundle.steps_per_unit = cfg.steps_per_unit;
    bundle.horizon = cfg.horizon;
    bundle.p.assign(cfg.paths, std::vector<double>(n + 1));
    bundle.L.assign(cfg.paths, std::vector<double>(n + 1));
    bundle.spread.assign(cfg.paths, std::vector<double>(n + 1));
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(cfg.steps_per_unit));
    parallel_for(cfg.paths, cfg.threads, [&](std::size_t i) {
        simulate_path(coeffs, cfg, i, bundle.p[i], bundle.L[i]);
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(cfg.steps_per_unit);
            bundle.spread[i][k] = coeffs.s(t, bundle.p[i][k]) * inv_sqrt_n;
        }
    });
    return bundle;
}

void for_each_path(const ItoCoefficients& coeffs, const SimConfig& cfg,
                   const std::function<void(std::size_t, std::span<const double>, std::span<const double>)>& visitor)
{
    cfg.validate();
    const std::size_t n = cfg.steps();
    parallel_for(cfg.paths, cfg.threads, [&](std::size_t i) {
        std::vector<double> p(n + 1);
        std::vector<double> L(n + 1);
        simulate_path(coeffs, cfg, i, p, L);
        visitor(i, p, L);
    });
}

}  // namespace lobkit
