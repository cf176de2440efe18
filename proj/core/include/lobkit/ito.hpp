#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lobkit {

using TimeFunction = std::function<double(double t)>;
using StateFunction = std::function<double(double t, double p)>;

TimeFunction constant_fn(double value);
StateFunction constant_state_fn(double value);

/// Price and inventory dynamics on the trade clock:
///   dp = mu(t, p) dt + sigma(t, p) dW,   dL = b(t) dt + l(t) dW',
///   d[W, W'] = rho(t) dt,
/// plus the spread process s(t, p) (tick units) and the two model constants.
struct ItoCoefficients {
    StateFunction mu = constant_state_fn(0.0);
    StateFunction sigma = constant_state_fn(1.0);
    TimeFunction b = constant_fn(0.0);
    TimeFunction l = constant_fn(1.0);  ///< signed: l < 0 trades via limit orders
    TimeFunction rho = constant_fn(0.0);
    StateFunction s = constant_state_fn(1.0);
    double p0 = 0.0;
    double L0 = 0.0;
    double lambda_s = 1.0;  ///< spread/volatility ratio in s = sqrt(2 pi) lambda_s sigma
    double lambda_r = 1.0;  ///< recovery coefficient in (0, 1]

    /// Constant coefficients.
    static ItoCoefficients constant(double mu, double sigma, double b, double l, double rho, double s);
};

struct SimConfig {
    std::size_t steps_per_unit = 10000;  ///< N; the tick size is 1 / sqrt(N)
    std::size_t paths = 200;             ///< M
    double horizon = 1.0;                ///< T
    std::uint64_t seed = 42;
    unsigned threads = 1;

    std::size_t steps() const;  ///< floor(N T)
    void validate() const;
};

/// Discretized paths p^N_n = p_{n/N}, L^N_n = L_{n/N}, and s^N_n = s_{n/N} / sqrt(N).
struct PathBundle {
    std::size_t steps_per_unit = 0;
    double horizon = 0.0;
    std::vector<std::vector<double>> p;
    std::vector<std::vector<double>> L;
    std::vector<std::vector<double>> spread;

    std::size_t paths() const noexcept { return p.size(); }
};

/// Euler-Maruyama with correlated increments dW' = rho dW + sqrt(1 - rho^2) dW_perp.
/// Path i consumes path_engine(seed, i), drawing the two normals of each step in
/// order (price, orthogonal). Results do not depend on the thread count.
PathBundle simulate_paths(const ItoCoefficients& coeffs, const SimConfig& cfg);

/// Simulate path i into caller-owned buffers of length steps() + 1.
void simulate_path(const ItoCoefficients& coeffs, const SimConfig& cfg, std::size_t index,
                   std::span<double> p, std::span<double> L);

/// Simulate every path and hand it to visitor(index, p, L) without storing the
/// bundle. The visitor runs concurrently when cfg.threads > 1.
void for_each_path(const ItoCoefficients& coeffs, const SimConfig& cfg,
                   const std::function<void(std::size_t, std::span<const double>, std::span<const double>)>& visitor);

}  // namespace lobkit
