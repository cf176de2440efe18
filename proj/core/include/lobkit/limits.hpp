#pragma once

#include <span>
#include <string>
#include <vector>

#include "lobkit/ito.hpp"
#include "lobkit/shape.hpp"

namespace lobkit {

/// Monte Carlo estimate of a discrete statistic against its diffusion limit.
///
/// The statistic is evaluated on each simulated path at N steps per unit time
/// and, with common random numbers, on the same path subsampled to N/4. The
/// coarse-to-fine change of the bias estimates the C / sqrt(N) discretization
/// allowance.
struct ConvergenceReport {
    std::string name;
    std::size_t steps_per_unit = 0;
    std::size_t paths = 0;
    double mean = 0.0;       ///< MC mean of the statistic at N
    double std_error = 0.0;  ///< standard error of (statistic - target)
    double target = 0.0;     ///< mean of the limit over paths
    double coarse_mean = 0.0;
    double bias = 0.0;         ///< mean - target at N
    double coarse_bias = 0.0;  ///< at N/4
    double bias_allowance = 0.0;
    bool passed = false;

    /// |mean - target| <= sigmas * std_error + bias_allowance
    bool within(double sigmas = 3.0) const noexcept;
};

/// A convex cost function c_t, piecewise constant in time: costs[i] applies on
/// [starts[i], starts[i+1]).
class CostProcess {
public:
    explicit CostProcess(CostFunction constant);
    CostProcess(std::vector<double> starts, std::vector<CostFunction> costs);

    const CostFunction& at(double t) const;
    /// gamma'_t, the generalized inverse of c'_t.
    const MonotoneGraph& shape_derivative(double t) const;
    std::size_t size() const noexcept { return costs_.size(); }

private:
    std::size_t index(double t) const;

    std::vector<double> starts_;
    std::vector<CostFunction> costs_;
    std::vector<MonotoneGraph> shapes_;
};

/// Phi_l(c) = E[c(lZ)] for Z ~ N(0,1). Throws ValidationError when c is only
/// defined on a bounded interval (the expectation is infinite).
double phi_cost(double l, const CostFunction& c);
/// Phi_l((c')^2).
double phi_marginal_square(double l, const CostFunction& c);
/// Phi_l(id * c').
double phi_identity_marginal(double l, const CostFunction& c);
/// Phi_l(c''), through Gaussian integration by parts: E[Y c'(Y)] / l^2.
double phi_second_derivative(double l, const CostFunction& c);

/// Rejects costs without c(0) = 0, convexity on the whole line, or at most
/// quadratic growth (probed on a geometric volume grid).
void check_cost_growth(const CostFunction& c);

/// Spread cost sum S_N = sum_n (s_n / 2) |Delta_n L| / sqrt(N) versus
/// int_0^T s_t |l_t| / sqrt(2 pi) dt.
ConvergenceReport spread_cost_limit_check(const ItoCoefficients& coeffs, const SimConfig& cfg);

/// Per-path recovery statistic
///   (1/N) sum_{floor(t1 N) <= n < floor(t2 N)} ((sqrt(N) Delta_n p)^2 - s_{n/N} |sqrt(N) Delta_n p|).
std::vector<double> recovery_statistic(const ItoCoefficients& coeffs, const SimConfig& cfg, double t1, double t2);

/// The recovery statistic against int_{t1}^{t2} (sigma_t - sqrt(2/pi) s_t) sigma_t dt.
ConvergenceReport recovery_limit_check(const ItoCoefficients& coeffs, const SimConfig& cfg, double t1, double t2);

struct GeneralCostReport {
    ConvergenceReport cost;             ///< (1/N) sum c(sqrt(N) Delta L) vs int Phi_l(c)
    ConvergenceReport volatility_bound; ///< (1/N) sum ((sqrt(N) Delta p)^2 - c'(sqrt(N) Delta L)^2) vs int sigma^2 - Phi_l((c')^2)
};

GeneralCostReport general_cost_limit_check(const ItoCoefficients& coeffs, const CostProcess& costs,
                                           const SimConfig& cfg);

/// Realized covariation sum_n Delta_n p Delta_n L versus int rho sigma l dt.
ConvergenceReport covariation_limit_check(const ItoCoefficients& coeffs, const SimConfig& cfg);

namespace detail {

/// A path viewed on every stride-th grid point.
struct GridView {
    std::span<const double> p;
    std::span<const double> L;
    std::size_t stride = 1;
    std::size_t steps = 0;  ///< coarse steps
    double n = 0.0;         ///< effective steps per unit time
    double price(std::size_t k) const { return p[k * stride]; }
    double inventory(std::size_t k) const { return L[k * stride]; }
    double time(std::size_t k) const { return static_cast<double>(k) / n; }
};

using GridStatistic = std::function<double(const GridView&)>;

/// Runs the fine/coarse Monte Carlo comparison. target(fine view) is the
/// per-path limit value.
ConvergenceReport run_convergence(std::string name, const ItoCoefficients& coeffs, const SimConfig& cfg,
                                  const GridStatistic& statistic, const GridStatistic& target);

/// Builds a report from per-path fine, coarse and target values. Without a
/// coarse level the bias allowance is zero.
ConvergenceReport assemble_report(std::string name, const SimConfig& cfg, std::span<const double> fine,
                                  std::span<const double> coarse, std::span<const double> target);

/// True when N is divisible by 4 and the coarse grid has at least one step.
bool has_coarse_level(const SimConfig& cfg);

}  // namespace detail

}  // namespace lobkit
