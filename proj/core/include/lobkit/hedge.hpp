#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lobkit/ito.hpp"

namespace lobkit {

using Payoff = std::function<double(double p)>;

Payoff call_payoff(double strike);
Payoff put_payoff(double strike);
Payoff linear_payoff(double intercept, double slope);
/// Piecewise-linear payoff through (p_i, f_i), extrapolated linearly.
Payoff tabulated_payoff(std::vector<double> p, std::vector<double> f);

struct HedgeGrid {
    std::size_t price_steps = 400;  ///< Np
    std::size_t time_steps = 400;   ///< Nt
    /// Explicit price range; when unset the range spans `width_sd` effective
    /// standard deviations around the center, clipped at 0.
    std::optional<double> p_min;
    std::optional<double> p_max;
    double width_sd = 8.0;
    /// Node clustering strength around the center (0 = uniform).
    double clustering = 4.0;
};

/// Replication of a terminal payoff in the spread model s = sqrt(2 pi) lambda_s sigma:
///   d_t v + (lambda_s - 1/2) sigma(t, p)^2 d_pp v = 0,  v(T, p) = f(p).
struct HedgeProblem {
    Payoff payoff;
    StateFunction sigma;
    double lambda_s = 1.0;
    double maturity = 1.0;
    double center = 100.0;  ///< clustering point and spot reference (strike for calls and puts)
    HedgeGrid grid;

    void validate() const;
};

/// Value and Greeks on the (t, p) grid, indexed [time][price].
struct HedgeSurface {
    std::vector<double> t;
    std::vector<double> p;
    std::vector<std::vector<double>> value;
    std::vector<std::vector<double>> delta;
    std::vector<std::vector<double>> gamma;
    std::vector<std::vector<double>> theta;
    /// Largest dt * a / h^2 on the grid (informational under Crank-Nicolson).
    double max_diffusion_number = 0.0;

    /// Cubic interpolation of v(t_k, .) at price p.
    double value_at(std::size_t time_index, double p) const;
    double delta_at(std::size_t time_index, double p) const;
    double gamma_at(std::size_t time_index, double p) const;
};

/// Crank-Nicolson backward solve (two implicit Euler half steps at the
/// start) on a sinh-clustered price grid with the center on a node and
/// d_pp v = 0 at both ends.
HedgeSurface hedge_pde_solve(const HedgeProblem& problem);

enum class OrderType { Limit, Market, None };
std::string to_string(OrderType type);

struct HedgeInventory {
    std::vector<std::vector<double>> l;  ///< l = Gamma sigma
    std::vector<std::vector<OrderType>> order_type;
};

/// l(t, p) = Gamma sigma(t, p); LIMIT where l < -tolerance, MARKET where
/// l > tolerance, NONE otherwise.
HedgeInventory hedge_inventory_vol(const HedgeSurface& surface, const StateFunction& sigma,
                                   double tolerance = 1e-9);

/// Black-Scholes call with zero rates.
double black_scholes_call(double spot, double strike, double vol, double maturity);
double black_scholes_put(double spot, double strike, double vol, double maturity);

}  // namespace lobkit
