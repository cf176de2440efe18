#pragma once

#include <string>
#include <vector>

#include "lobkit/limits.hpp"

namespace lobkit {

enum class SupplyDemandDriver {
    InventoryGiven,  ///< L is an Ito process; Delta p = lambda c'(-Delta L)
    PriceGiven,      ///< p is an Ito process; Delta L = -gamma'(Delta p / lambda)
};

SupplyDemandDriver parse_driver(const std::string& name);
std::string to_string(SupplyDemandDriver driver);

/// Microscopic supply-and-demand paths with the renormalized book
/// c^N(l) = c(sqrt(N) l) / N: the driver is simulated from coeffs and the other
/// path is built step by step. Uses coeffs.lambda_r. Throws DomainError when
/// an increment exceeds the book depth.
PathBundle supply_demand_simulate(const ItoCoefficients& coeffs, const CostProcess& costs, const SimConfig& cfg,
                                  SupplyDemandDriver driver);

/// Moments of the constructed path against their diffusion limits.
struct SupplyDemandReport {
    SupplyDemandDriver driver = SupplyDemandDriver::InventoryGiven;
    double lambda_r = 1.0;
    ConvergenceReport volatility;   ///< sqrt([x]_T / T) of the constructed path
    ConvergenceReport drift;        ///< x_T - x_0 of the constructed path
    ConvergenceReport covariation;  ///< [p, L]_T
    /// [p, L]_T against the covariation rate without the lambda factor,
    /// -Phi_l(id c') (inventory driver) or -Phi_sigma(id gamma'(./lambda)) (price driver).
    ConvergenceReport covariation_unscaled;
};

SupplyDemandReport supply_demand_moments(const ItoCoefficients& coeffs, const CostProcess& costs,
                                         const SimConfig& cfg, SupplyDemandDriver driver);

/// Provider wealth on a flat book of density m with recovery lambda: each
/// step moves p by -(lambda/m) Delta L and books
///   Delta X = L Delta p + c(-Delta L) + Delta p Delta L,  c(l) = l^2 / (2m).
/// Returns X_0 = 0, ..., X_n (same length as L).
std::vector<double> flat_book_wealth(std::span<const double> L, double lambda_r, double m);

/// -(lambda/m)(L_n^2 - L_0^2)/2 + (1 - lambda)/(2m) sum_{k<n} (Delta_k L)^2.
std::vector<double> flat_book_identity(std::span<const double> L, double lambda_r, double m);

struct FlatBookReport {
    double lambda_r = 1.0;
    double m = 1.0;
    std::size_t paths = 0;
    std::size_t steps = 0;
    /// max_n |X_n - X_0 - identity_n| over paths
    double max_identity_error = 0.0;
    /// max_n |X_n - X_0 + (L_n^2 - L_0^2)| over paths: the form X = X_0 - L^2 + L_0^2
    double max_printed_form_error = 0.0;
    /// |X_end - X_0| after the inventory path is retraced back to L_0
    double max_round_trip_error = 0.0;
    double tolerance = 1e-12;
    bool passed = false;
};

/// Simulates inventory paths from coeffs and compares flat_book_wealth with
/// the closed-form identity at every step.
FlatBookReport flat_book_identity_check(const SimConfig& cfg, double lambda_r, double m,
                                        const ItoCoefficients& inventory);

}  // namespace lobkit
