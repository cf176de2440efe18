#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lobkit/shape.hpp"
#include "lobkit/trade_tape.hpp"

namespace lobkit {

/// Wealth increment models on the trade clock.
enum class WealthKind {
    Frictionless,  ///< dX = L dp
    Classical,     ///< dX = L dp + (s/2)|dL|
    Proposed,      ///< dX = L dp + (s/2)|dL| + dp dL
    GeneralBook,   ///< dX = L dp + c_n(-dL) + dp dL
};

struct WealthModel {
    WealthKind kind = WealthKind::Proposed;
    std::vector<CostFunction> costs;  ///< one per trade step; GeneralBook only

    static WealthModel frictionless() { return {WealthKind::Frictionless, {}}; }
    static WealthModel classical() { return {WealthKind::Classical, {}}; }
    static WealthModel proposed() { return {WealthKind::Proposed, {}}; }
    static WealthModel general_book(std::vector<CostFunction> costs)
    {
        return {WealthKind::GeneralBook, std::move(costs)};
    }
};

WealthKind parse_wealth_kind(const std::string& name);

/// One bid-ask model increment from inventory L, price step dp, spread s and
/// provider volume dL.
double wealth_increment(WealthKind kind, double L, double dp, double spread, double dL);
std::string to_string(WealthKind kind);

/// Exact wealth path X_0 = 0, ..., X_{N-1} in half-ticks for the three
/// bid-ask models (GeneralBook is rejected here).
std::vector<std::int64_t> reconstruct_wealth_fixed(const TradeClockSeries& series, WealthKind kind);

/// Wealth path in currency. GeneralBook evaluates the step cost c_n at the
/// taker volume -dL_n (throws DomainError beyond the book's depth).
std::vector<double> reconstruct_wealth(const TradeClockSeries& series, const WealthModel& model);

/// Inclusive range of step indices; `last` is clamped to the final step.
struct Window {
    std::size_t first = 0;
    std::size_t last = static_cast<std::size_t>(-1);
};

/// Parse "a:b" (either side may be empty).
Window parse_window(const std::string& text);

struct ValidationReport {
    std::size_t n_trades = 0;
    std::size_t n_steps = 0;
    std::size_t impact_violations = 0;    ///< steps with dL * dp > 0
    std::size_t recovery_violations = 0;  ///< steps with |dp| > s
    double impact_fraction = 0.0;
    double recovery_fraction = 0.0;
    std::vector<std::size_t> impact_indices;
    std::vector<std::size_t> recovery_indices;
};

/// Count violations of the price-impact and price-recovery inequalities.
ValidationReport validate(const TradeClockSeries& series);

/// rho^(d) = -corr(dL, dp) over the window's steps.
double toxicity_rho(const TradeClockSeries& series, Window window = {});

struct ToxicityRatio {
    double ratio = 0.0;             ///< r^(d) = -2 sum dp dL / sum s |dL|
    double spread_component = 0.0;  ///< sum (s/2)|dL|
    double impact_component = 0.0;  ///< sum dp dL
};

ToxicityRatio toxicity_ratio(const TradeClockSeries& series, Window window = {});

/// Running sum of dp_k dL_k for k <= n, one entry per step.
std::vector<double> quad_covariation_path(const TradeClockSeries& series);

}  // namespace lobkit
