#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lobkit {

/// Default price increment for order books, in currency units.
inline constexpr double kDefaultBookTick = 1e-4;

/// One price level: an integer number of ticks and a strictly positive volume.
struct Level {
    std::int64_t price_ticks = 0;
    double volume = 0.0;

    friend bool operator==(const Level&, const Level&) = default;
};

/// A limit order book as a pair of finite discrete measures (bids, asks).
///
/// Both sides are kept sorted by strictly increasing price. Zero-volume
/// levels are dropped on construction; negative volumes, duplicate prices,
/// non-positive prices and crossed or locked books are rejected.
class OrderBook {
public:
    OrderBook() = default;
    OrderBook(double tick, std::vector<Level> bids, std::vector<Level> asks);

    double tick() const noexcept { return tick_; }
    std::span<const Level> bids() const noexcept { return bids_; }
    std::span<const Level> asks() const noexcept { return asks_; }

    double price(std::int64_t ticks) const noexcept { return static_cast<double>(ticks) * tick_; }
    double bid_volume() const noexcept;
    double ask_volume() const noexcept;

    friend bool operator==(const OrderBook&, const OrderBook&) = default;

private:
    double tick_ = kDefaultBookTick;
    std::vector<Level> bids_;
    std::vector<Level> asks_;
};

struct BestQuotes {
    std::optional<double> bid;
    std::optional<double> ask;
};

/// Supremum of the bid support and infimum of the ask support.
BestQuotes best_quotes(const OrderBook& book);

/// Provider-side accounting of one market order at limit price alpha.
struct Execution {
    double delta_L = 0.0;  ///< provider inventory change
    double delta_K = 0.0;  ///< provider cash change
    double alpha = 0.0;
};

struct ExecutionResult {
    Execution execution;
    OrderBook remaining;
};

/// Execute the single-number market order alpha against the book: every bid
/// at price >= alpha and every ask at price <= alpha is filled in full.
ExecutionResult execute_market_order(const OrderBook& book, double alpha);

/// Taker's expected wealth change -E[p] dL - dK for an execution.
double taker_expected_gain(const Execution& execution, double expected_price);

/// Risk-neutral taker's optimal order: alpha = E[p]. Any alpha in a zero-mass
/// interval around E[p] yields the same execution; E[p] is the canonical pick.
double taker_optimal_order(const OrderBook& book, double expected_price);

}  // namespace lobkit
