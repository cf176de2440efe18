#include "lobkit/order_book.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lobkit/error.hpp"

namespace lobkit {

namespace {

void normalize_side(std::vector<Level>& side, const char* name)
{
    for (const Level& level : side) {
        if (!std::isfinite(level.volume) || level.volume < 0.0) {
            throw ValidationError(std::string(name) + " level has negative or non-finite volume");
        }
        if (level.price_ticks <= 0) {
            throw ValidationError(std::string(name) + " level has non-positive price");
        }
    }
    std::erase_if(side, [](const Level& l) { return l.volume == 0.0; });
    std::sort(side.begin(), side.end(),
              [](const Level& a, const Level& b) { return a.price_ticks < b.price_ticks; });
    const auto dup = std::adjacent_find(side.begin(), side.end(), [](const Level& a, const Level& b) {
        return a.price_ticks == b.price_ticks;
    });
    if (dup != side.end()) {
        throw ValidationError(std::string(name) + " side has duplicate price level");
    }
}

double side_volume(std::span<const Level> side)
{
    double v = 0.0;
    for (const Level& l : side) {
        v += l.volume;
    }
    return v;
}

}  // namespace

OrderBook::OrderBook(double tick, std::vector<Level> bids, std::vector<Level> asks)
    : tick_(tick), bids_(std::move(bids)), asks_(std::move(asks))
{
    if (!(tick_ > 0.0) || !std::isfinite(tick_)) {
        throw ValidationError("order book tick must be positive");
    }
    normalize_side(bids_, "bid");
    normalize_side(asks_, "ask");
    if (!bids_.empty() && !asks_.empty() && bids_.back().price_ticks >= asks_.front().price_ticks) {
        throw ValidationError("order book is crossed or locked: best bid >= best ask");
    }
}

double OrderBook::bid_volume() const noexcept { return side_volume(bids_); }
double OrderBook::ask_volume() const noexcept { return side_volume(asks_); }

BestQuotes best_quotes(const OrderBook& book)
{
    BestQuotes q;
    if (!book.bids().empty()) {
        q.bid = book.price(book.bids().back().price_ticks);
    }
    if (!book.asks().empty()) {
        q.ask = book.price(book.asks().front().price_ticks);
    }
    return q;
}

ExecutionResult execute_market_order(const OrderBook& book, double alpha)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ValidationError("market order price must be positive");
    }
    // Tick-grid comparisons: level <= alpha and level >= alpha.
    const double q = alpha / book.tick();
    const auto ask_limit = static_cast<std::int64_t>(std::floor(q + 1e-9));
    const auto bid_limit = static_cast<std::int64_t>(std::ceil(q - 1e-9));

    double bought = 0.0;  // provider inventory gained from bids
    double sold = 0.0;    // provider inventory given up from asks
    double cash_ticks = 0.0;
    std::vector<Level> bids;
    std::vector<Level> asks;
    for (const Level& l : book.bids()) {
        if (l.price_ticks >= bid_limit) {
            bought += l.volume;
            cash_ticks -= static_cast<double>(l.price_ticks) * l.volume;
        } else {
            bids.push_back(l);
        }
    }
    for (const Level& l : book.asks()) {
        if (l.price_ticks <= ask_limit) {
            sold += l.volume;
            cash_ticks += static_cast<double>(l.price_ticks) * l.volume;
        } else {
            asks.push_back(l);
        }
    }
    Execution e;
    e.alpha = alpha;
    e.delta_L = bought - sold;
    e.delta_K = cash_ticks * book.tick();
    return {e, OrderBook(book.tick(), std::move(bids), std::move(asks))};
}

double taker_expected_gain(const Execution& execution, double expected_price)
{
    return -expected_price * execution.delta_L - execution.delta_K;
}

double taker_optimal_order(const OrderBook& /*book*/, double expected_price)
{
    if (!(expected_price > 0.0) || !std::isfinite(expected_price)) {
        throw ValidationError("expected price must be positive");
    }
    return expected_price;
}

}  // namespace lobkit
