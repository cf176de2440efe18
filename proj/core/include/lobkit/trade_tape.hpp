#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lobkit/fixed_point.hpp"

namespace lobkit {

enum class Aggressor { Buy, Sell };

/// Flag bits carried by tape records.
enum TradeFlag : unsigned {
    kNoFlags = 0,
    kSpecialDeal = 1u << 0,  ///< 'C' in the tape
    kHidden = 1u << 1,       ///< 'H' in the tape
};

/// One execution as printed on the tape. Prices are integer counts of the
/// tape tick (1e-4 currency units).
struct TradeRecord {
    std::int64_t seq = 0;
    std::int64_t ts_ns = 0;
    std::int64_t price = 0;
    std::int64_t size = 0;
    Aggressor aggressor = Aggressor::Buy;
    unsigned flags = kNoFlags;
    std::int64_t bid_before = 0;
    std::int64_t ask_before = 0;

    friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

/// Parse a tape CSV (header `seq,ts_ns,price,size,aggressor,flags,bid,ask`,
/// columns in any order). Throws IoError if the file cannot be read and
/// ValidationError listing every malformed line otherwise.
std::vector<TradeRecord> ingest(const std::filesystem::path& path);
std::vector<TradeRecord> ingest(std::istream& in);

/// Render records back to the tape CSV format.
void write_tape(std::ostream& out, const std::vector<TradeRecord>& records);

struct FilterReport {
    std::vector<TradeRecord> kept;
    std::size_t input_count = 0;
    std::size_t dropped_special = 0;  ///< records carrying the special-deal flag
    std::size_t dropped_hidden = 0;   ///< records carrying the hidden flag
    std::size_t dropped_total = 0;    ///< records dropped (a record with both flags counts once)
    double dropped_fraction = 0.0;
    std::vector<std::string> warnings;
};

/// Drop special deals and executions against hidden orders.
FilterReport filter_tape(std::vector<TradeRecord> records);

/// Per-trade arrays on the trade clock. Mid-prices sit on a half-tick grid,
/// so prices and cash are stored as integer half-ticks (tick / 2 units).
struct TradeClockSeries {
    double tick = kTapeTick;
    std::vector<std::int64_t> mid_half_ticks;  ///< p_n, mid before trade n
    std::vector<std::int64_t> spread_ticks;    ///< s_n, spread before trade n
    std::vector<std::int64_t> dL;              ///< signed provider volume of trade n
    std::vector<std::int64_t> dK_half_ticks;   ///< signed provider cash of trade n

    std::size_t size() const noexcept { return dL.size(); }
    /// Number of price increments p_{n+1} - p_n available.
    std::size_t steps() const noexcept { return size() > 0 ? size() - 1 : 0; }

    double half_tick() const noexcept { return 0.5 * tick; }
    double mid(std::size_t n) const noexcept { return static_cast<double>(mid_half_ticks[n]) * half_tick(); }
    double spread(std::size_t n) const noexcept { return static_cast<double>(spread_ticks[n]) * tick; }
    double price_step(std::size_t n) const noexcept
    {
        return static_cast<double>(mid_half_ticks[n + 1] - mid_half_ticks[n]) * half_tick();
    }
    double volume(std::size_t n) const noexcept { return static_cast<double>(dL[n]); }
    double cash(std::size_t n) const noexcept { return static_cast<double>(dK_half_ticks[n]) * half_tick(); }

    friend bool operator==(const TradeClockSeries&, const TradeClockSeries&) = default;
};

struct SeriesBuild {
    TradeClockSeries series;
    std::size_t rejected = 0;
    std::vector<std::string> diagnostics;  ///< one entry per rejected record
};

/// Build trade-clock arrays. Records not executed at the best quote on the
/// aggressor's side are excluded and reported.
SeriesBuild build_series(const std::vector<TradeRecord>& records, double tick = kTapeTick);

/// Aggregate provider ledger: L_n, K_n cumulative sums from zero and
/// X_n = p_n L_n + K_n, for n = 0 .. max(N - 1, 0). The last trade's flows are
/// not marked because no quote after it is known.
struct ProviderLedger {
    double tick = kTapeTick;
    std::vector<std::int64_t> L;
    std::vector<std::int64_t> K_half_ticks;
    std::vector<std::int64_t> X_half_ticks;

    double wealth(std::size_t n) const noexcept { return static_cast<double>(X_half_ticks[n]) * 0.5 * tick; }
};

ProviderLedger build_ledger(const TradeClockSeries& series);

}  // namespace lobkit
