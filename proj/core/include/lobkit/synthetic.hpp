#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lobkit/trade_tape.hpp"

namespace lobkit {

enum class RecoveryMode {
    Spread,           ///< compliant steps move the mid by at most one spread
    HalfSpread,       ///< at most half a spread
    ExactHalfSpread,  ///< exactly half a spread, against the trade (spreads are even)
};

RecoveryMode parse_recovery_mode(const std::string& name);
std::string to_string(RecoveryMode mode);

struct SyntheticTapeParams {
    std::size_t n_trades = 1000;
    double quote_tick = 0.01;    ///< quote grid in currency units (multiple of 1e-4)
    double base_price = 100.0;   ///< initial bid
    std::int64_t min_spread = 1; ///< spread law: uniform on [min, max] quote ticks
    std::int64_t max_spread = 4;
    double impact_compliance = 1.0;    ///< P(dL dp <= 0) per step
    double recovery_compliance = 1.0;  ///< P(|dp| <= s) per step
    RecoveryMode recovery_mode = RecoveryMode::Spread;
    std::int64_t max_size = 500;  ///< sizes uniform on [1, max_size]
    double flagged_rate = 0.0;    ///< fraction of records flagged C or H
    std::int64_t start_ts_ns = 34200000000000;  ///< 09:30 in ns since midnight
    std::int64_t mean_gap_ns = 50000000;

    void validate() const;
};

/// Tape with every trade at the aggressor-side best quote. Each step draws
/// independent Bernoulli violations of the two inequalities with the
/// configured rates; the next quotes are then placed to match. Identical
/// params and seed give identical records.
std::vector<TradeRecord> generate_synthetic_tape(const SyntheticTapeParams& params, std::uint64_t seed);

}  // namespace lobkit
