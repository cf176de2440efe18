#include "lobkit/synthetic.hpp"

#include <cmath>
#include <random>

#include "lobkit/error.hpp"
#include "lobkit/parallel.hpp"

namespace lobkit {

RecoveryMode parse_recovery_mode(const std::string& name)
{
    if (name == "spread") {
        return RecoveryMode::Spread;
    }
    if (name == "half-spread") {
        return RecoveryMode::HalfSpread;
    }
    if (name == "exact-half-spread") {
        return RecoveryMode::ExactHalfSpread;
    }
    throw ValidationError("unknown recovery mode '" + name + "' (expected spread|half-spread|exact-half-spread)");
}

std::string to_string(RecoveryMode mode)
{
    switch (mode) {
    case RecoveryMode::Spread:
        return "spread";
    case RecoveryMode::HalfSpread:
        return "half-spread";
    case RecoveryMode::ExactHalfSpread:
        break;
    }
    return "exact-half-spread";
}

namespace {

bool in_unit(double x)
{
    return x >= 0.0 && x <= 1.0;
}

}  // namespace

void SyntheticTapeParams::validate() const
{
    if (!in_unit(impact_compliance) || !in_unit(recovery_compliance) || !in_unit(flagged_rate)) {
        throw ValidationError("compliance and flag rates must lie in [0, 1]");
    }
    if (!(quote_tick > 0.0)) {
        throw ValidationError("quote tick must be positive");
    }
    to_ticks(quote_tick, kTapeTick);
    to_ticks(base_price, quote_tick);
    if (!(base_price > 0.0)) {
        throw ValidationError("base price must be positive");
    }
    if (min_spread < 1 || max_spread < min_spread) {
        throw ValidationError("spread law needs 1 <= min_spread <= max_spread");
    }
    if (recovery_mode == RecoveryMode::ExactHalfSpread && max_spread < 2) {
        throw ValidationError("exact half-spread tapes need an even spread in the spread law");
    }
    if (max_size < 1 || mean_gap_ns < 1 || start_ts_ns < 0) {
        throw ValidationError("sizes and time gaps must be positive");
    }
}

std::vector<TradeRecord> generate_synthetic_tape(const SyntheticTapeParams& params, std::uint64_t seed)
{
    params.validate();
    auto rng = path_engine(seed, 0);
    const std::int64_t q = to_ticks(params.quote_tick, kTapeTick);
    const bool exact = params.recovery_mode == RecoveryMode::ExactHalfSpread;

    std::uniform_int_distribution<std::int64_t> spread_law(params.min_spread, params.max_spread);
    std::uniform_int_distribution<std::int64_t> size_law(1, params.max_size);
    std::uniform_int_distribution<std::int64_t> gap_law(1, 2 * params.mean_gap_ns);
    std::bernoulli_distribution sell(0.5);
    std::bernoulli_distribution impact_violation(1.0 - params.impact_compliance);
    std::bernoulli_distribution recovery_violation(1.0 - params.recovery_compliance);
    std::bernoulli_distribution flagged(params.flagged_rate);
    std::bernoulli_distribution hidden(0.5);

    auto draw_spread = [&] {
        for (int i = 0; i < 1024; ++i) {
            const std::int64_t s = spread_law(rng);
            if (!exact || s % 2 == 0) {
                return s;
            }
        }
        throw ValidationError("spread law has no even spread");
    };

    // quotes in quote ticks
    std::int64_t bid = to_ticks(params.base_price, params.quote_tick);
    std::int64_t spread = draw_spread();
    std::int64_t ts = params.start_ts_ns;
    std::vector<TradeRecord> out;
    out.reserve(params.n_trades);
    std::vector<std::int64_t> choices;
    for (std::size_t n = 0; n < params.n_trades; ++n) {
        TradeRecord r;
        r.seq = static_cast<std::int64_t>(n) + 1;
        ts += gap_law(rng);
        r.ts_ns = ts;
        r.aggressor = sell(rng) ? Aggressor::Sell : Aggressor::Buy;
        r.size = size_law(rng);
        r.bid_before = bid * q;
        r.ask_before = (bid + spread) * q;
        r.price = r.aggressor == Aggressor::Buy ? r.ask_before : r.bid_before;
        if (flagged(rng)) {
            r.flags = hidden(rng) ? kHidden : kSpecialDeal;
        }
        out.push_back(r);

        // next quotes: mid moves by D half quote ticks
        const std::int64_t dl_sign = r.aggressor == Aggressor::Sell ? 1 : -1;
        const bool bad_impact = impact_violation(rng);
        const bool bad_recovery = recovery_violation(rng);
        const std::int64_t mid2 = 2 * bid + spread;
        bool placed = false;
        for (int attempt = 0; attempt < 256 && !placed; ++attempt) {
            const std::int64_t next_spread = draw_spread();
            std::int64_t lo = 0;
            std::int64_t hi = 0;
            if (bad_recovery) {
                lo = 2 * spread + 1;
                hi = 2 * spread + 4;
            } else if (exact) {
                lo = hi = spread;
            } else {
                lo = 0;
                hi = params.recovery_mode == RecoveryMode::Spread ? 2 * spread : spread;
            }
            if (bad_impact) {
                lo = std::max<std::int64_t>(lo, 1);
            }
            // |D| must have the parity that puts the next quotes on the grid
            choices.clear();
            for (std::int64_t m = lo; m <= hi; ++m) {
                const std::int64_t d = (bad_impact ? dl_sign : -dl_sign) * m;
                if (((mid2 + d - next_spread) % 2 + 2) % 2 == 0) {
                    choices.push_back(d);
                }
            }
            if (choices.empty()) {
                continue;
            }
            std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
            const std::int64_t d = choices[pick(rng)];
            const std::int64_t next_bid = (mid2 + d - next_spread) / 2;
            if (next_bid < 1) {
                throw ValidationError("synthetic price walk reached zero; raise base_price");
            }
            bid = next_bid;
            spread = next_spread;
            placed = true;
        }
        if (!placed) {
            throw ValidationError("spread law cannot realize the requested price moves");
        }
    }
    return out;
}

}  // namespace lobkit
