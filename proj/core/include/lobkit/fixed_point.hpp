#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lobkit {

/// Tape prices are quoted with at most four fractional digits.
inline constexpr double kTapeTick = 1e-4;
inline constexpr int kTapeDecimals = 4;

/// Parse a non-negative decimal with at most `decimals` fractional digits
/// into an integer count of 10^-decimals units. Throws ValidationError.
std::int64_t parse_fixed(std::string_view text, int decimals = kTapeDecimals);

/// Inverse of parse_fixed; always prints exactly `decimals` fractional digits.
std::string format_fixed(std::int64_t units, int decimals = kTapeDecimals);

/// Convert a currency amount to an integer tick count. Throws ValidationError
/// if the price is not on the tick grid (relative slack 1e-9 of one tick).
std::int64_t to_ticks(double price, double tick);

}  // namespace lobkit
