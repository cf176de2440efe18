#include "lobkit/fixed_point.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "lobkit/error.hpp"

namespace lobkit {

std::int64_t parse_fixed(std::string_view text, int decimals)
{
    if (text.empty()) {
        throw ValidationError("empty decimal field");
    }
    if (text.front() == '-') {
        throw ValidationError("negative value '" + std::string(text) + "'");
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);

    if (whole.empty() && frac.empty()) {
        throw ValidationError("malformed decimal '" + std::string(text) + "'");
    }
    if (static_cast<int>(frac.size()) > decimals) {
        throw ValidationError("too many fractional digits in '" + std::string(text) + "'");
    }

    std::int64_t int_part = 0;
    if (!whole.empty()) {
        auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), int_part);
        if (ec != std::errc{} || ptr != whole.data() + whole.size()) {
            throw ValidationError("malformed decimal '" + std::string(text) + "'");
        }
    }
    std::int64_t frac_part = 0;
    if (!frac.empty()) {
        auto [ptr, ec] = std::from_chars(frac.data(), frac.data() + frac.size(), frac_part);
        if (ec != std::errc{} || ptr != frac.data() + frac.size()) {
            throw ValidationError("malformed decimal '" + std::string(text) + "'");
        }
    }
    std::int64_t scale = 1;
    for (int i = 0; i < decimals; ++i) {
        scale *= 10;
    }
    for (std::size_t i = frac.size(); i < static_cast<std::size_t>(decimals); ++i) {
        frac_part *= 10;
    }
    return int_part * scale + frac_part;
}

std::string format_fixed(std::int64_t units, int decimals)
{
    std::int64_t scale = 1;
    for (int i = 0; i < decimals; ++i) {
        scale *= 10;
    }
    const bool negative = units < 0;
    const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(units + 1)) + 1
                                       : static_cast<std::uint64_t>(units);
    std::string frac = std::to_string(mag % static_cast<std::uint64_t>(scale));
    frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
    std::string out = negative ? "-" : "";
    out += std::to_string(mag / static_cast<std::uint64_t>(scale));
    if (decimals > 0) {
        out += '.';
        out += frac;
    }
    return out;
}

std::int64_t to_ticks(double price, double tick)
{
    if (!(tick > 0.0) || !std::isfinite(price)) {
        throw ValidationError("invalid price or tick");
    }
    const double q = price / tick;
    const double r = std::nearbyint(q);
    if (std::abs(q - r) > 1e-6) {
        throw ValidationError("price " + std::to_string(price) + " is not a multiple of tick "
                              + std::to_string(tick));
    }
    return static_cast<std::int64_t>(r);
}

}  // namespace lobkit
