#include "lobkit/trade_tape.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "lobkit/error.hpp"

namespace lobkit {

namespace {

constexpr std::array<std::string_view, 8> kColumns = {"seq",       "ts_ns", "price", "size",
                                                       "aggressor", "flags", "bid",   "ask"};

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::int64_t parse_int(std::string_view s, const char* what)
{
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ValidationError(std::string("malformed ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

unsigned parse_flags(std::string_view s)
{
    unsigned flags = kNoFlags;
    if (s.empty()) {
        return flags;
    }
    for (std::string_view f : split(s, ';')) {
        f = trim(f);
        if (f == "C") {
            flags |= kSpecialDeal;
        } else if (f == "H") {
            flags |= kHidden;
        } else if (!f.empty()) {
            throw ValidationError("unknown flag '" + std::string(f) + "'");
        }
    }
    return flags;
}

}  // namespace

std::vector<TradeRecord> ingest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open tape file " + path.string());
    }
    return ingest(in);
}

std::vector<TradeRecord> ingest(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    std::array<int, kColumns.size()> index{};
    index.fill(-1);

    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            break;
        }
    }
    if (line_no == 0 || trim(line).empty()) {
        throw ValidationError("tape is empty: header required");
    }
    const auto header = split(trim(line), ',');
    for (std::size_t i = 0; i < header.size(); ++i) {
        for (std::size_t c = 0; c < kColumns.size(); ++c) {
            if (trim(header[i]) == kColumns[c]) {
                index[c] = static_cast<int>(i);
            }
        }
    }
    std::vector<std::string> errors;
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        if (index[c] < 0) {
            errors.push_back("line " + std::to_string(line_no) + ": missing column '"
                             + std::string(kColumns[c]) + "'");
        }
    }
    if (!errors.empty()) {
        throw ValidationError(errors.front());
    }

    std::vector<TradeRecord> records;
    std::size_t prev_line = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split(trim(line), ',');
        try {
            if (fields.size() != header.size()) {
                throw ValidationError("expected " + std::to_string(header.size()) + " fields, got "
                                      + std::to_string(fields.size()));
            }
            auto field = [&](std::size_t c) { return trim(fields[static_cast<std::size_t>(index[c])]); };
            TradeRecord r;
            r.seq = parse_int(field(0), "seq");
            r.ts_ns = parse_int(field(1), "ts_ns");
            r.price = parse_fixed(field(2));
            r.size = parse_int(field(3), "size");
            const auto agg = field(4);
            if (agg == "B") {
                r.aggressor = Aggressor::Buy;
            } else if (agg == "S") {
                r.aggressor = Aggressor::Sell;
            } else {
                throw ValidationError("aggressor must be B or S, got '" + std::string(agg) + "'");
            }
            r.flags = parse_flags(field(5));
            r.bid_before = parse_fixed(field(6));
            r.ask_before = parse_fixed(field(7));
            if (r.size <= 0) {
                throw ValidationError("size must be positive");
            }
            if (r.price <= 0 || r.bid_before <= 0 || r.ask_before <= 0) {
                throw ValidationError("prices must be positive");
            }
            if (r.bid_before >= r.ask_before) {
                throw ValidationError("bid must be below ask");
            }
            if (!records.empty() && r.seq <= records.back().seq) {
                throw ValidationError("non-monotone seq: line " + std::to_string(prev_line) + " seq "
                                      + std::to_string(records.back().seq) + " followed by seq "
                                      + std::to_string(r.seq));
            }
            records.push_back(r);
            prev_line = line_no;
        } catch (const ValidationError& e) {
            errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!errors.empty()) {
        std::string msg = std::to_string(errors.size()) + " malformed row(s)";
        for (const auto& e : errors) {
            msg += "\n  " + e;
        }
        throw ValidationError(msg);
    }
    return records;
}

void write_tape(std::ostream& out, const std::vector<TradeRecord>& records)
{
    out << "seq,ts_ns,price,size,aggressor,flags,bid,ask\n";
    for (const TradeRecord& r : records) {
        std::string flags;
        if (r.flags & kSpecialDeal) {
            flags += "C";
        }
        if (r.flags & kHidden) {
            flags += flags.empty() ? "H" : ";H";
        }
        out << r.seq << ',' << r.ts_ns << ',' << format_fixed(r.price) << ',' << r.size << ','
            << (r.aggressor == Aggressor::Buy ? 'B' : 'S') << ',' << flags << ','
            << format_fixed(r.bid_before) << ',' << format_fixed(r.ask_before) << '\n';
    }
}

FilterReport filter_tape(std::vector<TradeRecord> records)
{
    FilterReport report;
    report.input_count = records.size();
    report.kept.reserve(records.size());
    for (const TradeRecord& r : records) {
        if (r.flags & kSpecialDeal) {
            ++report.dropped_special;
        }
        if (r.flags & kHidden) {
            ++report.dropped_hidden;
        }
        if (r.flags & (kSpecialDeal | kHidden)) {
            ++report.dropped_total;
        } else {
            report.kept.push_back(r);
        }
    }
    report.dropped_fraction = report.input_count == 0
                                  ? 0.0
                                  : static_cast<double>(report.dropped_total)
                                        / static_cast<double>(report.input_count);
    if (report.input_count > 0 && report.kept.empty()) {
        report.warnings.push_back("every record was filtered out; tape is empty");
    }
    return report;
}

SeriesBuild build_series(const std::vector<TradeRecord>& records, double tick)
{
    SeriesBuild out;
    out.series.tick = tick;
    auto& s = out.series;
    for (const TradeRecord& r : records) {
        const std::int64_t quote = r.aggressor == Aggressor::Buy ? r.ask_before : r.bid_before;
        if (r.price != quote) {
            ++out.rejected;
            std::ostringstream msg;
            msg << "seq " << r.seq << ": price " << format_fixed(r.price);
            if (r.price > r.bid_before && r.price < r.ask_before) {
                msg << " strictly inside the spread";
            } else if (r.price < r.bid_before || r.price > r.ask_before) {
                msg << " outside the quoted spread";
            } else {
                msg << " on the passive side for a " << (r.aggressor == Aggressor::Buy ? "buy" : "sell");
            }
            msg << " [" << format_fixed(r.bid_before) << ", " << format_fixed(r.ask_before) << "]";
            out.diagnostics.push_back(msg.str());
            continue;
        }
        const std::int64_t mid2 = r.bid_before + r.ask_before;
        const std::int64_t spread = r.ask_before - r.bid_before;
        const std::int64_t dL = r.aggressor == Aggressor::Sell ? r.size : -r.size;
        // dK = -p dL + (s/2)|dL| in half-ticks.
        const std::int64_t dK = -mid2 * dL + spread * (dL < 0 ? -dL : dL);
        s.mid_half_ticks.push_back(mid2);
        s.spread_ticks.push_back(spread);
        s.dL.push_back(dL);
        s.dK_half_ticks.push_back(dK);
    }
    return out;
}

ProviderLedger build_ledger(const TradeClockSeries& series)
{
    ProviderLedger ledger;
    ledger.tick = series.tick;
    const std::size_t n = std::max<std::size_t>(series.size(), 1);
    ledger.L.assign(n, 0);
    ledger.K_half_ticks.assign(n, 0);
    ledger.X_half_ticks.assign(n, 0);
    for (std::size_t i = 1; i < series.size(); ++i) {
        ledger.L[i] = ledger.L[i - 1] + series.dL[i - 1];
        ledger.K_half_ticks[i] = ledger.K_half_ticks[i - 1] + series.dK_half_ticks[i - 1];
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        ledger.X_half_ticks[i] = series.mid_half_ticks[i] * ledger.L[i] + ledger.K_half_ticks[i];
    }
    return ledger;
}

}  // namespace lobkit
