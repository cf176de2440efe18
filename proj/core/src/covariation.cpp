#include "lobkit/covariation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "lobkit/error.hpp"
#include "lobkit/gaussian.hpp"
#include "lobkit/sfe.hpp"

namespace lobkit {

CltStats clt_stats_increments(std::span<const double> dp, std::span<const double> dL, double N)
{
    if (dp.size() != dL.size()) {
        throw ValidationError("clt_stats: increment arrays differ in length");
    }
    if (dp.size() < 2) {
        throw ValidationError("clt_stats: need at least 3 observations");
    }
    const std::size_t n = dp.size();
    CltStats s;
    s.C.assign(n + 1, 0.0);
    s.V.assign(n + 1, 0.0);
    double c = 0.0;
    double v = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        c += dp[k - 1] * dL[k - 1];
        s.C[k] = c;
        if (k >= 2) {
            const std::size_t i = k - 2;
            const double a = dp[i] * dL[i + 1];
            v += a * a + dp[i] * dL[i] * dp[i + 1] * dL[i + 1];
        }
        s.V[k] = N * v;
    }
    return s;
}

CltStats clt_stats(std::span<const double> p, std::span<const double> L, double N)
{
    if (p.size() != L.size()) {
        throw ValidationError("clt_stats: p and L differ in length");
    }
    if (p.size() < 3) {
        throw ValidationError("clt_stats: need at least 3 observations");
    }
    std::vector<double> dp(p.size() - 1), dL(p.size() - 1);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        dp[i] = p[i + 1] - p[i];
        dL[i] = L[i + 1] - L[i];
    }
    return clt_stats_increments(dp, dL, N);
}

std::pair<double, double> ci(double C, double V, double N, double level)
{
    if (!(level > 0.0 && level < 1.0)) {
        throw ValidationError("confidence level must lie in (0, 1)");
    }
    if (!(N > 0.0)) {
        throw ValidationError("N must be positive");
    }
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(std::abs(V) / N);
    return {C - half, C + half};
}

double window_rejection(double C_w, double V_w, double N)
{
    const double sd = std::sqrt(std::abs(V_w) / N);
    if (sd == 0.0) {
        return C_w < 0.0 ? 1.0 : (C_w > 0.0 ? 0.0 : 0.5);
    }
    return normal_cdf(-C_w / sd);
}

CovariationTestReport reject_null(std::span<const double> dp, std::span<const double> dL,
                                  std::span<const double> spread, std::size_t window, double level, double N)
{
    if (dp.size() != dL.size() || spread.size() < dp.size()) {
        throw ValidationError("reject_null: array lengths differ");
    }
    if (window < 2) {
        throw ValidationError("reject_null: window must hold at least 2 increments");
    }
    if (dp.size() < window) {
        throw ValidationError("reject_null: fewer increments than one window");
    }
    CovariationTestReport r;
    r.n_steps = dp.size();
    r.n_trades = dp.size() + 1;
    const double scale = N > 0.0 ? N : static_cast<double>(r.n_trades);
    const CltStats s = clt_stats_increments(dp, dL, scale);
    r.C_path = s.C;
    r.V_path = s.V;
    r.level = level;
    r.window = window;
    r.ci_lower.resize(s.C.size());
    r.ci_upper.resize(s.C.size());
    for (std::size_t k = 0; k < s.C.size(); ++k) {
        std::tie(r.ci_lower[k], r.ci_upper[k]) = ci(s.C[k], s.V[k], scale, level);
    }
    for (std::size_t start = 0; start + window <= dp.size(); start += window) {
        const CltStats w = clt_stats_increments(dp.subspan(start, window), dL.subspan(start, window), scale);
        const double prob = window_rejection(w.C.back(), w.V.back(), scale);
        r.window_rejections.push_back(prob);
        r.overall_rejection *= prob;
        r.min_window_rejection = std::min(r.min_window_rejection, prob);
    }
    for (std::size_t i = 0; i < dp.size(); ++i) {
        if (dp[i] * dL[i] > 0.0) {
            ++r.impact_violations;
        }
        if (std::abs(dp[i]) > spread[i]) {
            ++r.recovery_violations;
        }
    }
    return r;
}

CovariationTestReport reject_null(const TradeClockSeries& series, std::size_t window, double level)
{
    const std::size_t n = series.steps();
    std::vector<double> dp(n), dL(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        dp[i] = series.price_step(i);
        dL[i] = series.volume(i);
        s[i] = series.spread(i);
    }
    CovariationTestReport r = reject_null(dp, dL, s, window, level, static_cast<double>(series.size()));
    // recovery and impact counts use the exact fixed-point comparison
    const ValidationReport v = validate(series);
    r.impact_violations = v.impact_violations;
    r.recovery_violations = v.recovery_violations;
    r.n_trades = series.size();
    return r;
}

CovariationTestReport reject_null(const PathBundle& bundle, std::size_t path, std::size_t window, double level)
{
    if (path >= bundle.paths()) {
        throw ValidationError("reject_null: path index out of range");
    }
    const auto& p = bundle.p[path];
    const auto& L = bundle.L[path];
    const std::size_t n = p.size() - 1;
    std::vector<double> dp(n), dL(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        dp[i] = p[i + 1] - p[i];
        dL[i] = L[i + 1] - L[i];
        s[i] = path < bundle.spread.size() && i < bundle.spread[path].size()
                   ? bundle.spread[path][i]
                   : std::numeric_limits<double>::infinity();
    }
    return reject_null(dp, dL, s, window, level, static_cast<double>(bundle.steps_per_unit));
}

namespace {

double round_format(const char* fmt, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, x);
    return std::strtod(buf, nullptr);
}

std::string shortest(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    if (quoted) {
        throw ValidationError("unterminated quote in report row");
    }
    return out;
}

template <class T>
T parse_number(const std::string& s, std::size_t line)
{
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ValidationError("report line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

ReportRow quantize(ReportRow row)
{
    row.proba_reject = round_format("%.7f", row.proba_reject);
    row.percent_false = round_format("%.7g", row.percent_false);
    row.recovery_rejection = round_format("%.6f", row.recovery_rejection);
    return row;
}

ReportRow make_report_row(const std::string& stock, const CovariationTestReport& report)
{
    ReportRow row;
    row.stock = stock;
    row.proba_reject = report.overall_rejection;
    row.nb_false = report.impact_violations;
    row.nb_trades = report.n_trades;
    const double trades = static_cast<double>(std::max<std::size_t>(report.n_trades, 1));
    row.percent_false = 100.0 * static_cast<double>(report.impact_violations) / trades;
    row.recovery_rejection = 100.0 * static_cast<double>(report.recovery_violations) / trades;
    return quantize(row);
}

const std::vector<std::string>& report_columns()
{
    static const std::vector<std::string> cols{"Stock",      "proba reject",  "nb false",
                                               "nb trades",  "percent false", "recovery rejection"};
    return cols;
}

std::string report_table_csv(const std::vector<ReportRow>& rows)
{
    std::ostringstream out;
    const auto& cols = report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << cols[i];
    }
    out << '\n';
    for (const ReportRow& r : rows) {
        out << csv_field(r.stock) << ',' << shortest(r.proba_reject) << ',' << r.nb_false << ',' << r.nb_trades << ','
            << shortest(r.percent_false) << ',' << shortest(r.recovery_rejection) << '\n';
    }
    return out.str();
}

std::string report_table_text(const std::vector<ReportRow>& rows)
{
    const auto& cols = report_columns();
    std::vector<std::vector<std::string>> cells;
    cells.push_back(cols);
    char buf[64];
    for (const ReportRow& r : rows) {
        std::vector<std::string> line{r.stock};
        std::snprintf(buf, sizeof buf, "%.7f", r.proba_reject);
        line.emplace_back(buf);
        line.push_back(std::to_string(r.nb_false));
        line.push_back(std::to_string(r.nb_trades));
        std::snprintf(buf, sizeof buf, "%.7g", r.percent_false);
        line.emplace_back(buf);
        std::snprintf(buf, sizeof buf, "%.6f", r.recovery_rejection);
        line.emplace_back(buf);
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(cols.size(), 0);
    for (const auto& line : cells) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            width[i] = std::max(width[i], line[i].size());
        }
    }
    std::ostringstream out;
    for (const auto& line : cells) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i == 0) {
                out << line[i] << std::string(width[i] - line[i].size(), ' ');
            } else {
                out << " | " << std::string(width[i] - line[i].size(), ' ') << line[i];
            }
        }
        out << '\n';
    }
    return out.str();
}

std::vector<ReportRow> parse_report_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("report: missing header");
    }
    if (split_csv(line) != report_columns()) {
        throw ValidationError("report: unexpected header '" + line + "'");
    }
    std::vector<ReportRow> rows;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 6) {
            throw ValidationError("report line " + std::to_string(number) + ": expected 6 fields");
        }
        ReportRow r;
        r.stock = f[0];
        r.proba_reject = parse_number<double>(f[1], number);
        r.nb_false = parse_number<std::size_t>(f[2], number);
        r.nb_trades = parse_number<std::size_t>(f[3], number);
        r.percent_false = parse_number<double>(f[4], number);
        r.recovery_rejection = parse_number<double>(f[5], number);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace lobkit
