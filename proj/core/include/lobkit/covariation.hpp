#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lobkit/ito.hpp"
#include "lobkit/trade_tape.hpp"

namespace lobkit {

/// C^N and V^N as paths over the observation index k = 0..n (n increments):
///   C[k] = sum_{i<k} dp_i dL_i,
///   V[k] = N sum_{i<=k-2} ((dp_i dL_{i+1})^2 + dp_i dL_i dp_{i+1} dL_{i+1}).
struct CltStats {
    std::vector<double> C;
    std::vector<double> V;
};

/// From increment arrays; N scales V (observations per unit time).
CltStats clt_stats_increments(std::span<const double> dp, std::span<const double> dL, double N);
/// From level arrays p^N, L^N of equal length >= 3.
CltStats clt_stats(std::span<const double> p, std::span<const double> L, double N);

/// C +- z_{(1+q)/2} sqrt(|V| / N).
std::pair<double, double> ci(double C, double V, double N, double level);

struct CovariationTestReport {
    std::vector<double> C_path;
    std::vector<double> V_path;
    double level = 0.95;
    std::vector<double> ci_lower;
    std::vector<double> ci_upper;
    std::size_t window = 100;
    /// Per window: Gaussian probability that the window's covariation is <= 0.
    std::vector<double> window_rejections;
    double overall_rejection = 1.0;  ///< product over windows
    double min_window_rejection = 1.0;
    std::size_t impact_violations = 0;
    std::size_t recovery_violations = 0;
    std::size_t n_trades = 0;  ///< observations
    std::size_t n_steps = 0;   ///< increments
};

/// Window probability Phi(-C_w / sqrt(|V_w| / N)); 1, 0 or 1/2 by the sign of C_w when V_w = 0.
double window_rejection(double C_w, double V_w, double N);

/// Null-hypothesis test from increments and spreads (spread[i] is the
/// recovery bound for dp[i]). N defaults to the number of observations.
CovariationTestReport reject_null(std::span<const double> dp, std::span<const double> dL,
                                  std::span<const double> spread, std::size_t window = 100, double level = 0.95,
                                  double N = 0.0);
/// On a trade-clock series with N = number of trades.
CovariationTestReport reject_null(const TradeClockSeries& series, std::size_t window = 100, double level = 0.95);
/// On one simulated path with N = steps per unit time.
CovariationTestReport reject_null(const PathBundle& bundle, std::size_t path = 0, std::size_t window = 100,
                                  double level = 0.95);

/// One row of the rejection table, held at printed precision.
struct ReportRow {
    std::string stock;
    double proba_reject = 0.0;        ///< 7 decimals
    std::size_t nb_false = 0;
    std::size_t nb_trades = 0;
    double percent_false = 0.0;       ///< 7 significant digits
    double recovery_rejection = 0.0;  ///< percent, 6 decimals

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

ReportRow make_report_row(const std::string& stock, const CovariationTestReport& report);
/// Rounds the numeric fields to the table precision.
ReportRow quantize(ReportRow row);

const std::vector<std::string>& report_columns();

std::string report_table_csv(const std::vector<ReportRow>& rows);
std::string report_table_text(const std::vector<ReportRow>& rows);
/// Parses report_table_csv output; throws ValidationError on a bad header or row.
std::vector<ReportRow> parse_report_csv(std::istream& in);

}  // namespace lobkit
