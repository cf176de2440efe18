#pragma once

// Reference computations written from the defining formulas, sharing no code
// with the library beyond its plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "lobkit/order_book.hpp"
#include "lobkit/trade_tape.hpp"

namespace oracle {

// ---- accounting ----

// Ledger wealth straight from the raw records, in half-ticks:
// 2p = bid + ask, dK = -p dL + (s/2)|dL|, X_n = p_n L_n + K_n.
struct HalfTickLedger {
    std::vector<std::int64_t> X;  // X_0 .. X_{N-1}
    std::vector<std::int64_t> proposed;  // X_0 + sum of L dp + (s/2)|dL| + dp dL
};

inline HalfTickLedger ledger(const std::vector<lobkit::TradeRecord>& recs)
{
    HalfTickLedger out;
    const std::size_t n = recs.size();
    std::int64_t L = 0, K = 0;
    std::int64_t Xp = 0;
    for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i) {
        if (n == 0) {
            out.X.push_back(0);
            out.proposed.push_back(0);
            break;
        }
        const auto& r = recs[i];
        const std::int64_t p2 = r.bid_before + r.ask_before;
        out.X.push_back(p2 * L + K);
        if (i == 0) {
            Xp = out.X.back();
        } else {
            const auto& q = recs[i - 1];
            const std::int64_t dp2 = p2 - (q.bid_before + q.ask_before);
            const std::int64_t dL = q.aggressor == lobkit::Aggressor::Sell ? q.size : -q.size;
            Xp += (L - dL) * dp2 + (q.ask_before - q.bid_before) * std::llabs(dL) + dp2 * dL;
        }
        out.proposed.push_back(Xp);
        const std::int64_t dL = r.aggressor == lobkit::Aggressor::Sell ? r.size : -r.size;
        K += -p2 * dL + (r.ask_before - r.bid_before) * std::llabs(dL);
        L += dL;
    }
    return out;
}

// ---- books ----

// gamma(u) = sum_a v (u - d_a)^+ + sum_b v (d_b - u)^+ with d = price - p
inline double shape(const lobkit::OrderBook& book, double p, double u)
{
    double g = 0.0;
    for (const auto& a : book.asks()) {
        g += a.volume * std::max(0.0, u - (book.price(a.price_ticks) - p));
    }
    for (const auto& b : book.bids()) {
        g += b.volume * std::max(0.0, (book.price(b.price_ticks) - p) - u);
    }
    return g;
}

// c(l) = sup_u (u l - gamma(u)); the sup of a concave piecewise-linear
// function sits on a kink, so scanning {0} and every level offset is exact
// whenever l is within the executable depth.
inline double conjugate(const lobkit::OrderBook& book, double p, double l)
{
    double best = 0.0;
    auto consider = [&](double u) { best = std::max(best, u * l - shape(book, p, u)); };
    for (const auto& a : book.asks()) {
        consider(book.price(a.price_ticks) - p);
    }
    for (const auto& b : book.bids()) {
        consider(book.price(b.price_ticks) - p);
    }
    return best;
}

// Direct fill of every bid >= alpha and every ask <= alpha.
struct Fill {
    double dL = 0.0;
    double dK = 0.0;
};

inline Fill fill(const lobkit::OrderBook& book, double alpha)
{
    Fill f;
    for (const auto& b : book.bids()) {
        if (book.price(b.price_ticks) >= alpha) {
            f.dL += b.volume;
            f.dK -= book.price(b.price_ticks) * b.volume;
        }
    }
    for (const auto& a : book.asks()) {
        if (book.price(a.price_ticks) <= alpha) {
            f.dL -= a.volume;
            f.dK += book.price(a.price_ticks) * a.volume;
        }
    }
    return f;
}

inline lobkit::OrderBook random_book(std::mt19937_64& rng, int max_levels = 10)
{
    std::uniform_int_distribution<int> levels(1, max_levels);
    std::uniform_int_distribution<int> gap(1, 50);
    std::uniform_int_distribution<int> vol(1, 1000);
    const std::int64_t bid = 500000 + static_cast<std::int64_t>(rng() % 100000);
    const std::int64_t ask = bid + 2 * gap(rng);
    std::vector<lobkit::Level> bids, asks;
    std::int64_t px = bid;
    for (int i = levels(rng); i > 0; --i) {
        bids.insert(bids.begin(), {px, vol(rng) / 4.0});
        px -= gap(rng);
    }
    px = ask;
    for (int i = levels(rng); i > 0; --i) {
        asks.push_back({px, vol(rng) / 4.0});
        px += gap(rng);
    }
    return lobkit::OrderBook(1e-4, bids, asks);
}

// ---- Gaussian ----

inline double norm_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// E[F(Z)], Z ~ N(0, sigma^2), composite Simpson on +-12 sigma, restarted at
// each breakpoint so kinks of F sit on segment ends.
inline double gauss_expect(double sigma, const std::function<double(double)>& F, std::vector<double> breaks = {},
                           int n = 200000)
{
    const double a = -12.0 * sigma, b = 12.0 * sigma;
    auto w = [&](double y) {
        return F(y) * std::exp(-0.5 * y * y / (sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
    };
    std::vector<double> pts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double x : breaks) {
        if (x > pts.back() && x < b) {
            pts.push_back(x);
        }
    }
    pts.push_back(b);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double lo = pts[k], hi = pts[k + 1];
        const int m = 2 * std::max(1, static_cast<int>(0.5 * n * (hi - lo) / (b - a)));
        const double h = (hi - lo) / m;
        double s = w(lo) + w(hi);
        for (int i = 1; i < m; ++i) {
            s += (i % 2 ? 4.0 : 2.0) * w(lo + i * h);
        }
        total += s * h / 3.0;
    }
    return total;
}

// Black-Scholes with zero rates.
inline double bs_call(double S, double K, double vol, double T)
{
    const double sd = vol * std::sqrt(T);
    const double d1 = std::log(S / K) / sd + 0.5 * sd;
    return S * norm_cdf(d1) - K * norm_cdf(d1 - sd);
}

inline double bs_put(double S, double K, double vol, double T)
{
    return bs_call(S, K, vol, T) - S + K;
}

// ---- market maker ----

// argmax of F on a uniform grid over [0, hi] with one parabolic refinement step
inline double grid_argmax(const std::function<double(double)>& F, double hi, std::size_t points)
{
    const double h = hi / static_cast<double>(points);
    std::size_t best = 0;
    double fbest = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= points; ++i) {
        const double v = F(h * static_cast<double>(i));
        if (v > fbest) {
            fbest = v;
            best = i;
        }
    }
    double x = h * static_cast<double>(best);
    if (best > 0 && best < points) {
        const double fl = F(x - h), fr = F(x + h);
        const double den = fl - 2.0 * fbest + fr;
        if (den < 0.0) {
            x += 0.5 * h * (fl - fr) / den;
        }
    }
    return x;
}

// ---- statistics ----

inline double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

inline double std_error(const std::vector<double>& v)
{
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace oracle
