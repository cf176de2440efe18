#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lobkit/error.hpp"
#include "lobkit/fixed_point.hpp"
#include "lobkit/synthetic.hpp"
#include "lobkit/trade_tape.hpp"
#include "oracles.hpp"

using namespace lobkit;

namespace {

TradeRecord rec(std::int64_t seq, const char* bid, const char* ask, Aggressor a, std::int64_t size,
                unsigned flags = kNoFlags)
{
    TradeRecord r;
    r.seq = seq;
    r.ts_ns = 1000 * seq;
    r.bid_before = parse_fixed(bid);
    r.ask_before = parse_fixed(ask);
    r.price = a == Aggressor::Sell ? r.bid_before : r.ask_before;
    r.aggressor = a;
    r.size = size;
    r.flags = flags;
    return r;
}

std::string message_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(FixedPoint, ParseAndFormat)
{
    EXPECT_EQ(parse_fixed("100.01"), 1000100);
    EXPECT_EQ(parse_fixed("99.9999"), 999999);
    EXPECT_EQ(parse_fixed("7"), 70000);
    EXPECT_EQ(format_fixed(1000100), "100.0100");
    EXPECT_THROW(parse_fixed("1.23456"), ValidationError);
    EXPECT_THROW(parse_fixed("-1"), ValidationError);
    EXPECT_THROW(parse_fixed("abc"), ValidationError);
    EXPECT_EQ(to_ticks(100.01, 1e-4), 1000100);
    EXPECT_THROW(to_ticks(100.00005, 1e-4), ValidationError);
}

TEST(Ingest, WellFormedRowsInOrder)
{
    std::istringstream in("seq,ts_ns,price,size,aggressor,flags,bid,ask\n"
                          "1,100,100.01,10,B,,99.99,100.01\n"
                          "2,200,99.99,5,S,H,99.99,100.01\n"
                          "3,300,100.00,7,S,C;H,100.00,100.02\n");
    const auto r = ingest(in);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0].seq, 1);
    EXPECT_EQ(r[0].aggressor, Aggressor::Buy);
    EXPECT_EQ(r[0].price, 1000100);
    EXPECT_EQ(r[1].flags, kHidden);
    EXPECT_EQ(r[2].flags, kSpecialDeal | kHidden);
    EXPECT_EQ(r[2].bid_before, 1000000);
}

TEST(Ingest, ColumnsInAnyOrder)
{
    std::istringstream in("aggressor,seq,bid,ask,price,size,flags,ts_ns\nS,4,10.00,10.01,10.00,3,,9\n");
    const auto r = ingest(in);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].seq, 4);
    EXPECT_EQ(r[0].ts_ns, 9);
    EXPECT_EQ(r[0].size, 3);
}

TEST(Ingest, ZeroSizeNamesLine)
{
    std::istringstream in("seq,ts_ns,price,size,aggressor,flags,bid,ask\n"
                          "1,100,100.01,10,B,,99.99,100.01\n"
                          "2,200,100.01,0,B,,99.99,100.01\n");
    const std::string msg = message_of([&] { ingest(in); });
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("size"), std::string::npos) << msg;
}

TEST(Ingest, NonMonotoneSeqListsPair)
{
    std::istringstream in("seq,ts_ns,price,size,aggressor,flags,bid,ask\n"
                          "5,100,100.01,10,B,,99.99,100.01\n"
                          "4,200,100.01,1,B,,99.99,100.01\n");
    const std::string msg = message_of([&] { ingest(in); });
    EXPECT_NE(msg.find("seq 5"), std::string::npos) << msg;
    EXPECT_NE(msg.find("seq 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Ingest, SchemaErrors)
{
    std::istringstream missing("seq,ts_ns,price,size,aggressor,flags,bid\n1,1,1,1,B,,1\n");
    EXPECT_NE(message_of([&] { ingest(missing); }).find("ask"), std::string::npos);
    std::istringstream neg("seq,ts_ns,price,size,aggressor,flags,bid,ask\n1,1,-1.0,1,B,,1,2\n");
    EXPECT_THROW(ingest(neg), ValidationError);
    std::istringstream digits("seq,ts_ns,price,size,aggressor,flags,bid,ask\n1,1,1.00001,1,B,,1,2\n");
    EXPECT_THROW(ingest(digits), ValidationError);
    std::istringstream agg("seq,ts_ns,price,size,aggressor,flags,bid,ask\n1,1,2,1,X,,1,2\n");
    EXPECT_THROW(ingest(agg), ValidationError);
    std::istringstream empty("");
    EXPECT_THROW(ingest(empty), ValidationError);
    EXPECT_THROW(ingest(std::filesystem::path("/nonexistent/tape.csv")), IoError);
}

TEST(Ingest, WriteRoundTrip)
{
    SyntheticTapeParams p;
    p.n_trades = 500;
    p.flagged_rate = 0.1;
    const auto recs = generate_synthetic_tape(p, 3);
    std::stringstream ss;
    write_tape(ss, recs);
    EXPECT_EQ(ingest(ss), recs);
}

TEST(Filter, CountsAndFractions)
{
    std::vector<TradeRecord> recs;
    for (int i = 0; i < 100; ++i) {
        recs.push_back(rec(i + 1, "99.99", "100.01", Aggressor::Buy, 1, i % 20 == 0 ? kHidden : kNoFlags));
    }
    const FilterReport f = filter_tape(recs);
    EXPECT_EQ(f.kept.size(), 95u);
    EXPECT_EQ(f.dropped_hidden, 5u);
    EXPECT_EQ(f.dropped_special, 0u);
    EXPECT_DOUBLE_EQ(f.dropped_fraction, 0.05);
    EXPECT_EQ(filter_tape(f.kept).kept, f.kept);  // idempotent
}

TEST(Filter, NoFlagsIsIdentityAndAllFlaggedWarns)
{
    std::vector<TradeRecord> recs{rec(1, "1.00", "1.01", Aggressor::Buy, 1), rec(2, "1.00", "1.01", Aggressor::Sell, 1)};
    EXPECT_EQ(filter_tape(recs).kept, recs);
    EXPECT_TRUE(filter_tape(recs).warnings.empty());
    for (auto& r : recs) {
        r.flags = kSpecialDeal | kHidden;
    }
    const FilterReport f = filter_tape(recs);
    EXPECT_TRUE(f.kept.empty());
    EXPECT_EQ(f.dropped_total, 2u);
    EXPECT_FALSE(f.warnings.empty());
}

TEST(Series, CashFormulaExamples)
{
    const auto s = build_series({rec(1, "99.99", "100.01", Aggressor::Sell, 10),
                                 rec(2, "99.99", "100.01", Aggressor::Buy, 10)})
                       .series;
    EXPECT_EQ(s.mid(0), 100.0);
    EXPECT_DOUBLE_EQ(s.spread(0), 0.02);
    EXPECT_EQ(s.dL[0], 10);
    EXPECT_EQ(s.dL[1], -10);
    EXPECT_DOUBLE_EQ(s.cash(0), -999.90);
    EXPECT_DOUBLE_EQ(s.cash(1), 1000.10);
    // both forms of the cash equation, in exact half-ticks
    for (std::size_t n = 0; n < 2; ++n) {
        const std::int64_t dL = s.dL[n];
        const std::int64_t half_spread_half_ticks = s.spread_ticks[n];
        EXPECT_EQ(s.dK_half_ticks[n], -s.mid_half_ticks[n] * dL + half_spread_half_ticks * std::llabs(dL));
        const std::int64_t side = dL >= 0 ? s.mid_half_ticks[n] - half_spread_half_ticks
                                          : s.mid_half_ticks[n] + half_spread_half_ticks;
        EXPECT_EQ(s.dK_half_ticks[n], -side * dL);
    }
}

TEST(Series, HalfTickMid)
{
    const auto s = build_series({rec(1, "10.00", "10.01", Aggressor::Buy, 1)}).series;
    EXPECT_EQ(s.mid_half_ticks[0], 200100);
    EXPECT_DOUBLE_EQ(s.mid(0), 10.005);
}

TEST(Series, RejectsOffQuoteTrades)
{
    auto inside = rec(2, "99.99", "100.01", Aggressor::Buy, 1);
    inside.price = parse_fixed("100.00");
    auto outside = rec(3, "99.99", "100.01", Aggressor::Sell, 1);
    outside.price = parse_fixed("99.98");
    const SeriesBuild b = build_series({rec(1, "99.99", "100.01", Aggressor::Sell, 1), inside, outside});
    EXPECT_EQ(b.series.size(), 1u);
    EXPECT_EQ(b.rejected, 2u);
    EXPECT_EQ(b.diagnostics.size(), 2u);
}

TEST(Ledger, OneStepExample)
{
    const auto s = build_series({rec(1, "99.99", "100.01", Aggressor::Sell, 10),
                                 rec(2, "99.98", "100.00", Aggressor::Buy, 1)})
                       .series;
    const ProviderLedger L = build_ledger(s);
    ASSERT_EQ(L.L.size(), 2u);
    EXPECT_EQ(L.L[1], 10);
    EXPECT_DOUBLE_EQ(L.K_half_ticks[1] * 0.5e-4, -999.90);
    EXPECT_EQ(L.X_half_ticks[1], 0);
    EXPECT_EQ(L.wealth(0), 0.0);
}

TEST(Ledger, EmptySeries)
{
    const ProviderLedger L = build_ledger(TradeClockSeries{});
    ASSERT_EQ(L.X_half_ticks.size(), 1u);
    EXPECT_EQ(L.L[0], 0);
    EXPECT_EQ(L.K_half_ticks[0], 0);
    EXPECT_EQ(L.X_half_ticks[0], 0);
}

TEST(Ledger, MatchesRecordOracleOnRandomTapes)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SyntheticTapeParams p;
        p.n_trades = 1000;
        p.impact_compliance = 0.8;
        p.recovery_compliance = 0.8;
        const auto recs = generate_synthetic_tape(p, seed);
        const ProviderLedger L = build_ledger(build_series(recs).series);
        const oracle::HalfTickLedger o = oracle::ledger(recs);
        ASSERT_EQ(L.X_half_ticks, o.X);
        // the telescoped increments reproduce the ledger exactly
        ASSERT_EQ(o.proposed, o.X);
    }
}
