#include "lobkit/sfe.hpp"

#include <cmath>
#include <cstdlib>

#include "lobkit/error.hpp"

namespace lobkit {

namespace {

struct StepRange {
    std::size_t first;
    std::size_t end;  // exclusive
};

StepRange resolve(const TradeClockSeries& series, Window w)
{
    const std::size_t steps = series.steps();
    if (steps == 0) {
        return {0, 0};
    }
    const std::size_t last = std::min(w.last, steps - 1);
    if (w.first > last) {
        throw ValidationError("empty toxicity window");
    }
    return {w.first, last + 1};
}

}  // namespace

WealthKind parse_wealth_kind(const std::string& name)
{
    if (name == "frictionless") {
        return WealthKind::Frictionless;
    }
    if (name == "classical") {
        return WealthKind::Classical;
    }
    if (name == "proposed") {
        return WealthKind::Proposed;
    }
    if (name == "general") {
        return WealthKind::GeneralBook;
    }
    throw ValidationError("unknown wealth model '" + name + "'");
}

double wealth_increment(WealthKind kind, double L, double dp, double spread, double dL)
{
    switch (kind) {
    case WealthKind::Frictionless:
        return L * dp;
    case WealthKind::Classical:
        return L * dp + 0.5 * spread * std::abs(dL);
    case WealthKind::Proposed:
        return L * dp + 0.5 * spread * std::abs(dL) + dp * dL;
    case WealthKind::GeneralBook:
        break;
    }
    throw ValidationError("general-book increments need a cost function");
}

std::string to_string(WealthKind kind)
{
    switch (kind) {
    case WealthKind::Frictionless:
        return "frictionless";
    case WealthKind::Classical:
        return "classical";
    case WealthKind::Proposed:
        return "proposed";
    case WealthKind::GeneralBook:
        return "general";
    }
    return "?";
}

std::vector<std::int64_t> reconstruct_wealth_fixed(const TradeClockSeries& series, WealthKind kind)
{
    if (kind == WealthKind::GeneralBook) {
        throw ValidationError("general-book wealth is not representable in fixed point");
    }
    const std::size_t n = std::max<std::size_t>(series.size(), 1);
    std::vector<std::int64_t> X(n, 0);
    std::int64_t L = 0;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        const std::int64_t dp = series.mid_half_ticks[i + 1] - series.mid_half_ticks[i];
        const std::int64_t dL = series.dL[i];
        std::int64_t inc = L * dp;
        if (kind != WealthKind::Frictionless) {
            inc += series.spread_ticks[i] * std::abs(dL);  // (s/2)|dL| in half-ticks
        }
        if (kind == WealthKind::Proposed) {
            inc += dp * dL;
        }
        X[i + 1] = X[i] + inc;
        L += dL;
    }
    return X;
}

std::vector<double> reconstruct_wealth(const TradeClockSeries& series, const WealthModel& model)
{
    if (model.kind != WealthKind::GeneralBook) {
        const auto fixed = reconstruct_wealth_fixed(series, model.kind);
        std::vector<double> X(fixed.size());
        for (std::size_t i = 0; i < fixed.size(); ++i) {
            X[i] = static_cast<double>(fixed[i]) * series.half_tick();
        }
        return X;
    }
    if (model.costs.size() < series.steps()) {
        throw ValidationError("general-book model needs one cost function per step: have "
                              + std::to_string(model.costs.size()) + ", need "
                              + std::to_string(series.steps()));
    }
    const std::size_t n = std::max<std::size_t>(series.size(), 1);
    std::vector<double> X(n, 0.0);
    double L = 0.0;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        const double dp = series.price_step(i);
        const double dL = series.volume(i);
        X[i + 1] = X[i] + L * dp + model.costs[i](-dL) + dp * dL;
        L += dL;
    }
    return X;
}

Window parse_window(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ValidationError("window must look like a:b");
    }
    Window w;
    auto parse = [&](const std::string& s, std::size_t fallback) -> std::size_t {
        if (s.empty()) {
            return fallback;
        }
        char* end = nullptr;
        const long long v = std::strtoll(s.c_str(), &end, 10);
        if (*end != '\0' || v < 0) {
            throw ValidationError("malformed window bound '" + s + "'");
        }
        return static_cast<std::size_t>(v);
    };
    w.first = parse(text.substr(0, colon), 0);
    w.last = parse(text.substr(colon + 1), static_cast<std::size_t>(-1));
    return w;
}

ValidationReport validate(const TradeClockSeries& series)
{
    ValidationReport r;
    r.n_trades = series.size();
    r.n_steps = series.steps();
    for (std::size_t i = 0; i < r.n_steps; ++i) {
        const std::int64_t dp = series.mid_half_ticks[i + 1] - series.mid_half_ticks[i];
        const std::int64_t dL = series.dL[i];
        if ((dp > 0 && dL > 0) || (dp < 0 && dL < 0)) {
            ++r.impact_violations;
            r.impact_indices.push_back(i);
        }
        // |dp| > s, with dp in half-ticks and s in ticks.
        if (std::abs(dp) > 2 * series.spread_ticks[i]) {
            ++r.recovery_violations;
            r.recovery_indices.push_back(i);
        }
    }
    if (r.n_steps > 0) {
        r.impact_fraction = static_cast<double>(r.impact_violations) / static_cast<double>(r.n_steps);
        r.recovery_fraction = static_cast<double>(r.recovery_violations) / static_cast<double>(r.n_steps);
    }
    return r;
}

double toxicity_rho(const TradeClockSeries& series, Window window)
{
    const auto [first, end] = resolve(series, window);
    const std::size_t n = end - first;
    if (n < 2) {
        throw UndefinedStatistic("toxicity correlation needs at least two steps");
    }
    double mL = 0.0;
    double mp = 0.0;
    for (std::size_t i = first; i < end; ++i) {
        mL += series.volume(i);
        mp += series.price_step(i);
    }
    mL /= static_cast<double>(n);
    mp /= static_cast<double>(n);
    double sLL = 0.0;
    double spp = 0.0;
    double sLp = 0.0;
    for (std::size_t i = first; i < end; ++i) {
        const double a = series.volume(i) - mL;
        const double b = series.price_step(i) - mp;
        sLL += a * a;
        spp += b * b;
        sLp += a * b;
    }
    if (sLL == 0.0 || spp == 0.0) {
        throw UndefinedStatistic("toxicity correlation undefined: zero variance in window");
    }
    return -sLp / std::sqrt(sLL * spp);
}

ToxicityRatio toxicity_ratio(const TradeClockSeries& series, Window window)
{
    const auto [first, end] = resolve(series, window);
    ToxicityRatio r;
    double denom = 0.0;
    for (std::size_t i = first; i < end; ++i) {
        const double dL = series.volume(i);
        const double spread_cost = series.spread(i) * std::abs(dL);
        denom += spread_cost;
        r.spread_component += 0.5 * spread_cost;
        r.impact_component += series.price_step(i) * dL;
    }
    if (denom == 0.0) {
        throw UndefinedStatistic("toxicity ratio undefined: zero spread component");
    }
    r.ratio = -2.0 * r.impact_component / denom;
    return r;
}

std::vector<double> quad_covariation_path(const TradeClockSeries& series)
{
    std::vector<double> out(series.steps());
    std::int64_t acc = 0;  // half-ticks x shares
    for (std::size_t i = 0; i < out.size(); ++i) {
        acc += (series.mid_half_ticks[i + 1] - series.mid_half_ticks[i]) * series.dL[i];
        out[i] = static_cast<double>(acc) * series.half_tick();
    }
    return out;
}

}  // namespace lobkit
