#include "lobkit/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lobkit/error.hpp"
#include "lobkit/fixed_point.hpp"

namespace lobkit {

Json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void reject_unknown_keys(const Json& object, std::initializer_list<const char*> allowed, const std::string& context)
{
    if (!object.is_object()) {
        throw ValidationError(context + ": expected a JSON object");
    }
    for (const auto& item : object.items()) {
        bool known = false;
        for (const char* k : allowed) {
            known = known || item.key() == k;
        }
        if (!known) {
            throw ValidationError(context + ": unknown key '" + item.key() + "'");
        }
    }
}

namespace {

const Json& require(const Json& j, const char* key, const std::string& context)
{
    if (!j.contains(key)) {
        throw ValidationError(context + ": missing key '" + key + "'");
    }
    return j.at(key);
}

double number(const Json& j, const std::string& context)
{
    if (!j.is_number()) {
        throw ValidationError(context + ": expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ValidationError(context + ": expected a finite number");
    }
    return v;
}

double number_at(const Json& j, const char* key, const std::string& context)
{
    return number(require(j, key, context), context + "." + key);
}

double number_or(const Json& j, const char* key, double fallback, const std::string& context)
{
    return j.contains(key) ? number(j.at(key), context + "." + key) : fallback;
}

std::uint64_t unsigned_or(const Json& j, const char* key, std::uint64_t fallback, const std::string& context)
{
    if (!j.contains(key)) {
        return fallback;
    }
    const Json& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ValidationError(context + "." + key + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::vector<std::int64_t> int_array(const Json& j, const std::string& context)
{
    if (!j.is_array()) {
        throw ValidationError(context + ": expected an array");
    }
    std::vector<std::int64_t> out;
    out.reserve(j.size());
    for (const Json& v : j) {
        if (!v.is_number_integer()) {
            throw ValidationError(context + ": expected integers");
        }
        out.push_back(v.get<std::int64_t>());
    }
    return out;
}

std::vector<Level> levels(const Json& j, double tick, const std::string& context)
{
    if (!j.is_array()) {
        throw ValidationError(context + ": expected an array of [price, volume]");
    }
    std::vector<Level> out;
    for (const Json& lv : j) {
        if (!lv.is_array() || lv.size() != 2) {
            throw ValidationError(context + ": each level must be [price, volume]");
        }
        out.push_back({to_ticks(number(lv[0], context), tick), number(lv[1], context)});
    }
    return out;
}

Tail tail_from(const Json& j, const std::string& context)
{
    const std::string s = j.is_string() ? j.get<std::string>() : "";
    if (s == "flat") {
        return Tail::Flat;
    }
    if (s == "vertical") {
        return Tail::Vertical;
    }
    if (s == "linear") {
        return Tail::Linear;
    }
    throw ValidationError(context + ": tail must be flat|vertical|linear");
}

std::string type_of(const Json& j, const std::string& context)
{
    const Json& t = require(j, "type", context);
    if (!t.is_string()) {
        throw ValidationError(context + ".type: expected a string");
    }
    return t.get<std::string>();
}

}  // namespace

OrderBook book_from_json(const Json& j)
{
    reject_unknown_keys(j, {"tick", "bids", "asks"}, "book");
    const double tick = number_or(j, "tick", kDefaultBookTick, "book");
    if (!(tick > 0.0)) {
        throw ValidationError("book.tick must be positive");
    }
    return OrderBook(tick, levels(require(j, "bids", "book"), tick, "book.bids"),
                     levels(require(j, "asks", "book"), tick, "book.asks"));
}

Json to_json(const OrderBook& book)
{
    Json j;
    j["tick"] = book.tick();
    auto side = [&](std::span<const Level> lv) {
        Json a = Json::array();
        for (const Level& l : lv) {
            a.push_back(Json::array({book.price(l.price_ticks), l.volume}));
        }
        return a;
    };
    j["bids"] = side(book.bids());
    j["asks"] = side(book.asks());
    return j;
}

TradeClockSeries series_from_json(const Json& j)
{
    reject_unknown_keys(j, {"tick", "mid_half_ticks", "spread_ticks", "dL", "dK_half_ticks", "meta"}, "series");
    TradeClockSeries s;
    s.tick = number_at(j, "tick", "series");
    if (!(s.tick > 0.0)) {
        throw ValidationError("series.tick must be positive");
    }
    s.mid_half_ticks = int_array(require(j, "mid_half_ticks", "series"), "series.mid_half_ticks");
    s.spread_ticks = int_array(require(j, "spread_ticks", "series"), "series.spread_ticks");
    s.dL = int_array(require(j, "dL", "series"), "series.dL");
    s.dK_half_ticks = int_array(require(j, "dK_half_ticks", "series"), "series.dK_half_ticks");
    const std::size_t n = s.dL.size();
    if (s.mid_half_ticks.size() != n || s.spread_ticks.size() != n || s.dK_half_ticks.size() != n) {
        throw ValidationError("series: arrays differ in length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (s.spread_ticks[i] <= 0) {
            throw ValidationError("series: spread must be positive (index " + std::to_string(i) + ")");
        }
    }
    return s;
}

Json to_json(const TradeClockSeries& s)
{
    Json j;
    j["tick"] = s.tick;
    j["mid_half_ticks"] = s.mid_half_ticks;
    j["spread_ticks"] = s.spread_ticks;
    j["dL"] = s.dL;
    j["dK_half_ticks"] = s.dK_half_ticks;
    return j;
}

CostFunction cost_from_json(const Json& j)
{
    const std::string type = type_of(j, "cost");
    if (type == "proportional") {
        reject_unknown_keys(j, {"type", "half_spread"}, "cost");
        const double h = number_at(j, "half_spread", "cost");
        if (!(h >= 0.0)) {
            throw ValidationError("cost.half_spread must be non-negative");
        }
        return CostFunction::proportional(h);
    }
    if (type == "quadratic") {
        reject_unknown_keys(j, {"type", "density"}, "cost");
        const double m = number_at(j, "density", "cost");
        if (!(m > 0.0)) {
            throw ValidationError("cost.density must be positive");
        }
        return CostFunction::quadratic(m);
    }
    if (type == "book") {
        reject_unknown_keys(j, {"type", "book", "quoted_price"}, "cost");
        const OrderBook book = book_from_json(require(j, "book", "cost"));
        std::optional<double> p;
        if (j.contains("quoted_price")) {
            p = number(j.at("quoted_price"), "cost.quoted_price");
        }
        return legendre(shape_from_book(book, p));
    }
    if (type == "graph") {
        reject_unknown_keys(j, {"type", "knots", "left", "right", "reference_price"}, "cost");
        const Json& ks = require(j, "knots", "cost");
        if (!ks.is_array()) {
            throw ValidationError("cost.knots: expected an array of [x, y]");
        }
        std::vector<Knot> knots;
        for (const Json& k : ks) {
            if (!k.is_array() || k.size() != 2) {
                throw ValidationError("cost.knots: each knot must be [x, y]");
            }
            knots.push_back({number(k[0], "cost.knots"), number(k[1], "cost.knots")});
        }
        const Tail left = j.contains("left") ? tail_from(j.at("left"), "cost.left") : Tail::Linear;
        const Tail right = j.contains("right") ? tail_from(j.at("right"), "cost.right") : Tail::Linear;
        CostFunction c(MonotoneGraph(std::move(knots), left, right), number_or(j, "reference_price", 0.0, "cost"));
        if (!c.derivative().passes_through_origin()) {
            throw ValidationError("cost: c'(0) must contain 0");
        }
        return c;
    }
    throw ValidationError("cost.type must be proportional|quadratic|book|graph, got '" + type + "'");
}

std::vector<CostFunction> cost_series_from_json(const Json& j, std::size_t steps)
{
    reject_unknown_keys(j, {"costs", "repeat"}, "book costs");
    if (j.contains("repeat") == j.contains("costs")) {
        throw ValidationError("book costs: give exactly one of 'costs' or 'repeat'");
    }
    if (j.contains("repeat")) {
        return std::vector<CostFunction>(steps, cost_from_json(j.at("repeat")));
    }
    const Json& arr = j.at("costs");
    if (!arr.is_array()) {
        throw ValidationError("book costs: 'costs' must be an array");
    }
    std::vector<CostFunction> out;
    for (const Json& c : arr) {
        out.push_back(cost_from_json(c));
    }
    if (out.size() < steps) {
        throw ValidationError("book costs: " + std::to_string(out.size()) + " costs for " + std::to_string(steps) +
                              " steps");
    }
    return out;
}

CostProcess cost_process_from_json(const Json& j)
{
    if (j.is_object() && j.contains("starts")) {
        reject_unknown_keys(j, {"starts", "costs"}, "cost process");
        std::vector<double> starts;
        for (const Json& t : require(j, "starts", "cost process")) {
            starts.push_back(number(t, "cost process.starts"));
        }
        std::vector<CostFunction> costs;
        for (const Json& c : require(j, "costs", "cost process")) {
            costs.push_back(cost_from_json(c));
        }
        return CostProcess(std::move(starts), std::move(costs));
    }
    return CostProcess(cost_from_json(j));
}

TimeFunction time_function_from_json(const Json& j)
{
    if (j.is_number()) {
        return constant_fn(number(j, "time function"));
    }
    const std::string type = type_of(j, "time function");
    if (type == "constant") {
        reject_unknown_keys(j, {"type", "value"}, "time function");
        return constant_fn(number_at(j, "value", "time function"));
    }
    if (type == "affine") {
        reject_unknown_keys(j, {"type", "a", "b"}, "time function");
        const double a = number_at(j, "a", "time function");
        const double b = number_at(j, "b", "time function");
        return [a, b](double t) { return a + b * t; };
    }
    throw ValidationError("time function type must be constant|affine, got '" + type + "'");
}

StateFunction state_function_from_json(const Json& j)
{
    if (j.is_number()) {
        return constant_state_fn(number(j, "state function"));
    }
    const std::string type = type_of(j, "state function");
    if (type == "constant") {
        reject_unknown_keys(j, {"type", "value"}, "state function");
        return constant_state_fn(number_at(j, "value", "state function"));
    }
    if (type == "affine") {
        reject_unknown_keys(j, {"type", "a", "b"}, "state function");
        const double a = number_at(j, "a", "state function");
        const double b = number_at(j, "b", "state function");
        return [a, b](double, double p) { return a + b * p; };
    }
    if (type == "ou") {
        reject_unknown_keys(j, {"type", "reversion", "mean"}, "state function");
        const double k = number_at(j, "reversion", "state function");
        const double m = number_at(j, "mean", "state function");
        return [k, m](double, double p) { return k * (m - p); };
    }
    throw ValidationError("state function type must be constant|affine|ou, got '" + type + "'");
}

ItoCoefficients coefficients_from_json(const Json& j)
{
    reject_unknown_keys(j, {"mu", "sigma", "b", "l", "rho", "s", "p0", "L0", "lambda_s", "lambda_r"},
                        "coefficients");
    ItoCoefficients c;
    if (j.contains("mu")) {
        c.mu = state_function_from_json(j.at("mu"));
    }
    if (j.contains("sigma")) {
        c.sigma = state_function_from_json(j.at("sigma"));
    }
    if (j.contains("b")) {
        c.b = time_function_from_json(j.at("b"));
    }
    if (j.contains("l")) {
        c.l = time_function_from_json(j.at("l"));
    }
    if (j.contains("rho")) {
        c.rho = time_function_from_json(j.at("rho"));
    }
    if (j.contains("s")) {
        c.s = state_function_from_json(j.at("s"));
    }
    c.p0 = number_or(j, "p0", 0.0, "coefficients");
    c.L0 = number_or(j, "L0", 0.0, "coefficients");
    c.lambda_s = number_or(j, "lambda_s", 1.0, "coefficients");
    c.lambda_r = number_or(j, "lambda_r", 1.0, "coefficients");
    if (!(c.lambda_r > 0.0 && c.lambda_r <= 1.0)) {
        throw ValidationError("coefficients.lambda_r must lie in (0, 1]");
    }
    return c;
}

SimulationSpec simulation_spec_from_json(const Json& j)
{
    reject_unknown_keys(j, {"N", "M", "T", "seed", "threads", "coefficients", "cost", "driver", "window",
                            "time_change", "flat_density"},
                        "config");
    SimulationSpec spec;
    spec.config.steps_per_unit = unsigned_or(j, "N", spec.config.steps_per_unit, "config");
    spec.config.paths = unsigned_or(j, "M", spec.config.paths, "config");
    spec.config.horizon = number_or(j, "T", spec.config.horizon, "config");
    spec.config.seed = unsigned_or(j, "seed", spec.config.seed, "config");
    spec.config.threads = static_cast<unsigned>(unsigned_or(j, "threads", spec.config.threads, "config"));
    spec.config.validate();
    if (j.contains("coefficients")) {
        spec.coefficients = coefficients_from_json(j.at("coefficients"));
    }
    if (j.contains("cost")) {
        spec.cost = cost_process_from_json(j.at("cost"));
    }
    if (j.contains("driver")) {
        if (!j.at("driver").is_string()) {
            throw ValidationError("config.driver: expected a string");
        }
        spec.driver = parse_driver(j.at("driver").get<std::string>());
    }
    if (j.contains("window")) {
        const Json& w = j.at("window");
        if (!w.is_array() || w.size() != 2) {
            throw ValidationError("config.window: expected [t1, t2]");
        }
        spec.t1 = number(w[0], "config.window");
        spec.t2 = number(w[1], "config.window");
    }
    if (j.contains("time_change")) {
        spec.time_change = time_function_from_json(j.at("time_change"));
    }
    spec.flat_density = number_or(j, "flat_density", 1.0, "config");
    return spec;
}

Json to_json(const FilterReport& r)
{
    Json j;
    j["input_count"] = r.input_count;
    j["kept"] = r.kept.size();
    j["dropped_special"] = r.dropped_special;
    j["dropped_hidden"] = r.dropped_hidden;
    j["dropped_total"] = r.dropped_total;
    j["dropped_fraction"] = r.dropped_fraction;
    j["warnings"] = r.warnings;
    return j;
}

Json to_json(const ValidationReport& r, bool with_indices)
{
    Json j;
    j["n_trades"] = r.n_trades;
    j["n_steps"] = r.n_steps;
    j["impact_violations"] = r.impact_violations;
    j["impact_fraction"] = r.impact_fraction;
    j["recovery_violations"] = r.recovery_violations;
    j["recovery_fraction"] = r.recovery_fraction;
    if (with_indices) {
        j["impact_indices"] = r.impact_indices;
        j["recovery_indices"] = r.recovery_indices;
    }
    return j;
}

Json to_json(const ConvergenceReport& r)
{
    Json j;
    j["name"] = r.name;
    j["N"] = r.steps_per_unit;
    j["M"] = r.paths;
    j["mean"] = r.mean;
    j["std_error"] = r.std_error;
    j["target"] = r.target;
    j["coarse_mean"] = r.coarse_mean;
    j["bias"] = r.bias;
    j["coarse_bias"] = r.coarse_bias;
    j["bias_allowance"] = r.bias_allowance;
    j["passed"] = r.passed;
    return j;
}

Json to_json(const GeneralCostReport& r)
{
    Json j;
    j["cost"] = to_json(r.cost);
    j["volatility_bound"] = to_json(r.volatility_bound);
    return j;
}

Json to_json(const SupplyDemandReport& r)
{
    Json j;
    j["driver"] = to_string(r.driver);
    j["lambda_r"] = r.lambda_r;
    j["volatility"] = to_json(r.volatility);
    j["drift"] = to_json(r.drift);
    j["covariation"] = to_json(r.covariation);
    j["covariation_unscaled"] = to_json(r.covariation_unscaled);
    return j;
}

Json to_json(const FlatBookReport& r)
{
    Json j;
    j["lambda_r"] = r.lambda_r;
    j["m"] = r.m;
    j["paths"] = r.paths;
    j["steps"] = r.steps;
    j["identity"] = "X_n - X_0 = -(lambda/m)(L_n^2 - L_0^2)/2 + (1 - lambda)/(2m) sum (dL)^2";
    j["max_identity_error"] = r.max_identity_error;
    j["printed_form"] = "X_n - X_0 = -(L_n^2 - L_0^2)";
    j["max_printed_form_error"] = r.max_printed_form_error;
    j["max_round_trip_error"] = r.max_round_trip_error;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    return j;
}

Json to_json(const CovariationTestReport& r)
{
    Json j;
    j["n_trades"] = r.n_trades;
    j["n_steps"] = r.n_steps;
    j["window"] = r.window;
    j["level"] = r.level;
    j["overall_rejection"] = r.overall_rejection;
    j["min_window_rejection"] = r.min_window_rejection;
    j["window_rejections"] = r.window_rejections;
    j["impact_violations"] = r.impact_violations;
    j["recovery_violations"] = r.recovery_violations;
    j["C_path"] = r.C_path;
    j["V_path"] = r.V_path;
    j["ci_lower"] = r.ci_lower;
    j["ci_upper"] = r.ci_upper;
    return j;
}

Json to_json(const MmOptimum& o)
{
    Json j;
    j["m"] = o.m;
    j["M"] = o.M;
    j["scan_upper"] = o.scan_upper;
    j["local_maxima"] = o.local_maxima;
    return j;
}

Json to_json(const MmSolution& s)
{
    Json j;
    j["t"] = s.t;
    j["alpha"] = s.alpha;
    j["rescaled_spread"] = s.rescaled;
    j["spread"] = s.spread;
    j["inventory_vol"] = s.inventory_vol;
    j["pnl_rate"] = s.pnl_rate;
    j["expected_pnl"] = s.expected_pnl;
    return j;
}

}  // namespace lobkit
