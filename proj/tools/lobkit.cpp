#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lobkit/covariation.hpp"
#include "lobkit/error.hpp"
#include "lobkit/hedge.hpp"
#include "lobkit/json_io.hpp"
#include "lobkit/limits.hpp"
#include "lobkit/market_maker.hpp"
#include "lobkit/selfcheck.hpp"
#include "lobkit/sfe.hpp"
#include "lobkit/supply_demand.hpp"
#include "lobkit/synthetic.hpp"
#include "lobkit/time_change.hpp"
#include "lobkit/trade_tape.hpp"

namespace fs = std::filesystem;
using namespace lobkit;

namespace {

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string out_dir;
};

Globals g;

fs::path output_path(const std::string& p)
{
    fs::path path(p);
    if (!g.out_dir.empty() && path.is_relative()) {
        fs::create_directories(g.out_dir);
        return fs::path(g.out_dir) / path;
    }
    return path;
}

void emit(const Json& j, const std::string& out)
{
    const std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text_file(output_path(out), text);
    }
}

void emit_csv(const std::string& text, const std::string& out)
{
    if (!out.empty()) {
        write_text_file(output_path(out), text);
    }
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

TradeClockSeries series_from_tape(const fs::path& path)
{
    FilterReport f = filter_tape(ingest(path));
    SeriesBuild b = build_series(f.kept);
    for (const std::string& w : f.warnings) {
        std::cerr << "W: " << w << "\n";
    }
    return std::move(b.series);
}

// .csv files are tapes; anything else is a series JSON
TradeClockSeries load_series(const std::string& file)
{
    const fs::path path(file);
    if (path.extension() == ".csv") {
        return series_from_tape(path);
    }
    return series_from_json(read_json_file(path));
}

// ---- ingest / generate ----

void cmd_ingest(const std::string& tape, const std::string& out)
{
    const FilterReport f = filter_tape(ingest(fs::path(tape)));
    const SeriesBuild b = build_series(f.kept);
    Json j = to_json(b.series);
    j["meta"]["filter"] = to_json(f);
    j["meta"]["rejected_off_quote"] = b.rejected;
    j["meta"]["diagnostics"] = b.diagnostics;
    for (const std::string& w : f.warnings) {
        std::cerr << "W: " << w << "\n";
    }
    emit(j, out);
}

void cmd_generate(const SyntheticTapeParams& p, const std::string& mode, const std::string& out)
{
    SyntheticTapeParams params = p;
    params.recovery_mode = parse_recovery_mode(mode);
    const auto records = generate_synthetic_tape(params, g.seed.value_or(1));
    std::ostringstream os;
    write_tape(os, records);
    if (out.empty() || out == "-") {
        std::cout << os.str();
    } else {
        write_text_file(output_path(out), os.str());
    }
}

// ---- validate / toxicity / reconstruct ----

void cmd_validate(const std::string& series, bool indices, const std::string& out)
{
    emit(to_json(validate(load_series(series)), indices), out);
}

void cmd_toxicity(const std::string& series_file, const std::string& window, const std::string& out,
                  const std::string& csv)
{
    const TradeClockSeries s = load_series(series_file);
    const Window w = parse_window(window);
    const ToxicityRatio r = toxicity_ratio(s, w);
    Json j;
    j["window"] = window;
    j["rho"] = toxicity_rho(s, w);
    j["ratio"] = r.ratio;
    j["spread_component"] = r.spread_component;
    j["impact_component"] = r.impact_component;
    emit(j, out);
    if (!csv.empty()) {
        const auto q = quad_covariation_path(s);
        std::ostringstream os;
        os << "n,quad_covariation\n";
        for (std::size_t n = 0; n < q.size(); ++n) {
            os << n << ',' << num(q[n]) << '\n';
        }
        emit_csv(os.str(), csv);
    }
}

void cmd_reconstruct(const std::string& series_file, const std::string& model, const std::string& book_costs,
                     const std::string& out, const std::string& csv)
{
    const TradeClockSeries s = load_series(series_file);
    const WealthKind kind = parse_wealth_kind(model);
    std::vector<CostFunction> costs;
    if (!book_costs.empty()) {
        costs = cost_series_from_json(read_json_file(book_costs), s.size());
    } else if (kind == WealthKind::GeneralBook) {
        throw ValidationError("--model general requires --book-costs");
    }
    const ProviderLedger ledger = build_ledger(s);
    std::map<std::string, std::vector<double>> paths;
    for (WealthKind k : {WealthKind::Frictionless, WealthKind::Classical, WealthKind::Proposed}) {
        paths[to_string(k)] = reconstruct_wealth(s, WealthModel{k, {}});
    }
    if (!costs.empty()) {
        paths[to_string(WealthKind::GeneralBook)] = reconstruct_wealth(s, WealthModel::general_book(costs));
    }
    const auto& chosen = paths.at(to_string(kind));
    std::vector<double> ledger_X(ledger.X_half_ticks.size());
    double max_diff = 0.0;
    for (std::size_t n = 0; n < ledger_X.size(); ++n) {
        ledger_X[n] = ledger.wealth(n);
        max_diff = std::max(max_diff, std::abs(chosen[n] - ledger_X[n]));
    }
    Json j;
    j["model"] = to_string(kind);
    j["steps"] = chosen.size();
    j["final_wealth"] = chosen.back();
    j["ledger_final_wealth"] = ledger_X.back();
    j["max_abs_diff_vs_ledger"] = max_diff;
    if (kind != WealthKind::GeneralBook) {
        const auto fixed = reconstruct_wealth_fixed(s, kind);
        std::size_t mismatches = 0;
        for (std::size_t n = 0; n < fixed.size(); ++n) {
            mismatches += fixed[n] != ledger.X_half_ticks[n];
        }
        j["fixed_point_mismatches"] = mismatches;
    }
    emit(j, out);
    if (!csv.empty()) {
        std::ostringstream os;
        os << "n,ledger";
        for (const auto& [name, _] : paths) {
            os << ',' << name;
        }
        os << '\n';
        for (std::size_t n = 0; n < ledger_X.size(); ++n) {
            os << n << ',' << num(ledger_X[n]);
            for (const auto& [_, path] : paths) {
                os << ',' << num(path[n]);
            }
            os << '\n';
        }
        emit_csv(os.str(), csv);
    }
}

// ---- simulate ----

void cmd_simulate(const std::string& config, const std::string& check, const std::string& out)
{
    SimulationSpec spec = simulation_spec_from_json(read_json_file(config));
    if (g.seed) {
        spec.config.seed = *g.seed;
    }
    if (g.threads) {
        spec.config.threads = *g.threads;
    }
    ItoCoefficients coeffs = spec.coefficients;
    if (spec.time_change) {
        coeffs = time_change(coeffs, *spec.time_change, spec.config.horizon);
    }
    const SimConfig& cfg = spec.config;
    Json j;
    if (check == "spread-limit") {
        j = to_json(spread_cost_limit_check(coeffs, cfg));
    } else if (check == "recovery") {
        const double t2 = spec.t2 < 0.0 ? cfg.horizon : spec.t2;
        j = to_json(recovery_limit_check(coeffs, cfg, spec.t1, t2));
    } else if (check == "general-cost") {
        if (!spec.cost) {
            throw ValidationError("general-cost requires a \"cost\" entry in the config");
        }
        j = to_json(general_cost_limit_check(coeffs, *spec.cost, cfg));
    } else if (check == "covariation") {
        j = to_json(covariation_limit_check(coeffs, cfg));
    } else if (check == "supply-demand") {
        const CostProcess cost = spec.cost ? *spec.cost : CostProcess(CostFunction::quadratic(spec.flat_density));
        j = to_json(supply_demand_moments(coeffs, cost, cfg, spec.driver));
    } else if (check == "flat-book") {
        j = to_json(flat_book_identity_check(cfg, coeffs.lambda_r, spec.flat_density, coeffs));
    } else {
        throw ValidationError("unknown check '" + check + "'");
    }
    j["check"] = check;
    emit(j, out);
}

// ---- hedge ----

Payoff parse_payoff(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    if (kind == "call" || kind == "put") {
        if (colon == std::string::npos) {
            throw ValidationError("payoff '" + text + "' needs a strike, e.g. call:K=100");
        }
        std::string k = text.substr(colon + 1);
        if (k.rfind("K=", 0) == 0) {
            k = k.substr(2);
        }
        double strike = 0.0;
        try {
            std::size_t used = 0;
            strike = std::stod(k, &used);
            if (used != k.size()) {
                throw std::invalid_argument(k);
            }
        } catch (const std::exception&) {
            throw ValidationError("bad strike in payoff '" + text + "'");
        }
        if (!(strike > 0.0)) {
            throw ValidationError("strike must be positive");
        }
        return kind == "call" ? call_payoff(strike) : put_payoff(strike);
    }
    if (fs::path(text).extension() == ".csv") {
        std::ifstream in(text);
        if (!in) {
            throw IoError("cannot open payoff table '" + text + "'");
        }
        std::vector<double> p, f;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') {
                continue;
            }
            std::istringstream row(line);
            std::string a, b;
            if (!std::getline(row, a, ',') || !std::getline(row, b)) {
                throw ValidationError(text + ":" + std::to_string(lineno) + ": expected p,f");
            }
            try {
                p.push_back(std::stod(a));
                f.push_back(std::stod(b));
            } catch (const std::exception&) {
                if (lineno == 1) {
                    continue;  // header
                }
                throw ValidationError(text + ":" + std::to_string(lineno) + ": not numeric");
            }
        }
        return tabulated_payoff(std::move(p), std::move(f));
    }
    throw ValidationError("unknown payoff '" + text + "' (call:K=..., put:K=... or a .csv table)");
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text)
{
    const auto x = text.find('x');
    try {
        if (x == std::string::npos) {
            const std::size_t n = std::stoul(text);
            return {n, n};
        }
        return {std::stoul(text.substr(0, x)), std::stoul(text.substr(x + 1))};
    } catch (const std::exception&) {
        throw ValidationError("bad grid '" + text + "' (use N or NpxNt)");
    }
}

struct HedgeArgs {
    std::string payoff = "call:K=100";
    double lambda = 1.0;
    double sigma = 0.2;
    std::string local_vol = "lognormal";
    std::string grid = "400x400";
    double maturity = 1.0;
    double spot = 100.0;
    std::string out;
    std::string csv;
};

void cmd_hedge(const HedgeArgs& a)
{
    HedgeProblem pr;
    pr.payoff = parse_payoff(a.payoff);
    const double sig = a.sigma;
    if (a.local_vol == "lognormal") {
        pr.sigma = [sig](double, double p) { return sig * p; };
    } else if (a.local_vol == "absolute") {
        pr.sigma = constant_state_fn(sig);
    } else {
        throw ValidationError("unknown --local-vol '" + a.local_vol + "'");
    }
    pr.lambda_s = a.lambda;
    pr.maturity = a.maturity;
    pr.center = a.spot;
    std::tie(pr.grid.price_steps, pr.grid.time_steps) = parse_grid(a.grid);
    const HedgeSurface s = hedge_pde_solve(pr);
    const HedgeInventory inv = hedge_inventory_vol(s, pr.sigma);
    Json j;
    j["payoff"] = a.payoff;
    j["lambda_s"] = a.lambda;
    j["sigma"] = a.sigma;
    j["local_vol"] = a.local_vol;
    j["maturity"] = a.maturity;
    j["grid"] = {{"price_steps", pr.grid.price_steps}, {"time_steps", pr.grid.time_steps}};
    j["max_diffusion_number"] = s.max_diffusion_number;
    j["spot"] = {{"p", a.spot}, {"value", s.value_at(0, a.spot)}, {"delta", s.delta_at(0, a.spot)},
                 {"gamma", s.gamma_at(0, a.spot)}};
    j["t0"] = {{"p", s.p}, {"value", s.value[0]}, {"delta", s.delta[0]}, {"gamma", s.gamma[0]}};
    std::vector<std::string> orders;
    for (OrderType o : inv.order_type[0]) {
        orders.push_back(to_string(o));
    }
    j["t0"]["inventory_vol"] = inv.l[0];
    j["t0"]["order_type"] = orders;
    emit(j, a.out);
    if (!a.csv.empty()) {
        std::ostringstream os;
        os << "t,p,value,delta,gamma,theta,inventory_vol,order_type\n";
        for (std::size_t k = 0; k < s.t.size(); ++k) {
            for (std::size_t i = 0; i < s.p.size(); ++i) {
                os << num(s.t[k]) << ',' << num(s.p[i]) << ',' << num(s.value[k][i]) << ',' << num(s.delta[k][i])
                   << ',' << num(s.gamma[k][i]) << ',' << num(s.theta[k][i]) << ',' << num(inv.l[k][i]) << ','
                   << to_string(inv.order_type[k][i]) << '\n';
            }
        }
        emit_csv(os.str(), a.csv);
    }
}

// ---- mm ----

struct MmArgs {
    std::string model = "martingale";
    std::string f = "inv-square";
    std::string rho = "inv";
    double horizon = 1.0;
    double sigma = 0.2;
    double mu = 0.05;
    double reversion = 1.0;
    double p0 = 100.0;
    double p_start = 100.0;
    std::size_t steps = 100;
    std::string out;
};

void cmd_mm(const MmArgs& a)
{
    if (a.f != "inv-square") {
        throw ValidationError("unknown --f '" + a.f + "' (supported: inv-square)");
    }
    if (a.rho != "inv") {
        throw ValidationError("unknown --rho '" + a.rho + "' (supported: inv)");
    }
    if (!(a.horizon > 0.0) || a.steps < 1 || !(a.sigma > 0.0)) {
        throw ValidationError("--T, --steps and --sigma must be positive");
    }
    PriceModel model;
    if (a.model == "martingale") {
        model = price_model::Martingale{};
    } else if (a.model == "bs") {
        model = price_model::BlackScholes{a.mu, a.sigma};
    } else if (a.model == "ou") {
        model = price_model::OrnsteinUhlenbeck{a.reversion, a.p0, a.sigma};
    } else {
        throw ValidationError("unknown --model '" + a.model + "' (martingale|bs|ou)");
    }
    // one Euler path of the chosen price model
    std::mt19937_64 rng(g.seed.value_or(1));
    std::normal_distribution<double> z;
    const double dt = a.horizon / static_cast<double>(a.steps);
    std::vector<MmPathPoint> path;
    double p = a.p_start;
    for (std::size_t k = 0; k <= a.steps; ++k) {
        const double t = dt * static_cast<double>(k);
        double vol = a.sigma, drift = 0.0;
        if (a.model == "bs") {
            vol = a.sigma * p;
            drift = a.mu * p;
        } else if (a.model == "ou") {
            drift = a.reversion * (a.p0 - p);
        }
        path.push_back({t, p, vol});
        p += drift * dt + vol * std::sqrt(dt) * z(rng);
    }
    MmProblem prob{inverse_square_intensity(), inverse_correlation(), model, a.horizon, {}};
    const MmSolution sol = mm_solve(prob, path);
    Json j;
    j["model"] = a.model;
    j["f"] = a.f;
    j["rho"] = a.rho;
    j["T"] = a.horizon;
    Json optima = Json::array();
    for (double av : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        Json o = to_json(mm_optimal_rescaled_spread(av, prob.f, prob.rho));
        o["a"] = av;
        optima.push_back(o);
    }
    j["optima"] = optima;
    std::vector<double> prices;
    for (const auto& pt : path) {
        prices.push_back(pt.p);
    }
    j["path"] = {{"p", prices}};
    j["solution"] = to_json(sol);
    emit(j, a.out);
}

// ---- covartest / report ----

void cmd_covartest(const std::string& series_file, std::size_t window, double level, const std::string& out,
                   const std::string& csv)
{
    const CovariationTestReport r = reject_null(load_series(series_file), window, level);
    emit(to_json(r), out);
    if (!csv.empty()) {
        std::ostringstream os;
        os << "n,C,V,ci_lower,ci_upper\n";
        for (std::size_t n = 0; n < r.C_path.size(); ++n) {
            os << n << ',' << num(r.C_path[n]) << ',' << num(r.V_path[n]) << ',' << num(r.ci_lower[n]) << ','
               << num(r.ci_upper[n]) << '\n';
        }
        emit_csv(os.str(), csv);
    }
}

void cmd_report(const std::string& inputs, std::size_t window, const std::string& out, bool text)
{
    if (!fs::is_directory(inputs)) {
        throw IoError("'" + inputs + "' is not a directory");
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(inputs)) {
        const auto ext = e.path().extension();
        if (e.is_regular_file() && (ext == ".json" || ext == ".csv")) {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw ValidationError("no .json series or .csv tapes in '" + inputs + "'");
    }
    std::vector<ReportRow> rows;
    for (const fs::path& f : files) {
        rows.push_back(make_report_row(f.stem().string(), reject_null(load_series(f.string()), window)));
    }
    const std::string table = text ? report_table_text(rows) : report_table_csv(rows);
    if (out.empty() || out == "-") {
        std::cout << table;
    } else {
        write_text_file(output_path(out), table);
    }
}

int cmd_selfcheck(bool full)
{
    SelfcheckOptions o;
    o.full = full;
    if (g.seed) {
        o.seed = *g.seed;
    }
    o.threads = g.threads.value_or(1);
    bool ok = true;
    for (const CriterionResult& r : run_selfcheck(o)) {
        std::printf("%s criterion %2d %-32s %8.3fs  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(),
                    r.seconds, r.detail.c_str());
        for (const std::string& n : r.notes) {
            std::printf("     info: %s\n", n.c_str());
        }
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"lobkit: self-financing accounting and diffusion limits for limit order book markets"};
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--threads", g.threads, "Worker threads for Monte Carlo")->check(CLI::PositiveNumber);
    app.add_option("--out-dir", g.out_dir, "Directory for relative output paths");

    std::string out, csv, series, window_text = ":", model = "proposed", book_costs, config, check;

    auto* ingest_cmd = app.add_subcommand("ingest", "Parse and filter a tape CSV into trade-clock series JSON");
    std::string tape;
    ingest_cmd->add_option("--tape", tape, "Tape CSV")->required();
    ingest_cmd->add_option("--out", out, "Series JSON (default stdout)");

    auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic at-quotes tape CSV");
    SyntheticTapeParams gp;
    std::string mode = "spread";
    gen_cmd->add_option("--n", gp.n_trades, "Number of trades");
    gen_cmd->add_option("--impact", gp.impact_compliance, "Impact compliance rate in [0,1]");
    gen_cmd->add_option("--recovery", gp.recovery_compliance, "Recovery compliance rate in [0,1]");
    gen_cmd->add_option("--mode", mode, "spread|half-spread|exact-half-spread");
    gen_cmd->add_option("--quote-tick", gp.quote_tick, "Quote grid");
    gen_cmd->add_option("--base-price", gp.base_price, "Initial bid");
    gen_cmd->add_option("--min-spread", gp.min_spread, "Minimum spread in quote ticks");
    gen_cmd->add_option("--max-spread", gp.max_spread, "Maximum spread in quote ticks");
    gen_cmd->add_option("--max-size", gp.max_size, "Maximum trade size");
    gen_cmd->add_option("--flagged", gp.flagged_rate, "Fraction of C/H flagged records");
    gen_cmd->add_option("--out", out, "Tape CSV (default stdout)");

    auto* val_cmd = app.add_subcommand("validate", "Count impact and recovery violations");
    bool no_indices = false;
    val_cmd->add_option("--series", series, "Series JSON or tape CSV")->required();
    val_cmd->add_flag("--no-indices", no_indices, "Omit violation indices");
    val_cmd->add_option("--out", out, "Report JSON (default stdout)");

    auto* tox_cmd = app.add_subcommand("toxicity", "Toxicity indexes over a step window");
    tox_cmd->add_option("--series", series, "Series JSON or tape CSV")->required();
    tox_cmd->add_option("--window", window_text, "Inclusive step range a:b");
    tox_cmd->add_option("--out", out, "Report JSON (default stdout)");
    tox_cmd->add_option("--csv", csv, "Running quadratic covariation CSV");

    auto* rec_cmd = app.add_subcommand("reconstruct", "Reconstruct provider wealth on the trade clock");
    rec_cmd->add_option("--series", series, "Series JSON or tape CSV")->required();
    rec_cmd->add_option("--model", model, "proposed|classical|frictionless|general");
    rec_cmd->add_option("--book-costs", book_costs, "Per-step cost functions JSON");
    rec_cmd->add_option("--out", out, "Summary JSON (default stdout)");
    rec_cmd->add_option("--csv", csv, "Wealth paths CSV");

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo check of a diffusion limit");
    sim_cmd->add_option("--config", config, "Simulation config JSON")->required();
    sim_cmd->add_option("--check", check, "spread-limit|recovery|general-cost|covariation|supply-demand|flat-book")
        ->required();
    sim_cmd->add_option("--out", out, "Report JSON (default stdout)");

    auto* hedge_cmd = app.add_subcommand("hedge", "Solve the replication PDE");
    HedgeArgs ha;
    hedge_cmd->add_option("--payoff", ha.payoff, "call:K=100 | put:K=100 | table.csv");
    hedge_cmd->add_option("--lambda", ha.lambda, "Spread/volatility ratio lambda_s (> 1/2)");
    hedge_cmd->add_option("--sigma", ha.sigma, "Volatility parameter");
    hedge_cmd->add_option("--local-vol", ha.local_vol, "lognormal (sigma p) | absolute (sigma)");
    hedge_cmd->add_option("--grid", ha.grid, "N or NpxNt");
    hedge_cmd->add_option("--T", ha.maturity, "Maturity");
    hedge_cmd->add_option("--spot", ha.spot, "Grid center and reported spot");
    hedge_cmd->add_option("--out", ha.out, "Report JSON (default stdout)");
    hedge_cmd->add_option("--csv", ha.csv, "Full surface CSV");

    auto* mm_cmd = app.add_subcommand("mm", "Optimal market-maker spread");
    MmArgs ma;
    mm_cmd->add_option("--model", ma.model, "martingale|bs|ou");
    mm_cmd->add_option("--f", ma.f, "Intensity function (inv-square)");
    mm_cmd->add_option("--rho", ma.rho, "Correlation function (inv)");
    mm_cmd->add_option("--T", ma.horizon, "Horizon");
    mm_cmd->add_option("--sigma", ma.sigma, "Volatility (relative for bs)");
    mm_cmd->add_option("--mu", ma.mu, "Drift for bs");
    mm_cmd->add_option("--reversion", ma.reversion, "Mean reversion speed for ou");
    mm_cmd->add_option("--p0", ma.p0, "Long-run level for ou");
    mm_cmd->add_option("--p-start", ma.p_start, "Initial price");
    mm_cmd->add_option("--steps", ma.steps, "Path steps");
    mm_cmd->add_option("--out", ma.out, "Report JSON (default stdout)");

    auto* cov_cmd = app.add_subcommand("covartest", "Test the sign of the price/inventory covariation");
    std::size_t window = 100;
    double level = 0.95;
    cov_cmd->add_option("--series", series, "Series JSON or tape CSV")->required();
    cov_cmd->add_option("--window", window, "Window length in steps")->check(CLI::PositiveNumber);
    cov_cmd->add_option("--level", level, "Confidence level")->check(CLI::Range(0.0, 1.0));
    cov_cmd->add_option("--out", out, "Report JSON (default stdout)");
    cov_cmd->add_option("--csv", csv, "C, V and confidence band CSV");

    auto* rep_cmd = app.add_subcommand("report", "Rejection table over a directory of series");
    std::string inputs;
    bool text = false;
    rep_cmd->add_option("--inputs", inputs, "Directory of series JSON / tape CSV")->required();
    rep_cmd->add_option("--window", window, "Window length in steps")->check(CLI::PositiveNumber);
    rep_cmd->add_flag("--text", text, "Aligned text instead of CSV");
    rep_cmd->add_option("--out", out, "Table file (default stdout)");

    auto* self_cmd = app.add_subcommand("selfcheck", "Run the acceptance checks");
    bool full = false;
    self_cmd->add_flag("--full", full, "All criteria at full scale (slow)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "E:1: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (*ingest_cmd) {
            cmd_ingest(tape, out);
        } else if (*gen_cmd) {
            cmd_generate(gp, mode, out);
        } else if (*val_cmd) {
            cmd_validate(series, !no_indices, out);
        } else if (*tox_cmd) {
            cmd_toxicity(series, window_text, out, csv);
        } else if (*rec_cmd) {
            cmd_reconstruct(series, model, book_costs, out, csv);
        } else if (*sim_cmd) {
            cmd_simulate(config, check, out);
        } else if (*hedge_cmd) {
            cmd_hedge(ha);
        } else if (*mm_cmd) {
            cmd_mm(ma);
        } else if (*cov_cmd) {
            cmd_covartest(series, window, level, out, csv);
        } else if (*rep_cmd) {
            cmd_report(inputs, window, out, text);
        } else if (*self_cmd) {
            return cmd_selfcheck(full);
        }
    } catch (const IoError& e) {
        std::cerr << "E:2: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "E:2: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "E:1: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "E:1: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "E:1: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
