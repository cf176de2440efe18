#pragma once

#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lobkit/covariation.hpp"
#include "lobkit/hedge.hpp"
#include "lobkit/limits.hpp"
#include "lobkit/market_maker.hpp"
#include "lobkit/order_book.hpp"
#include "lobkit/sfe.hpp"
#include "lobkit/shape.hpp"
#include "lobkit/supply_demand.hpp"
#include "lobkit/trade_tape.hpp"

namespace lobkit {

using Json = nlohmann::ordered_json;

/// Throws IoError when unreadable, ValidationError on malformed JSON.
Json read_json_file(const std::filesystem::path& path);
/// Throws IoError when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Throws ValidationError naming the first key of `object` outside `allowed`.
void reject_unknown_keys(const Json& object, std::initializer_list<const char*> allowed, const std::string& context);

// order books: {"tick": 0.0001, "bids": [[price, volume], ...], "asks": [...]}
OrderBook book_from_json(const Json& j);
Json to_json(const OrderBook& book);

// trade-clock series (integer arrays; "meta" is carried but not interpreted)
TradeClockSeries series_from_json(const Json& j);
Json to_json(const TradeClockSeries& series);

/// {"type": "proportional", "half_spread": h} | {"type": "quadratic", "density": m}
/// | {"type": "book", "book": {...}, "quoted_price": p} | {"type": "graph", "knots": [[x, y], ...],
///   "left": "flat|vertical|linear", "right": ..., "reference_price": p}
CostFunction cost_from_json(const Json& j);
/// {"costs": [cost, ...]} with one entry per step, or {"repeat": cost}.
std::vector<CostFunction> cost_series_from_json(const Json& j, std::size_t steps);
/// A single cost, or {"starts": [t0 = 0, ...], "costs": [cost, ...]}.
CostProcess cost_process_from_json(const Json& j);

/// number | {"type": "constant", "value": v} | {"type": "affine", "a": a, "b": b} (a + b t)
TimeFunction time_function_from_json(const Json& j);
/// number | constant | {"type": "affine", "a", "b"} (a + b p) | {"type": "ou", "reversion", "mean"} (k (mean - p))
StateFunction state_function_from_json(const Json& j);
ItoCoefficients coefficients_from_json(const Json& j);

/// Everything `lobkit simulate` reads from its config file.
struct SimulationSpec {
    SimConfig config;
    ItoCoefficients coefficients;
    std::optional<CostProcess> cost;
    SupplyDemandDriver driver = SupplyDemandDriver::InventoryGiven;
    double t1 = 0.0;
    double t2 = -1.0;  ///< negative: the horizon
    std::optional<TimeFunction> time_change;
    double flat_density = 1.0;
};

SimulationSpec simulation_spec_from_json(const Json& j);

Json to_json(const FilterReport& report);
Json to_json(const ValidationReport& report, bool with_indices = true);
Json to_json(const ConvergenceReport& report);
Json to_json(const GeneralCostReport& report);
Json to_json(const SupplyDemandReport& report);
Json to_json(const FlatBookReport& report);
Json to_json(const CovariationTestReport& report);
Json to_json(const MmOptimum& optimum);
Json to_json(const MmSolution& solution);

}  // namespace lobkit
