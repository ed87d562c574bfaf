#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pricesim/config.hpp"
#include "pricesim/market.hpp"

namespace pricesim {

/// `run_id,t,active_size,price,wait,completed_category`, one row per iteration,
/// then a summary row with t = "total", the summed wait and cost in the price column.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace, std::size_t run_id = 0);

/// JSON summary of one simulation: inputs, totals, and the analytic cost / wait
/// references when they are cheap to compute.
nlohmann::json simulation_summary(const SimulateOptions& opts, const MarketConfig& market,
                                  const SimulationTrace& trace,
                                  const std::vector<std::string>& warnings);

}  // namespace pricesim
