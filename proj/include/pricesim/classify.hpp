#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pricesim/analysis.hpp"
#include "pricesim/sweep.hpp"

namespace pricesim {

/// Mean cost per M for one (experiment, family, params, alpha, epsilon) cell.
struct CellReport {
  std::string experiment_id;
  std::string family;
  std::string params;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::vector<CostPoint> points;  // ascending M
  std::vector<double> mean_wait;  // aligned with points
  std::size_t failed_runs = 0;
  std::optional<RegimeFit> fit;
  std::string error;  // set when the cell cannot be fitted
};

/// Groups rows by cell in order of first appearance and fits each cell.
/// Failed rows are excluded from the means and counted.
std::vector<CellReport> classify_sweep(std::span<const SweepRow> rows,
                                       const RegimeThresholds& rule = {});

nlohmann::json to_json(const CellReport& cell);
nlohmann::json regime_report(std::span<const CellReport> cells);

}  // namespace pricesim
