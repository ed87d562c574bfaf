#include "pricesim/classify.hpp"

#include <map>
#include <tuple>

#include "pricesim/errors.hpp"

namespace pricesim {

namespace {

struct Accumulator {
  double cost = 0.0;
  double wait = 0.0;
  std::size_t n = 0;
};

}  // namespace

std::vector<CellReport> classify_sweep(std::span<const SweepRow> rows, const RegimeThresholds& rule) {
  using Key = std::tuple<std::string, std::string, std::string, double, double>;
  std::map<Key, std::size_t> index;
  std::vector<CellReport> cells;
  std::vector<std::map<std::size_t, Accumulator>> by_m;

  for (const auto& r : rows) {
    const Key key{r.experiment_id, r.family, r.params, r.alpha, r.epsilon};
    auto [it, inserted] = index.try_emplace(key, cells.size());
    if (inserted) {
      CellReport cell;
      cell.experiment_id = r.experiment_id;
      cell.family = r.family;
      cell.params = r.params;
      cell.alpha = r.alpha;
      cell.epsilon = r.epsilon;
      cells.push_back(std::move(cell));
      by_m.emplace_back();
    }
    auto& acc = by_m[it->second][r.m];
    if (!r.ok()) {
      ++cells[it->second].failed_runs;
      continue;
    }
    acc.cost += r.total_cost;
    acc.wait += static_cast<double>(r.total_wait);
    ++acc.n;
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto& cell = cells[c];
    for (const auto& [m, acc] : by_m[c]) {
      if (acc.n == 0) continue;
      const auto n = static_cast<double>(acc.n);
      cell.points.push_back({static_cast<double>(m), acc.cost / n});
      cell.mean_wait.push_back(acc.wait / n);
    }
    if (cell.points.size() < 4) {
      cell.error = "insufficient grid: " + std::to_string(cell.points.size()) +
                   " distinct M values with successful runs (need at least 4)";
      continue;
    }
    try {
      cell.fit = fit_regime(cell.points, rule);
    } catch (const DegenerateInput& e) {
      cell.error = e.what();
    }
  }
  return cells;
}

nlohmann::json to_json(const CellReport& cell) {
  nlohmann::json j;
  j["experiment_id"] = cell.experiment_id;
  j["family"] = cell.family;
  j["params"] = cell.params;
  j["alpha"] = cell.alpha;
  j["epsilon"] = cell.epsilon;
  j["failed_runs"] = cell.failed_runs;
  j["M"] = nlohmann::json::array();
  j["mean_cost"] = nlohmann::json::array();
  for (const auto& p : cell.points) {
    j["M"].push_back(p.m);
    j["mean_cost"].push_back(p.cost);
  }
  j["mean_wait"] = cell.mean_wait;
  if (cell.fit) {
    const auto& f = *cell.fit;
    j["regime"] = to_string(f.regime);
    if (f.regime == Regime::Linear || f.regime == Regime::Sublinear) j["exponent"] = f.exponent;
    j["fit"] = {
        {"points_used", f.points_used},
        {"power_law", {{"slope", f.power_law.slope}, {"intercept", f.power_law.intercept}, {"r2", f.power_law.r2}}},
        {"logarithmic",
         {{"slope", f.logarithmic.slope}, {"intercept", f.logarithmic.intercept}, {"r2", f.logarithmic.r2}}},
        {"constant", {{"level", f.level}, {"max_dev", f.max_dev}, {"relative_spread", f.relative_spread}}},
    };
  } else {
    j["error"] = cell.error;
  }
  return j;
}

nlohmann::json regime_report(std::span<const CellReport> cells) {
  nlohmann::json j;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : cells) j["cells"].push_back(to_json(c));
  return j;
}

}  // namespace pricesim
