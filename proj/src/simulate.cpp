#include "pricesim/simulate.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "pricesim/analysis.hpp"
#include "pricesim/distribution_io.hpp"
#include "pricesim/format.hpp"

namespace pricesim {

void write_trace_csv(std::ostream& out, const SimulationTrace& trace, std::size_t run_id) {
  out << "run_id,t,active_size,price,wait,completed_category\n";
  for (const auto& it : trace.iterations) {
    out << run_id << ',' << it.t << ',' << it.active_size << ',' << format_double(it.price) << ','
        << it.wait << ',' << it.completed_category << '\n';
  }
  out << run_id << ",total,0," << format_double(trace.total_cost) << ',' << trace.total_wait << ",\n";
}

nlohmann::json simulation_summary(const SimulateOptions& opts, const MarketConfig& market,
                                  const SimulationTrace& trace,
                                  const std::vector<std::string>& warnings) {
  nlohmann::json j;
  j["family"] = to_json(opts.family);
  j["M"] = opts.m;
  j["strategy"] = to_json(opts.strategy);
  j["seed"] = opts.seed;
  j["engine"] = to_string(opts.engine);
  j["tie_break"] = to_string(opts.tie_break);
  if (opts.alpha > 0.0) {
    j["collective"] = {{"collective", "horizontal"}, {"alpha", opts.alpha}, {"floor", opts.floor}};
  } else if (opts.epsilon > 0.0) {
    j["collective"] = {{"collective", "vertical"},
                       {"epsilon", opts.epsilon},
                       {"target_fraction", opts.target_fraction}};
  }
  j["total_cost"] = trace.total_cost;
  j["total_wait"] = trace.total_wait;
  j["iterations"] = trace.iterations.size();

  const bool iid = std::all_of(market.distributions.begin(), market.distributions.end(),
                               [&](const auto& d) { return d == market.distributions.front(); });
  if (iid && market.strategy.kind() == StrategyKind::Sws) {
    j["analytic_cost"] = analytic_sws_cost(market.distributions.front(), market.categories(),
                                           market.strategy.parameter());
  }
  try {
    const auto bounds = expected_wait_oracle(market);
    if (bounds.exact()) {
      j["expected_wait"] = bounds.lower;
    } else {
      j["expected_wait_bounds"] = {bounds.lower, bounds.upper};
    }
  } catch (const std::exception&) {
    // Too many distinct laws to enumerate; the reference is simply omitted.
  }
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

}  // namespace pricesim
