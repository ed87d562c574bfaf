#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pricesim/distribution.hpp"
#include "pricesim/pricing.hpp"
#include "pricesim/random.hpp"

namespace pricesim {

/// Which accepting category a successful worker completes.
enum class TieBreak { UniformAmongAccepting, LowestIndex, MaxMargin };

/// Direct draws whole valuation vectors per arriving worker. GeometricJump
/// samples the deferral count from Geometric(q_t) and then only the accepting
/// worker's acceptance pattern; both produce identically distributed traces.
enum class Engine { Direct, GeometricJump };

inline constexpr std::uint64_t kDefaultWaitCap = 100'000'000;

struct MarketConfig {
  std::vector<ValuationDistribution> distributions;  // one per category, M = size()
  PricingStrategy strategy = PricingStrategy::sws();
  TieBreak tie_break = TieBreak::UniformAmongAccepting;
  std::uint64_t wait_cap = kDefaultWaitCap;
  Engine engine = Engine::GeometricJump;

  std::size_t categories() const noexcept { return distributions.size(); }

  /// M >= 1 and wait_cap >= M; throws ConfigError otherwise.
  void validate() const;

  static MarketConfig iid(const ValuationDistribution& law, std::size_t m,
                          PricingStrategy strategy = PricingStrategy::sws());
};

struct Iteration {
  std::size_t t = 0;
  std::size_t active_size = 0;
  double price = 0.0;
  std::uint64_t wait = 0;  // N_t, arrivals including the accepting one
  std::size_t completed_category = 0;
};

struct SimulationTrace {
  std::vector<Iteration> iterations;
  std::uint64_t total_wait = 0;
  double total_cost = 0.0;
};

/// Runs the posted-price procurement loop until every category is covered.
///
/// The success probability of each posted price is checked analytically before
/// any worker arrives; a zero probability raises ZeroSuccessProbability and a
/// deferral count beyond `wait_cap` raises WaitCapExceeded.
SimulationTrace run(const MarketConfig& cfg, RandomStream& rng);

/// Exact E[WAIT] = sum_t 1/q_t when all categories share one law. With
/// heterogeneous laws the removal order is random, so the bounds take the
/// extreme q_t over every reachable active multiset at each iteration.
struct WaitBounds {
  double lower = 0.0;
  double upper = 0.0;

  bool exact() const noexcept { return lower == upper; }
};

WaitBounds expected_wait_oracle(const MarketConfig& cfg);

/// Var(WAIT) = sum_t (1 - q_t) / q_t^2. I.i.d. markets only.
double wait_variance_oracle(const MarketConfig& cfg);

/// q_1, ..., q_M for an i.i.d. market (throws std::invalid_argument otherwise).
std::vector<double> success_profile(const MarketConfig& cfg);

/// q_t along the removal order recorded in `trace`.
std::vector<double> replay_success_probabilities(const MarketConfig& cfg,
                                                 const SimulationTrace& trace);

std::string to_string(TieBreak t);
std::string to_string(Engine e);

}  // namespace pricesim
