#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pricesim {

/// Malformed experiment or simulation configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base for failures raised while a market is being simulated. Maps to exit code 3.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The posted price at iteration `t` can never be accepted.
class ZeroSuccessProbability : public SimulationError {
 public:
  ZeroSuccessProbability(std::size_t t, double price)
      : SimulationError("zero success probability at iteration " + std::to_string(t) +
                        " (price " + std::to_string(price) + ")"),
        iteration_(t),
        price_(price) {}

  std::size_t iteration() const noexcept { return iteration_; }
  double price() const noexcept { return price_; }

 private:
  std::size_t iteration_;
  double price_;
};

class WaitCapExceeded : public SimulationError {
 public:
  explicit WaitCapExceeded(std::size_t t)
      : SimulationError("wait cap exceeded at iteration " + std::to_string(t)), iteration_(t) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Regression input that cannot be fitted (too few points, nonpositive costs, ...).
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pricesim
