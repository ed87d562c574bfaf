#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pricesim/config.hpp"

namespace pricesim {

inline constexpr std::string_view kSweepHeader =
    "experiment_id,family,params,M,alpha,epsilon,run_index,seed,total_cost,total_wait,theta,engine";

/// One sweep output row. A failed run keeps its coordinates and carries the
/// error text; cost and wait are then meaningless.
struct SweepRow {
  std::string experiment_id;
  std::string family;
  std::string params;
  std::size_t m = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  double total_cost = 0.0;
  std::uint64_t total_wait = 0;
  double theta = 1.0;
  std::string engine;
  std::string error;

  bool ok() const { return error.empty(); }
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;

  std::size_t failures() const;
};

/// Rows in canonical order: family, intervention, M, run. Every cell uses the
/// seeds derive_seed(master_seed, run_index), so cells share random streams.
std::size_t sweep_size(const ExperimentConfig& cfg);

/// Single-threaded reference.
SweepResult run_sweep_serial(const ExperimentConfig& cfg);

/// OpenMP over (cell, run) jobs; byte-identical to the serial result.
/// threads <= 0 uses the OpenMP default.
SweepResult run_sweep(const ExperimentConfig& cfg, int threads = 0);

/// Adds a trailing `error` column only when some row failed.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// Throws ConfigError on a header or field mismatch, with the line number.
std::vector<SweepRow> read_sweep_csv(std::istream& in, const std::string& source = "sweep.csv");

}  // namespace pricesim
