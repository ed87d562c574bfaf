#include "pricesim/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include <omp.h>

#include "pricesim/distribution_io.hpp"
#include "pricesim/errors.hpp"
#include "pricesim/format.hpp"
#include "pricesim/market.hpp"
#include "pricesim/random.hpp"

namespace pricesim {

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok(); }));
}

namespace {

struct Cell {
  std::size_t family = 0;
  Intervention iv;
  std::size_t m = 0;
  MarketConfig market;
  std::string family_name;
  std::string params;
};

std::vector<Cell> plan_cells(const ExperimentConfig& cfg, std::vector<std::string>& warnings) {
  cfg.validate();
  std::vector<Cell> cells;
  const auto interventions = cfg.interventions();
  for (std::size_t f = 0; f < cfg.families.size(); ++f) {
    const auto& law = cfg.families[f];
    for (const auto& iv : interventions) {
      for (const std::size_t m : cfg.m_grid) {
        std::vector<std::string> cell_warnings;
        Cell cell{f, iv, m, build_market(cfg, law, m, iv, &cell_warnings), family_name(law),
                  param_string(law)};
        for (const auto& w : cell_warnings) {
          warnings.push_back(cell.family_name + " M=" + std::to_string(m) +
                             " epsilon=" + format_double(iv.epsilon) + ": " + w);
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

SweepRow execute(const ExperimentConfig& cfg, const Cell& cell, std::size_t run_index) {
  SweepRow row;
  row.experiment_id = cfg.experiment_id;
  row.family = cell.family_name;
  row.params = cell.params;
  row.m = cell.m;
  row.alpha = cell.iv.alpha;
  row.epsilon = cell.iv.epsilon;
  row.run_index = run_index;
  row.seed = derive_seed(cfg.master_seed, run_index);
  row.theta = cfg.theta;
  row.engine = to_string(cfg.engine);
  try {
    RandomStream rng(row.seed);
    const auto trace = run(cell.market, rng);
    row.total_cost = trace.total_cost;
    row.total_wait = trace.total_wait;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::size_t sweep_size(const ExperimentConfig& cfg) {
  return cfg.families.size() * cfg.interventions().size() * cfg.m_grid.size() * cfg.n_runs;
}

SweepResult run_sweep_serial(const ExperimentConfig& cfg) {
  SweepResult result;
  const auto cells = plan_cells(cfg, result.warnings);
  result.rows.reserve(cells.size() * cfg.n_runs);
  for (const auto& cell : cells) {
    for (std::size_t r = 0; r < cfg.n_runs; ++r) result.rows.push_back(execute(cfg, cell, r));
  }
  return result;
}

SweepResult run_sweep(const ExperimentConfig& cfg, int threads) {
  SweepResult result;
  const auto cells = plan_cells(cfg, result.warnings);
  const auto jobs = static_cast<std::ptrdiff_t>(cells.size() * cfg.n_runs);
  result.rows.resize(static_cast<std::size_t>(jobs));
  const int team = threads > 0 ? threads : omp_get_max_threads();
  const auto runs = static_cast<std::ptrdiff_t>(cfg.n_runs);

  // Each job writes only its own slot, so row order is the canonical order.
#pragma omp parallel for schedule(dynamic) num_threads(team)
  for (std::ptrdiff_t k = 0; k < jobs; ++k) {
    result.rows[static_cast<std::size_t>(k)] =
        execute(cfg, cells[static_cast<std::size_t>(k / runs)], static_cast<std::size_t>(k % runs));
  }
  return result;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

template <typename T>
T parse_field(const std::string& text, const char* column, const std::string& where) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError(where + ": bad value '" + text + "' in column " + column);
  }
  return value;
}

}  // namespace

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  const bool with_error =
      std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok(); });
  out << kSweepHeader << (with_error ? ",error" : "") << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.experiment_id) << ',' << csv_field(r.family) << ',' << csv_field(r.params)
        << ',' << r.m << ',' << format_double(r.alpha) << ',' << format_double(r.epsilon) << ','
        << r.run_index << ',' << r.seed << ',';
    if (r.ok()) {
      out << format_double(r.total_cost) << ',' << r.total_wait;
    } else {
      out << ',';
    }
    out << ',' << format_double(r.theta) << ',' << r.engine;
    if (with_error) out << ',' << csv_field(r.error);
    out << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(source + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const bool with_error = line == std::string(kSweepHeader) + ",error";
  if (line != kSweepHeader && !with_error) {
    throw ConfigError(source + ":1: header does not match the sweep schema");
  }
  const std::size_t columns = with_error ? 13 : 12;

  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto f = split_csv_line(line);
    if (f.size() != columns) {
      throw ConfigError(where + ": expected " + std::to_string(columns) + " fields, found " +
                        std::to_string(f.size()));
    }
    SweepRow r;
    r.experiment_id = f[0];
    r.family = f[1];
    r.params = f[2];
    r.m = parse_field<std::size_t>(f[3], "M", where);
    r.alpha = parse_field<double>(f[4], "alpha", where);
    r.epsilon = parse_field<double>(f[5], "epsilon", where);
    r.run_index = parse_field<std::size_t>(f[6], "run_index", where);
    r.seed = parse_field<std::uint64_t>(f[7], "seed", where);
    if (with_error) r.error = f[12];
    if (r.ok()) {
      r.total_cost = parse_field<double>(f[8], "total_cost", where);
      r.total_wait = parse_field<std::uint64_t>(f[9], "total_wait", where);
    }
    r.theta = parse_field<double>(f[10], "theta", where);
    r.engine = f[11];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace pricesim
