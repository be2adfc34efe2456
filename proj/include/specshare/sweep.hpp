#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specshare/model.hpp"

namespace specshare {

enum class SweepVariable { P_h, lambda_h, P_m_shared, epsilon, lambda_md, lambda_mu };

/// Listed in CSV order (alphabetical by name).
enum class Metric { jitter, mean_delay, outage_no_sharing, outage_sharing };

std::string_view to_string(SweepVariable v);
std::string_view to_string(Metric m);
std::optional<SweepVariable> parse_variable(std::string_view name);
std::optional<Metric> parse_metric(std::string_view name);

/// Power variables are swept in dBm, the rest in their SI units.
bool is_power_variable(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::lambda_h;
  double start = 0;
  double stop = 0;
  int steps = 0;
  std::vector<Metric> metrics;     // empty: defaults for the variable
  std::vector<ServiceMode> modes;  // empty: defaults for the variable
  std::uint64_t trials = 0;        // outage Monte Carlo per point; 0 skips
  std::uint64_t packets = 0;       // queue simulation per point; 0 skips
  std::uint64_t seed = 0;
};

std::vector<Metric> default_metrics(SweepVariable v);
std::vector<ServiceMode> default_modes(SweepVariable v);

/// Grid values, linear in the variable's sweep units, both ends included.
std::vector<double> sweep_grid(const SweepSpec& spec);

/// base with the variable set to `value` (sweep units) and the dependent
/// inputs recomputed. The result is not validated.
ScenarioParams apply_sweep_value(ScenarioParams base, SweepVariable v,
                                 double value);

struct SweepRow {
  std::size_t point = 0;
  double value = 0;  // sweep units
  Metric metric = Metric::jitter;
  std::optional<ServiceMode> mode;  // empty for outage metrics
  double analytic = 0;
  std::string error;  // short token; analytic is meaningless when set
  std::optional<double> sim_mean;
  std::optional<double> sim_ci_lo;
  std::optional<double> sim_ci_hi;
  std::uint64_t n = 0;

  bool ok() const { return error.empty(); }
};

struct SweepTable {
  SweepVariable variable = SweepVariable::lambda_h;
  std::vector<SweepRow> rows;
};

/// Evaluates every grid point. Point i simulates with seed spec.seed ^ i;
/// per-point failures land in the rows and the sweep carries on.
SweepTable run_sweep(const SweepSpec& spec, const ScenarioParams& base);

std::string to_csv(const SweepTable& table);
void emit_csv(const SweepTable& table, const std::filesystem::path& path);

struct TrendCheck {
  std::string name;
  bool passed = true;
  std::vector<std::size_t> violating_rows;  // indices into table.rows
  std::string detail;
};

struct TrendReport {
  std::vector<TrendCheck> checks;
  std::vector<std::size_t> error_rows;

  bool passed() const;
};

/// Properties expected of the table's variable, on the analytic column.
TrendReport check_trends(const SweepTable& table);

}  // namespace specshare
