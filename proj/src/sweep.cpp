#include "specshare/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "specshare/analytic.hpp"
#include "specshare/format.hpp"
#include "specshare/parallel.hpp"
#include "specshare/simulate.hpp"

namespace specshare {

namespace {

struct VariableName {
  SweepVariable v;
  std::string_view name;
};
constexpr VariableName kVariables[] = {
    {SweepVariable::P_h, "P_h"},
    {SweepVariable::lambda_h, "lambda_h"},
    {SweepVariable::P_m_shared, "P_m_shared"},
    {SweepVariable::epsilon, "epsilon"},
    {SweepVariable::lambda_md, "lambda_md"},
    {SweepVariable::lambda_mu, "lambda_mu"},
};

struct MetricName {
  Metric m;
  std::string_view name;
};
constexpr MetricName kMetrics[] = {
    {Metric::jitter, "jitter"},
    {Metric::mean_delay, "mean_delay"},
    {Metric::outage_no_sharing, "outage_no_sharing"},
    {Metric::outage_sharing, "outage_sharing"},
};

bool is_outage(Metric m) {
  return m == Metric::outage_no_sharing || m == Metric::outage_sharing;
}

std::string error_token(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const UnstableQueue&) {
    return "unstable_queue";
  } catch (const InfeasiblePowerBudget&) {
    return "infeasible_power";
  } catch (const InvalidParams&) {
    return "invalid_params";
  } catch (const QuadratureError&) {
    return "quadrature";
  } catch (...) {
    return "error";
  }
}

std::vector<SweepRow> evaluate_point(const SweepSpec& spec,
                                     const std::vector<Metric>& metrics,
                                     const std::vector<ServiceMode>& modes,
                                     const ScenarioParams& base,
                                     std::size_t point, double value) {
  const std::uint64_t seed = spec.seed ^ point;
  std::vector<SweepRow> rows;
  auto blank = [&](Metric m, std::optional<ServiceMode> mode) {
    SweepRow r;
    r.point = point;
    r.value = value;
    r.metric = m;
    r.mode = mode;
    return r;
  };

  ScenarioParams p;
  std::string invalid;
  try {
    p = apply_sweep_value(base, spec.variable, value);
    validate(p);
  } catch (...) {
    invalid = error_token(std::current_exception());
  }

  for (Metric m : metrics) {
    if (is_outage(m)) {
      SweepRow r = blank(m, std::nullopt);
      const bool sharing = m == Metric::outage_sharing;
      if (!invalid.empty()) {
        r.error = invalid;
      } else {
        r.analytic = sharing ? outage_with_sharing(p) : outage_no_sharing(p);
        if (spec.trials > 0) {
          const auto est = estimate_outage_mc(p, sharing, spec.trials, seed);
          r.sim_mean = est.mean;
          r.sim_ci_lo = est.ci95_lo();
          r.sim_ci_hi = est.ci95_hi();
          r.n = est.n_trials;
        }
      }
      rows.push_back(std::move(r));
      continue;
    }
    for (ServiceMode mode : modes) {
      SweepRow r = blank(m, mode);
      if (!invalid.empty()) {
        r.error = invalid;
        rows.push_back(std::move(r));
        continue;
      }
      try {
        const auto rep = delay_report(p, mode);
        r.analytic = m == Metric::mean_delay ? rep.mean_delay : rep.jitter;
        if (spec.trials > 0 && spec.packets > 0) {
          ScenarioParams q = p;
          q.p_m_shared = rep.shared_power;
          const auto s = run_mg1(q, mode, spec.packets, seed);
          const double mean =
              m == Metric::mean_delay ? s.mean_sojourn : s.sojourn_variance;
          const double se = m == Metric::mean_delay
                                ? s.mean_sojourn_std_error
                                : s.sojourn_variance_std_error;
          r.sim_mean = mean;
          r.sim_ci_lo = mean - 1.96 * se;
          r.sim_ci_hi = mean + 1.96 * se;
          r.n = s.n_packets;
        }
      } catch (...) {
        r.error = error_token(std::current_exception());
      }
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

bool nearly_equal(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::string_view to_string(SweepVariable v) {
  for (const auto& e : kVariables)
    if (e.v == v) return e.name;
  return "?";
}

std::string_view to_string(Metric m) {
  for (const auto& e : kMetrics)
    if (e.m == m) return e.name;
  return "?";
}

std::optional<SweepVariable> parse_variable(std::string_view name) {
  for (const auto& e : kVariables)
    if (e.name == name) return e.v;
  return std::nullopt;
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (const auto& e : kMetrics)
    if (e.name == name) return e.m;
  return std::nullopt;
}

bool is_power_variable(SweepVariable v) {
  return v == SweepVariable::P_h || v == SweepVariable::P_m_shared;
}

std::vector<Metric> default_metrics(SweepVariable v) {
  switch (v) {
    case SweepVariable::P_h:
    case SweepVariable::lambda_h:
    case SweepVariable::P_m_shared:
      return {Metric::outage_no_sharing, Metric::outage_sharing};
    case SweepVariable::epsilon:
    case SweepVariable::lambda_md:
    case SweepVariable::lambda_mu:
      return {Metric::jitter, Metric::mean_delay};
  }
  return {};
}

std::vector<ServiceMode> default_modes(SweepVariable v) {
  if (v == SweepVariable::epsilon)
    return {ServiceMode::SharedOnly, ServiceMode::Combined};
  return {std::begin(kAllModes), std::end(kAllModes)};
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  if (!(spec.start < spec.stop))
    throw std::invalid_argument("sweep: start must be below stop");
  if (spec.steps < 2) throw std::invalid_argument("sweep: steps must be >= 2");
  std::vector<double> grid(static_cast<std::size_t>(spec.steps));
  const double last = spec.steps - 1;
  for (int i = 0; i < spec.steps; ++i)
    grid[static_cast<std::size_t>(i)] =
        (spec.start * (last - i) + spec.stop * i) / last;
  grid.front() = spec.start;
  grid.back() = spec.stop;
  return grid;
}

ScenarioParams apply_sweep_value(ScenarioParams p, SweepVariable v,
                                 double value) {
  switch (v) {
    case SweepVariable::P_h:
      p.p_h = dbm_to_watts(value);
      break;
    case SweepVariable::lambda_h:
      p.lambda_h = value;
      break;
    case SweepVariable::P_m_shared:
      p.p_m_shared = dbm_to_watts(value);
      break;
    case SweepVariable::epsilon:
      p.epsilon = value;
      break;
    case SweepVariable::lambda_md:
      p.lambda_md = value;
      break;
    case SweepVariable::lambda_mu:
      p.lambda_mu = value;
      p.n_m = device_count_from_density(value, p.workshop_area);
      break;
  }
  return p;
}

SweepTable run_sweep(const SweepSpec& spec, const ScenarioParams& base) {
  const auto grid = sweep_grid(spec);
  auto metrics = spec.metrics.empty() ? default_metrics(spec.variable)
                                      : spec.metrics;
  std::sort(metrics.begin(), metrics.end());
  metrics.erase(std::unique(metrics.begin(), metrics.end()), metrics.end());
  auto modes = spec.modes.empty() ? default_modes(spec.variable) : spec.modes;
  std::sort(modes.begin(), modes.end());
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());

  std::vector<std::vector<SweepRow>> per_point(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    per_point[i] = evaluate_point(spec, metrics, modes, base, i, grid[i]);
  });

  SweepTable table;
  table.variable = spec.variable;
  for (auto& rows : per_point)
    for (auto& r : rows) table.rows.push_back(std::move(r));
  return table;
}

std::string to_csv(const SweepTable& table) {
  std::string out =
      "variable,value,metric,mode,analytic,sim_mean,sim_ci_lo,sim_ci_hi,n\n";
  auto opt = [](const std::optional<double>& x) {
    return x ? format_double(*x) : std::string();
  };
  for (const auto& r : table.rows) {
    out += to_string(table.variable);
    out += ',';
    out += format_double(r.value);
    out += ',';
    out += to_string(r.metric);
    out += ',';
    if (r.mode) out += to_string(*r.mode);
    out += ',';
    out += r.ok() ? format_double(r.analytic) : "ERR(" + r.error + ")";
    out += ',';
    out += opt(r.sim_mean);
    out += ',';
    out += opt(r.sim_ci_lo);
    out += ',';
    out += opt(r.sim_ci_hi);
    out += ',';
    if (r.sim_mean) out += std::to_string(r.n);
    out += '\n';
  }
  return out;
}

void emit_csv(const SweepTable& table, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  const std::string text = to_csv(table);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

bool TrendReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const TrendCheck& c) { return c.passed; });
}

namespace {

// Row indices of one curve in grid order, error rows left out.
using Curve = std::vector<std::size_t>;

std::map<std::pair<Metric, int>, Curve> curves_of(const SweepTable& t) {
  std::map<std::pair<Metric, int>, Curve> curves;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    if (!r.ok()) continue;
    const int mode = r.mode ? static_cast<int>(*r.mode) : -1;
    curves[{r.metric, mode}].push_back(i);
  }
  return curves;
}

std::string curve_name(Metric m, int mode) {
  std::string s(to_string(m));
  if (mode >= 0) {
    s += '[';
    s += to_string(static_cast<ServiceMode>(mode));
    s += ']';
  }
  return s;
}

enum class Direction { Increasing, Decreasing };

TrendCheck strict_monotone(const SweepTable& t, const Curve& c,
                           Direction dir, std::string name) {
  TrendCheck check{std::move(name), true, {}, {}};
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double prev = t.rows[c[k - 1]].analytic;
    const double cur = t.rows[c[k]].analytic;
    const bool ok = dir == Direction::Increasing ? cur > prev : cur < prev;
    if (!ok) {
      check.passed = false;
      check.violating_rows.push_back(c[k]);
    }
  }
  return check;
}

double total_variation(const SweepTable& t, const Curve& c) {
  double tv = 0;
  for (std::size_t k = 1; k < c.size(); ++k)
    tv += std::abs(t.rows[c[k]].analytic - t.rows[c[k - 1]].analytic);
  return tv;
}

TrendCheck exactly_flat(const SweepTable& t, const Curve& c,
                        std::string name) {
  TrendCheck check{std::move(name), true, {}, {}};
  if (c.empty()) return check;
  const double ref = t.rows[c.front()].analytic;
  for (std::size_t k = 1; k < c.size(); ++k)
    if (!nearly_equal(t.rows[c[k]].analytic, ref, 1e-12)) {
      check.passed = false;
      check.violating_rows.push_back(c[k]);
    }
  return check;
}

// Nonincreasing everywhere, ending on a plateau of at least two points.
TrendCheck decreasing_then_flat(const SweepTable& t, const Curve& c,
                                std::string name) {
  constexpr double kSlack = 1e-9;
  TrendCheck check{std::move(name), true, {}, {}};
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double prev = t.rows[c[k - 1]].analytic;
    const double cur = t.rows[c[k]].analytic;
    if (cur > prev + kSlack * std::abs(prev)) {
      check.passed = false;
      check.violating_rows.push_back(c[k]);
    }
  }
  std::size_t plateau = c.empty() ? 0 : 1;
  while (plateau < c.size() &&
         nearly_equal(t.rows[c[c.size() - 1 - plateau]].analytic,
                      t.rows[c.back()].analytic, kSlack))
    ++plateau;
  if (plateau < 2) {
    check.passed = false;
    check.detail = "no plateau at the end of the grid";
    if (!c.empty()) check.violating_rows.push_back(c.back());
  } else {
    check.detail = "plateau of " + std::to_string(plateau) + " points";
  }
  return check;
}

TrendCheck pointwise_below(const SweepTable& t, const Curve& lower,
                           const Curve& upper, std::string name) {
  TrendCheck check{std::move(name), true, {}, {}};
  std::map<std::size_t, std::size_t> by_point;
  for (auto i : upper) by_point[t.rows[i].point] = i;
  for (auto i : lower) {
    const auto it = by_point.find(t.rows[i].point);
    if (it == by_point.end()) continue;
    if (!(t.rows[i].analytic <= t.rows[it->second].analytic)) {
      check.passed = false;
      check.violating_rows.push_back(i);
    }
  }
  return check;
}

}  // namespace

TrendReport check_trends(const SweepTable& table) {
  TrendReport report;
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    if (!table.rows[i].ok()) report.error_rows.push_back(i);

  const auto curves = curves_of(table);
  auto find = [&](Metric m, int mode = -1) -> const Curve* {
    const auto it = curves.find({m, mode});
    return it == curves.end() ? nullptr : &it->second;
  };
  const Curve* no_sharing = find(Metric::outage_no_sharing);
  const Curve* sharing = find(Metric::outage_sharing);
  auto& out = report.checks;

  switch (table.variable) {
    case SweepVariable::P_h:
      if (sharing)
        out.push_back(strict_monotone(table, *sharing, Direction::Decreasing,
                                      "outage_sharing decreasing"));
      if (sharing && no_sharing) {
        const double flat = total_variation(table, *no_sharing);
        const double moving = total_variation(table, *sharing);
        TrendCheck c{"outage_no_sharing nearly flat", flat <= 0.1 * moving,
                     {}, {}};
        c.detail = "variation " + format_double(flat) + " vs " +
                   format_double(moving) + " with sharing";
        out.push_back(std::move(c));
      }
      break;
    case SweepVariable::lambda_h:
      if (no_sharing)
        out.push_back(strict_monotone(table, *no_sharing,
                                      Direction::Increasing,
                                      "outage_no_sharing increasing"));
      if (sharing)
        out.push_back(strict_monotone(table, *sharing, Direction::Increasing,
                                      "outage_sharing increasing"));
      break;
    case SweepVariable::P_m_shared:
      if (sharing)
        out.push_back(strict_monotone(table, *sharing, Direction::Increasing,
                                      "outage_sharing increasing"));
      if (no_sharing)
        out.push_back(
            exactly_flat(table, *no_sharing, "outage_no_sharing flat"));
      break;
    case SweepVariable::epsilon:
      for (const auto& [key, curve] : curves) {
        if (is_outage(key.first)) continue;
        out.push_back(decreasing_then_flat(
            table, curve,
            curve_name(key.first, key.second) + " nonincreasing then flat"));
      }
      break;
    case SweepVariable::lambda_md:
    case SweepVariable::lambda_mu:
      for (const auto& [key, curve] : curves) {
        if (is_outage(key.first)) continue;
        out.push_back(strict_monotone(
            table, curve, Direction::Increasing,
            curve_name(key.first, key.second) + " increasing"));
      }
      for (Metric m : {Metric::jitter, Metric::mean_delay}) {
        const Curve* combined =
            find(m, static_cast<int>(ServiceMode::Combined));
        const Curve* proprietary =
            find(m, static_cast<int>(ServiceMode::ProprietaryOnly));
        if (combined && proprietary)
          out.push_back(pointwise_below(
              table, *combined, *proprietary,
              std::string(to_string(m)) + " combined <= proprietary"));
      }
      break;
  }
  return report;
}

}  // namespace specshare
