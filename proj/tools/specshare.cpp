#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <iostream>
#include <string>
#include <vector>

#include "specshare/acceptance.hpp"
#include "specshare/analytic.hpp"
#include "specshare/format.hpp"
#include "specshare/model.hpp"
#include "specshare/sweep.hpp"

using namespace specshare;

namespace {

ScenarioParams load_or_die(const std::string& path) {
  try {
    return load_config(path);
  } catch (const ConfigError& e) {
    std::cerr << path << ":" << e.line() << ": " << e.what() << "\n";
  } catch (const InvalidParams& e) {
    std::cerr << path << ": invalid parameters\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
  }
  std::exit(2);
}

template <class T, class Parse>
std::vector<T> parse_names(const std::vector<std::string>& names,
                           Parse parse, const char* what) {
  std::vector<T> out;
  for (const auto& n : names) {
    const auto v = parse(n);
    if (!v) throw CLI::ValidationError(what, "unknown name '" + n + "'");
    out.push_back(*v);
  }
  return out;
}

void print_value(const std::string& key, double value) {
  std::cout << key << " = " << format_double(value) << "\n";
}

int run_eval(const std::string& config, const std::vector<std::string>& mode_names,
             const std::vector<std::string>& metric_names) {
  const ScenarioParams p = load_or_die(config);
  auto modes = parse_names<ServiceMode>(mode_names, parse_mode, "--mode");
  if (modes.empty()) modes.assign(std::begin(kAllModes), std::end(kAllModes));
  auto metrics = parse_names<Metric>(metric_names, parse_metric, "--metric");
  if (metrics.empty())
    metrics = {Metric::outage_no_sharing, Metric::outage_sharing,
               Metric::mean_delay, Metric::jitter};
  auto wants = [&](Metric m) {
    return std::find(metrics.begin(), metrics.end(), m) != metrics.end();
  };

  int status = 0;
  if (wants(Metric::outage_no_sharing))
    print_value("outage_no_sharing", outage_no_sharing(p));
  if (wants(Metric::outage_sharing)) {
    print_value("outage_sharing", outage_with_sharing(p));
    try {
      print_value("outage_increment", outage_increment(p));
    } catch (const AnalysisError&) {
      std::cout << "outage_increment = undefined\n";
    }
  }
  if (p.epsilon) {
    const auto b = max_mbs_power(p);
    if (b.feasible) {
      print_value("max_mbs_power_dbm", watts_to_dbm(b.power));
      std::cout << "max_mbs_power_clamped = " << (b.clamped ? "yes" : "no")
                << "\n";
    } else {
      std::cout << "max_mbs_power_dbm = infeasible\n";
    }
  }
  if (!wants(Metric::mean_delay) && !wants(Metric::jitter)) return status;
  for (ServiceMode mode : modes) {
    const std::string tag = "[" + std::string(to_string(mode)) + "]";
    try {
      const auto r = delay_report(p, mode);
      if (wants(Metric::mean_delay)) print_value("mean_delay" + tag, r.mean_delay);
      if (wants(Metric::jitter)) print_value("jitter" + tag, r.jitter);
      print_value("load" + tag, r.load);
      print_value("fail_prob" + tag, r.fail_prob);
    } catch (const std::exception& e) {
      std::cout << "delay" << tag << " = error: " << e.what() << "\n";
      status = 1;
    }
  }
  return status;
}

struct SweepArgs {
  std::string config;
  std::string variable;
  double from = 0;
  double to = 0;
  int steps = 0;
  std::optional<std::uint64_t> trials;
  std::uint64_t packets = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool check = false;
  std::vector<std::string> metrics;
  std::vector<std::string> modes;
};

int run_sweep_command(const SweepArgs& a) {
  const ScenarioParams base = load_or_die(a.config);
  SweepSpec spec;
  const auto v = parse_variable(a.variable);
  if (!v) throw CLI::ValidationError("--var", "unknown variable '" + a.variable + "'");
  spec.variable = *v;
  spec.start = a.from;
  spec.stop = a.to;
  spec.steps = a.steps;
  spec.metrics = parse_names<Metric>(a.metrics, parse_metric, "--metric");
  spec.modes = parse_names<ServiceMode>(a.modes, parse_mode, "--mode");
  spec.trials = a.trials.value_or(base.trials);
  spec.packets = a.packets;
  spec.seed = a.seed.value_or(base.seed);

  SweepTable table;
  try {
    table = run_sweep(spec, base);
    emit_csv(table, a.out);
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    return 2;
  }

  const auto report = check_trends(table);
  int status = 0;
  for (auto i : report.error_rows) {
    const auto& r = table.rows[i];
    std::cerr << "row " << i << ": " << to_string(table.variable) << " = "
              << format_double(r.value) << " " << to_string(r.metric)
              << ": " << r.error << "\n";
    status = 1;
  }
  if (a.check) {
    for (const auto& c : report.checks) {
      std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name;
      if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
      if (!c.violating_rows.empty()) {
        std::cout << " rows:";
        for (auto i : c.violating_rows) std::cout << " " << i;
      }
      std::cout << "\n";
    }
    if (!report.passed()) status = 1;
  }
  return status;
}

int run_verify(const std::string& config) {
  const ScenarioParams base = load_or_die(config);
  AcceptanceOptions options;
  options.seed = base.seed;
  bool all = true;
  run_acceptance(base, options, [&](const CriterionResult& r) {
    std::cout << format_result(r) << std::flush;
    all = all && r.passed();
  });
  std::cout << (all ? "all criteria passed\n" : "some criteria failed\n");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum-sharing coexistence analyzer for HTC and MTC networks"};
  app.require_subcommand(1);

  std::string eval_config;
  std::vector<std::string> eval_modes, eval_metrics;
  auto* eval = app.add_subcommand("eval", "Evaluate the closed forms once");
  eval->add_option("--config", eval_config, "Scenario file")->required();
  eval->add_option("--mode", eval_modes, "shared, proprietary or combined");
  eval->add_option("--metric", eval_metrics,
                   "outage_no_sharing, outage_sharing, mean_delay, jitter");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Sweep one variable and write CSV");
  sweep->add_option("--config", sa.config, "Scenario file")->required();
  sweep->add_option("--var", sa.variable,
                    "P_h, lambda_h, P_m_shared, epsilon, lambda_md, lambda_mu")
      ->required();
  sweep->add_option("--from", sa.from, "First grid value (dBm for powers)")
      ->required();
  sweep->add_option("--to", sa.to, "Last grid value")->required();
  sweep->add_option("--steps", sa.steps, "Grid points")->required();
  sweep->add_option("--trials", sa.trials,
                    "Outage Monte Carlo trials per point (default: config)");
  sweep->add_option("--packets", sa.packets,
                    "Simulated packets per point and mode");
  sweep->add_option("--seed", sa.seed, "Master seed (default: config)");
  sweep->add_option("--out", sa.out, "CSV destination")->required();
  sweep->add_flag("--check-trends", sa.check, "Check the expected trends");
  sweep->add_option("--metric", sa.metrics, "Restrict metrics");
  sweep->add_option("--mode", sa.modes, "Restrict service modes");

  std::string verify_config;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--config", verify_config, "Scenario file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) return run_eval(eval_config, eval_modes, eval_metrics);
    if (*sweep) return run_sweep_command(sa);
    if (*verify) return run_verify(verify_config);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }
  return 0;
}
