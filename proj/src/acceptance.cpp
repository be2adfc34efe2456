#include "specshare/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "specshare/analytic.hpp"
#include "specshare/simulate.hpp"
#include "specshare/sweep.hpp"

namespace specshare {

bool CriterionResult::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const AcceptanceCheck& c) { return c.passed; });
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

AcceptanceCheck within_rel(std::string name, double got, double want,
                           double tol) {
  const double r = rel_diff(got, want);
  return {std::move(name), r <= tol,
          fmt(got) + " vs " + fmt(want) + ", rel " + fmt(r) + " (tol " +
              fmt(tol) + ")"};
}

AcceptanceCheck within_se(std::string name, double got, double want,
                          double se, double k = 3.0) {
  const double z = se > 0 ? std::abs(got - want) / se
                          : (got == want ? 0.0 : INFINITY);
  return {std::move(name), z <= k,
          fmt(got) + " vs " + fmt(want) + ", " + fmt(z) + " se (tol " +
              fmt(k) + ")"};
}

AcceptanceCheck runtime_check(double seconds, double limit) {
  return {"runtime", seconds < limit,
          fmt(seconds) + " s (limit " + fmt(limit) + " s)"};
}

CriterionResult outage_oracle(const ScenarioParams& base,
                              const AcceptanceOptions& o) {
  const auto t0 = Clock::now();
  CriterionResult r{1, "outage Monte Carlo vs closed forms", {}, 0};
  ScenarioParams p = base;
  p.lambda_h = 1e-4;
  p.mc_radius = 1000;
  const auto plain = estimate_outage_mc(p, false, o.outage_trials, o.seed);
  r.checks.push_back(within_se("no sharing", plain.mean,
                               outage_no_sharing(p), plain.std_error));
  const auto shared = estimate_outage_mc(p, true, o.outage_trials, o.seed);
  r.checks.push_back(within_se("sharing", shared.mean, outage_with_sharing(p),
                               shared.std_error));
  r.checks.push_back(runtime_check(seconds_since(t0), 60));
  return r;
}

CriterionResult power_budget_identity(const ScenarioParams& base) {
  CriterionResult r{2, "power budget bound gives outage epsilon", {}, 0};
  double worst = 0;
  int points = 0;
  for (double lambda_h : {1e-5, 5e-5, 1e-4, 2e-4, 5e-4})
    for (double eps : {0.03, 0.05, 0.1, 0.2}) {
      ScenarioParams p = base;
      p.lambda_h = lambda_h;
      p.epsilon = eps;
      p.p_m_shared = max_mbs_power(p).unclamped_bound;
      worst = std::max(worst, std::abs(outage_with_sharing(p) - eps));
      ++points;
    }
  r.checks.push_back({"|P_out'(bound) - epsilon| on " +
                          std::to_string(points) + " points",
                      worst <= 1e-9, "worst " + fmt(worst) + " (tol 1e-09)"});
  return r;
}

CriterionResult service_cdf_oracle(const ScenarioParams& base,
                                   const AcceptanceOptions& o) {
  CriterionResult r{3, "service delay CDF vs sampled delays", {}, 0};
  for (ServiceMode mode : kAllModes) {
    const auto emp =
        empirical_service_distribution(base, mode, o.service_draws, o.seed);
    const double d = emp.sup_distance(
        [&](double t) { return service_cdf(base, mode, t); });
    r.checks.push_back({std::string(to_string(mode)) + " sup distance",
                        d <= 0.01, fmt(d) + " (tol 0.01)"});
  }
  return r;
}

CriterionResult pdf_normalization(const ScenarioParams& base) {
  CriterionResult r{4, "f2 normalization and F1 shape", {}, 0};
  const QuadratureSpec tight{1e-13, 1e-16, 4000};
  std::vector<ScenarioParams> cases(4, base);
  cases[1].n_m = 20;
  cases[2].n_m = 400;
  cases[3].y0 = 25;
  double worst = 0;
  for (const auto& p : cases) {
    const auto support = proprietary_pdf_support(p);
    const double mass = integrate(
        [&](double u) { return capacity_pdf_proprietary(p, u); }, 0.0,
        support.u_max, tight);
    worst = std::max(worst, std::abs(mass + support.tail_mass - 1.0));
  }
  r.checks.push_back({"|int f2 - 1| over " + std::to_string(cases.size()) +
                          " parameter sets",
                      worst <= 1e-8, "worst " + fmt(worst) + " (tol 1e-08)"});

  bool ok = true;
  std::string where;
  for (const auto& p : cases) {
    double prev = 0;
    const double top = 20.0 * p.b_h;
    for (int i = 0; i < 1000; ++i) {
      const double tau = top * i / 999.0;
      const double F = capacity_cdf_shared(p, tau);
      if (!(F >= prev && F >= 0 && F <= 1)) {
        ok = false;
        where = "tau " + fmt(tau);
      }
      prev = F;
    }
  }
  r.checks.push_back({"F1 nondecreasing in [0,1] on 1000 points", ok,
                      ok ? "ok" : "violated at " + where});
  return r;
}

void queue_checks(CriterionResult& r, const ScenarioParams& base,
                  ServiceMode mode, double rho, double mean_tol,
                  std::uint64_t packets, std::uint64_t seed) {
  const auto m = truncated_service_moments(base, mode);
  ScenarioParams p = base;
  p.lambda_md = rho / m.m1;
  const auto rep = delay_report(p, mode);
  const auto q = run_mg1(p, mode, packets, seed);
  const std::string tag =
      std::string(to_string(mode)) + " rho=" + fmt(rho) + " ";
  r.checks.push_back(
      within_rel(tag + "mean sojourn", q.mean_sojourn, rep.mean_delay,
                 mean_tol));
  r.checks.push_back(within_rel(tag + "sojourn variance", q.sojourn_variance,
                                rep.jitter, 0.10));
  const double n = static_cast<double>(q.n_packets);
  const double se = std::sqrt(rep.fail_prob * (1.0 - rep.fail_prob) / n);
  r.checks.push_back(
      within_se(tag + "fail fraction", q.fail_fraction, rep.fail_prob, se));
}

CriterionResult queue_match(const ScenarioParams& base,
                            const AcceptanceOptions& o) {
  const auto t0 = Clock::now();
  CriterionResult r{5, "queue simulation vs delay and jitter formulas", {}, 0};
  std::uint64_t seed = o.seed;
  for (double rho : {0.2, 0.5, 0.8})
    queue_checks(r, base, ServiceMode::ProprietaryOnly, rho,
                 rho > 0.7 ? 0.05 : 0.03, o.packets, seed++);
  for (ServiceMode mode : {ServiceMode::SharedOnly, ServiceMode::Combined})
    queue_checks(r, base, mode, 0.5, 0.03, o.packets, seed++);
  r.checks.push_back(runtime_check(seconds_since(t0), 300));
  return r;
}

CriterionResult classical_oracles(const AcceptanceOptions& o) {
  CriterionResult r{6, "classical M/M/1 and M/D/1 values", {}, 0};
  double worst_mm1 = 0, worst_md1 = 0;
  for (double mu : {50.0, 100.0, 1000.0})
    for (double rho : {0.1, 0.5, 0.9}) {
      const double lambda = rho * mu;
      const double s = 1.0 / mu;
      const TruncatedMoments expo{s, 2 * s * s, 6 * s * s * s, 0};
      const TruncatedMoments det{s, s * s, s * s * s, 0};
      worst_mm1 = std::max(worst_mm1, rel_diff(mg1_waiting(expo, lambda).mean,
                                               rho / (mu - lambda)));
      worst_md1 = std::max(
          worst_md1, rel_diff(mg1_waiting(det, lambda).mean,
                              lambda * s * s / (2 * (1 - rho))));
    }
  r.checks.push_back({"M/M/1 waiting formula", worst_mm1 <= 1e-12,
                      "worst rel " + fmt(worst_mm1) + " (tol 1e-12)"});
  r.checks.push_back({"M/D/1 waiting formula", worst_md1 <= 1e-12,
                      "worst rel " + fmt(worst_md1) + " (tol 1e-12)"});

  auto service = RandomStream::derive(o.seed, StreamPurpose::Synthetic);
  auto arrivals = RandomStream::derive(o.seed, StreamPurpose::Arrivals);
  const auto q = run_queue([&] { return 0.01 * service.exponential(); }, 50.0,
                           INFINITY, o.packets, arrivals);
  r.checks.push_back(
      within_rel("simulated M/M/1 sojourn", q.mean_sojourn, 0.02, 0.02));
  return r;
}

AcceptanceCheck from_trends(const std::string& label,
                            const SweepTable& table) {
  const auto report = check_trends(table);
  AcceptanceCheck c{label, report.passed() && report.error_rows.empty() &&
                               !report.checks.empty(),
                    {}};
  if (!report.error_rows.empty())
    c.detail = std::to_string(report.error_rows.size()) + " error rows; ";
  for (const auto& t : report.checks) {
    c.detail += t.name + (t.passed ? " ok" : " FAILED");
    if (!t.violating_rows.empty()) {
      c.detail += " rows";
      for (auto i : t.violating_rows) c.detail += " " + std::to_string(i);
    }
    c.detail += "; ";
  }
  if (c.detail.size() >= 2) c.detail.resize(c.detail.size() - 2);
  return c;
}

SweepSpec analytic_sweep(SweepVariable v, double start, double stop,
                         int steps) {
  SweepSpec s;
  s.variable = v;
  s.start = start;
  s.stop = stop;
  s.steps = steps;
  return s;
}

CriterionResult trend_suite(const ScenarioParams& base) {
  CriterionResult r{7, "trend suite on analytic curves", {}, 0};

  {
    const auto spec = analytic_sweep(SweepVariable::P_h, 14, 44, 16);
    r.checks.push_back(from_trends("(a) transmit power of HBSs",
                                   run_sweep(spec, base)));
    ScenarioParams quiet = base;
    quiet.noise_psd = 0;
    auto flat = spec;
    flat.metrics = {Metric::outage_no_sharing};
    const auto table = run_sweep(flat, quiet);
    double spread = 0;
    for (const auto& row : table.rows)
      spread = std::max(spread, rel_diff(row.analytic, table.rows[0].analytic));
    r.checks.push_back({"(a) no-sharing outage constant in P_h at N = 0",
                        spread <= 1e-12,
                        "max rel spread " + fmt(spread) + " (tol 1e-12)"});
  }
  r.checks.push_back(from_trends(
      "(b) HBS density",
      run_sweep(analytic_sweep(SweepVariable::lambda_h, 1e-5, 1e-3, 12),
                base)));
  r.checks.push_back(from_trends(
      "(c) MBS shared-band power",
      run_sweep(analytic_sweep(SweepVariable::P_m_shared, 0, 30, 16), base)));
  r.checks.push_back(from_trends(
      "(d) HTC outage tolerance",
      run_sweep(analytic_sweep(SweepVariable::epsilon, 0.006, 0.03, 13),
                base)));
  r.checks.push_back(from_trends(
      "(e) packet arrival rate",
      run_sweep(analytic_sweep(SweepVariable::lambda_md, 10, 90, 10), base)));
  ScenarioParams busy = base;
  busy.lambda_md = 100;
  r.checks.push_back(from_trends(
      "(f) MTC device density at lambda_md = 100/s",
      run_sweep(analytic_sweep(SweepVariable::lambda_mu, 0.005, 0.02, 10),
                busy)));
  return r;
}

CriterionResult determinism(const ScenarioParams& base,
                            const AcceptanceOptions& o) {
  CriterionResult r{8, "identical seeds give identical CSV", {}, 0};
  auto spec = analytic_sweep(SweepVariable::lambda_md, 10, 90, 3);
  spec.trials = 1;
  spec.packets = 20000;
  spec.seed = o.seed;
  const std::string a = to_csv(run_sweep(spec, base));
  const std::string b = to_csv(run_sweep(spec, base));
  r.checks.push_back({"queue sweep", a == b,
                      std::to_string(a.size()) + " bytes"});
  auto outage = analytic_sweep(SweepVariable::lambda_h, 1e-5, 1e-3, 3);
  outage.trials = 20000;
  outage.seed = o.seed;
  const std::string c = to_csv(run_sweep(outage, base));
  const std::string d = to_csv(run_sweep(outage, base));
  r.checks.push_back({"outage sweep", c == d,
                      std::to_string(c.size()) + " bytes"});
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(
    const ScenarioParams& base, const AcceptanceOptions& options,
    const std::function<void(const CriterionResult&)>& on_done) {
  std::vector<CriterionResult> results;
  auto run = [&](auto&& fn) {
    const auto t0 = Clock::now();
    CriterionResult r = fn();
    r.seconds = seconds_since(t0);
    if (on_done) on_done(r);
    results.push_back(std::move(r));
  };
  run([&] { return outage_oracle(base, options); });
  run([&] { return power_budget_identity(base); });
  run([&] { return service_cdf_oracle(base, options); });
  run([&] { return pdf_normalization(base); });
  run([&] { return queue_match(base, options); });
  run([&] { return classical_oracles(options); });
  run([&] { return trend_suite(base); });
  run([&] { return determinism(base, options); });
  return results;
}

std::string format_result(const CriterionResult& result) {
  std::string s = "AC" + std::to_string(result.id) +
                  (result.passed() ? " PASS  " : " FAIL  ") + result.title +
                  " (" + fmt(result.seconds) + " s)\n";
  for (const auto& c : result.checks)
    s += std::string(c.passed ? "    ok    " : "    FAIL  ") + c.name + ": " +
         c.detail + "\n";
  return s;
}

}  // namespace specshare
