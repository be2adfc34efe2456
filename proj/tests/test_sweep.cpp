#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "specshare/analytic.hpp"
#include "specshare/sweep.hpp"

using namespace specshare;

namespace {

SweepSpec spec_for(SweepVariable v, double a, double b, int steps) {
  SweepSpec s;
  s.variable = v;
  s.start = a;
  s.stop = b;
  s.steps = steps;
  return s;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

constexpr const char* kHeader =
    "variable,value,metric,mode,analytic,sim_mean,sim_ci_lo,sim_ci_hi,n";

}  // namespace

TEST_CASE("names") {
  CHECK(parse_variable("lambda_md") == SweepVariable::lambda_md);
  CHECK(to_string(SweepVariable::P_m_shared) == "P_m_shared");
  CHECK_FALSE(parse_variable("P_x").has_value());
  CHECK(parse_metric("outage_sharing") == Metric::outage_sharing);
  CHECK(to_string(Metric::mean_delay) == "mean_delay");
  CHECK(is_power_variable(SweepVariable::P_h));
  CHECK_FALSE(is_power_variable(SweepVariable::epsilon));
}

TEST_CASE("grid") {
  const auto g = sweep_grid(spec_for(SweepVariable::lambda_md, 10, 90, 5));
  CHECK(g == std::vector<double>{10, 30, 50, 70, 90});
  const auto e = sweep_grid(spec_for(SweepVariable::epsilon, 0.006, 0.03, 13));
  CHECK(e.front() == 0.006);
  CHECK(e.back() == 0.03);
  CHECK_THROWS_AS(sweep_grid(spec_for(SweepVariable::P_h, 5, 5, 3)), std::invalid_argument);
  CHECK_THROWS_AS(sweep_grid(spec_for(SweepVariable::P_h, 0, 5, 1)), std::invalid_argument);
}

TEST_CASE("sweep values reach the params") {
  const auto base = ScenarioParams::defaults();
  CHECK(apply_sweep_value(base, SweepVariable::P_h, 30).p_h ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(apply_sweep_value(base, SweepVariable::P_m_shared, 0).p_m_shared ==
        doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(apply_sweep_value(base, SweepVariable::epsilon, 0.02).epsilon == 0.02);
  auto pinned = base;
  pinned.n_m = 7;
  pinned.n_m_explicit = true;
  const auto d = apply_sweep_value(pinned, SweepVariable::lambda_mu, 0.015);
  CHECK(d.n_m == 150);
  CHECK(d.lambda_mu == 0.015);
}

TEST_CASE("degenerate analytic sweep") {
  auto s = spec_for(SweepVariable::lambda_h, 1e-5, 1e-3, 2);
  s.metrics = {Metric::outage_no_sharing};
  const auto t = run_sweep(s, ScenarioParams::defaults());
  REQUIRE(t.rows.size() == 2);
  for (const auto& r : t.rows) {
    CHECK(r.ok());
    CHECK_FALSE(r.sim_mean.has_value());
    CHECK_FALSE(r.mode.has_value());
  }
  auto p = ScenarioParams::defaults();
  p.lambda_h = 1e-3;
  CHECK(t.rows[1].analytic == outage_no_sharing(p));
  const auto csv = lines(to_csv(t));
  REQUIRE(csv.size() == 3);
  CHECK(csv[0] == kHeader);
  CHECK(csv[1].rfind("lambda_h,1e-05,outage_no_sharing,,", 0) == 0);
  CHECK(csv[1].substr(csv[1].size() - 4) == ",,,,");
}

TEST_CASE("empty table is header only") {
  SweepTable t;
  CHECK(to_csv(t) == std::string(kHeader) + "\n");
}

TEST_CASE("row order: grid, then metric name, then mode") {
  auto s = spec_for(SweepVariable::lambda_md, 10, 20, 2);
  s.metrics = {Metric::mean_delay, Metric::jitter};
  s.modes = {ServiceMode::Combined, ServiceMode::ProprietaryOnly};
  const auto t = run_sweep(s, ScenarioParams::defaults());
  REQUIRE(t.rows.size() == 8);
  const auto csv = lines(to_csv(t));
  CHECK(csv[1].rfind("lambda_md,10,jitter,proprietary,", 0) == 0);
  CHECK(csv[2].rfind("lambda_md,10,jitter,combined,", 0) == 0);
  CHECK(csv[3].rfind("lambda_md,10,mean_delay,proprietary,", 0) == 0);
  CHECK(csv[5].rfind("lambda_md,20,jitter,proprietary,", 0) == 0);
}

TEST_CASE("power sweeps are reported in dBm") {
  auto s = spec_for(SweepVariable::P_h, 14, 44, 4);
  const auto t = run_sweep(s, ScenarioParams::defaults());
  CHECK(t.rows.size() == 8);
  CHECK(t.rows[0].value == 14);
  CHECK(t.rows[2].value == 24);
  auto p = ScenarioParams::defaults();
  p.p_h = dbm_to_watts(24);
  CHECK(t.rows[3].analytic == outage_with_sharing(p));
}

TEST_CASE("failing points are recorded and the sweep carries on") {
  SUBCASE("unstable queue") {
    auto s = spec_for(SweepVariable::lambda_md, 100, 1000, 4);
    s.modes = {ServiceMode::ProprietaryOnly};
    s.metrics = {Metric::mean_delay};
    const auto t = run_sweep(s, ScenarioParams::defaults());
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0].ok());
    CHECK(t.rows[3].error == "unstable_queue");
    CHECK(to_csv(t).find("ERR(unstable_queue)") != std::string::npos);
    CHECK(check_trends(t).error_rows == std::vector<std::size_t>{1, 2, 3});
  }
  SUBCASE("infeasible power budget") {
    auto s = spec_for(SweepVariable::epsilon, 0.001, 0.02, 3);
    const auto t = run_sweep(s, ScenarioParams::defaults());
    CHECK(t.rows[0].error == "infeasible_power");
    CHECK(t.rows.back().ok());
  }
  SUBCASE("invalid value") {
    auto s = spec_for(SweepVariable::epsilon, 0.5, 1.5, 3);
    s.modes = {ServiceMode::SharedOnly};
    const auto t = run_sweep(s, ScenarioParams::defaults());
    CHECK(t.rows.back().error == "invalid_params");
  }
}

TEST_CASE("simulated columns") {
  auto s = spec_for(SweepVariable::lambda_h, 1e-4, 2e-4, 2);
  s.trials = 20000;
  s.seed = 3;
  const auto t = run_sweep(s, ScenarioParams::defaults());
  for (const auto& r : t.rows) {
    REQUIRE(r.sim_mean.has_value());
    CHECK(r.n == 20000);
    CHECK(*r.sim_ci_lo <= *r.sim_mean);
    CHECK(*r.sim_mean <= *r.sim_ci_hi);
  }
  auto q = spec_for(SweepVariable::lambda_md, 20, 40, 2);
  q.trials = 1;
  q.packets = 5000;
  q.modes = {ServiceMode::ProprietaryOnly};
  const auto u = run_sweep(q, ScenarioParams::defaults());
  for (const auto& r : u.rows) {
    REQUIRE(r.sim_mean.has_value());
    CHECK(r.n == 4500);
  }
}

TEST_CASE("identical seeds give identical bytes") {
  auto s = spec_for(SweepVariable::lambda_md, 10, 90, 3);
  s.trials = 1;
  s.packets = 10000;
  s.seed = 11;
  const auto base = ScenarioParams::defaults();
  setenv("SPECSHARE_THREADS", "1", 1);
  const auto a = to_csv(run_sweep(s, base));
  setenv("SPECSHARE_THREADS", "3", 1);
  const auto b = to_csv(run_sweep(s, base));
  unsetenv("SPECSHARE_THREADS");
  CHECK(a == b);
  s.seed = 12;
  CHECK(to_csv(run_sweep(s, base)) != a);
}

TEST_CASE("emit_csv") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "specshare_test_sweep.csv";
  auto s = spec_for(SweepVariable::lambda_h, 1e-5, 1e-3, 3);
  const auto t = run_sweep(s, ScenarioParams::defaults());
  emit_csv(t, path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == to_csv(t));
  std::filesystem::remove(path);
  try {
    emit_csv(t, "/nonexistent-dir/out.csv");
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/out.csv") != std::string::npos);
  }
}

TEST_CASE("trend checks on real sweeps") {
  const auto base = ScenarioParams::defaults();
  const auto h = check_trends(run_sweep(spec_for(SweepVariable::lambda_h, 1e-5, 1e-3, 10), base));
  CHECK(h.passed());
  CHECK(h.checks.size() == 2);

  const auto md = check_trends(run_sweep(spec_for(SweepVariable::lambda_md, 10, 90, 10), base));
  CHECK(md.passed());
  CHECK(md.error_rows.empty());
  // 3 modes x 2 metrics increasing, plus 2 orderings.
  CHECK(md.checks.size() == 8);

  const auto pm = check_trends(run_sweep(spec_for(SweepVariable::P_m_shared, 0, 30, 10), base));
  CHECK(pm.passed());
}

TEST_CASE("trend checks flag violations") {
  SweepTable t;
  t.variable = SweepVariable::epsilon;
  const double delays[] = {5, 4, 4.5, 3, 3, 3};
  for (std::size_t i = 0; i < 6; ++i) {
    SweepRow r;
    r.point = i;
    r.value = 0.01 * static_cast<double>(i + 1);
    r.metric = Metric::mean_delay;
    r.mode = ServiceMode::SharedOnly;
    r.analytic = delays[i];
    t.rows.push_back(r);
  }
  auto rep = check_trends(t);
  REQUIRE(rep.checks.size() == 1);
  CHECK_FALSE(rep.passed());
  CHECK(rep.checks[0].violating_rows == std::vector<std::size_t>{2});

  t.rows[2].analytic = 3.5;
  CHECK(check_trends(t).passed());

  // Still dropping at the end: no plateau.
  t.rows[5].analytic = 2;
  CHECK_FALSE(check_trends(t).passed());

  SweepTable h;
  h.variable = SweepVariable::lambda_h;
  for (std::size_t i = 0; i < 3; ++i) {
    SweepRow r;
    r.point = i;
    r.metric = Metric::outage_no_sharing;
    r.analytic = i == 1 ? 0.5 : 0.1 * static_cast<double>(i + 1);
    h.rows.push_back(r);
  }
  rep = check_trends(h);
  CHECK_FALSE(rep.passed());
  CHECK(rep.checks[0].violating_rows == std::vector<std::size_t>{2});
}
