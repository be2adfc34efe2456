#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "specshare/analytic.hpp"
#include "specshare/simulate.hpp"

using namespace specshare;

TEST_CASE("binomial estimate") {
  const auto e = binomial_estimate(25, 100);
  CHECK(e.mean == 0.25);
  CHECK(e.std_error == doctest::Approx(std::sqrt(0.25 * 0.75 / 100)));
  CHECK(e.ci95_lo() == doctest::Approx(0.25 - 1.96 * e.std_error));
  CHECK(binomial_estimate(0, 10).std_error == 0);
}

TEST_CASE("outage Monte Carlo") {
  auto p = ScenarioParams::defaults();
  SUBCASE("zero threshold never fails") {
    p.theta_h = 0;
    CHECK(estimate_outage_mc(p, false, 20000, 1).mean == 0.0);
    CHECK(estimate_outage_mc(p, true, 20000, 1).mean == 0.0);
  }
  SUBCASE("sharing only adds failures on paired streams") {
    p.lambda_h = 3e-4;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto a = estimate_outage_mc(p, false, 40000, seed);
      const auto b = estimate_outage_mc(p, true, 40000, seed);
      CHECK(b.mean >= a.mean);
    }
  }
  SUBCASE("matches the closed forms off the default point") {
    p.lambda_h = 5e-4;
    p.mc_radius = 600;
    p.theta_h = 0.05;
    const auto a = estimate_outage_mc(p, false, 200000, 5);
    const auto b = estimate_outage_mc(p, true, 200000, 5);
    CHECK(std::abs(a.mean - outage_no_sharing(p)) < 3 * a.std_error);
    CHECK(std::abs(b.mean - outage_with_sharing(p)) < 3 * b.std_error);
  }
  CHECK_THROWS_AS(estimate_outage_mc(p, false, 0, 1), std::invalid_argument);
}

TEST_CASE("results do not depend on the worker count") {
  const auto p = ScenarioParams::defaults();
  setenv("SPECSHARE_THREADS", "1", 1);
  const auto a = estimate_outage_mc(p, true, 50000, 9);
  const auto ea = empirical_service_distribution(p, ServiceMode::Combined, 40000, 9);
  setenv("SPECSHARE_THREADS", "4", 1);
  const auto b = estimate_outage_mc(p, true, 50000, 9);
  const auto eb = empirical_service_distribution(p, ServiceMode::Combined, 40000, 9);
  unsetenv("SPECSHARE_THREADS");
  CHECK(a.mean == b.mean);
  CHECK(std::equal(ea.samples().begin(), ea.samples().end(), eb.samples().begin()));
}

TEST_CASE("empirical distribution bookkeeping") {
  const EmpiricalDistribution e({0.3, 0.1, 0.2, 0.2});
  CHECK(e.size() == 4);
  CHECK(e.samples()[0] == 0.1);
  CHECK(e.cdf(0.1) == 0.0);
  CHECK(e.cdf(0.2) == 0.25);
  CHECK(e.cdf(0.25) == 0.75);
  CHECK(e.cdf(1.0) == 1.0);
  CHECK(e.truncated_moment(1, 0.25) == doctest::Approx((0.1 + 0.2 + 0.2 + 0.25) / 4));
  CHECK(e.truncated_moment(2, 1.0) == doctest::Approx((0.01 + 0.04 + 0.04 + 0.09) / 4));
  // Uniform(0, 0.4) CDF: worst gap is at 0.3, 1 - 0.75.
  CHECK(e.sup_distance([](double t) { return t / 0.4; }) == doctest::Approx(0.25));
}

TEST_CASE("sampled service delays") {
  const auto p = ScenarioParams::defaults();
  for (auto mode : kAllModes) {
    const auto e = empirical_service_distribution(p, mode, 100000, 3);
    CHECK(e.samples().front() > 0);
    const auto m = truncated_service_moments(p, mode);
    const double se = e.truncated_mean_std_error(p.t_out);
    CAPTURE(to_string(mode));
    CHECK(std::abs(e.truncated_moment(1, p.t_out) - m.m1) < 3 * se);
    // Kolmogorov-Smirnov at the 1% level.
    const double d = e.sup_distance([&](double t) { return service_cdf(p, mode, t); });
    CHECK(d < 1.628 / std::sqrt(100000.0));
  }
}

TEST_CASE("Lindley recursion on a hand trace") {
  const std::vector<double> arrivals{0, 1, 2};
  const std::vector<double> services{5, 1, 1};
  CHECK(lindley_waits(arrivals, services) == std::vector<double>{0, 4, 4});
  CHECK(lindley_waits(std::vector<double>{0, 10}, std::vector<double>{1, 1}) ==
        std::vector<double>{0, 0});
}

TEST_CASE("queue without arrivals") {
  auto arrivals = RandomStream::derive(1, StreamPurpose::Arrivals);
  std::vector<double> draws{0.004, 0.02, 0.001};
  std::size_t next = 0;
  const auto q = run_queue([&] { return draws[next++]; }, 0.0, 0.01, 3, arrivals);
  CHECK(q.mean_waiting == 0);
  CHECK(q.warmup_discarded == 0);
  CHECK(q.mean_sojourn == doctest::Approx((0.004 + 0.01 + 0.001) / 3));
  CHECK(q.fail_fraction == doctest::Approx(1.0 / 3));

  next = 0;
  const auto one = run_queue([&] { return draws[next++]; }, 0.0, 0.01, 1, arrivals);
  CHECK(one.mean_sojourn == 0.004);
  CHECK(one.n_packets == 1);
}

TEST_CASE("queue bookkeeping") {
  auto arrivals = RandomStream::derive(1, StreamPurpose::Arrivals);
  const auto q = run_queue([] { return 0.001; }, 10.0, 1.0, 1000, arrivals);
  CHECK(q.warmup_discarded == 100);
  CHECK(q.n_packets == 900);
  CHECK(q.mean_sojourn >= q.mean_waiting);
  CHECK(q.sojourn_variance >= 0);
  auto again = RandomStream::derive(1, StreamPurpose::Arrivals);
  CHECK(run_queue([] { return 0.001; }, 10.0, 1.0, 1000, again).mean_sojourn ==
        q.mean_sojourn);
  CHECK_THROWS_AS(run_queue([] { return 0.0; }, 1.0, 1.0, 0, arrivals),
                  std::invalid_argument);
}

TEST_CASE("M/M/1 with synthetic exponential service") {
  auto service = RandomStream::derive(17, StreamPurpose::Synthetic);
  auto arrivals = RandomStream::derive(17, StreamPurpose::Arrivals);
  const auto q = run_queue([&] { return 0.01 * service.exponential(); }, 50.0,
                           INFINITY, 1'000'000, arrivals);
  CHECK(q.mean_sojourn == doctest::Approx(0.02).epsilon(0.02));
  CHECK(q.mean_waiting == doctest::Approx(0.01).epsilon(0.03));
  CHECK(q.sojourn_variance == doctest::Approx(4e-4).epsilon(0.06));
  CHECK(q.fail_fraction == 0);
}

TEST_CASE("queue waiting times match Pollaczek-Khinchine") {
  const auto base = ScenarioParams::defaults();
  const auto m = truncated_service_moments(base, ServiceMode::ProprietaryOnly);
  const double tol[] = {0.03, 0.03, 0.05};
  const double rhos[] = {0.2, 0.5, 0.8};
  for (int i = 0; i < 3; ++i) {
    auto p = base;
    p.lambda_md = rhos[i] / m.m1;
    const auto w = mg1_waiting(m, p.lambda_md);
    const auto q = run_mg1(p, ServiceMode::ProprietaryOnly, 1'000'000, 40 + i);
    CAPTURE(rhos[i]);
    CHECK(q.mean_waiting == doctest::Approx(w.mean).epsilon(tol[i]));
    const double se = std::sqrt(m.fail_prob * (1 - m.fail_prob) / q.n_packets);
    CHECK(std::abs(q.fail_fraction - m.fail_prob) < 3 * se);
  }
}

TEST_CASE("run_mg1 is reproducible") {
  const auto p = ScenarioParams::defaults();
  const auto a = run_mg1(p, ServiceMode::Combined, 20000, 5);
  const auto b = run_mg1(p, ServiceMode::Combined, 20000, 5);
  CHECK(a.mean_sojourn == b.mean_sojourn);
  CHECK(a.sojourn_variance == b.sojourn_variance);
  CHECK(a.fail_fraction == b.fail_fraction);
  const auto c = run_mg1(p, ServiceMode::Combined, 20000, 6);
  CHECK(a.mean_sojourn != c.mean_sojourn);
}
