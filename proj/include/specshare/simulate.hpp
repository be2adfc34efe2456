#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "specshare/model.hpp"
#include "specshare/rng.hpp"

namespace specshare {

struct ProbEstimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t n_trials = 0;

  double ci95_lo() const { return mean - 1.96 * std_error; }
  double ci95_hi() const { return mean + 1.96 * std_error; }
};

ProbEstimate binomial_estimate(std::uint64_t hits, std::uint64_t trials);

/// Trials per independent stream block. Results depend on the seed and
/// the trial count only, never on the worker count.
inline constexpr std::uint64_t kTrialsPerBlock = 1u << 14;

/// Frequency of SINR < theta_h at the typical UE. The serving HBS sits at
/// x0; interferers are a PPP on the disk of params.mc_radius. With
/// `sharing`, the MBS adds one faded interferer at y0. Seeds alike give
/// common random numbers across the two settings.
ProbEstimate estimate_outage_mc(const ScenarioParams& params, bool sharing,
                                std::uint64_t n_trials, std::uint64_t seed);

/// Sorted i.i.d. service delays.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t size() const { return sorted_.size(); }
  std::span<const double> samples() const { return sorted_; }

  /// Fraction of samples strictly below t.
  double cdf(double t) const;

  /// Mean of min(S, t_out)^k.
  double truncated_moment(int k, double t_out) const;

  /// Standard error of the truncated mean.
  double truncated_mean_std_error(double t_out) const;

  /// sup_t |F_n(t) - F(t)|, checked on both sides of every jump.
  double sup_distance(const std::function<double(double)>& cdf) const;

 private:
  std::vector<double> sorted_;
};

EmpiricalDistribution empirical_service_distribution(
    const ScenarioParams& params, ServiceMode mode, std::size_t n,
    std::uint64_t seed);

struct QueueStats {
  double mean_sojourn = 0;
  double sojourn_variance = 0;
  double mean_waiting = 0;
  double fail_fraction = 0;
  std::uint64_t n_packets = 0;         // packets in the statistics
  std::uint64_t warmup_discarded = 0;  // leading packets left out
  double mean_sojourn_std_error = 0;       // i.i.d. approximation
  double sojourn_variance_std_error = 0;   // i.i.d. approximation
};

struct QueueOptions {
  double warmup_fraction = 0.1;
};

/// Waiting times of an FCFS single server by the Lindley recursion.
/// `arrivals` are absolute times, nondecreasing.
std::vector<double> lindley_waits(std::span<const double> arrivals,
                                  std::span<const double> services);

/// FCFS M/G/1 with Poisson(lambda) arrivals and service times
/// min(raw, t_out); raw >= t_out counts as a failure but still holds the
/// server for t_out. `raw_service` is called once per packet, in order.
QueueStats run_queue(const std::function<double()>& raw_service,
                     double lambda, double t_out, std::uint64_t n_packets,
                     RandomStream& arrivals, const QueueOptions& options = {});

/// Queue fed by per-packet channel draws. Uses params.p_m_shared as given.
QueueStats run_mg1(const ScenarioParams& params, ServiceMode mode,
                   std::uint64_t n_packets, std::uint64_t seed,
                   const QueueOptions& options = {});

}  // namespace specshare
