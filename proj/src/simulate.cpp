#include "specshare/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "specshare/geometry.hpp"
#include "specshare/parallel.hpp"

namespace specshare {

ProbEstimate binomial_estimate(std::uint64_t hits, std::uint64_t trials) {
  ProbEstimate e;
  e.n_trials = trials;
  if (trials == 0) return e;
  e.mean = static_cast<double>(hits) / static_cast<double>(trials);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials));
  return e;
}

ProbEstimate estimate_outage_mc(const ScenarioParams& params, bool sharing,
                                std::uint64_t n_trials, std::uint64_t seed) {
  if (n_trials == 0) throw std::invalid_argument("n_trials must be >= 1");
  const std::uint64_t blocks = (n_trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<std::uint64_t> hits(blocks, 0);
  const Link link = sharing ? Link::HtcSharing : Link::HtcNoSharing;

  parallel_for(blocks, [&](std::size_t b) {
    auto streams = ChannelStreams::derive(seed, b);
    ChannelRealization r;
    const std::uint64_t begin = b * kTrialsPerBlock;
    const std::uint64_t end = std::min(n_trials, begin + kTrialsPerBlock);
    std::uint64_t h = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      sample_realization(params, link, streams, r);
      if (instantaneous_sinr(params, r, link) < params.theta_h) ++h;
    }
    hits[b] = h;
  });

  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return binomial_estimate(total, n_trials);
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double t) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::truncated_moment(int k, double t_out) const {
  if (sorted_.empty()) return 0.0;
  double sum = 0;
  for (double s : sorted_) sum += std::pow(std::min(s, t_out), k);
  return sum / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::truncated_mean_std_error(double t_out) const {
  const std::size_t n = sorted_.size();
  if (n < 2) return 0.0;
  const double mean = truncated_moment(1, t_out);
  double ss = 0;
  for (double s : sorted_) {
    const double d = std::min(s, t_out) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

double EmpiricalDistribution::sup_distance(
    const std::function<double(double)>& cdf) const {
  const double n = static_cast<double>(sorted_.size());
  double worst = 0;
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    if (!std::isfinite(sorted_[i])) {
      // Mass at +inf: the analytic CDF never reaches the remaining steps.
      worst = std::max(worst, 1.0 - static_cast<double>(i) / n -
                                  (1.0 - cdf(std::numeric_limits<double>::max())));
      break;
    }
    const double F = cdf(sorted_[i]);
    worst = std::max(worst, std::abs(F - static_cast<double>(i) / n));
    worst = std::max(worst, std::abs(F - static_cast<double>(i + 1) / n));
  }
  return worst;
}

EmpiricalDistribution empirical_service_distribution(
    const ScenarioParams& params, ServiceMode mode, std::size_t n,
    std::uint64_t seed) {
  std::vector<double> samples(n);
  const std::size_t blocks = (n + kTrialsPerBlock - 1) / kTrialsPerBlock;
  parallel_for(blocks, [&](std::size_t b) {
    auto streams = ChannelStreams::derive(seed, b);
    ChannelRealization scratch;
    const std::size_t begin = b * kTrialsPerBlock;
    const std::size_t end = std::min<std::size_t>(n, begin + kTrialsPerBlock);
    for (std::size_t i = begin; i < end; ++i)
      samples[i] =
          sample_service_delay(params, mode, streams, scratch, nullptr);
  });
  return EmpiricalDistribution(std::move(samples));
}

std::vector<double> lindley_waits(std::span<const double> arrivals,
                                  std::span<const double> services) {
  if (arrivals.size() != services.size())
    throw std::invalid_argument("lindley_waits: size mismatch");
  std::vector<double> waits(arrivals.size(), 0.0);
  for (std::size_t i = 1; i < arrivals.size(); ++i)
    waits[i] = std::max(0.0, waits[i - 1] + services[i - 1] -
                                 (arrivals[i] - arrivals[i - 1]));
  return waits;
}

QueueStats run_queue(const std::function<double()>& raw_service,
                     double lambda, double t_out, std::uint64_t n_packets,
                     RandomStream& arrivals, const QueueOptions& options) {
  if (n_packets == 0) throw std::invalid_argument("n_packets must be >= 1");
  const auto warmup = static_cast<std::uint64_t>(
      std::floor(options.warmup_fraction * static_cast<double>(n_packets)));
  if (warmup >= n_packets)
    throw std::invalid_argument("warm-up leaves no packets");

  std::vector<double> sojourn;
  sojourn.reserve(n_packets - warmup);
  double waiting_sum = 0;
  std::uint64_t failures = 0;

  double wait = 0;  // of the current packet
  for (std::uint64_t i = 0; i < n_packets; ++i) {
    const double raw = raw_service();
    const bool failed = !(raw < t_out);
    const double service = failed ? t_out : raw;
    if (i >= warmup) {
      sojourn.push_back(wait + service);
      waiting_sum += wait;
      if (failed) ++failures;
    }
    // Next packet's wait; no arrivals at all when lambda = 0.
    const double gap = lambda > 0 ? arrivals.exponential() / lambda
                                  : std::numeric_limits<double>::infinity();
    wait = std::max(0.0, wait + service - gap);
  }

  QueueStats q;
  const double n = static_cast<double>(sojourn.size());
  q.n_packets = sojourn.size();
  q.warmup_discarded = warmup;
  double sum = 0;
  for (double s : sojourn) sum += s;
  q.mean_sojourn = sum / n;
  q.mean_waiting = waiting_sum / n;
  q.fail_fraction = static_cast<double>(failures) / n;
  double m2 = 0, m4 = 0;
  for (double s : sojourn) {
    const double d = s - q.mean_sojourn;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  if (sojourn.size() > 1) {
    q.sojourn_variance = m2 / (n - 1);
    q.mean_sojourn_std_error = std::sqrt(q.sojourn_variance / n);
    const double mu2 = m2 / n;
    const double mu4 = m4 / n;
    q.sojourn_variance_std_error =
        std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / n);
  }
  return q;
}

QueueStats run_mg1(const ScenarioParams& params, ServiceMode mode,
                   std::uint64_t n_packets, std::uint64_t seed,
                   const QueueOptions& options) {
  auto arrivals = RandomStream::derive(seed, StreamPurpose::Arrivals);
  ServiceDelaySampler sampler(params, mode, ChannelStreams::derive(seed));
  return run_queue([&] { return sampler(); }, params.lambda_md, params.t_out,
                   n_packets, arrivals, options);
}

}  // namespace specshare
