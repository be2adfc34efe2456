#include "specshare/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "specshare/kernels/path_loss.hpp"

namespace specshare {

void sample_ppp(double density, double radius, RandomStream& rng,
                std::vector<double>& out) {
  out.clear();
  const double mean = density * std::numbers::pi * radius * radius;
  const auto count = rng.poisson(mean);
  out.reserve(count);
  // Area-uniform: r^2 / R^2 is uniform on (0, 1).
  for (std::uint64_t i = 0; i < count; ++i)
    out.push_back(radius * std::sqrt(rng.uniform_open()));
}

std::vector<double> sample_ppp(double density, double radius,
                               RandomStream& rng) {
  std::vector<double> out;
  sample_ppp(density, radius, rng, out);
  return out;
}

double aggregate_interference(const ChannelRealization& realization,
                              double power, double alpha) {
  if (realization.interferer_distances.empty()) return 0.0;
  return power * kernels::path_loss_sum(realization.interferer_distances,
                                        realization.interferer_gains, alpha);
}

namespace {

double path_gain(double distance, double alpha) {
  return std::pow(distance, -alpha);
}

double ratio(double signal, double denominator) {
  if (signal == 0) return 0.0;
  if (denominator == 0) return std::numeric_limits<double>::infinity();
  return signal / denominator;
}

}  // namespace

double instantaneous_sinr(const ScenarioParams& p,
                          const ChannelRealization& r, Link link) {
  switch (link) {
    case Link::HtcNoSharing:
    case Link::HtcSharing: {
      const double signal = p.p_h * path_gain(p.x0, p.alpha) * r.serving_gain;
      double denom = aggregate_interference(r, p.p_h, p.alpha) +
                     p.noise_psd * p.b_h / p.n_h;
      if (link == Link::HtcSharing) {
        if (!r.cross_gain)
          throw std::invalid_argument("HtcSharing needs a cross-link gain");
        denom += p.p_m_shared * path_gain(p.y0, p.alpha) * *r.cross_gain;
      }
      return ratio(signal, denom);
    }
    case Link::MtcShared: {
      const double signal =
          p.p_m_shared * path_gain(p.y0, p.alpha) * r.serving_gain;
      const double denom = aggregate_interference(r, p.p_h, p.alpha) +
                           p.noise_psd * p.b_h / p.n_m;
      return ratio(signal, denom);
    }
    case Link::MtcProprietary: {
      const double signal =
          p.p_m * p.n_m * path_gain(p.y0, p.alpha) * r.serving_gain;
      return ratio(signal, p.noise_psd * p.b_m);
    }
  }
  return 0.0;
}

void sample_realization(const ScenarioParams& p, Link link,
                        ChannelStreams& s, ChannelRealization& out) {
  out.cross_gain.reset();
  if (link == Link::MtcProprietary) {
    out.interferer_distances.clear();
    out.interferer_gains.clear();
    out.serving_gain = sample_fading(s.proprietary);
    return;
  }
  sample_ppp(p.lambda_h, p.mc_radius, s.ppp, out.interferer_distances);
  out.serving_gain = sample_fading(s.fading);
  out.interferer_gains.resize(out.interferer_distances.size());
  for (auto& g : out.interferer_gains) g = sample_fading(s.fading);
  if (link == Link::HtcSharing) out.cross_gain = sample_fading(s.cross);
}

double shared_capacity(const ScenarioParams& p,
                       const ChannelRealization& shared) {
  return p.b_h * std::log2(1.0 + instantaneous_sinr(p, shared,
                                                    Link::MtcShared));
}

double proprietary_capacity(const ScenarioParams& p, double gain) {
  ChannelRealization r;
  r.serving_gain = gain;
  return p.b_m * std::log2(1.0 + instantaneous_sinr(p, r,
                                                    Link::MtcProprietary));
}

double service_delay_from_capacity(const ScenarioParams& p,
                                   double capacity) {
  if (!(capacity > 0)) return std::numeric_limits<double>::infinity();
  return p.u_m * p.n_m / capacity;
}

double sample_service_delay(const ScenarioParams& params, ServiceMode mode,
                            ChannelStreams& streams,
                            ChannelRealization& scratch, double* capacity) {
  double c = 0;
  if (mode != ServiceMode::ProprietaryOnly) {
    sample_realization(params, Link::MtcShared, streams, scratch);
    c += shared_capacity(params, scratch);
  }
  if (mode != ServiceMode::SharedOnly)
    c += proprietary_capacity(params, sample_fading(streams.proprietary));
  if (capacity) *capacity = c;
  return service_delay_from_capacity(params, c);
}

double sample_service_delay(const ScenarioParams& params, ServiceMode mode,
                            ChannelStreams& streams) {
  ChannelRealization scratch;
  return sample_service_delay(params, mode, streams, scratch, nullptr);
}

ServiceDelaySampler::ServiceDelaySampler(const ScenarioParams& params,
                                         ServiceMode mode,
                                         ChannelStreams streams)
    : params_(params), mode_(mode), streams_(std::move(streams)) {}

double ServiceDelaySampler::operator()() {
  return sample_service_delay(params_, mode_, streams_, shared_,
                              &last_capacity_);
}

}  // namespace specshare
