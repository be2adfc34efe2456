#pragma once

#include <optional>
#include <vector>

#include "specshare/model.hpp"
#include "specshare/rng.hpp"

namespace specshare {

/// One draw of the interferer field around a typical receiver.
struct ChannelRealization {
  std::vector<double> interferer_distances;  // m, > 0
  std::vector<double> interferer_gains;      // unit-mean exponential
  double serving_gain = 1.0;                 // h_0, k_0 or g_0 by link
  std::optional<double> cross_gain;          // MBS -> UE link, sharing only
};

enum class Link {
  HtcNoSharing,    // typical UE, HBS interferers only
  HtcSharing,      // typical UE, plus the MBS at y0 on the shared band
  MtcShared,       // typical MTC device on the shared band
  MtcProprietary,  // typical MTC device on its own band, noise only
};

/// Distances from the origin of a homogeneous PPP on the disk of `radius`.
std::vector<double> sample_ppp(double density, double radius,
                               RandomStream& rng);
/// As above, reusing `out`'s storage.
void sample_ppp(double density, double radius, RandomStream& rng,
                std::vector<double>& out);

inline double sample_fading(RandomStream& rng) { return rng.exponential(); }

/// power * sum_i x_i^-alpha h_i.
double aggregate_interference(const ChannelRealization& realization,
                              double power, double alpha);

double instantaneous_sinr(const ScenarioParams& params,
                          const ChannelRealization& realization, Link link);

/// Fresh realization for `link`; reuses `out`'s storage. The serving gain
/// comes from streams.fading for HTC links, streams.fading for the shared
/// MTC link (k_0) and streams.proprietary for the proprietary link (g_0).
/// The MBS cross link gain is drawn from streams.cross.
void sample_realization(const ScenarioParams& params, Link link,
                        ChannelStreams& streams, ChannelRealization& out);

/// B_h log2(1 + SINR) of the shared MTC link, whole band (not per device).
double shared_capacity(const ScenarioParams& params,
                       const ChannelRealization& shared);

/// B_m log2(1 + SNR) of the proprietary link for a given g_0.
double proprietary_capacity(const ScenarioParams& params, double gain);

/// U_m N_m / capacity; +inf for zero capacity.
double service_delay_from_capacity(const ScenarioParams& params,
                                   double capacity);

/// Per-packet service delay: a fresh field and fresh fadings every call.
/// Uses params.p_m_shared as given.
class ServiceDelaySampler {
 public:
  ServiceDelaySampler(const ScenarioParams& params, ServiceMode mode,
                      ChannelStreams streams);

  double operator()();

  /// The aggregate capacity behind the last draw.
  double last_capacity() const { return last_capacity_; }

 private:
  ScenarioParams params_;
  ServiceMode mode_;
  ChannelStreams streams_;
  ChannelRealization shared_;
  double last_capacity_ = 0;
};

double sample_service_delay(const ScenarioParams& params, ServiceMode mode,
                            ChannelStreams& streams);
/// As above with caller-owned scratch; `capacity` receives the aggregate
/// capacity behind the draw when non-null.
double sample_service_delay(const ScenarioParams& params, ServiceMode mode,
                            ChannelStreams& streams,
                            ChannelRealization& scratch, double* capacity);

}  // namespace specshare
