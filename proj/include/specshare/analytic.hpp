#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

#include "specshare/model.hpp"
#include "specshare/quadrature.hpp"

namespace specshare {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnstableQueue : public AnalysisError {
 public:
  explicit UnstableQueue(double load);
  double load() const noexcept { return load_; }

 private:
  double load_;
};

class InfeasiblePowerBudget : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class UndefinedIncrement : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

/// 2 pi^2 / (alpha sin(2 pi / alpha)), the PPP Laplace-transform constant.
double laplace_constant(double alpha);

// ---------------------------------------------------------------------------
// HTC outage

/// Noise plus interference exponent shared by both outage expressions.
double htc_outage_exponent(const ScenarioParams& params);

double outage_no_sharing(const ScenarioParams& params);

/// Adds the single MBS interferer at y0 with power p_m_shared.
double outage_with_sharing(const ScenarioParams& params);

/// (P_out' - P_out) / P_out; throws UndefinedIncrement when P_out = 0.
double outage_increment(const ScenarioParams& params);

struct PowerBudget {
  double power = 0;            // min(P_max, bound), 0 when infeasible
  double unclamped_bound = 0;  // largest P_m' keeping P_out' <= epsilon
  bool feasible = false;       // bound > 0
  bool clamped = false;        // P_max was the binding limit
};

/// Requires params.epsilon.
PowerBudget max_mbs_power(const ScenarioParams& params);

/// With epsilon set, p_m_shared becomes the budgeted power; otherwise the
/// params come back unchanged. Throws InfeasiblePowerBudget when even zero
/// MBS power would violate epsilon.
ScenarioParams resolve_shared_power(const ScenarioParams& params);

// ---------------------------------------------------------------------------
// Capacity and service-delay distributions

/// F1: CDF of the shared-band capacity B_h log2(1 + SINR).
double capacity_cdf_shared(const ScenarioParams& params, double tau);

/// F2: CDF of the proprietary capacity B_m log2(1 + SNR).
double capacity_cdf_proprietary(const ScenarioParams& params, double tau);

/// f2 = dF2/dtau.
double capacity_pdf_proprietary(const ScenarioParams& params, double tau);

/// Interval holding all but 1e-12 of f2's mass.
PdfSupport proprietary_pdf_support(const ScenarioParams& params);

/// Inner-convolution accuracy used by the combined-mode CDF.
inline constexpr QuadratureSpec kConvolutionSpec{1e-10, 1e-14, 2000};

/// P(service delay < t) for the mode. Uses params.p_m_shared as given.
double service_cdf(const ScenarioParams& params, ServiceMode mode, double t);

// ---------------------------------------------------------------------------
// Queueing

/// Moments of the effective service time min(S, t_out).
struct TruncatedMoments {
  double m1 = 0;
  double m2 = 0;
  double m3 = 0;
  double fail_prob = 0;  // P(S >= t_out)
};

/// Moments from any service CDF on [0, t_out].
template <class Cdf>
TruncatedMoments moments_from_cdf(const Cdf& cdf, double t_out,
                                  const QuadratureSpec& spec = {}) {
  const auto I = cdf_moment_integrals(cdf, t_out, spec);
  TruncatedMoments m;
  m.m1 = std::max(0.0, t_out - I.i1);
  m.m2 = std::max(0.0, t_out * t_out - 2.0 * I.i2);
  m.m3 = std::max(0.0, t_out * t_out * t_out - 3.0 * I.i3);
  m.fail_prob = std::clamp(1.0 - cdf(t_out), 0.0, 1.0);
  return m;
}

/// Uses params.p_m_shared as given.
TruncatedMoments truncated_service_moments(const ScenarioParams& params,
                                           ServiceMode mode,
                                           const QuadratureSpec& spec = {});

struct WaitingMoments {
  double mean = 0;
  double variance = 0;
};

/// Pollaczek-Khinchine waiting-time mean and variance. Throws UnstableQueue
/// when lambda * m1 >= 1.
WaitingMoments mg1_waiting(const TruncatedMoments& moments, double lambda);

struct DelayReport {
  double mean_service = 0;
  double mean_waiting = 0;
  double mean_delay = 0;
  double jitter = 0;  // Var(service) + Var(waiting), s^2
  double load = 0;
  double fail_prob = 0;
  double shared_power = 0;  // P_m' actually used
};

/// Mean delay and jitter for the mode. Modes that use the shared band first
/// apply resolve_shared_power.
DelayReport delay_report(const ScenarioParams& params, ServiceMode mode,
                         const QuadratureSpec& spec = {});

}  // namespace specshare
