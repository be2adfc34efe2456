#include "specshare/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace specshare {

UnstableQueue::UnstableQueue(double load)
    : AnalysisError("unstable queue: load " + std::to_string(load) +
                    " >= 1"),
      load_(load) {}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// c * x with 0 * inf taken as 0: a zero coefficient removes the term.
double scaled(double c, double x) { return c == 0 ? 0.0 : c * x; }

// 2^x - 1 without cancellation for small x.
double pow2_minus_one(double x) { return std::expm1(x * std::numbers::ln2); }

// Exponent of P(B log2(1 + SINR_shared) > tau).
double shared_capacity_exponent(const ScenarioParams& p, double tau) {
  if (p.p_m_shared <= 0) return tau > 0 ? kInf : 0.0;
  const double s = pow2_minus_one(tau / p.b_h);
  const double noise = std::pow(p.y0, p.alpha) * p.noise_psd * p.b_h /
                       (p.p_m_shared * p.n_m);
  const double interference = p.lambda_h * laplace_constant(p.alpha) *
                              p.y0 * p.y0;
  return scaled(noise, s) +
         scaled(interference, std::pow(p.p_h / p.p_m_shared * s,
                                       2.0 / p.alpha));
}

double proprietary_coefficient(const ScenarioParams& p) {
  return std::pow(p.y0, p.alpha) * p.noise_psd * p.b_m / (p.p_m * p.n_m);
}

double proprietary_capacity_exponent(const ScenarioParams& p, double tau) {
  return scaled(proprietary_coefficient(p), pow2_minus_one(tau / p.b_m));
}

}  // namespace

double laplace_constant(double alpha) {
  return 2.0 * std::numbers::pi * std::numbers::pi /
         (alpha * std::sin(2.0 * std::numbers::pi / alpha));
}

double htc_outage_exponent(const ScenarioParams& p) {
  const double noise = std::pow(p.x0, p.alpha) * p.theta_h * p.noise_psd *
                       p.b_h / (p.n_h * p.p_h);
  const double interference = p.lambda_h * laplace_constant(p.alpha) *
                              p.x0 * p.x0 *
                              std::pow(p.theta_h, 2.0 / p.alpha);
  return noise + interference;
}

double outage_no_sharing(const ScenarioParams& p) {
  return -std::expm1(-htc_outage_exponent(p));
}

namespace {

// x0^a theta (P_m'/P_h) y0^-a: the MBS interferer's Laplace term.
double cross_link_load(const ScenarioParams& p) {
  return std::pow(p.x0 / p.y0, p.alpha) * p.theta_h * p.p_m_shared / p.p_h;
}

}  // namespace

double outage_with_sharing(const ScenarioParams& p) {
  const double c = cross_link_load(p);
  // 1 - e^{-X} / (1 + c) = (1 - e^{-X} + c) / (1 + c)
  return (-std::expm1(-htc_outage_exponent(p)) + c) / (1.0 + c);
}

double outage_increment(const ScenarioParams& p) {
  const double base = outage_no_sharing(p);
  if (!(base > 0))
    throw UndefinedIncrement(
        "outage increment undefined: outage without sharing is zero");
  return (outage_with_sharing(p) - base) / base;
}

PowerBudget max_mbs_power(const ScenarioParams& p) {
  if (!p.epsilon)
    throw std::invalid_argument("max_mbs_power: epsilon is not set");
  const double eps = *p.epsilon;
  PowerBudget b;
  // 1 / ((1 - eps) e^X) - 1
  const double bracket =
      std::exp(-htc_outage_exponent(p)) / (1.0 - eps) - 1.0;
  const double per_unit = std::pow(p.y0 / p.x0, p.alpha) * p.p_h;
  b.unclamped_bound = p.theta_h > 0 ? bracket * per_unit / p.theta_h
                      : bracket > 0 ? kInf
                                    : 0.0;
  b.feasible = b.unclamped_bound > 0;
  if (!b.feasible) {
    b.power = 0;
    return b;
  }
  b.clamped = b.unclamped_bound >= p.p_max;
  b.power = b.clamped ? p.p_max : b.unclamped_bound;
  return b;
}

ScenarioParams resolve_shared_power(const ScenarioParams& params) {
  if (!params.epsilon) return params;
  const auto budget = max_mbs_power(params);
  if (!budget.feasible)
    throw InfeasiblePowerBudget(
        "infeasible power budget: outage tolerance " +
        std::to_string(*params.epsilon) +
        " is already exceeded without MBS interference");
  ScenarioParams out = params;
  out.p_m_shared = budget.power;
  return out;
}

double capacity_cdf_shared(const ScenarioParams& p, double tau) {
  if (!(tau > 0)) return p.p_m_shared > 0 ? 0.0 : 1.0;
  return -std::expm1(-shared_capacity_exponent(p, tau));
}

double capacity_cdf_proprietary(const ScenarioParams& p, double tau) {
  if (!(tau > 0)) return 0.0;
  return -std::expm1(-proprietary_capacity_exponent(p, tau));
}

double capacity_pdf_proprietary(const ScenarioParams& p, double tau) {
  if (tau < 0) return 0.0;
  const double c = proprietary_coefficient(p);
  if (c == 0) return 0.0;
  const double x = tau / p.b_m;
  const double tail = safe_exp_neg(scaled(c, pow2_minus_one(x)));
  if (tail == 0) return 0.0;
  return tail * c * std::exp2(x) * std::numbers::ln2 / p.b_m;
}

PdfSupport proprietary_pdf_support(const ScenarioParams& p) {
  constexpr double kTail = 1e-12;
  const double c = proprietary_coefficient(p);
  if (c == 0) return {};
  // exp(-c (2^{u/B_m} - 1)) = kTail
  const double u_max = p.b_m * std::log2(1.0 - std::log(kTail) / c);
  return {u_max, kTail};
}

double service_cdf(const ScenarioParams& p, ServiceMode mode, double t) {
  if (!(t > 0)) return 0.0;
  // The service completes by t iff the aggregate capacity beats U_m N_m / t.
  const double z = p.u_m * p.n_m / t;
  switch (mode) {
    case ServiceMode::SharedOnly:
      return safe_exp_neg(shared_capacity_exponent(p, z));
    case ServiceMode::ProprietaryOnly:
      return safe_exp_neg(proprietary_capacity_exponent(p, z));
    case ServiceMode::Combined: {
      const double Fu = convolve_cdf_pdf(
          [&p](double tau) { return capacity_cdf_shared(p, tau); },
          [&p](double u) { return capacity_pdf_proprietary(p, u); }, z,
          kConvolutionSpec, proprietary_pdf_support(p));
      return std::clamp(1.0 - Fu, 0.0, 1.0);
    }
  }
  return 0.0;
}

TruncatedMoments truncated_service_moments(const ScenarioParams& params,
                                           ServiceMode mode,
                                           const QuadratureSpec& spec) {
  return moments_from_cdf(
      [&](double t) { return service_cdf(params, mode, t); }, params.t_out,
      spec);
}

WaitingMoments mg1_waiting(const TruncatedMoments& m, double lambda) {
  if (lambda == 0) return {};
  const double rho = lambda * m.m1;
  if (!(rho < 1)) throw UnstableQueue(rho);
  WaitingMoments w;
  w.mean = lambda * m.m2 / (2.0 * (1.0 - rho));
  w.variance = w.mean * w.mean + lambda * m.m3 / (3.0 * (1.0 - rho));
  return w;
}

DelayReport delay_report(const ScenarioParams& params, ServiceMode mode,
                         const QuadratureSpec& spec) {
  const ScenarioParams p = mode == ServiceMode::ProprietaryOnly
                               ? params
                               : resolve_shared_power(params);
  const auto m = truncated_service_moments(p, mode, spec);
  const auto w = mg1_waiting(m, p.lambda_md);
  DelayReport r;
  r.mean_service = m.m1;
  r.mean_waiting = w.mean;
  r.mean_delay = m.m1 + w.mean;
  r.jitter = std::max(0.0, m.m2 - m.m1 * m.m1) + w.variance;
  r.load = p.lambda_md * m.m1;
  r.fail_prob = m.fail_prob;
  r.shared_power = p.p_m_shared;
  return r;
}

}  // namespace specshare
