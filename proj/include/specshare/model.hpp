#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace specshare {

// How the MBS reaches its devices.
enum class ServiceMode {
  SharedOnly,       // HTC band only, power P_m', bandwidth B_h
  ProprietaryOnly,  // own band only, power P_m, bandwidth B_m
  Combined,         // both bands at once, capacities add
};

inline constexpr ServiceMode kAllModes[] = {
    ServiceMode::SharedOnly, ServiceMode::ProprietaryOnly,
    ServiceMode::Combined};

std::string_view to_string(ServiceMode mode);
/// Accepts "shared", "proprietary", "combined".
std::optional<ServiceMode> parse_mode(std::string_view name);

/// Every physical-layer and queueing input of the coexistence model, in SI
/// units. Powers are watts, bandwidths Hz, densities per m^2.
struct ScenarioParams {
  double p_h = 0;         // HBS transmit power
  double p_m = 0;         // MBS power on its proprietary band
  double p_m_shared = 0;  // MBS power on the shared band
  double p_max = 0;       // cap on the MBS shared-band power
  double x0 = 0;          // typical UE to its serving HBS, m
  double y0 = 0;          // typical MTC device to the MBS (and MBS to UE), m
  double b_h = 0;         // shared bandwidth
  double b_m = 0;         // proprietary bandwidth
  double noise_psd = 0;   // W/Hz
  double alpha = 0;       // path-loss exponent
  double u_m = 0;         // packet size, bits
  double t_out = 0;       // service deadline, s
  double lambda_h = 0;    // HBS density
  double lambda_md = 0;   // packet arrival rate at the MBS, 1/s
  double lambda_mu = 0;   // MTC device density
  int n_h = 0;            // UEs per HBS
  int n_m = 0;            // devices served by the MBS
  double theta_h = 0;     // HTC SINR threshold
  std::optional<double> epsilon;  // HTC outage tolerance; caps P_m' when set
  double workshop_area = 0;       // maps lambda_mu to n_m, m^2

  // Monte Carlo controls carried alongside the model.
  double mc_radius = 0;  // interferer disk radius, m
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  // True when N_m was given directly; a density sweep still overrides it.
  bool n_m_explicit = false;

  /// Table-2 values plus the artifact defaults for the sweep-only inputs.
  static ScenarioParams defaults();

  bool operator==(const ScenarioParams&) const = default;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// N_m = max(1, round(lambda_mu * area)).
int device_count_from_density(double lambda_mu, double area);

/// Recomputes n_m from lambda_mu unless n_m was set explicitly.
void apply_device_density(ScenarioParams& params);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class InvalidParams : public std::runtime_error {
 public:
  explicit InvalidParams(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept {
    return violations_;
  }

 private:
  std::vector<std::string> violations_;
};

/// Every violated invariant, empty when the params are usable.
std::vector<std::string> find_violations(const ScenarioParams& params);

/// Returns params unchanged or throws InvalidParams naming all violations.
const ScenarioParams& validate(const ScenarioParams& params);

/// Parses `key = value` lines over the defaults, then validates.
ScenarioParams parse_config(std::string_view text);
ScenarioParams load_config(const std::filesystem::path& path);

/// Writes every key such that parse_config(emit_config(p)) == p.
std::string emit_config(const ScenarioParams& params);

}  // namespace specshare
