#include "specshare/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "specshare/format.hpp"

namespace specshare {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string_view to_string(ServiceMode mode) {
  switch (mode) {
    case ServiceMode::SharedOnly:
      return "shared";
    case ServiceMode::ProprietaryOnly:
      return "proprietary";
    case ServiceMode::Combined:
      return "combined";
  }
  return "?";
}

std::optional<ServiceMode> parse_mode(std::string_view name) {
  for (auto mode : kAllModes)
    if (to_string(mode) == name) return mode;
  return std::nullopt;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

int device_count_from_density(double lambda_mu, double area) {
  const double n = std::round(lambda_mu * area);
  if (!(n >= 1)) return 1;
  return n > 1e9 ? 1000000000 : static_cast<int>(n);
}

void apply_device_density(ScenarioParams& params) {
  if (!params.n_m_explicit)
    params.n_m = device_count_from_density(params.lambda_mu,
                                           params.workshop_area);
}

ScenarioParams ScenarioParams::defaults() {
  ScenarioParams p;
  p.p_h = dbm_to_watts(24);
  p.p_m = dbm_to_watts(24);
  p.p_m_shared = dbm_to_watts(24);
  p.p_max = dbm_to_watts(24);
  p.x0 = 10;
  p.y0 = 10;
  p.b_h = 20e6;
  p.b_m = 100e6;
  p.noise_psd = 1e-10;
  p.alpha = 4;
  p.u_m = 40 * 8;
  p.t_out = 0.01;
  p.lambda_h = 1e-4;
  p.lambda_md = 50;
  p.lambda_mu = 0.01;
  p.n_h = 1000;
  p.n_m = 100;
  p.theta_h = 0.01;
  p.epsilon = std::nullopt;
  p.workshop_area = 1e4;
  p.mc_radius = 1000;
  p.trials = 100000;
  p.seed = 0;
  p.n_m_explicit = false;
  return p;
}

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::string out = "invalid scenario parameters:";
  for (const auto& s : v) out += "\n  " + s;
  return out;
}

}  // namespace

InvalidParams::InvalidParams(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)),
      violations_(std::move(violations)) {}

std::vector<std::string> find_violations(const ScenarioParams& p) {
  std::vector<std::string> out;
  auto positive = [&](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0))
      out.push_back(std::string(name) + " must be positive");
  };
  auto non_negative = [&](double v, const char* name) {
    if (!(std::isfinite(v) && v >= 0))
      out.push_back(std::string(name) + " must be non-negative");
  };

  if (!(std::isfinite(p.alpha) && p.alpha > 2))
    out.push_back("alpha must exceed 2 (sin(2*pi/alpha) pole at 2)");
  positive(p.p_h, "P_h");
  positive(p.p_m, "P_m");
  non_negative(p.p_m_shared, "P_m_shared");
  positive(p.p_max, "P_max");
  positive(p.x0, "x0");
  positive(p.y0, "y0");
  positive(p.b_h, "B_h");
  positive(p.b_m, "B_m");
  non_negative(p.noise_psd, "N0");
  positive(p.u_m, "U_m");
  positive(p.t_out, "t_out");
  non_negative(p.lambda_h, "lambda_h");
  non_negative(p.lambda_md, "lambda_md");
  non_negative(p.lambda_mu, "lambda_mu");
  non_negative(p.theta_h, "theta_h");
  positive(p.workshop_area, "workshop_area");
  positive(p.mc_radius, "mc_radius");
  if (p.epsilon && !(*p.epsilon > 0 && *p.epsilon < 1))
    out.push_back("epsilon must lie in (0,1)");
  if (p.n_h < 1) out.push_back("N_h must be at least 1");
  if (p.n_m < 1) out.push_back("N_m must be at least 1");
  return out;
}

const ScenarioParams& validate(const ScenarioParams& params) {
  auto v = find_violations(params);
  if (!v.empty()) throw InvalidParams(std::move(v));
  return params;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Value errors carry no line; parse_config attaches line and key.
struct ValueError {
  std::string message;
};

double parse_real(std::string_view text) {
  double v = 0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    throw ValueError{"malformed number '" + std::string(text) + "'"};
  return v;
}

std::uint64_t parse_count(std::string_view text) {
  std::uint64_t n = 0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, n);
  if (res.ec == std::errc() && res.ptr == end) return n;
  // Scientific forms such as 1e5 are accepted when integral.
  const double v = parse_real(text);
  if (v < 0 || v != std::floor(v) || v > 1.8e19)
    throw ValueError{"expected a non-negative integer, got '" +
                     std::string(text) + "'"};
  return static_cast<std::uint64_t>(v);
}

int parse_int(std::string_view text) {
  const auto n = parse_count(text);
  if (n > 1000000000ull) throw ValueError{"value out of range"};
  return static_cast<int>(n);
}

struct KeyHandler {
  std::string_view key;
  std::function<void(ScenarioParams&, std::string_view)> set;
  std::function<std::optional<std::string>(const ScenarioParams&)> emit;
};

// A decimal dBm value whose conversion hits `watts` exactly, so emitted
// configs read back bit-identically.
std::string exact_dbm(double watts) {
  double d = watts_to_dbm(watts);
  if (dbm_to_watts(d) == watts) return format_double(d);
  double up = d, down = d;
  for (int i = 0; i < 256; ++i) {
    up = std::nextafter(up, INFINITY);
    if (dbm_to_watts(up) == watts) return format_double(up);
    down = std::nextafter(down, -INFINITY);
    if (dbm_to_watts(down) == watts) return format_double(down);
  }
  return format_double(d);
}

const std::vector<KeyHandler>& handlers() {
  using P = ScenarioParams;
  using SV = std::string_view;
  auto dbm = [](double P::*field) {
    return KeyHandler{
        {},
        [field](P& p, SV v) {
          p.*field = dbm_to_watts(parse_real(v));
        },
        [field](const P& p) -> std::optional<std::string> {
          return exact_dbm(p.*field);
        }};
  };
  auto real = [](double P::*field) {
    return KeyHandler{
        {},
        [field](P& p, SV v) { p.*field = parse_real(v); },
        [field](const P& p) -> std::optional<std::string> {
          return format_double(p.*field);
        }};
  };
  auto named = [](SV key, KeyHandler h) {
    h.key = key;
    return h;
  };

  static const std::vector<KeyHandler> table = {
      named("P_h_dbm", dbm(&P::p_h)),
      named("P_m_dbm", dbm(&P::p_m)),
      named("P_m_shared_dbm", dbm(&P::p_m_shared)),
      named("P_max_dbm", dbm(&P::p_max)),
      named("x0_m", real(&P::x0)),
      named("y0_m", real(&P::y0)),
      named("B_h_hz", real(&P::b_h)),
      named("B_m_hz", real(&P::b_m)),
      named("N0_w_per_hz", real(&P::noise_psd)),
      named("alpha", real(&P::alpha)),
      {"U_m_bytes",
       [](P& p, SV v) { p.u_m = 8.0 * parse_real(v); },
       [](const P& p) -> std::optional<std::string> {
         return format_double(p.u_m / 8.0);
       }},
      named("t_out_s", real(&P::t_out)),
      named("lambda_h_per_m2", real(&P::lambda_h)),
      named("lambda_md_per_s", real(&P::lambda_md)),
      named("lambda_mu_per_m2", real(&P::lambda_mu)),
      {"N_h",
       [](P& p, SV v) { p.n_h = parse_int(v); },
       [](const P& p) -> std::optional<std::string> {
         return std::to_string(p.n_h);
       }},
      {"N_m",
       [](P& p, SV v) {
         p.n_m = parse_int(v);
         p.n_m_explicit = true;
       },
       [](const P& p) -> std::optional<std::string> {
         if (!p.n_m_explicit) return std::nullopt;
         return std::to_string(p.n_m);
       }},
      named("theta_h", real(&P::theta_h)),
      {"epsilon",
       [](P& p, SV v) { p.epsilon = parse_real(v); },
       [](const P& p) -> std::optional<std::string> {
         if (!p.epsilon) return std::nullopt;
         return format_double(*p.epsilon);
       }},
      named("workshop_area_m2", real(&P::workshop_area)),
      named("mc_radius_m", real(&P::mc_radius)),
      {"trials",
       [](P& p, SV v) { p.trials = parse_count(v); },
       [](const P& p) -> std::optional<std::string> {
         return std::to_string(p.trials);
       }},
      {"seed",
       [](P& p, SV v) { p.seed = parse_count(v); },
       [](const P& p) -> std::optional<std::string> {
         return std::to_string(p.seed);
       }},
  };
  return table;
}

}  // namespace

ScenarioParams parse_config(std::string_view text) {
  ScenarioParams p = ScenarioParams::defaults();
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos
                                     ? std::string_view::npos
                                     : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (value.empty())
      throw ConfigError(line_no, "missing value for key " + std::string(key));

    const auto& table = handlers();
    auto it = std::find_if(table.begin(), table.end(),
                           [&](const KeyHandler& h) { return h.key == key; });
    if (it == table.end())
      throw ConfigError(line_no, "unknown key '" + std::string(key) + "'");
    try {
      it->set(p, value);
    } catch (const ValueError& e) {
      throw ConfigError(line_no, std::string(key) + ": " + e.message);
    }
  }
  apply_device_density(p);
  return validate(p);
}

ScenarioParams load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const ScenarioParams& params) {
  std::string out;
  for (const auto& h : handlers()) {
    if (auto v = h.emit(params)) {
      out += h.key;
      out += " = ";
      out += *v;
      out += '\n';
    }
  }
  return out;
}

}  // namespace specshare
