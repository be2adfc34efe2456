#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature. The interval with the
// largest error estimate is bisected until the summed estimate meets
// max(abs_tol, rel_tol * |result|).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace specshare {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

/// e^{-x} for x >= 0, exactly 0 past the underflow threshold or at +inf.
inline double safe_exp_neg(double x) {
  if (!(x > 0)) return x == 0 || x < 0 ? 1.0 : 0.0;  // NaN maps to 0
  if (x > 745.0) return 0.0;
  return std::exp(-x);
}

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Segment {
  double a, b;
  std::array<double, N> value;
  std::array<double, N> error;
  double worst;  // largest error relative to its own component tolerance
  bool operator<(const Segment& o) const { return worst < o.worst; }
};

template <std::size_t N, class F>
void gk15(const F& f, double a, double b, std::array<double, N>& value,
          std::array<double, N>& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const std::array<double, N> fc = f(c);
  std::array<double, N> k{}, g{};
  for (std::size_t n = 0; n < N; ++n) {
    k[n] = kWgk[7] * fc[n];
    g[n] = kWg[3] * fc[n];
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const std::array<double, N> f1 = f(c - dx);
    const std::array<double, N> f2 = f(c + dx);
    for (std::size_t n = 0; n < N; ++n) {
      const double s = f1[n] + f2[n];
      k[n] += kWgk[j] * s;
      if (j % 2 == 1) g[n] += kWg[j / 2] * s;
    }
  }
  for (std::size_t n = 0; n < N; ++n) {
    value[n] = k[n] * h;
    error[n] = std::abs((k[n] - g[n]) * h);
  }
}

}  // namespace detail

/// Integrates a vector-valued f over [a, b] on one shared partition. Every
/// component must meet its own tolerance.
template <std::size_t N, class F>
std::array<double, N> integrate_n(const F& f, double a, double b,
                                  const QuadratureSpec& spec = {}) {
  if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
  if (!(spec.rel_tol > 0) || !(spec.abs_tol > 0) ||
      spec.max_subdivisions < 1)
    throw std::invalid_argument("integrate: invalid quadrature spec");
  std::array<double, N> total{};
  if (a == b) return total;

  using Seg = detail::Segment<N>;
  std::array<double, N> total_err{};
  auto tolerance = [&](std::size_t n) {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(total[n]));
  };
  auto make = [&](double lo, double hi) {
    Seg s{lo, hi, {}, {}, 0};
    detail::gk15<N>(f, lo, hi, s.value, s.error);
    return s;
  };
  auto rank = [&](Seg& s) {
    s.worst = 0;
    for (std::size_t n = 0; n < N; ++n)
      s.worst = std::max(s.worst, s.error[n] / tolerance(n));
  };
  auto converged = [&] {
    for (std::size_t n = 0; n < N; ++n)
      if (!(total_err[n] <= tolerance(n))) return false;
    return true;
  };

  std::vector<Seg> heap;
  heap.push_back(make(a, b));
  total = heap.front().value;
  total_err = heap.front().error;
  for (std::size_t n = 0; n < N; ++n)
    if (!std::isfinite(total[n]))
      throw QuadratureError("integrate: non-finite integrand", total[n],
                            total_err[n]);

  int subdivisions = 1;
  while (!converged()) {
    if (subdivisions >= spec.max_subdivisions)
      throw QuadratureError(
          "integrate: no convergence after " +
              std::to_string(spec.max_subdivisions) + " subdivisions",
          total[0], total_err[0]);
    // Rank against the current totals; tolerances move as totals settle.
    for (auto& s : heap) rank(s);
    std::make_heap(heap.begin(), heap.end());
    std::pop_heap(heap.begin(), heap.end());
    const Seg worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw QuadratureError("integrate: interval below double resolution",
                            total[0], total_err[0]);
    Seg left = make(worst.a, mid);
    Seg right = make(mid, worst.b);
    for (std::size_t n = 0; n < N; ++n) {
      total[n] += left.value[n] + right.value[n] - worst.value[n];
      total_err[n] += left.error[n] + right.error[n] - worst.error[n];
    }
    heap.push_back(left);
    heap.push_back(right);
    ++subdivisions;
    // Refresh sums occasionally so cancellation in the running update
    // cannot drift.
    if (subdivisions % 64 == 0) {
      total = {};
      total_err = {};
      for (const auto& s : heap)
        for (std::size_t n = 0; n < N; ++n) {
          total[n] += s.value[n];
          total_err[n] += s.error[n];
        }
    }
  }
  return total;
}

template <class F>
double integrate(const F& f, double a, double b,
                 const QuadratureSpec& spec = {}) {
  auto wrapped = [&f](double x) { return std::array<double, 1>{f(x)}; };
  return integrate_n<1>(wrapped, a, b, spec)[0];
}

/// I1 = int F, I2 = int t F, I3 = int t^2 F over [0, t_out].
struct MomentIntegrals {
  double i1 = 0;
  double i2 = 0;
  double i3 = 0;
};

template <class Cdf>
MomentIntegrals cdf_moment_integrals(const Cdf& cdf, double t_out,
                                     const QuadratureSpec& spec = {}) {
  auto f = [&cdf](double t) {
    const double v = t > 0 ? cdf(t) : 0.0;
    return std::array<double, 3>{v, t * v, t * t * v};
  };
  const auto r = integrate_n<3>(f, 0.0, t_out, spec);
  return {r[0], r[1], r[2]};
}

/// Where f2 keeps all but `tail_mass` of its probability: [0, u_max].
struct PdfSupport {
  double u_max = std::numeric_limits<double>::infinity();
  double tail_mass = 0.0;
};

/// F_u(z) = int_0^z F1(tau) f2(z - tau) dtau, integrated in u = z - tau over
/// [0, min(z, u_max)] and clamped to [0, 1]. When F1 is already saturated at
/// z - u_max the result is 1 - tail_mass without integrating.
template <class Cdf, class Pdf>
double convolve_cdf_pdf(const Cdf& F1, const Pdf& f2, double z,
                        const QuadratureSpec& spec = {},
                        const PdfSupport& support = {}) {
  if (!(z > 0)) return 0.0;
  if (z >= support.u_max && F1(z - support.u_max) >= 1.0 - 1e-12)
    return std::clamp(1.0 - support.tail_mass, 0.0, 1.0);
  const double upper = std::min(z, support.u_max);
  const double v =
      integrate([&](double u) { return F1(z - u) * f2(u); }, 0.0, upper, spec);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace specshare
