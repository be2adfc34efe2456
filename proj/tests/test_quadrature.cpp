#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specshare/quadrature.hpp"

using namespace specshare;

TEST_CASE("polynomials and smooth functions") {
  CHECK(integrate([](double x) { return x * x * x - 2 * x + 1; }, -1, 3) ==
        doctest::Approx(20.0 - 8.0 + 4.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0, 50) ==
        doctest::Approx(1.0 - std::exp(-50.0)).epsilon(1e-12));
  CHECK(integrate([](double) { return 1.0; }, 2, 2) == 0.0);
}

TEST_CASE("endpoint singularity and sharp peak") {
  CHECK(integrate([](double x) { return std::sqrt(x); }, 0, 1) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  // Narrow Gaussian off-centre: needs refinement to find.
  const double s = 1e-2;
  auto g = [s](double x) {
    const double z = (x - 0.3) / s;
    return std::exp(-0.5 * z * z) / (s * std::sqrt(2 * std::numbers::pi));
  };
  CHECK(integrate(g, 0, 1) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("vector integrand shares one partition") {
  auto f = [](double x) {
    return std::array<double, 3>{1.0, x, std::exp(x)};
  };
  const auto r = integrate_n<3>(f, 0, 2);
  CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r[2] == doctest::Approx(std::exp(2.0) - 1).epsilon(1e-12));
}

TEST_CASE("failures are reported") {
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0,
                            QuadratureSpec{1e-10, 1e-14, 30}),
                  QuadratureError);
  CHECK_THROWS_AS(integrate([](double) { return NAN; }, 0.0, 1.0),
                  QuadratureError);
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0,
                            QuadratureSpec{0, 1e-12, 10}),
                  std::invalid_argument);
}

TEST_CASE("moment integrals of a uniform CDF") {
  const double T = 0.01;
  const auto I = cdf_moment_integrals([T](double t) { return t / T; }, T);
  CHECK(I.i1 == doctest::Approx(T / 2).epsilon(1e-13));
  CHECK(I.i2 == doctest::Approx(T * T / 3).epsilon(1e-13));
  CHECK(I.i3 == doctest::Approx(T * T * T / 4).epsilon(1e-13));
}

TEST_CASE("convolution of two exponentials is Gamma(2)") {
  auto F1 = [](double x) { return x > 0 ? -std::expm1(-x) : 0.0; };
  auto f2 = [](double u) { return u >= 0 ? std::exp(-u) : 0.0; };
  for (double z : {0.1, 1.0, 3.0, 10.0}) {
    const double want = 1 - std::exp(-z) * (1 + z);
    CHECK(convolve_cdf_pdf(F1, f2, z) == doctest::Approx(want).epsilon(1e-9));
  }
  CHECK(convolve_cdf_pdf(F1, f2, 0.0) == 0.0);
  CHECK(convolve_cdf_pdf(F1, f2, -1.0) == 0.0);

  // Truncated support: f2 keeps 1 - e^-30 of its mass on [0, 30].
  const PdfSupport support{30.0, std::exp(-30.0)};
  CHECK(convolve_cdf_pdf(F1, f2, 5.0, {}, support) ==
        doctest::Approx(1 - std::exp(-5.0) * 6).epsilon(1e-9));
  // Far out both factors saturate.
  CHECK(convolve_cdf_pdf(F1, f2, 100.0, {}, support) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("safe_exp_neg") {
  CHECK(safe_exp_neg(0) == 1.0);
  CHECK(safe_exp_neg(-3) == 1.0);
  CHECK(safe_exp_neg(1) == doctest::Approx(std::exp(-1.0)));
  CHECK(safe_exp_neg(800) == 0.0);
  CHECK(safe_exp_neg(INFINITY) == 0.0);
  CHECK(safe_exp_neg(NAN) == 0.0);
}
