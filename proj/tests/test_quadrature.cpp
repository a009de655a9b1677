#include <cmath>

#include "doctest.h"
#include "lgf/quadrature.hpp"

using namespace lgf;

namespace {
const double pi = std::acos(-1.0);

// erf via its Maclaurin series, enough terms for x <= 1.
double erf_series(double x) {
  double sum = 0, term = x;
  for (int n = 0; n < 40; ++n) {
    sum += term / (2 * n + 1);
    term *= -x * x / (n + 1);
  }
  return 2 / std::sqrt(pi) * sum;
}
}  // namespace

TEST_CASE("adaptive Gauss-Kronrod") {
  auto r = integrate_1d([](double k) { return std::sin(k); }, 0, pi, 1e-15, 1e-15);
  CHECK(std::abs(r.value - 2) < 1e-14);
  CHECK(r.evaluations > 0);
  CHECK(r.error_estimate >= 0);
  CHECK(std::abs(r.value - 2) <= 10 * std::max(r.error_estimate, 1e-16));

  auto c = integrate_1d([](double k) { return std::cos(3 * k); }, -pi, pi, 1e-15, 1e-15);
  CHECK(std::abs(c.value) < 1e-14);

  auto e = integrate_1d([](double k) { return std::exp(-k * k); }, 0, 1, 1e-15, 1e-15);
  CHECK(std::abs(e.value - 0.746824132812427) < 1e-13);
  CHECK(std::abs(e.value - std::sqrt(pi) / 2 * erf_series(1.0)) < 1e-15);

  auto bp = integrate_1d([](double k) { return std::abs(k - 0.3); }, 0, 1, 1e-14, 1e-14, {0.3});
  CHECK(std::abs(bp.value - (0.045 + 0.245)) < 1e-14);

  CHECK_THROWS_AS(integrate_1d([](double k) { return 1 / std::sqrt(k); }, 0, 1, 1e-15, 0, {}, 20),
                  QuadratureError);
  try {
    integrate_1d([](double k) { return 1 / std::sqrt(k); }, 0, 1, 1e-15, 0, {}, 20);
  } catch (const QuadratureError& err) {
    CHECK(err.best_value() > 1.5);
    CHECK(err.best_error() > 0);
  }
}

TEST_CASE("vector integration shares one subdivision") {
  auto f = [](double t, double* out) {
    out[0] = std::exp(-t);
    out[1] = t * std::exp(-t);
  };
  auto r = integrate_1d_vec(f, 2, 0, 10, 1e-15, 1e-15);
  CHECK(std::abs(r.value[0] - (1 - std::exp(-10.0))) < 1e-15);
  CHECK(std::abs(r.value[1] - (1 - 11 * std::exp(-10.0))) < 1e-15);
}

TEST_CASE("quadrature is deterministic") {
  auto f = [](double x) { return std::exp(std::sin(5 * x)) / (1 + x * x); };
  auto a = integrate_1d(f, -3, 7, 1e-14, 1e-14);
  auto b = integrate_1d(f, -3, 7, 1e-14, 1e-14);
  CHECK(a.value == b.value);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("periodic trapezoid") {
  auto c = integrate_periodic([](double) { return 2.5; }, 2 * pi, 1e-15);
  CHECK(c.value == doctest::Approx(2.5 * 2 * pi).epsilon(1e-15));
  auto one = integrate_periodic([](double k) { return std::exp(-0.0 * k); }, 2 * pi, 1e-15);
  CHECK(std::abs(one.value / (2 * pi) - 1) < 1e-15);
  auto c2 = integrate_periodic([](double k) { return std::cos(k) * std::cos(k); }, 2 * pi, 1e-15, 8);
  CHECK(std::abs(c2.value / (2 * pi) - 0.5) < 1e-15);
  CHECK_THROWS_AS(integrate_periodic([](double k) { return std::exp(std::cos(k) * 3000); }, 2 * pi, 1e-300, 8, 64),
                  QuadratureError);
}

TEST_CASE("box integration") {
  auto one = integrate_box3([](double, double, double) { return 1.0; }, {0, 0, 0}, {1, 1, 1}, 1e-10);
  CHECK(std::abs(one.value - 1) < 1e-12);
  auto prod = integrate_box3([](double x, double y, double z) { return x * y * z; }, {0, 0, 0}, {1, 1, 1}, 1e-10);
  CHECK(std::abs(prod.value - 0.125) < 1e-12);
}

TEST_CASE("contour integrals") {
  auto r1 = contour_integral([](cplx z) { return 1.0L / z; }, 0, 1);
  CHECK(std::abs(static_cast<double>(r1.real()) - 1) < 1e-14);
  CHECK(std::abs(static_cast<double>(r1.imag())) < 1e-14);
  auto r2 = contour_integral([](cplx z) { return 1.0L / ((z - 0.5L) * (z - 0.5L)); }, 0, 0.7L);
  CHECK(std::abs(r2) < 1e-14);
  CHECK_THROWS_AS(contour_integral([](cplx z) { return 1.0L / (z - 1.0L); }, 0, 1), QuadratureError);

  // LGF4 at c* = 3: p(z) = z^2 (q(lambda) + c) with lambda = (z + 1/z)/2.
  // Coefficients: a_2, a_1, a_0 + c, a_1, a_2.
  std::vector<long double> p{1.0L / 12, -4.0L / 3, 5.0L / 2 + 3, -4.0L / 3, 1.0L / 12};
  const long double rbar = 4 - std::sqrt(15.0L);
  auto g = contour_derivatives(p, 0, 2, rbar, 0.05L, 2);
  CHECK(std::abs(g[0] - 4 / (5 * std::sqrt(15.0))) < 1e-15);
  CHECK(std::abs(g[1] + 14 / (75 * std::sqrt(15.0))) < 1e-15);
}
