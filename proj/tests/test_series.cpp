#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "lgf/series.hpp"

using namespace lgf;

namespace {

// Large-argument expansion of e^{-z} I_n(z) at z = 2t, regrouped in powers of
// 1/t: b_k(n) = (-1)^k prod_{i<=k} (4n^2 - (2i-1)^2) / (k! 16^k).
RationalPoly bessel_b(int k) {
  RationalPoly p = RationalPoly::constant(1);
  for (int i = 1; i <= k; ++i) p = p * RationalPoly({Rational(-(2 * i - 1) * (2 * i - 1)), 0, 4});
  Rational scale = 1;
  for (int i = 1; i <= k; ++i) scale *= Rational(1, 16 * i);
  if (k % 2) scale = -scale;
  return p * scale;
}

}  // namespace

TEST_CASE("b coefficients of the second-order stencil match the Bessel expansion exactly") {
  auto b = build_b_coefficients(split_stencil("lgf2"), 9);
  REQUIRE(b.size() == 9);
  CHECK(b[0] == RationalPoly::constant(1));
  CHECK(b[1] == RationalPoly({Rational(1, 16), 0, Rational(-4, 16)}));
  for (int j = 0; j <= 8; ++j) CHECK(b[j] == bessel_b(j));
}

TEST_CASE("b coefficients are even with degree 2j") {
  for (const auto& id : split_ids()) {
    auto b = build_b_coefficients(split_stencil(id), 8);
    CHECK(b[0] == RationalPoly::constant(1));
    for (int j = 0; j < 8; ++j) {
      CHECK(b[j].is_even());
      CHECK(b[j].degree() == 2 * j);
    }
  }
}

TEST_CASE("g3 and g2 polynomials") {
  auto b = build_b_coefficients(split_stencil("lgf2"), 6);
  auto g3 = build_g3(b, 6);
  CHECK(g3[0] == MultiPoly<3>::constant(1));
  MultiPoly<3> g1 = (MultiPoly<3>::from_univariate(b[1], 0) + MultiPoly<3>::from_univariate(b[1], 1) +
                     MultiPoly<3>::from_univariate(b[1], 2)) *
                    Rational(1, 3);
  CHECK(g3[1] == g1);
  CHECK(g3[1].eval_exact({0, 0, 0}) == Rational(1, 16));
  for (int j = 0; j < 6; ++j) {
    CHECK(g3[j] == g3[j].swapped(0, 1));
    CHECK(g3[j] == g3[j].swapped(1, 2));
    CHECK(g3[j].total_degree() == 2 * j);
  }

  auto g2 = build_g2(b, 6);
  MultiPoly<2> expect;
  expect.add_term({2, 0}, Rational(-4, 16));
  expect.add_term({0, 2}, Rational(-4, 16));
  CHECK(g2[1] == expect);
  for (int j = 1; j < 6; ++j) {
    CHECK(g2[j].eval_exact({0, 0}) == 0);
    CHECK(g2[j] == g2[j].swapped(0, 1));
  }
}

TEST_CASE("threshold selection") {
  const auto& st = split_stencil("lgf2");
  ExpansionPack p = make_expansion_pack(st, 2, 1, 1e-15, 1e-15);
  // Direct evaluation of the formula.
  const double pi = std::acos(-1.0);
  double b2 = std::abs(to_double(p.b[2](Rational(1))));
  double expect = std::max(std::pow(b2 / 1e-15, 0.5), std::pow(b2 / (1e-15 * std::sqrt(4 * pi)), 0.4));
  CHECK(p.t_min == doctest::Approx(expect).epsilon(1e-14));
  CHECK(p.T_min >= p.t_min);

  // The series is accurate at t_min for n <= 1. The oracle is the
  // large-argument Bessel expansion carried to many more terms, since
  // e^{-2t} I_n(2t) itself overflows in double at this t.
  for (int n = 0; n <= 1; ++n) {
    double t = p.t_min;
    double series = 0, oracle = 0;
    for (int j = 0; j < 2; ++j) series += to_double(p.b[j](Rational(n))) * std::pow(t, -j);
    for (int j = 0; j < 8; ++j) oracle += to_double(bessel_b(j)(Rational(n))) * std::pow(t, -j);
    series /= std::sqrt(4 * pi * t);
    oracle /= std::sqrt(4 * pi * t);
    CHECK(std::abs(series - oracle) < 10 * 1e-15);
  }

  // Halving eps_r never decreases t_min; larger n_max raises it.
  ExpansionPack q = make_expansion_pack(split_stencil("lgf4"), 6, 16, 1e-15, 1e-15);
  Thresholds half = select_thresholds(q, 6, 16, 1e-15, 0.5e-15);
  CHECK(half.t_min >= q.t_min);
  for (const auto& id : split_ids()) {
    ExpansionPack a = make_expansion_pack(split_stencil(id), 8, 16, 1e-15, 1e-15);
    Thresholds t32 = select_thresholds(a, 8, 32, 1e-15, 1e-15);
    CHECK(t32.t_min > a.t_min);
  }

  ExpansionPack shortp = p;
  shortp.b.resize(2);
  CHECK_THROWS_AS(select_thresholds(shortp, 2, 1, 1e-15, 1e-15), DomainError);
}

TEST_CASE("series matches the Bessel function at moderate t") {
  ExpansionPack p = make_expansion_pack(split_stencil("lgf2"), 10, 4, 1e-15, 1e-15);
  const double pi = std::acos(-1.0);
  for (int n = 0; n <= 4; ++n) {
    double t = 300;
    double series = 0;
    for (int j = 0; j < 10; ++j) series += to_double(p.b[j](Rational(n))) * std::pow(t, -j);
    series /= std::sqrt(4 * pi * t);
    double oracle = boost::math::cyl_bessel_i(n, 2 * t) * std::exp(-2 * t);
    CHECK(std::abs(series - oracle) < 1e-15);
  }
}

TEST_CASE("expansion pack JSON round trip") {
  ExpansionPack p = make_expansion_pack(split_stencil("lgf6"), 4, 8, 1e-15, 1e-15);
  auto j = to_json(p);
  ExpansionPack q = expansion_pack_from_json(j);
  CHECK(q.stencil_id == "lgf6");
  CHECK(q.J == 4);
  CHECK(q.t_min == p.t_min);
  REQUIRE(q.b.size() == p.b.size());
  for (std::size_t i = 0; i < p.b.size(); ++i) CHECK(q.b[i] == p.b[i]);
  for (std::size_t i = 0; i < p.g3.size(); ++i) CHECK(q.g3[i] == p.g3[i]);
  for (std::size_t i = 0; i < p.g2.size(); ++i) CHECK(q.g2[i] == p.g2[i]);
  CHECK(to_json(q).dump() == j.dump());
}
