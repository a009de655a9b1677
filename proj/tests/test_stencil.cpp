#include <cmath>
#include <random>

#include "doctest.h"
#include "lgf/stencil.hpp"

using namespace lgf;

namespace {
const double pi = std::acos(-1.0);
}

TEST_CASE("split symbol reproduces sigma_max at pi") {
  CHECK(split_symbol(split_stencil("lgf2"), pi) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(split_symbol(split_stencil("lgf4"), pi) == doctest::Approx(16.0 / 3).epsilon(1e-15));
  for (const auto& id : split_ids()) {
    const auto& st = split_stencil(id);
    CHECK(split_symbol(st, 0.0) == 0.0);
    CHECK(std::abs(split_symbol(st, pi) - to_double(st.sigma_max)) < 4e-15);
    CHECK(split_symbol_poly(st)(Rational(1)) == st.sigma_max);
    CHECK(split_symbol_poly(st)(Rational(0)) == 0);
  }
}

TEST_CASE("split stencil consistency and positivity") {
  for (const auto& id : split_ids()) {
    const auto& st = split_stencil(id);
    Rational s = st.a0();
    for (int j = 1; j <= st.width; ++j) s += 2 * st.a(j);
    CHECK(s == 0);
    CHECK(st.a(-2) == st.a(2));
    // -sum a_j j^2 = 1 (sigma ~ k^2)
    Rational m2 = 0;
    for (int j = 1; j <= st.width; ++j) m2 -= st.a(j) * j * j;
    CHECK(m2 == 1);
    for (int i = 1; i <= 1000; ++i) CHECK(split_symbol(st, pi * i / 1000.0) > 0.0);
  }
}

TEST_CASE("split symbol forms agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (const auto& id : split_ids()) {
    const auto& st = split_stencil(id);
    // Both forms sum O(1) terms of mixed sign, so rounding is measured
    // against the summand magnitudes 4 sum |a_j|.
    double scale = 0;
    for (int j = 1; j <= st.width; ++j) scale += 4 * std::abs(st.a_double(j));
    double worst_trig = 0, worst_y = 0;
    for (int i = 0; i < 1000; ++i) {
      double k = u(rng);
      double s = split_symbol(st, k);
      double sy = std::sin(k / 2);
      double y = split_symbol_y(st, sy * sy);
      worst_trig = std::max(worst_trig, std::abs(s - split_symbol_trig(st, k)) / (scale * 2.220446049250313e-16));
      worst_y = std::max(worst_y, std::abs(s - y) / (std::max(std::abs(s), 1.0) * 2.220446049250313e-16));
    }
    CHECK(worst_trig <= 4);
    CHECK(worst_y <= 4);
  }
}

TEST_CASE("split symbol is k^2 + O(k^4)") {
  for (const auto& id : split_ids()) {
    const auto& st = split_stencil(id);
    // Fitted constant from the exact k^4 coefficient.
    double c4 = 0;
    for (int j = 1; j <= st.width; ++j) c4 += 2 * st.a_double(j) * std::pow(j, 4) / 24.0;
    for (double k = 1e-3; k <= 1e-1; k *= 1.3) {
      double s = split_symbol(st, k);
      CHECK(std::abs(s - k * k) <= (std::abs(c4) + 1e-3) * std::pow(k, 4) * 1.01 + 1e-18);
    }
  }
}

TEST_CASE("q polynomials") {
  // Scaled copies of the tabulated polynomials.
  CHECK(q_polynomial(split_stencil("lgf2")) == RationalPoly({2, -2}));
  CHECK(q_polynomial(split_stencil("lgf4")) * Rational(3) == RationalPoly({7, -8, 1}));
  CHECK(q_polynomial(split_stencil("lgf6")) * Rational(45) == RationalPoly({109, -132, 27, -4}));
  CHECK(q_polynomial(split_stencil("lgf8")) * Rational(315) == RationalPoly({772, -960, 243, -64, 9}));
  for (const auto& id : split_ids()) {
    RationalPoly q = q_polynomial(split_stencil(id));
    CHECK(q(Rational(1)) == 0);
    CHECK(q.derivative()(Rational(1)) == -2);
  }
}

TEST_CASE("Mehrstellen symbols") {
  const auto& m4 = mehrstellen_pair("meh4");
  const auto& m6 = mehrstellen_pair("meh6");
  auto [l0, r0] = mehr_symbols(m4, {0, 0, 0});
  CHECK(l0 == 0.0);
  CHECK(r0 == 1.0);
  auto [l1, r1] = mehr_symbols(m4, {1, 1, 1});
  CHECK(l1 == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(std::abs(r1) < 1e-15);
  auto [l6, r6] = mehr_symbols(m6, {0, 0, 0});
  CHECK(l6 == 0.0);
  CHECK(r6 == 1.0);
  CHECK(m4.width_lhs == 1);
  CHECK(m4.width_rhs == 1);
  CHECK(m6.width_lhs == 1);
  CHECK(m6.width_rhs == 2);

  // Exact y-forms against the hand-expanded polynomials.
  using E = MultiPoly<3>::Exponent;
  MultiPoly<3> s4;
  for (int i = 0; i < 3; ++i) {
    E e{};
    e[i] = 1;
    s4.add_term(e, 4);
  }
  s4.add_term({1, 1, 0}, Rational(-8, 3));
  s4.add_term({1, 0, 1}, Rational(-8, 3));
  s4.add_term({0, 1, 1}, Rational(-8, 3));
  CHECK(m4.sigma_lhs_y == s4);
  MultiPoly<3> r4 = MultiPoly<3>::constant(1);
  for (int i = 0; i < 3; ++i) {
    E e{};
    e[i] = 1;
    r4.add_term(e, Rational(-1, 3));
  }
  CHECK(m4.sigma_rhs_y == r4);
  MultiPoly<3> s6 = s4;
  s6.add_term({1, 1, 1}, Rational(32, 15));
  CHECK(m6.sigma_lhs_y == s6);
  MultiPoly<3> r6m = r4;
  for (int i = 0; i < 3; ++i) {
    E e{};
    e[i] = 2;
    r6m.add_term(e, Rational(-1, 15));
  }
  r6m.add_term({1, 1, 0}, Rational(8, 45));
  r6m.add_term({1, 0, 1}, Rational(8, 45));
  r6m.add_term({0, 1, 1}, Rational(8, 45));
  CHECK(m6.sigma_rhs_y == r6m);
}

TEST_CASE("Mehrstellen orbit sums and symbol forms") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (const auto& id : mehrstellen_ids()) {
    const auto& mp = mehrstellen_pair(id);
    double sa = 0, sb = 0;
    for (const auto& t : lhs_taps(mp)) sa += t.weight;
    for (const auto& t : rhs_taps(mp)) sb += t.weight;
    CHECK(std::abs(sa) < 1e-15);
    CHECK(std::abs(sb - 1) < 1e-15);
    for (int i = 0; i < 1000; ++i) {
      std::array<double, 3> k{u(rng), u(rng), u(rng)}, y;
      for (int d = 0; d < 3; ++d) y[d] = std::pow(std::sin(k[d] / 2), 2);
      auto [lt, rt] = mehr_symbols_trig(mp, k);
      auto [ly, ry] = mehr_symbols(mp, y);
      // Measured against the largest summand of the cosine form.
      CHECK(std::abs(lt - ly) <= 4 * 8 * 2.220446049250313e-16);
      CHECK(std::abs(rt - ry) <= 4 * 2.220446049250313e-16);
    }
  }
}

TEST_CASE("orbit expansion") {
  CHECK(orbit({0, 0, 0}).size() == 1);
  CHECK(orbit({0, 0, 1}).size() == 6);
  CHECK(orbit({0, 1, 1}).size() == 12);
  CHECK(orbit({1, 1, 1}).size() == 8);
  CHECK(orbit({0, 1, 2}).size() == 24);
  CHECK(orbit({1, 2, 3}).size() == 48);
  CHECK(canonical({-2, 1, 0}) == Index3{0, 1, 2});
}

TEST_CASE("axial coefficients of Mehrstellen pairs") {
  using E2 = MultiPoly<2>::Exponent;
  auto ac4 = axial_coefficients(mehrstellen_pair("meh4"));
  MultiPoly<2> a0, a1, b0, b1;
  a0.add_term(E2{0, 0}, 2);
  a0.add_term(E2{1, 0}, Rational(8, 3));
  a0.add_term(E2{0, 1}, Rational(8, 3));
  a0.add_term(E2{1, 1}, Rational(-8, 3));
  a1.add_term(E2{0, 0}, -1);
  a1.add_term(E2{1, 0}, Rational(2, 3));
  a1.add_term(E2{0, 1}, Rational(2, 3));
  b0.add_term(E2{0, 0}, Rational(5, 6));
  b0.add_term(E2{1, 0}, Rational(-1, 3));
  b0.add_term(E2{0, 1}, Rational(-1, 3));
  b1.add_term(E2{0, 0}, Rational(1, 12));
  CHECK(ac4.a[0] == a0);
  CHECK(ac4.a[1] == a1);
  CHECK(ac4.b[0] == b0);
  CHECK(ac4.b[1] == b1);

  auto ac6 = axial_coefficients(mehrstellen_pair("meh6"));
  MultiPoly<2> c0, c1, d0, d1, d2;
  c0.add_term(E2{0, 0}, 2);
  c0.add_term(E2{1, 0}, Rational(8, 3));
  c0.add_term(E2{0, 1}, Rational(8, 3));
  c0.add_term(E2{1, 1}, Rational(-8, 5));
  c1.add_term(E2{0, 0}, -1);
  c1.add_term(E2{1, 0}, Rational(2, 3));
  c1.add_term(E2{0, 1}, Rational(2, 3));
  c1.add_term(E2{1, 1}, Rational(-8, 15));
  d0.add_term(E2{2, 0}, Rational(-1, 15));
  d0.add_term(E2{0, 2}, Rational(-1, 15));
  d0.add_term(E2{1, 1}, Rational(8, 45));
  d0.add_term(E2{1, 0}, Rational(-11, 45));
  d0.add_term(E2{0, 1}, Rational(-11, 45));
  d0.add_term(E2{0, 0}, Rational(97, 120));
  d1.add_term(E2{1, 0}, Rational(-2, 45));
  d1.add_term(E2{0, 1}, Rational(-2, 45));
  d1.add_term(E2{0, 0}, Rational(1, 10));
  d2.add_term(E2{0, 0}, Rational(-1, 240));
  CHECK(ac6.a[0] == c0);
  CHECK(ac6.a[1] == c1);
  CHECK(ac6.b[0] == d0);
  CHECK(ac6.b[1] == d1);
  CHECK(ac6.b[2] == d2);

  // p_L(1;0) = 0, p_L'(1;0) = 0, p_L''(1;0) = -2, p_R(1;0) = 1.
  for (const auto* ac : {&ac4, &ac6}) {
    std::array<Rational, 2> zero{0, 0};
    Rational p = ac->a[0].eval_exact(zero), pdd = 0, pr = ac->b[0].eval_exact(zero);
    for (int j = 1; j <= ac->width_lhs; ++j) {
      Rational aj = ac->a[j].eval_exact(zero);
      p += 2 * aj;
      pdd += 2 * aj * j * j;
    }
    for (int j = 1; j <= ac->width_rhs; ++j) pr += 2 * ac->b[j].eval_exact(zero);
    CHECK(p == 0);
    CHECK(pdd == -2);
    CHECK(pr == 1);
  }
}

TEST_CASE("apply_operator") {
  const int n = 7;
  std::vector<double> field(n * n * n, 3.25), quad(n * n * n), delta(n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) quad[(i * n + j) * n + k] = double(i) * i;
  delta[0] = 1;
  auto l2 = split_taps(split_stencil("lgf2"));
  FieldView cst(field.data(), {n, n, n}, {Boundary::halo, Boundary::halo, Boundary::halo});
  CHECK(apply_operator(l2, cst, {3, 3, 3}) == 0.0);
  FieldView qv(quad.data(), {n, n, n}, {Boundary::halo, Boundary::halo, Boundary::halo});
  for (int i = 1; i < n - 1; ++i) CHECK(apply_operator(l2, qv, {i, 3, 3}) == -2.0);
  CHECK_THROWS_AS(apply_operator(l2, qv, {0, 3, 3}), CoverageError);

  FieldView dv(delta.data(), {n, n, n}, {Boundary::parity, Boundary::parity, Boundary::parity});
  CHECK(apply_operator(rhs_taps(mehrstellen_pair("meh4")), dv, {0, 0, 0}) == 0.5);
  CHECK(apply_operator(l2, dv, {0, 0, 0}) == 6.0);

  FieldView pv(delta.data(), {n, n, n}, {Boundary::periodic, Boundary::periodic, Boundary::periodic});
  CHECK(apply_operator(l2, pv, {n - 1, 0, 0}) == -1.0);
}
