#include <cmath>

#include "doctest.h"
#include "lgf/axial.hpp"
#include "lgf/poisson.hpp"
#include "lgf/series.hpp"

using namespace lgf;

namespace {

const LgfTable& lgf2_table() {
  static const LgfTable t = [] {
    const auto& st = split_stencil("lgf2");
    IEvaluator ev(st, make_expansion_pack(st, 10, 12, 1e-15, 1e-15));
    return build_table(ev, 9, 3);
  }();
  return t;
}

// [L u](n) with the given out-of-box reads.
double apply_at(const std::vector<Tap>& taps, const Field& u, Index3 n, std::array<Boundary, 3> policy) {
  FieldView view(u.v.data(), {u.N, u.N, u.N}, policy);
  return apply_operator(taps, view, n);
}

}  // namespace

TEST_CASE("residual of a delta field") {
  auto delta = [](const Index3& n) { return n == Index3{0, 0, 0} ? 1.0 : 0.0; };
  auto rep = residual_field("lgf2", delta, {0, 0, 0}, {2, 2, 2});
  CHECK(rep.R_max == 5);
  CHECK(rep.n_res == Index3{0, 0, 0});
  CHECK(rep.region == "[0,2]x[0,2]x[0,2]");
}

TEST_CASE("residual of a free-space table") {
  const auto& t = lgf2_table();
  auto rep = residual_3unb(t, 8);
  CHECK(rep.R_max < 5e-15);
  // Constants lie in the null space of a split operator.
  auto shifted = residual_field("lgf2", [&](const Index3& n) { return t.lookup(n) + 1; }, {0, 0, 0}, {8, 8, 8});
  CHECK(std::abs(shifted.R_max - rep.R_max) < 1e-14);
  CHECK_THROWS_AS(residual_3unb(t, 9), CoverageError);
  auto j = to_json(rep);
  CHECK(j["region"] == "[0,8]x[0,8]x[0,8]");
}

TEST_CASE("residual of the one-unbounded LGF") {
  CHECK(residual_1unb("lgf4", 30).R_max <= 5e-15);
  CHECK(residual_1unb("meh4", 30).R_max <= 1.5e-13);
  CHECK(residual_1unb("lgf2", 56).R_max <= 1e-15);
}

TEST_CASE("Hockney-Eastwood convolution equals direct summation") {
  const auto& t = lgf2_table();
  const int N = 8;
  DomainSpec dom;
  dom.N = N;
  dom.L = N;  // h = 1
  dom.bc = {Bc::unbounded, Bc::unbounded, Bc::unbounded};
  Field f(N);
  for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = std::sin(0.37 * i) + 0.1 * (i % 5);
  auto sol = poisson_solve(dom, f, {"lgf2", &t});
  auto ref = direct_convolution(f, [&](const Index3& n) { return t.lookup(n); });
  double scale = 0, err = 0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    scale = std::max(scale, std::abs(ref.v[i]));
    err = std::max(err, std::abs(sol.u.v[i] - ref.v[i]));
  }
  CHECK(err <= 1e-13 * scale);

  // A delta returns the table itself, scaled by h^2.
  DomainSpec d16 = dom;
  d16.L = 4;
  Field delta(N);
  delta(0, 0, 0) = 1;
  auto g = poisson_solve(d16, delta, {"lgf2", &t});
  const double h2 = d16.h() * d16.h();
  for (int i = 0; i < N; ++i) CHECK(std::abs(g.u(i, 2, 1) - h2 * t.lookup(Index3{i, 2, 1})) < 1e-16);

  CHECK_THROWS_AS(poisson_solve(dom, f, {"lgf2", nullptr}), CoverageError);
  DomainSpec big = dom;
  big.N = 12;
  CHECK_THROWS_AS(poisson_solve(big, Field(12), {"lgf2", &t}), CoverageError);
}

TEST_CASE("zero right-hand side gives zero") {
  for (auto bc : {std::array<Bc, 3>{Bc::periodic, Bc::periodic, Bc::periodic},
                  std::array<Bc, 3>{Bc::unbounded, Bc::periodic, Bc::periodic}}) {
    DomainSpec dom;
    dom.N = 8;
    dom.bc = bc;
    auto sol = poisson_solve(dom, Field(8), {"meh4"});
    for (double v : sol.u.v) CHECK(v == 0);
    CHECK(sol.warnings.empty());
  }
}

TEST_CASE("periodic solve inverts the symbol") {
  const int N = 16;
  DomainSpec dom;
  dom.N = N;
  const double pi = std::acos(-1.0);
  Field f(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) f(i, j, k) = std::cos(2 * pi * i / N);
  for (const auto& id : split_ids()) {
    auto sol = poisson_solve(dom, f, {id});
    const double lam = split_symbol_y(split_stencil(id), std::pow(std::sin(pi / N), 2));
    const double h2 = dom.h() * dom.h();
    for (int i = 0; i < N; ++i) CHECK(std::abs(sol.u(i, 3, 5) - h2 * f(i, 3, 5) / lam) < 1e-14);
  }
  Field g = f;
  for (double& v : g.v) v += 1;
  auto sol = poisson_solve(dom, g, {"lgf2"});
  REQUIRE(sol.warnings.size() == 1);
  CHECK(sol.warnings[0].find("mean") != std::string::npos);
}

TEST_CASE("discrete manufactured right-hand side is solved exactly") {
  const int N = 16;
  for (const auto& id : split_ids()) {
    const auto taps = split_taps(split_stencil(id));
    for (int unb : {0, 1}) {
      DomainSpec dom;
      dom.N = N;
      if (unb) dom.bc = {Bc::unbounded, Bc::periodic, Bc::periodic};
      const double h = dom.h();
      Field u(N), f(N);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          for (int k = 0; k < N; ++k) {
            const double x = (i + 0.5) * h, y = (j + 0.5) * h, z = (k + 0.5) * h;
            u(i, j, k) = (unb ? u_unb(2 * (x - 0.25), 1) : u_per(x, 1)) * u_per(y, 1) * std::sin(2 * std::acos(-1.0) * z);
          }
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          for (int k = 0; k < N; ++k) {
            // The bump vanishes within the stencil width of the unbounded ends, so L u has no support outside the box.
            double s = 0;
            for (const auto& t : taps) {
              Index3 n{i + t.offset[0], j + t.offset[1], k + t.offset[2]};
              if (unb && (n[0] < 0 || n[0] >= N)) continue;
              n[0] = (n[0] + N) % N;
              n[1] = (n[1] + N) % N;
              n[2] = (n[2] + N) % N;
              s += t.weight * u(n[0], n[1], n[2]);
            }
            f(i, j, k) = s / (h * h);
          }
      auto sol = poisson_solve(dom, f, {id});
      double err = 0;
      for (std::size_t i = 0; i < u.v.size(); ++i) err = std::max(err, std::abs(sol.u.v[i] - u.v[i]));
      INFO(id, " unbounded axes: ", unb);
      CHECK(err <= 1e-12);
    }
  }
}

TEST_CASE("Mehrstellen solution satisfies L u = h^2 R f in the interior") {
  const int N = 16;
  DomainSpec dom;
  dom.N = N;
  dom.bc = {Bc::unbounded, Bc::periodic, Bc::periodic};
  const double h = dom.h();
  Field f(N);
  double fmax = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const double x = (i + 0.5) * h, y = (j + 0.5) * h, z = (k + 0.5) * h;
        f(i, j, k) = u_unb(x, 1) * std::cos(2 * std::acos(-1.0) * y) * (1 + std::sin(4 * std::acos(-1.0) * z));
        fmax = std::max(fmax, std::abs(f(i, j, k)));
      }
  for (const auto& id : mehrstellen_ids()) {
    auto sol = poisson_solve(dom, f, {id});
    const auto L = lhs_taps(id), R = rhs_taps(id);
    const std::array<Boundary, 3> pol{Boundary::halo, Boundary::periodic, Boundary::periodic};
    double worst = 0;
    for (int i = 2; i < N - 2; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
          const double lu = apply_at(L, sol.u, {i, j, k}, pol);
          const double rf = apply_at(R, f, {i, j, k}, pol);
          worst = std::max(worst, std::abs(lu - h * h * rf));
        }
    CHECK(worst <= 1e-12 * h * h * fmax);
  }
}

TEST_CASE("manufactured solutions") {
  CHECK(u_unb(0, 1) == 0);
  CHECK(u_unb(0.5, 1) == 1);
  CHECK(u_per(0, 2) == 0);
  // Second derivatives against central differences.
  for (double x : {0.2, 0.41, 0.77}) {
    const double e = 1e-4;
    CHECK(u_per_dd(x, 1) == doctest::Approx((u_per(x + e, 1) - 2 * u_per(x, 1) + u_per(x - e, 1)) / (e * e)).epsilon(1e-5));
    CHECK(u_unb_dd(x, 1) == doctest::Approx((u_unb(x + e, 1) - 2 * u_unb(x, 1) + u_unb(x - e, 1)) / (e * e)).epsilon(1e-5));
  }
}

TEST_CASE("convergence study reports orders") {
  auto rows = convergence_study({"lgf2"}, DomainKind::one_unbounded, {32, 64});
  REQUIRE(rows.size() == 2);
  CHECK(std::isnan(rows[0].order));
  CHECK(rows[1].order == doctest::Approx(std::log2(rows[0].eps_inf / rows[1].eps_inf)));
  auto csv = convergence_csv(rows);
  CHECK(csv.rfind("stencil,N,eps_inf,order\nlgf2,32,", 0) == 0);
}
