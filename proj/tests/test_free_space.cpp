#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "lgf/free_space.hpp"
#include "oracles.hpp"

using namespace lgf;

namespace {

const IEvaluator& evaluator(const std::string& id) {
  static std::map<std::string, IEvaluator> cache;
  auto it = cache.find(id);
  if (it == cache.end())
    it = cache.emplace(id, IEvaluator(split_stencil(id), make_expansion_pack(split_stencil(id), 10, 12, 1e-15, 1e-15)))
             .first;
  return it->second;
}

}  // namespace

TEST_CASE("I_n(t) basic values") {
  const auto& ev = evaluator("lgf2");
  CHECK(I_eval(ev, 0, 0) == 1);
  CHECK(I_eval(ev, 3, 0) == 0);
  CHECK(std::abs(I_eval(ev, 1, 2.5) - oracle::scaled_bessel_series(1, 5)) < 1e-15);
  // Quadrature and series regimes against the Bessel function across t.
  for (double t : {0.01, 0.7, 3.0, 40.0, 300.0, 2000.0, 1e5})
    for (int n = 0; n <= 12; ++n) {
      // Rounding is relative to I_0(t), the largest of the family.
      const double ref = oracle::scaled_bessel(n, 2 * t);
      CHECK(std::abs(I_eval(ev, n, t) - ref) <= 8 * 2.220446049250313e-16 * oracle::scaled_bessel(0, 2 * t));
    }
  // Bounds and the large-t limit for every split stencil.
  for (const auto& id : split_ids()) {
    const auto& e = evaluator(id);
    for (double t : {0.5, 5.0, 50.0, 5e3})
      for (int n = -12; n <= 12; ++n) CHECK(std::abs(I_eval(e, n, t)) <= 1.0);
    const double t = 1e7;
    CHECK(I_eval(e, 2, t) * std::sqrt(4 * oracle::pi * t) == doctest::Approx(1).epsilon(1e-6));
  }
  CHECK(I_eval(ev, 40, 10.0) >= 0);
  CHECK_THROWS_AS(I_eval(ev, 13, 2 * ev.pack().t_min), DomainError);
}

TEST_CASE("I_n(t) is continuous across t_min") {
  for (const auto& id : split_ids()) {
    const auto& ev = evaluator(id);
    const double t = ev.pack().t_min;
    const int count = ev.pack().n_max + 1;
    std::vector<double> q(count), s(count), s_lo(count), s_hi(count);
    // Both regimes at the seam itself.
    ev.quadrature_values(t, count, q.data());
    ev.series_values(t, count, s.data());
    const double lo = t * (1 - 1e-9), hi = t * (1 + 1e-9);
    ev.series_values(lo, count, s_lo.data());
    ev.series_values(hi, count, s_hi.data());
    for (int n = 0; n < count; ++n) {
      CHECK(std::abs(q[n] - s[n]) <= 10 * ev.pack().eps_a);
      // Across the seam, net of the function's own change over the interval.
      const double own = s_hi[n] - s_lo[n];
      CHECK(std::abs(I_eval(ev, n, lo) - I_eval(ev, n, hi) + own) <= 10 * ev.pack().eps_a);
    }
  }
}

TEST_CASE("second-order G(0,0,0) matches the Bessel integral") {
  const auto& ev = evaluator("lgf2");
  const double g = lgf3_eval(ev, {0, 0, 0});
  CHECK(std::abs(g - 0.2527310098) < 1e-9);
  CHECK(std::abs(g - oracle::bessel_lgf3(0, 0, 0)) < 1e-13);
}

TEST_CASE("free-space LGF symmetry, positivity and decay") {
  for (const auto& id : split_ids()) {
    const auto& ev = evaluator(id);
    CHECK(lgf3_eval(ev, {1, 2, 3}) == lgf3_eval(ev, {-3, 2, 1}));
    std::vector<Index3> axis;
    for (int n = 0; n <= 12; ++n) axis.push_back({n, 0, 0});
    auto g = lgf3_eval_many(ev, axis);
    for (double v : g) CHECK(v > 0);
    for (int n = 1; n < 12; ++n) CHECK(g[n + 1] < g[n]);
  }
}

TEST_CASE("far field approaches the continuum Green's function") {
  const auto& ev = evaluator("lgf4");
  const double g = lgf3_eval(ev, {8, 0, 0});
  const double continuum = 1 / (4 * oracle::pi * 8);
  CHECK(std::abs(g - continuum) < 0.03 * continuum);
  // Two more series terms change nothing at this tolerance.
  IEvaluator more(split_stencil("lgf4"), make_expansion_pack(split_stencil("lgf4"), 12, 12, 1e-15, 1e-15));
  CHECK(std::abs(lgf3_eval(more, {8, 0, 0}) - g) < 1e-14);
}

TEST_CASE("tail is consistent with quadrature beyond T_min") {
  const auto& ev = evaluator("lgf6");
  const double T = ev.pack().T_min;
  std::vector<Index3> ns{{0, 0, 0}, {3, 1, 0}, {12, 12, 12}};
  auto seg = lgf3_series_segment(ev, ns, T, 2 * T);
  for (std::size_t i = 0; i < ns.size(); ++i)
    CHECK(std::abs(lgf3_tail(ev, ns[i], 2 * T) + seg[i] - lgf3_tail(ev, ns[i], T)) <= 10 * ev.pack().eps_a);
  CHECK_THROWS_AS(lgf3_series_segment(ev, ns, 0.5 * ev.pack().t_min, T), DomainError);
  CHECK_THROWS_AS(lgf3_eval(ev, {13, 0, 0}), DomainError);
}

TEST_CASE("two-dimensional relative LGF") {
  const auto& ev = evaluator("lgf2");
  CHECK(lgf2_eval(ev, {0, 0}) == 0);
  CHECK(lgf2_eval(ev, {1, 0}) == lgf2_eval(ev, {0, -1}));
  CHECK(std::abs(lgf2_eval(ev, {1, 0}) + 0.25) < 1e-13);
  // Residual identity of the 5-point operator away from the origin.
  for (const auto& id : split_ids()) {
    const auto& e = evaluator(id);
    const auto& st = e.stencil();
    std::vector<Index2> pts;
    for (int a = -st.width; a <= 6 + st.width; ++a)
      for (int b = -st.width; b <= 6 + st.width; ++b) pts.push_back({a, b});
    auto v = lgf2_eval_many(e, pts);
    const int side = 7 + 2 * st.width;
    auto at = [&](int a, int b) { return v[(a + st.width) * side + (b + st.width)]; };
    double worst = 0;
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; b <= 6; ++b) {
        long double r = 0;
        for (int j = -st.width; j <= st.width; ++j)
          r += static_cast<long double>(st.a_double(j)) * (at(a + j, b) + at(a, b + j));
        if (a == 0 && b == 0) r -= 1;
        worst = std::max(worst, static_cast<double>(std::abs(r)));
      }
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("canonical tuples and table lookup") {
  auto one = canonical_tuples(1, 3);
  REQUIRE(one.size() == 4);
  CHECK(one[0] == std::vector<int>{0, 0, 0});
  CHECK(one[1] == std::vector<int>{0, 0, 1});
  CHECK(one[2] == std::vector<int>{0, 1, 1});
  CHECK(one[3] == std::vector<int>{1, 1, 1});
  CHECK(canonical_tuples(19, 3, 19).size() == 779);
  for (int e : {0, 3, 7}) {
    CHECK(canonical_tuples(e, 3).size() == static_cast<std::size_t>((e + 1) * (e + 2) * (e + 3) / 6));
    CHECK(canonical_tuples(e, 2).size() == static_cast<std::size_t>((e + 1) * (e + 2) / 2));
  }

  const auto& ev = evaluator("lgf4");
  LgfTable t = build_table(ev, 4, 3);
  CHECK(t.values.size() == 35);
  CHECK(t.lookup(Index3{-2, 1, 0}) == t.lookup(Index3{0, 1, 2}));
  CHECK(t.lookup(Index3{4, -3, 2}) == lgf3_eval(ev, {2, 3, 4}));
  CHECK_THROWS_AS(t.lookup(Index3{5, 0, 0}), CoverageError);
  CHECK_THROWS_AS(build_table(ev, 13, 3), DomainError);

  LgfTable t2 = build_table(ev, 3, 2);
  CHECK(t2.lookup(std::vector<int>{0, 0}) == 0);
  CHECK(t2.lookup(std::vector<int>{-3, 1}) == t2.lookup(std::vector<int>{1, 3}));
}

TEST_CASE("table results do not depend on the thread count") {
  const auto& ev = evaluator("lgf2");
  LgfTable a = build_table(ev, 12, 3, 1);
  LgfTable b = build_table(ev, 12, 3, 3);
  CHECK(serialize_table(a) == serialize_table(b));
  CHECK(oracle::split_residual(split_stencil("lgf2"), [&](const Index3& n) { return a.lookup(n); }, 11) < 5e-15);
}

TEST_CASE("binary table format") {
  const auto& ev = evaluator("lgf6");
  LgfTable t = build_table(ev, 3, 3, 1, 1234);
  auto bytes = serialize_table(t);
  REQUIRE(bytes.size() == 63 + 8 * 20 + 4);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "LGFT");
  CHECK(bytes[4] == 1);
  CHECK(bytes[5] == 0);
  CHECK(std::string(bytes.begin() + 6, bytes.begin() + 10) == "lgf6");
  CHECK(bytes[14] == 3);
  CHECK(bytes[15] == 3);

  LgfTable back = deserialize_table(bytes);
  CHECK(back.stencil_id == "lgf6");
  CHECK(back.timestamp == 1234);
  CHECK(back.values == t.values);
  CHECK(back.T_min == t.T_min);

  auto bad = bytes;
  bad[70] ^= 1;
  CHECK_THROWS_AS(deserialize_table(bad), FormatError);
  bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(deserialize_table(bad), FormatError);
  bad = bytes;
  bad.pop_back();
  CHECK_THROWS_AS(deserialize_table(bad), FormatError);

  const auto path = (std::filesystem::temp_directory_path() / "lgf_table_test.bin").string();
  write_table(t, path);
  CHECK(read_table(path).values == t.values);
  std::filesystem::remove(path);

  std::string csv = table_csv(t);
  CHECK(csv.rfind("n1,n2,n3,value\n0,0,0,", 0) == 0);
  char expect[64];
  std::snprintf(expect, sizeof expect, "0,0,0,%.17g\n", t.lookup(Index3{0, 0, 0}));
  CHECK(csv.find(expect) != std::string::npos);
}
