#include "lgf/stencil.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace lgf {

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

SplitStencil make_split(std::string id, int order, std::vector<Rational> a, Rational smax) {
  SplitStencil st;
  st.id = std::move(id);
  st.order = order;
  st.width = static_cast<int>(a.size());
  st.coeffs = std::move(a);
  st.sigma_max = std::move(smax);
  return st;
}

int orbit_width(const OrbitMap& m) {
  int w = 0;
  for (const auto& [idx, c] : m)
    for (int v : idx) w = std::max(w, std::abs(v));
  return w;
}

// sum_alpha c_alpha prod_i T_|alpha_i|(1 - 2 y_i) over the expanded orbit.
MultiPoly<3> y_form(const OrbitMap& m) {
  std::map<int, MultiPoly<3>> cache[3];
  auto cheb = [&cache](int var, int deg) -> const MultiPoly<3>& {
    auto it = cache[var].find(deg);
    if (it != cache[var].end()) return it->second;
    // T_deg(1 - 2y) as a polynomial in y.
    RationalPoly t = chebyshev_t(static_cast<unsigned>(deg));
    RationalPoly lin({Rational(1), Rational(-2)});
    RationalPoly acc;
    for (auto c = t.coeffs().rbegin(); c != t.coeffs().rend(); ++c)
      acc = acc * lin + RationalPoly::constant(*c);
    return cache[var].emplace(deg, MultiPoly<3>::from_univariate(acc, var)).first->second;
  };
  MultiPoly<3> out;
  for (const auto& [rep, c] : m) {
    for (const auto& a : orbit(rep)) {
      MultiPoly<3> term = MultiPoly<3>::constant(c);
      for (int i = 0; i < 3; ++i) term = term * cheb(i, std::abs(a[i]));
      out += term;
    }
  }
  return out;
}

MehrstellenPair make_mehr(std::string id, int order, OrbitMap lhs, OrbitMap rhs) {
  MehrstellenPair mp;
  mp.id = std::move(id);
  mp.order = order;
  mp.width_lhs = orbit_width(lhs);
  mp.width_rhs = orbit_width(rhs);
  mp.sigma_lhs_y = y_form(lhs);
  mp.sigma_rhs_y = y_form(rhs);
  mp.lhs = std::move(lhs);
  mp.rhs = std::move(rhs);
  return mp;
}

const std::map<std::string, SplitStencil>& split_registry() {
  static const std::map<std::string, SplitStencil> reg = [] {
    std::map<std::string, SplitStencil> r;
    r.emplace("lgf2", make_split("lgf2", 2, {q(-1)}, q(4)));
    r.emplace("lgf4", make_split("lgf4", 4, {q(-4, 3), q(1, 12)}, q(16, 3)));
    r.emplace("lgf6", make_split("lgf6", 6, {q(-3, 2), q(3, 20), q(-1, 90)}, q(272, 45)));
    r.emplace("lgf8", make_split("lgf8", 8, {q(-8, 5), q(1, 5), q(-8, 315), q(1, 560)}, q(2048, 315)));
    return r;
  }();
  return reg;
}

const std::map<std::string, MehrstellenPair>& mehr_registry() {
  static const std::map<std::string, MehrstellenPair> reg = [] {
    std::map<std::string, MehrstellenPair> r;
    r.emplace("meh4", make_mehr("meh4", 4,
                                {{{0, 0, 0}, q(4)}, {{0, 0, 1}, q(-1, 3)}, {{0, 1, 1}, q(-1, 6)}},
                                {{{0, 0, 0}, q(1, 2)}, {{0, 0, 1}, q(1, 12)}}));
    r.emplace("meh6", make_mehr("meh6", 6,
                                {{{0, 0, 0}, q(64, 15)},
                                 {{0, 0, 1}, q(-7, 15)},
                                 {{0, 1, 1}, q(-1, 10)},
                                 {{1, 1, 1}, q(-1, 30)}},
                                {{{0, 0, 0}, q(67, 120)},
                                 {{0, 0, 1}, q(1, 18)},
                                 {{0, 0, 2}, q(-1, 240)},
                                 {{0, 1, 1}, q(1, 90)}}));
    return r;
  }();
  return reg;
}

}  // namespace

Rational SplitStencil::a0() const {
  Rational s = 0;
  for (const auto& c : coeffs) s += c;
  return -2 * s;
}

Rational SplitStencil::a(int j) const {
  j = std::abs(j);
  if (j == 0) return a0();
  if (j > width) return 0;
  return coeffs[j - 1];
}

const SplitStencil& split_stencil(const std::string& id) {
  const auto& reg = split_registry();
  auto it = reg.find(id);
  if (it == reg.end()) throw DomainError("unknown split stencil '" + id + "'");
  return it->second;
}

const MehrstellenPair& mehrstellen_pair(const std::string& id) {
  const auto& reg = mehr_registry();
  auto it = reg.find(id);
  if (it == reg.end()) throw DomainError("unknown Mehrstellen stencil '" + id + "'");
  return it->second;
}

bool is_split_id(const std::string& id) { return split_registry().count(id) > 0; }
bool is_mehrstellen_id(const std::string& id) { return mehr_registry().count(id) > 0; }

const std::vector<std::string>& split_ids() {
  static const std::vector<std::string> ids{"lgf2", "lgf4", "lgf6", "lgf8"};
  return ids;
}

const std::vector<std::string>& mehrstellen_ids() {
  static const std::vector<std::string> ids{"meh4", "meh6"};
  return ids;
}

std::vector<Index3> orbit(const Index3& rep) {
  std::set<Index3> out;
  Index3 p = rep;
  std::sort(p.begin(), p.end());
  do {
    for (int s = 0; s < 8; ++s) {
      Index3 v = p;
      for (int i = 0; i < 3; ++i)
        if (s & (1 << i)) v[i] = -v[i];
      out.insert(v);
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return {out.begin(), out.end()};
}

Index3 canonical(const Index3& n) {
  Index3 c{std::abs(n[0]), std::abs(n[1]), std::abs(n[2])};
  std::sort(c.begin(), c.end());
  return c;
}

double split_symbol_trig(const SplitStencil& st, double k) {
  long double acc = to_long_double(st.a0());
  for (int j = 1; j <= st.width; ++j) acc += 2 * to_long_double(st.coeffs[j - 1]) * std::cos(static_cast<long double>(j) * k);
  return static_cast<double>(acc);
}

RationalPoly split_symbol_poly(const SplitStencil& st) {
  // sin^2(j k/2) = (1 - T_j(1 - 2y)) / 2
  RationalPoly lin({Rational(1), Rational(-2)});
  RationalPoly out;
  for (int j = 1; j <= st.width; ++j) {
    RationalPoly t = chebyshev_t(static_cast<unsigned>(j));
    RationalPoly tj;
    for (auto c = t.coeffs().rbegin(); c != t.coeffs().rend(); ++c)
      tj = tj * lin + RationalPoly::constant(*c);
    out += (RationalPoly::constant(1) - tj) * (-2 * st.coeffs[j - 1]);
  }
  return out;
}

double split_symbol_y(const SplitStencil& st, double y) {
  static thread_local std::map<std::string, std::vector<double>> cache;
  auto it = cache.find(st.id);
  if (it == cache.end()) {
    std::vector<double> c;
    const RationalPoly poly = split_symbol_poly(st);
    for (const auto& v : poly.coeffs()) c.push_back(to_double(v));
    it = cache.emplace(st.id, std::move(c)).first;
  }
  double acc = 0;
  for (auto c = it->second.rbegin(); c != it->second.rend(); ++c) acc = acc * y + *c;
  return acc;
}

RationalPoly q_polynomial(const SplitStencil& st) {
  RationalPoly out;
  for (int j = 1; j <= st.width; ++j)
    out += (chebyshev_t(static_cast<unsigned>(j)) - RationalPoly::constant(1)) * (2 * st.coeffs[j - 1]);
  return out;
}

std::pair<double, double> mehr_symbols(const MehrstellenPair& mp, const std::array<double, 3>& y) {
  return {mp.sigma_lhs_y.eval(y), mp.sigma_rhs_y.eval(y)};
}

std::pair<double, double> mehr_symbols_trig(const MehrstellenPair& mp, const std::array<double, 3>& k) {
  auto sum = [&k](const OrbitMap& m) {
    // Extended accumulation: the cosine form sums many O(1) terms.
    long double acc = 0;
    for (const auto& [rep, c] : m) {
      long double cd = to_long_double(c);
      for (const auto& a : orbit(rep))
        acc += cd * std::cos(static_cast<long double>(a[0]) * k[0]) *
               std::cos(static_cast<long double>(a[1]) * k[1]) * std::cos(static_cast<long double>(a[2]) * k[2]);
    }
    return static_cast<double>(acc);
  };
  return {sum(mp.lhs), sum(mp.rhs)};
}

AxialCoefficients axial_coefficients(const MehrstellenPair& mp) {
  AxialCoefficients ac;
  ac.width_lhs = mp.width_lhs;
  ac.width_rhs = mp.width_rhs;
  ac.a.resize(mp.width_lhs + 1);
  ac.b.resize(mp.width_rhs + 1);
  RationalPoly lin({Rational(1), Rational(-2)});
  auto cheb_y = [&lin](int deg, std::size_t var) {
    RationalPoly t = chebyshev_t(static_cast<unsigned>(deg));
    RationalPoly acc;
    for (auto c = t.coeffs().rbegin(); c != t.coeffs().rend(); ++c)
      acc = acc * lin + RationalPoly::constant(*c);
    return MultiPoly<2>::from_univariate(acc, var);
  };
  auto fill = [&](const OrbitMap& m, std::vector<MultiPoly<2>>& out) {
    for (const auto& [rep, c] : m)
      for (const auto& a : orbit(rep)) {
        if (a[0] < 0) continue;
        out[a[0]] += cheb_y(std::abs(a[1]), 0) * cheb_y(std::abs(a[2]), 1) * c;
      }
  };
  fill(mp.lhs, ac.a);
  fill(mp.rhs, ac.b);
  return ac;
}

std::vector<Tap> split_taps(const SplitStencil& st, int dim) {
  std::vector<Tap> taps;
  taps.push_back({{0, 0, 0}, dim * st.a_double(0)});
  for (int ax = 0; ax < dim; ++ax)
    for (int j = -st.width; j <= st.width; ++j) {
      if (j == 0) continue;
      Index3 off{0, 0, 0};
      off[ax] = j;
      taps.push_back({off, st.a_double(j)});
    }
  return taps;
}

namespace {
std::vector<Tap> expand(const OrbitMap& m) {
  std::vector<Tap> taps;
  for (const auto& [rep, c] : m) {
    double cd = to_double(c);
    for (const auto& a : orbit(rep)) taps.push_back({a, cd});
  }
  return taps;
}
}  // namespace

std::vector<Tap> lhs_taps(const MehrstellenPair& mp) { return expand(mp.lhs); }
std::vector<Tap> rhs_taps(const MehrstellenPair& mp) { return expand(mp.rhs); }

std::vector<Tap> lhs_taps(const std::string& id) {
  if (is_split_id(id)) return split_taps(split_stencil(id));
  return lhs_taps(mehrstellen_pair(id));
}

std::vector<Tap> rhs_taps(const std::string& id) {
  if (is_split_id(id)) return {{{0, 0, 0}, 1.0}};
  return rhs_taps(mehrstellen_pair(id));
}

double FieldView::operator()(Index3 n) const {
  for (int i = 0; i < 3; ++i) {
    int e = extent_[i];
    switch (policy_[i]) {
      case Boundary::periodic:
        n[i] = ((n[i] % e) + e) % e;
        break;
      case Boundary::parity:
        n[i] = std::abs(n[i]);
        [[fallthrough]];
      case Boundary::halo:
        if (n[i] < 0 || n[i] >= e)
          throw CoverageError("field access outside coverage at index (" + std::to_string(n[0]) + "," +
                              std::to_string(n[1]) + "," + std::to_string(n[2]) + ")");
        break;
    }
  }
  return data_[(static_cast<std::size_t>(n[0]) * extent_[1] + n[1]) * extent_[2] + n[2]];
}

double apply_operator(const std::vector<Tap>& taps, const FieldView& field, const Index3& n) {
  double acc = 0;
  for (const auto& t : taps) acc += t.weight * field({n[0] + t.offset[0], n[1] + t.offset[1], n[2] + t.offset[2]});
  return acc;
}

}  // namespace lgf
