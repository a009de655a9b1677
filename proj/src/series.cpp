#include "lgf/series.hpp"

#include <cmath>

#include <boost/math/constants/constants.hpp>

namespace lgf {

namespace {

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

BigInt double_factorial_odd(int q) {  // (2q - 1)!!, with (-1)!! = 1
  BigInt f = 1;
  for (int i = 1; i <= 2 * q - 1; i += 2) f *= i;
  return f;
}

BigInt pow_int(long base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

std::vector<RationalPoly> build_b_coefficients(const SplitStencil& st, int count) {
  if (count < 1) throw DomainError("expansion needs at least one term");
  const int mmax = 2 * (count - 1);

  // sigma(k) - k^2 = sum_{i>=2} s_i k^{2i}
  std::vector<Rational> s(mmax + 1);
  for (int i = 2; i <= mmax; ++i) {
    Rational acc = 0;
    for (int j = 1; j <= st.width; ++j) acc += st.coeffs[j - 1] * Rational(pow_int(j, 2 * i));
    acc *= 2;
    acc /= Rational(factorial(2 * i));
    if (i % 2) acc = -acc;
    s[i] = acc;
  }

  // E(k) = exp(-t sum s_i k^{2i}) = sum_m E_m(t) k^{2m}; m E_m = sum_i i X_i E_{m-i}
  // with X_i = -s_i t.
  std::vector<RationalPoly> E(mmax + 1);
  E[0] = RationalPoly::constant(1);
  for (int m = 1; m <= mmax; ++m) {
    RationalPoly acc;
    for (int i = 2; i <= m; ++i) {
      if (s[i] == 0) continue;
      acc += RationalPoly::monomial(-s[i] * i, 1) * E[m - i];
    }
    acc *= Rational(1, m);
    E[m] = acc;
  }

  // Gaussian moments: (1/2pi) int e^{-t k^2} k^{2q} dk = (4 pi t)^{-1/2} (2q-1)!! / (2t)^q.
  std::vector<RationalPoly> b;
  b.reserve(count);
  for (int J = 0; J < count; ++J) {
    std::vector<Rational> coeffs(J + 1);
    for (int q = J; q <= 2 * J; ++q) {
      Rational moment(double_factorial_odd(q), pow_int(2, q));
      int d = q - J;  // power of t taken from E
      for (int p = 0; p <= q; ++p) {
        Rational e = E[q - p].coeff(static_cast<std::size_t>(d));
        if (e == 0) continue;
        Rational term = e * moment / Rational(factorial(2 * p));
        if (p % 2) term = -term;
        coeffs[p] += term;
      }
    }
    std::vector<Rational> poly(2 * J + 1);
    for (int p = 0; p <= J; ++p) poly[2 * p] = coeffs[p];
    b.emplace_back(std::move(poly));
  }
  return b;
}

std::vector<MultiPoly<3>> build_g3(const std::vector<RationalPoly>& b, int count) {
  if (static_cast<int>(b.size()) < count) throw DomainError("not enough b coefficients for g3");
  std::vector<MultiPoly<3>> bi[3];
  for (std::size_t v = 0; v < 3; ++v)
    for (int l = 0; l < count; ++l) bi[v].push_back(MultiPoly<3>::from_univariate(b[l], v));
  std::vector<MultiPoly<3>> g(count);
  for (int j = 0; j < count; ++j) {
    MultiPoly<3> acc;
    for (int l1 = 0; l1 <= j; ++l1)
      for (int l2 = 0; l1 + l2 <= j; ++l2) acc += bi[0][l1] * bi[1][l2] * bi[2][j - l1 - l2];
    g[j] = acc * Rational(1, 2 * j + 1);
  }
  return g;
}

std::vector<MultiPoly<2>> build_g2(const std::vector<RationalPoly>& b, int count) {
  if (static_cast<int>(b.size()) < count) throw DomainError("not enough b coefficients for g2");
  std::vector<MultiPoly<2>> g(count);
  for (int j = 1; j < count; ++j) {
    MultiPoly<2> acc;
    for (int l1 = 0; l1 <= j; ++l1) {
      int l2 = j - l1;
      acc += MultiPoly<2>::from_univariate(b[l1], 0) * MultiPoly<2>::from_univariate(b[l2], 1);
      acc -= MultiPoly<2>::constant(b[l1].coeff(0) * b[l2].coeff(0));
    }
    g[j] = acc * Rational(1, j);
  }
  return g;
}

Thresholds select_thresholds(const ExpansionPack& pack, int J, int n_max, double eps_a, double eps_r) {
  if (J < 1 || static_cast<int>(pack.b.size()) < J + 1 || static_cast<int>(pack.g3.size()) < J + 1)
    throw DomainError("threshold selection needs the first neglected term (J + 1 coefficients)");
  const double pi = boost::math::constants::pi<double>();
  const Rational nm(n_max);
  const double bJ = std::abs(to_double(pack.b[J](nm)));
  const double gJ = std::abs(to_double(pack.g3[J].eval_exact({nm, nm, nm})));
  const double e = 2.0 / (2 * J + 1);
  double t_min = std::max(std::pow(bJ / eps_r, 1.0 / J), std::pow(bJ / (eps_a * std::sqrt(4 * pi)), e));
  double T_min = std::max(std::pow(gJ / eps_r, 1.0 / J), std::pow(gJ / (eps_a * std::sqrt(16 * pi * pi * pi)), e));
  return {t_min, std::max(T_min, t_min)};
}

double select_threshold_2d(const ExpansionPack& pack, int J, int n_max, double eps_a, double t_min) {
  if (static_cast<int>(pack.g2.size()) < J + 1) throw DomainError("2D threshold needs J + 1 coefficients");
  const double pi = boost::math::constants::pi<double>();
  const Rational nm(n_max);
  const double gJ = std::abs(to_double(pack.g2[J].eval_exact({nm, nm})));
  return std::max(t_min, std::pow(gJ / (4 * pi * eps_a), 1.0 / J));
}

ExpansionPack make_expansion_pack(const SplitStencil& st, int J, int n_max, double eps_a, double eps_r) {
  if (J < 2) throw DomainError("J must be at least 2");
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  if (!(eps_a > 0 && eps_a < 1 && eps_r > 0 && eps_r < 1)) throw DomainError("tolerances must lie in (0, 1)");
  ExpansionPack p;
  p.stencil_id = st.id;
  p.J = J;
  p.b = build_b_coefficients(st, J + 1);
  p.g3 = build_g3(p.b, J + 1);
  p.g2 = build_g2(p.b, J + 1);
  p.eps_a = eps_a;
  p.eps_r = eps_r;
  p.n_max = n_max;
  Thresholds th = select_thresholds(p, J, n_max, eps_a, eps_r);
  p.t_min = th.t_min;
  p.T_min = th.T_min;
  p.T_2d = select_threshold_2d(p, J, n_max, eps_a, th.t_min);
  return p;
}

std::vector<double> b_values(const ExpansionPack& pack, long n, int count) {
  std::vector<double> out(count);
  const Rational x(n);
  for (int j = 0; j < count; ++j) out[j] = to_double(pack.b[j](x));
  return out;
}

namespace {

template <std::size_t N>
nlohmann::json multipoly_json(const MultiPoly<N>& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) arr.push_back({{"exp", e}, {"coef", to_string(c)}});
  return arr;
}

template <std::size_t N>
MultiPoly<N> multipoly_from_json(const nlohmann::json& j) {
  MultiPoly<N> p;
  for (const auto& t : j) p.add_term(t.at("exp").get<std::array<int, N>>(), rational_from_string(t.at("coef")));
  return p;
}

}  // namespace

nlohmann::json to_json(const ExpansionPack& pack) {
  nlohmann::json j;
  j["stencil"] = pack.stencil_id;
  j["J"] = pack.J;
  j["n_max"] = pack.n_max;
  j["eps_a"] = pack.eps_a;
  j["eps_r"] = pack.eps_r;
  j["t_min"] = pack.t_min;
  j["T_min"] = pack.T_min;
  j["T_2d"] = pack.T_2d;
  nlohmann::json b = nlohmann::json::array();
  for (const auto& p : pack.b) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& v : p.coeffs()) c.push_back(to_string(v));
    b.push_back(c);
  }
  j["b"] = b;
  j["g3"] = nlohmann::json::array();
  for (const auto& g : pack.g3) j["g3"].push_back(multipoly_json(g));
  j["g2"] = nlohmann::json::array();
  for (const auto& g : pack.g2) j["g2"].push_back(multipoly_json(g));
  return j;
}

ExpansionPack expansion_pack_from_json(const nlohmann::json& j) {
  ExpansionPack p;
  p.stencil_id = j.at("stencil");
  p.J = j.at("J");
  p.n_max = j.at("n_max");
  p.eps_a = j.at("eps_a");
  p.eps_r = j.at("eps_r");
  p.t_min = j.at("t_min");
  p.T_min = j.at("T_min");
  p.T_2d = j.at("T_2d");
  for (const auto& c : j.at("b")) {
    std::vector<Rational> v;
    for (const auto& s : c) v.push_back(rational_from_string(s));
    p.b.emplace_back(std::move(v));
  }
  for (const auto& g : j.at("g3")) p.g3.push_back(multipoly_from_json<3>(g));
  for (const auto& g : j.at("g2")) p.g2.push_back(multipoly_from_json<2>(g));
  return p;
}

}  // namespace lgf
