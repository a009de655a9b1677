#include "lgf/axial.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <Eigen/Core>

namespace lgf {

namespace {

using ld = long double;

const ld kPiL = std::acos(-1.0L);

cld polyval(const std::vector<ld>& c, cld x) {
  cld acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Complex polynomial coefficients in ascending order.
using CPoly = std::vector<cld>;

CPoly cpoly_mul(const CPoly& a, const CPoly& b) {
  CPoly out(a.size() + b.size() - 1, cld(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Power series truncated to `order` terms.
CPoly series_mul(const CPoly& a, const CPoly& b, std::size_t order) {
  CPoly out(order, cld(0));
  for (std::size_t i = 0; i < std::min(order, a.size()); ++i)
    for (std::size_t j = 0; j < b.size() && i + j < order; ++j) out[i + j] += a[i] * b[j];
  return out;
}

CPoly series_inverse(const CPoly& a, std::size_t order) {
  CPoly out(order, cld(0));
  out[0] = cld(1) / a[0];
  for (std::size_t k = 1; k < order; ++k) {
    cld acc = 0;
    for (std::size_t i = 1; i <= k && i < a.size(); ++i) acc += a[i] * out[k - i];
    out[k] = -acc / a[0];
  }
  return out;
}

// A root lambda of q(lambda) + c carried with u = lambda - 1 to full
// relative precision, s = sqrt(lambda - 1) sqrt(lambda + 1) and
// r = 1 / (lambda + s) = lambda - s.
struct Root {
  cld lambda, u, s, r;
  bool real = false;
};

Root make_root(cld lambda, cld u, bool real) {
  Root x;
  x.lambda = lambda;
  x.u = u;
  x.real = real;
  if (real) {
    x.lambda = lambda.real();
    x.u = u.real();
  }
  x.s = std::sqrt(x.u) * std::sqrt(x.u + cld(2));
  x.r = cld(1) / (x.lambda + x.s);
  return x;
}

// Per-stencil data derived once from the exact coefficients.
struct SplitData {
  std::vector<ld> q;      // q(lambda) ascending
  ld lead = 0;            // leading coefficient of q
  std::vector<ld> u_ser;  // lambda - 1 = sum_k u_ser[k] c^k, k = 1..7
  bool has_c_star = false;
  ld c_star = 0;
};

// Series reversion of q(1 + u) + c = 0 for u(c), exact in rationals.
std::vector<Rational> small_c_series(const SplitStencil& st, int order) {
  RationalPoly shifted = q_polynomial(st).shifted(Rational(1));  // coefficients h_i of u^i, h_0 = 0
  // u = sum_{k>=1} e_k c^k; solve h_1 u + h_2 u^2 + ... = -c order by order.
  std::vector<Rational> e(order + 1, Rational(0));
  const Rational h1 = shifted.coeff(1);
  for (int k = 1; k <= order; ++k) {
    // Coefficient of c^k in sum_{i>=2} h_i u^i using e_1..e_{k-1}.
    std::vector<Rational> upow(order + 1, Rational(0));  // current power of u as series in c
    for (int i = 1; i <= order; ++i) upow[i] = e[i];
    Rational rest = 0;
    for (int p = 2; p <= shifted.degree(); ++p) {
      std::vector<Rational> next(order + 1, Rational(0));
      for (int a = 1; a <= order; ++a)
        for (int b = 1; a + b <= order; ++b) next[a + b] += upow[a] * e[b];
      upow = next;
      rest += shifted.coeff(p) * upow[k];
    }
    e[k] = ((k == 1 ? Rational(-1) : Rational(0)) - rest) / h1;
  }
  return e;
}

ld bisect_c_star_lgf8() {
  // Discriminant cubic of the LGF8 closed form; its single real root is c*.
  auto f = [](ld c) { return 1968941520.0L - 879221700.0L * c + 223915104.0L * c * c - 44089920.0L * c * c * c; };
  ld lo = 3, hi = 3.5;
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    ld mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    if ((f(lo) > 0) == (f(mid) > 0))
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

const SplitData& split_data(const SplitStencil& st) {
  static std::mutex mu;
  static std::map<std::string, SplitData> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(st.id);
  if (it != cache.end()) return it->second;
  SplitData d;
  RationalPoly q = q_polynomial(st);
  for (const auto& c : q.coeffs()) d.q.push_back(to_long_double(c));
  d.lead = d.q.back();
  auto e = small_c_series(st, 7);
  for (int k = 0; k <= 7; ++k) d.u_ser.push_back(to_long_double(e[k]));
  if (st.id == "lgf4") {
    d.has_c_star = true;
    d.c_star = 3;
  } else if (st.id == "lgf8") {
    d.has_c_star = true;
    d.c_star = bisect_c_star_lgf8();
  }
  return cache.emplace(st.id, std::move(d)).first->second;
}

ld small_c_u(const SplitData& d, ld c) {
  ld acc = 0;
  for (int k = 7; k >= 1; --k) acc = (acc + d.u_ser[k]) * c;
  return acc;
}

cld cbrt_principal(cld x) {
  if (x.imag() == 0 && x.real() >= 0) return std::cbrt(x.real());
  return std::pow(x, 1.0L / 3);
}

// Closed-form roots of q(lambda) + c.
std::vector<cld> closed_form_lambdas(const SplitStencil& st, ld c) {
  switch (st.width) {
    case 1:
      return {1 + c / 2};
    case 2: {
      cld d = std::sqrt(cld(9 - 3 * c));
      return {cld(4) - d, cld(4) + d};
    }
    case 3: {
      ld x3 = 360 * c - 775 + 60 * std::sqrt(36 * c * c - 155 * c + 405);
      ld xr = std::cbrt(x3);
      const cld omega = std::polar(1.0L, 2 * kPiL / 3);
      std::vector<cld> out;
      for (int k = 0; k < 3; ++k) {
        cld xi = xr * std::pow(omega, k);
        out.push_back((cld(9) + xi - cld(95) / xi) / cld(4));
      }
      return out;
    }
    case 4: {
      cld disc = 1968941520.0L - 879221700.0L * c + 223915104.0L * c * c - 44089920.0L * c * c * c;
      cld xi = cbrt_principal(-273420.0L * c + 1520225.0L + 35.0L * std::sqrt(disc));
      std::vector<cld> out;
      for (int se : {1, -1}) {
        cld eta = ld(se) * std::sqrt(xi / 9.0L + (3780.0L * c - 4655.0L) / (9.0L * xi) - 434.0L / 81);
        cld rad = std::sqrt(-434.0L / 27 - 81088.0L / (729.0L * eta) - eta * eta);
        for (int s2 : {1, -1}) out.push_back(16.0L / 9 - eta / 2.0L + ld(s2) * rad / 2.0L);
      }
      return out;
    }
    default:
      throw DomainError("no closed form for stencil " + st.id);
  }
}

// Newton polish of a root of q + c, accepting only improving steps.
cld polish(const std::vector<ld>& q, ld c, cld x) {
  std::vector<ld> dq;
  for (std::size_t i = 1; i < q.size(); ++i) dq.push_back(i * q[i]);
  auto f = [&](cld v) { return polyval(q, v) + c; };
  cld fx = f(x);
  for (int it = 0; it < 4; ++it) {
    cld d = polyval(dq, x);
    if (std::abs(d) == 0) break;
    cld y = x - fx / d;
    cld fy = f(y);
    if (!(std::abs(fy) < std::abs(fx))) break;
    x = y;
    fx = fy;
  }
  return x;
}

struct SplitRoots {
  std::vector<Root> roots;
  int near_unity = -1;  // index of the root continuing lambda = 1
};

SplitRoots split_roots(const SplitStencil& st, ld c, const AxialOptions& opt) {
  const SplitData& d = split_data(st);
  std::vector<cld> lam = closed_form_lambdas(st, c);
  for (auto& l : lam) l = polish(d.q, c, l);
  SplitRoots out;
  // The root continuing lambda = 1 from c = 0.
  int near = 0;
  for (int i = 1; i < static_cast<int>(lam.size()); ++i)
    if (std::abs(lam[i] - cld(1)) < std::abs(lam[near] - cld(1))) near = i;
  out.near_unity = near;
  const ld scale = 1 + std::abs(c);
  for (int i = 0; i < static_cast<int>(lam.size()); ++i) {
    cld l = lam[i];
    bool real = std::abs(l.imag()) <= 64 * std::numeric_limits<ld>::epsilon() * scale * std::abs(l);
    cld u = l - cld(1);
    if (i == near && c < kSmallC && c > 0) {
      real = true;
      const ld us = small_c_u(d, c);
      if (opt.stable_small_c) {
        u = us;
        l = 1 + us;
      } else {
        // Double-precision lambda from the series, as in the direct method.
        const double lam_d = static_cast<double>(1 + us);
        l = lam_d;
        u = static_cast<ld>(lam_d) - 1;
      }
    }
    out.roots.push_back(make_root(l, u, real));
  }
  // Conjugate partners share the same imaginary magnitude exactly.
  return out;
}

// q'(lambda_i) in product form.
cld qprime(const SplitData& d, const std::vector<Root>& roots, std::size_t i) {
  cld acc = d.lead;
  for (std::size_t k = 0; k < roots.size(); ++k)
    if (k != i) acc *= roots[i].lambda - roots[k].lambda;
  return acc;
}

ld real_pow(const Root& x, long n, bool use_log) {
  const ld r = x.r.real();
  if (use_log && r > 0) return std::exp(-static_cast<ld>(n) * std::log1p(x.u.real() + x.s.real()));
  return std::pow(r, static_cast<ld>(n));
}

std::vector<double> split_range_closed(const SplitStencil& st, ld c, int count, const AxialOptions& opt) {
  const SplitData& d = split_data(st);
  SplitRoots sr = split_roots(st, c, opt);
  auto& roots = sr.roots;
  const std::size_t w = roots.size();
  std::vector<ld> G(count, 0);
  const bool use_log = opt.stable_small_c && c < kSmallC;

  // Colliding pair of LGF4/LGF8: the two roots with the largest real part.
  int p1 = -1, p2 = -1;
  if (d.has_c_star && c < d.c_star) {
    std::vector<int> idx(w);
    for (std::size_t i = 0; i < w; ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return roots[a].lambda.real() > roots[b].lambda.real(); });
    if (roots[idx[0]].real && roots[idx[1]].real) {
      p1 = idx[0];
      p2 = idx[1];
    }
  }

  std::vector<bool> done(w, false);
  for (std::size_t i = 0; i < w; ++i) {
    if (done[i]) continue;
    const Root& x = roots[i];
    if (static_cast<int>(i) == p1 || static_cast<int>(i) == p2) {
      // Factorized form: -(F(l1) - F(l2)) / (l1 - l2) with
      // F(l) = r(l)^n / (lead * s(l) * prod_{k not in pair} (l - l_k)).
      const Root& a = roots[p1];
      const Root& b = roots[p2];
      // The other roots of LGF8 form a conjugate pair; use exact products.
      cld ca = d.lead * a.s, cb = d.lead * b.s;
      for (std::size_t k = 0; k < w; ++k) {
        if (static_cast<int>(k) == p1 || static_cast<int>(k) == p2) continue;
        ca *= a.lambda - roots[k].lambda;
        cb *= b.lambda - roots[k].lambda;
      }
      const ld ra = ca.real(), rb = cb.real();
      const ld dl = a.lambda.real() - b.lambda.real();
      for (int n = 0; n < count; ++n) {
        const ld fa = real_pow(a, n, use_log) / ra;
        const ld fb = real_pow(b, n, use_log) / rb;
        G[n] -= (fa - fb) / dl;
      }
      done[p1] = done[p2] = true;
      continue;
    }
    if (x.real) {
      const ld k = -1 / (qprime(d, roots, i) * x.s).real();
      for (int n = 0; n < count; ++n) G[n] += k * real_pow(x, n, use_log);
      done[i] = true;
      continue;
    }
    // Conjugate pair: rho^n Re(K e^{i n theta}) with K = -2 / (q' s).
    std::size_t j = i + 1;
    ld best = std::numeric_limits<ld>::infinity();
    for (std::size_t k = 0; k < w; ++k) {
      if (k == i || done[k]) continue;
      ld dist = std::abs(roots[k].lambda - std::conj(x.lambda));
      if (dist < best) {
        best = dist;
        j = k;
      }
    }
    const Root& y = x.lambda.imag() > 0 ? x : roots[j];
    const cld K = cld(-2) / (qprime(d, roots, &y == &x ? i : j) * y.s);
    const ld rho = std::abs(y.r), theta = std::arg(y.r);
    for (int n = 0; n < count; ++n) {
      const ld rn = std::pow(rho, static_cast<ld>(n));
      G[n] += rn * (K.real() * std::cos(n * theta) - K.imag() * std::sin(n * theta));
    }
    done[i] = done[j] = true;
  }
  std::vector<double> out(count);
  for (int n = 0; n < count; ++n) out[n] = static_cast<double>(G[n]);
  return out;
}

// c = 0: G*(n) = -n/2 + sum over the other roots of K_i (r_i^n - 1).
std::vector<double> split_range_zero(const SplitStencil& st, int count) {
  const SplitData& d = split_data(st);
  std::vector<cld> lam = closed_form_lambdas(st, 0);
  for (auto& l : lam) l = polish(d.q, 0, l);
  std::vector<Root> roots;
  int one = 0;
  for (int i = 1; i < static_cast<int>(lam.size()); ++i)
    if (std::abs(lam[i] - cld(1)) < std::abs(lam[one] - cld(1))) one = i;
  lam[one] = 1;
  for (auto& l : lam) {
    bool real = std::abs(l.imag()) <= 64 * std::numeric_limits<ld>::epsilon() * std::abs(l);
    roots.push_back(make_root(l, l - cld(1), real));
  }
  std::vector<ld> G(count);
  for (int n = 1; n < count; ++n) G[n] = -static_cast<ld>(n) / 2;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (static_cast<int>(i) == one) continue;
    const cld K = cld(-1) / (qprime(d, roots, i) * roots[i].s);
    for (int n = 0; n < count; ++n) {
      cld rn = std::pow(roots[i].r, static_cast<ld>(n));
      if (roots[i].real) rn = std::pow(roots[i].r.real(), static_cast<ld>(n));
      // Conjugate partners add the conjugate value; the real part is the sum / 2 each.
      G[n] += (K * (rn - cld(1))).real();
    }
  }
  std::vector<double> out(count);
  for (int n = 0; n < count; ++n) out[n] = static_cast<double>(G[n]);
  return out;
}

void check_c(const SplitStencil& st, double c) {
  const double hi = 2 * to_double(st.sigma_max);
  if (!(c >= 0) || c > hi * (1 + 1e-12)) throw DomainError("parameter c outside [0, 2 sigma_max]");
}

}  // namespace

std::string to_string(RootClass c) {
  switch (c) {
    case RootClass::all_real_distinct:
      return "all_real_distinct";
    case RootClass::conjugate_pairs:
      return "conjugate_pairs";
    case RootClass::near_unity:
      return "near_unity";
    case RootClass::near_repeated:
      return "near_repeated";
    case RootClass::degenerate_leading:
      return "degenerate_leading";
  }
  return "unknown";
}

AxialCharacteristic axial_characteristic(const std::string& id) {
  AxialCharacteristic ch;
  ch.id = id;
  if (is_split_id(id)) {
    const auto& st = split_stencil(id);
    ch.w_L = st.width;
    ch.w_R = 0;
    const RationalPoly sy = split_symbol_poly(st);
    MultiPoly<2> c = MultiPoly<2>::from_univariate(sy, 0) + MultiPoly<2>::from_univariate(sy, 1);
    ch.a.push_back(MultiPoly<2>::constant(st.a0()) + c);
    for (int j = 1; j <= st.width; ++j) ch.a.push_back(MultiPoly<2>::constant(st.a(j)));
    ch.b.push_back(MultiPoly<2>::constant(1));
  } else {
    const auto& mp = mehrstellen_pair(id);
    AxialCoefficients ac = axial_coefficients(mp);
    ch.w_L = ac.width_lhs;
    ch.w_R = ac.width_rhs;
    ch.a = ac.a;
    ch.b = ac.b;
  }
  ch.m = ch.w_R - ch.w_L + 1;
  // q(lambda; y) = a_0 + 2 sum_j a_j T_j(lambda)
  ch.q.assign(ch.w_L + 1, MultiPoly<2>());
  ch.q[0] += ch.a[0];
  for (int j = 1; j <= ch.w_L; ++j) {
    RationalPoly t = chebyshev_t(static_cast<unsigned>(j));
    for (int i = 0; i <= t.degree(); ++i) ch.q[i] += ch.a[j] * (2 * t.coeff(i));
  }
  return ch;
}

RootSet q_roots_split(const SplitStencil& st, double c) {
  check_c(st, c);
  const SplitData& d = split_data(st);
  RootSet rs;
  SplitRoots sr = split_roots(st, c, AxialOptions{});
  bool complex = false;
  for (const auto& x : sr.roots) {
    rs.lambdas.emplace_back(static_cast<double>(x.lambda.real()), static_cast<double>(x.lambda.imag()));
    rs.roots.emplace_back(static_cast<double>(x.r.real()), static_cast<double>(x.r.imag()));
    if (!x.real && !complex && x.r.imag() > 0) {
      complex = true;
      rs.rho = static_cast<double>(std::abs(x.r));
      rs.theta = static_cast<double>(std::arg(x.r));
    }
  }
  if (c < kSmallC)
    rs.classification = RootClass::near_unity;
  else if (d.has_c_star && std::abs(c - d.c_star) < kTaylorWindow)
    rs.classification = RootClass::near_repeated;
  else if (complex)
    rs.classification = RootClass::conjugate_pairs;
  else
    rs.classification = RootClass::all_real_distinct;
  return rs;
}

std::vector<double> axial_eval_split_range(const SplitStencil& st, double c, int count, const AxialOptions& opt) {
  check_c(st, c);
  if (count <= 0) return {};
  if (c == 0) return split_range_zero(st, count);
  const SplitData& d = split_data(st);
  if (d.has_c_star && std::abs(c - d.c_star) < kTaylorWindow) {
    const TaylorPack& tp = taylor_pack(st);
    std::vector<double> out(count);
    for (int n = 0; n < count; ++n) out[n] = taylor_eval(tp, n, c - tp.c_star);
    return out;
  }
  return split_range_closed(st, c, count, opt);
}

double axial_eval_split(const SplitStencil& st, long n, double c, const AxialOptions& opt) {
  n = std::abs(n);
  return axial_eval_split_range(st, c, static_cast<int>(n + 1), opt)[n];
}

double axial_eval_split_factorized(const SplitStencil& st, long n, double c) {
  check_c(st, c);
  n = std::abs(n);
  return split_range_closed(st, c, static_cast<int>(n + 1), AxialOptions{})[n];
}

// ---------------------------------------------------------------------------
// Mehrstellen

namespace {

struct MehrData {
  AxialCharacteristic ch;
  MultiPoly<2> D, E;  // a_0 + 2 a_1 and a_0 - 2 a_1
};

const MehrData& mehr_data(const MehrstellenPair& mp) {
  static std::mutex mu;
  static std::map<std::string, MehrData> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(mp.id);
  if (it != cache.end()) return it->second;
  MehrData d;
  d.ch = axial_characteristic(mp.id);
  if (d.ch.w_L != 1) throw DomainError("Mehrstellen closed forms need w_L = 1");
  d.D = d.ch.a[0] + d.ch.a[1] * Rational(2);
  d.E = d.ch.a[0] - d.ch.a[1] * Rational(2);
  return cache.emplace(mp.id, std::move(d)).first->second;
}

void check_y(double y2, double y3) {
  if (!(y2 >= 0 && y2 <= 1 && y3 >= 0 && y3 <= 1)) throw DomainError("y must lie in [0, 1]^2");
}

}  // namespace

RootSet mehr_roots(const MehrstellenPair& mp, double y2, double y3) {
  check_y(y2, y3);
  const MehrData& d = mehr_data(mp);
  const std::array<ld, 2> y{y2, y3};
  const ld a0 = d.ch.a[0].eval(y), a1 = d.ch.a[1].eval(y);
  const ld De = std::sqrt(std::max<ld>(0, d.D.eval(y) * d.E.eval(y)));
  RootSet rs;
  const ld r = -2 * a1 / (a0 + De);
  rs.roots.emplace_back(static_cast<double>(r), 0.0);
  if (std::abs(a1) <= 64 * std::numeric_limits<ld>::epsilon() * std::abs(a0)) {
    rs.lambdas.emplace_back(std::numeric_limits<double>::infinity(), 0.0);
    rs.classification = RootClass::degenerate_leading;
  } else {
    rs.lambdas.emplace_back(static_cast<double>(-a0 / (2 * a1)), 0.0);
    rs.classification = (y2 == 0 && y3 == 0) ? RootClass::near_unity : RootClass::all_real_distinct;
  }
  return rs;
}

std::vector<double> axial_eval_mehr_range(const MehrstellenPair& mp, double y2, double y3, int count) {
  check_y(y2, y3);
  const MehrData& d = mehr_data(mp);
  const auto& ch = d.ch;
  std::vector<double> out(std::max(count, 0));
  if (count <= 0) return out;
  const std::array<ld, 2> y{y2, y3};
  std::vector<ld> a(2), b(ch.w_R + 1);
  for (int j = 0; j <= 1; ++j) a[j] = ch.a[j].eval(y);
  for (int j = 0; j <= ch.w_R; ++j) b[j] = ch.b[j].eval(y);

  if (y2 == 0 && y3 == 0) {
    // Relative form: -n/2 plus the z = 0 residue [z^{m-1-n}] p_R / p_L for n <= m - 1.
    std::vector<ld> pr(2 * ch.w_R + 1), pl{a[1], a[0], a[1]};
    for (int j = -ch.w_R; j <= ch.w_R; ++j) pr[j + ch.w_R] = b[std::abs(j)];
    std::vector<ld> ratio(ch.m, 0);
    for (int k = 0; k < ch.m; ++k) {
      ld acc = k < static_cast<int>(pr.size()) ? pr[k] : 0;
      for (int i = 1; i <= k && i < 3; ++i) acc -= pl[i] * ratio[k - i];
      ratio[k] = acc / pl[0];
    }
    for (int n = 0; n < count; ++n) {
      ld g = -static_cast<ld>(n) / 2;
      if (n <= ch.m - 1) g += ratio[ch.m - 1 - n];
      out[n] = static_cast<double>(g);
    }
    return out;
  }

  // r / a_1 = -2 / (a_0 + sqrt(D E)); 1 - r = (D + sqrt(D E)) / (a_0 + sqrt(D E)).
  const ld D = d.D.eval(y), E = d.E.eval(y);
  const ld sq = std::sqrt(std::max<ld>(0, D * E));
  const ld den = a[0] + sq;
  const ld r_a1 = -2 / den;
  const ld r = a[1] * r_a1;
  const ld one_minus_r = (D + sq) / den;
  const ld r2m1 = -one_minus_r * (1 + r);
  auto pR = [&](ld z) {
    ld acc = 0;
    for (int j = -ch.w_R; j <= ch.w_R; ++j) acc += b[std::abs(j)] * std::pow(z, static_cast<ld>(j + ch.w_R));
    return acc;
  };

  if (ch.m == 1) {
    // G(n) = (r/a_1) r^{n-1} p_R(r) / (r^2 - 1); at n = 0 combined with the
    // z = 0 residue into (r/a_1)(b_0 + 2 b_1 r) / (r^2 - 1).
    out[0] = static_cast<double>(r_a1 * (b[0] + 2 * b[1] * r) / r2m1);
    const ld base = r_a1 * pR(r) / r2m1;
    ld rn = 1;  // r^{n-1}
    for (int n = 1; n < count; ++n) {
      out[n] = static_cast<double>(base * rn);
      rn *= r;
    }
    return out;
  }
  if (ch.m == 2) {
    // G(n) = r^{n-1} p_R(r) / (a_1 (r^2 - 1)) + delta(n) (b_1 a_1 - b_2 a_0) / a_1^2 + delta(n-1) b_2 / a_1.
    const ld base = pR(r) / (a[1] * r2m1);
    ld rn = 1 / r;
    for (int n = 0; n < count; ++n) {
      ld g = base * rn;
      if (n == 0) g += (b[1] * a[1] - b[2] * a[0]) / (a[1] * a[1]);
      if (n == 1) g += b[2] / a[1];
      out[n] = static_cast<double>(g);
      rn *= r;
    }
    return out;
  }
  throw DomainError("unsupported Mehrstellen width");
}

double axial_eval_mehr(const MehrstellenPair& mp, long n, double y2, double y3) {
  n = std::abs(n);
  return axial_eval_mehr_range(mp, y2, y3, static_cast<int>(n + 1))[n];
}

// ---------------------------------------------------------------------------
// Repeated-root expansion

double locate_c_star(const SplitStencil& st) {
  if (st.id != "lgf4" && st.id != "lgf8") throw DomainError("no repeated root for stencil " + st.id);
  return static_cast<double>(split_data(st).c_star);
}

namespace {

// Falling factorial (n + W)(n + W - 1)...(n + W - k + 1) as a polynomial in n.
std::vector<ld> falling_poly(int W, int k) {
  std::vector<ld> p{1};
  for (int i = 0; i < k; ++i) {
    const ld shift = static_cast<ld>(W - i);
    std::vector<ld> next(p.size() + 1, 0);
    for (std::size_t a = 0; a < p.size(); ++a) {
      next[a + 1] += p[a];
      next[a] += shift * p[a];
    }
    p = next;
  }
  return p;
}

// Residue at a pole of order `order` of z^{n+W} / p(z)^{j+1}, where
// p(z) = (z - r)^{order/(j+1)} h(z), as r^n times a polynomial in n.
std::vector<cld> residue_poly(cld r, const CPoly& h_at_r, int j, int mult, int W) {
  const int order = mult * (j + 1);
  // Taylor coefficients of h^{-(j+1)} at r.
  CPoly inv = series_inverse(h_at_r, order);
  CPoly g{cld(1)};
  for (int i = 0; i <= j; ++i) g = series_mul(g, inv, order);
  // Res = sum_{k=0}^{order-1} [z^{n+W}]^{(k)}(r)/k! g_{order-1-k}
  //     = r^n sum_k (n+W)^{falling k} r^{W-k} / k! g_{order-1-k}.
  std::vector<cld> out(order, cld(0));
  ld kfact = 1;
  for (int k = 0; k < order; ++k) {
    if (k > 0) kfact *= k;
    const cld coef = std::pow(r, static_cast<ld>(W - k)) / kfact * g[order - 1 - k];
    std::vector<ld> fp = falling_poly(W, k);
    for (std::size_t i = 0; i < fp.size(); ++i) out[i] += coef * fp[i];
  }
  return out;
}

// Polynomial in t = z - r of prod_k (z - roots_k).
CPoly shifted_product(cld r, const std::vector<cld>& roots, ld lead) {
  CPoly p{cld(lead)};
  for (const auto& x : roots) p = cpoly_mul(p, CPoly{r - x, cld(1)});
  return p;
}

}  // namespace

TaylorPack derive_taylor_pack(const SplitStencil& st) {
  if (st.id != "lgf4" && st.id != "lgf8") throw DomainError("no repeated root for stencil " + st.id);
  const SplitData& d = split_data(st);
  std::vector<ld> dq;
  for (std::size_t i = 1; i < d.q.size(); ++i) dq.push_back(i * d.q[i]);
  // lambda*: the real critical point of q with the largest value, refined by Newton.
  cld lam_star = st.id == "lgf4" ? cld(4) : cld(3.64L);
  {
    std::vector<ld> ddq;
    for (std::size_t i = 1; i < dq.size(); ++i) ddq.push_back(i * dq[i]);
    for (int it = 0; it < 50; ++it) {
      cld step = polyval(dq, lam_star) / polyval(ddq, lam_star);
      lam_star -= step;
      if (std::abs(step) < 1e-19L) break;
    }
  }
  const ld ls = lam_star.real();
  const ld c_star = -polyval(d.q, ls).real();
  // Remaining lambda roots: deflate q + c* by (lambda - lambda*)^2.
  std::vector<cld> others;
  if (st.width == 4) {
    // q + c* = lead (l - ls)^2 (l^2 + beta l + gamma)
    std::vector<ld> poly = d.q;
    poly[0] += c_star;
    for (int rep = 0; rep < 2; ++rep) {
      std::vector<ld> quot(poly.size() - 1);
      ld carry = 0;
      for (int i = static_cast<int>(poly.size()) - 1; i >= 1; --i) {
        carry = poly[i] + carry * ls;
        quot[i - 1] = carry;
      }
      poly = quot;
    }
    const ld A = poly[2], B = poly[1], C = poly[0];
    cld disc = std::sqrt(cld(B * B - 4 * A * C));
    others = {(-B + disc) / (2 * A), (-B - disc) / (2 * A)};
  }
  auto r_of = [](cld l) {
    cld s = std::sqrt(l - cld(1)) * std::sqrt(l + cld(1));
    return cld(1) / (l + s);
  };
  const cld r0 = r_of(cld(ls));
  std::vector<cld> r_in;  // simple roots inside the circle
  for (const auto& l : others) r_in.push_back(r_of(l));
  // All 2w roots of p(z; c*).
  std::vector<cld> all{r0, r0, cld(1) / r0, cld(1) / r0};
  for (const auto& r : r_in) {
    all.push_back(r);
    all.push_back(cld(1) / r);
  }
  const ld lead = to_long_double(st.a(st.width));
  const int w = st.width;

  TaylorPack tp;
  tp.stencil_id = st.id;
  tp.c_star = static_cast<double>(c_star);
  tp.r_bar = static_cast<double>(r0.real());
  const cld* r1 = nullptr;
  for (const auto& r : r_in)
    if (r.imag() > 0) r1 = &r;
  if (r1) {
    tp.rho = static_cast<double>(std::abs(*r1));
    tp.theta = static_cast<double>(std::arg(*r1));
  }
  for (int j = 0; j <= 3; ++j) {
    const int W = (j + 1) * w - 1;
    ld sign_fact = (j % 2 ? -1 : 1);
    for (int i = 2; i <= j; ++i) sign_fact *= i;
    // Double root r0.
    std::vector<cld> rest;
    for (std::size_t k = 2; k < all.size(); ++k) rest.push_back(all[k]);
    auto P = residue_poly(r0, shifted_product(r0, rest, lead), j, 2, W);
    std::vector<double> arow;
    for (const auto& c : P) arow.push_back(static_cast<double>(sign_fact * c.real()));
    tp.a.push_back(arow);
    std::vector<double> urow(j + 1, 0.0), vrow(j + 1, 0.0);
    if (r1) {
      std::vector<cld> rest1;
      bool skipped = false;
      for (const auto& x : all) {
        if (!skipped && x == *r1) {
          skipped = true;
          continue;
        }
        rest1.push_back(x);
      }
      auto Q = residue_poly(*r1, shifted_product(*r1, rest1, lead), j, 1, W);
      // 2 Re(r1^n Q(n)) = rho^n (cos(n theta) 2 Re Q - sin(n theta) 2 Im Q)
      for (int k = 0; k <= j; ++k) {
        urow[k] = static_cast<double>(2 * sign_fact * Q[k].real());
        vrow[k] = static_cast<double>(-2 * sign_fact * Q[k].imag());
      }
    }
    tp.u.push_back(urow);
    tp.v.push_back(vrow);
  }
  return tp;
}

const TaylorPack& taylor_pack(const SplitStencil& st) {
  static std::mutex mu;
  static std::map<std::string, TaylorPack> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(st.id);
  if (it == cache.end()) it = cache.emplace(st.id, derive_taylor_pack(st)).first;
  return it->second;
}

double taylor_derivative(const TaylorPack& tp, int j, long n) {
  if (j < 0 || j >= static_cast<int>(tp.a.size())) throw DomainError("Taylor order out of range");
  n = std::abs(n);
  const ld nn = static_cast<ld>(n);
  auto horner = [nn](const std::vector<double>& c) {
    ld acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * nn + *it;
    return acc;
  };
  ld g = std::pow(static_cast<ld>(tp.r_bar), nn) * horner(tp.a[j]);
  if (tp.rho > 0) {
    const ld rn = std::pow(static_cast<ld>(tp.rho), nn);
    g += rn * (std::cos(nn * tp.theta) * horner(tp.u[j]) + std::sin(nn * tp.theta) * horner(tp.v[j]));
  }
  return static_cast<double>(g);
}

double taylor_eval(const TaylorPack& tp, long n, double delta) {
  ld acc = 0, dj = 1;
  for (int j = 0; j < static_cast<int>(tp.a.size()); ++j) {
    if (j > 0) dj *= static_cast<ld>(delta) / j;
    acc += dj * taylor_derivative(tp, j, n);
  }
  return static_cast<double>(acc);
}

nlohmann::json to_json(const TaylorPack& tp) {
  auto dec = [](double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
  };
  auto rows = [&](const std::vector<std::vector<double>>& m) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : m) {
      nlohmann::json row = nlohmann::json::array();
      for (double v : r) row.push_back(dec(v));
      out.push_back(row);
    }
    return out;
  };
  nlohmann::json j;
  j["stencil"] = tp.stencil_id;
  j["provenance"] = "derived via contour residues";
  j["c_star"] = dec(tp.c_star);
  j["r_bar"] = dec(tp.r_bar);
  j["rho"] = dec(tp.rho);
  j["theta"] = dec(tp.theta);
  j["a"] = rows(tp.a);
  j["u"] = rows(tp.u);
  j["v"] = rows(tp.v);
  return j;
}

// ---------------------------------------------------------------------------
// Real-space realization

double wavenumber_y(int j, int N) {
  j = ((j % N) + N) % N;
  const int f = std::min(j, N - j);
  const double s = std::sin(std::acos(-1.0) * f / N);
  return s * s;
}

std::vector<double> axial_spectral_column(const std::string& id, int j2, int j3, int N, int rows) {
  const double y2 = wavenumber_y(j2, N), y3 = wavenumber_y(j3, N);
  if (is_split_id(id)) {
    const auto& st = split_stencil(id);
    double c = split_symbol_y(st, y2) + split_symbol_y(st, y3);
    if (j2 % N == 0 && j3 % N == 0) c = 0;
    return axial_eval_split_range(st, c, rows);
  }
  return axial_eval_mehr_range(mehrstellen_pair(id), y2, y3, rows);
}

double RealSpaceLgf::operator()(int n1, int n2, int n3) const {
  n1 = std::abs(n1);
  if (n1 >= rows) throw CoverageError("row " + std::to_string(n1) + " beyond the realized rows");
  n2 = ((n2 % N) + N) % N;
  n3 = ((n3 % N) + N) % N;
  return data[(static_cast<std::size_t>(n1) * N + n2) * N + n3];
}

RealSpaceLgf axial_dft_realize(const std::string& id, int N, int rows, int threads) {
  if (N < 2) throw DomainError("N must be at least 2");
  if (!is_split_id(id) && !is_mehrstellen_id(id)) throw DomainError("unknown stencil '" + id + "'");
  if (rows <= 0) rows = N;
  // Unique spectral columns under j -> N - j and (j2, j3) -> (j3, j2).
  const int H = N / 2 + 1;
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(H) * H);
  std::vector<std::pair<int, int>> work;
  for (int a = 0; a < H; ++a)
    for (int b = a; b < H; ++b) work.emplace_back(a, b);
  auto run = [&](std::size_t lo, std::size_t step) {
    for (std::size_t i = lo; i < work.size(); i += step) {
      auto [a, b] = work[i];
      cols[a * H + b] = axial_spectral_column(id, a, b, N, rows);
    }
  };
  const int nt = std::max(1, threads);
  if (nt == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(run, t, nt);
    for (auto& th : pool) th.join();
  }
  auto fold = [N](int j) { return std::min(j, N - j); };

  // Exact twiddles: cos(2 pi ((n j) mod N) / N).
  Eigen::MatrixXd C(N, N);
  std::vector<double> tw(N);
  for (int i = 0; i < N; ++i) tw[i] = std::cos(2 * std::acos(-1.0) * i / N);
  for (int n = 0; n < N; ++n)
    for (int j = 0; j < N; ++j) C(n, j) = tw[(static_cast<long>(n) * j) % N];

  RealSpaceLgf out;
  out.id = id;
  out.N = N;
  out.rows = rows;
  out.data.resize(static_cast<std::size_t>(rows) * N * N);
  Eigen::MatrixXd A(N, N), B(N, N);
  const double scale = 1.0 / (static_cast<double>(N) * N);
  for (int n1 = 0; n1 < rows; ++n1) {
    for (int j2 = 0; j2 < N; ++j2)
      for (int j3 = 0; j3 < N; ++j3) {
        int a = fold(j2), b = fold(j3);
        if (a > b) std::swap(a, b);
        A(j2, j3) = cols[a * H + b][n1];
      }
    B.noalias() = C * A * C.transpose();
    for (int n2 = 0; n2 < N; ++n2)
      for (int n3 = 0; n3 < N; ++n3)
        out.data[(static_cast<std::size_t>(n1) * N + n2) * N + n3] = B(n2, n3) * scale;
  }
  return out;
}

std::string spectral_csv(const std::string& id, int N, int rows) {
  std::ostringstream os;
  os << "n,k2_index,k3_index,value\n" << std::setprecision(17);
  for (int j2 = 0; j2 < N; ++j2)
    for (int j3 = 0; j3 < N; ++j3) {
      auto col = axial_spectral_column(id, j2, j3, N, rows);
      for (int n = 0; n < rows; ++n) os << n << ',' << j2 << ',' << j3 << ',' << col[n] << '\n';
    }
  return os.str();
}

}  // namespace lgf
