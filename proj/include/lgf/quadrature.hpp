#pragma once

// Deterministic quadrature: adaptive Gauss-Kronrod (scalar and vector
// integrands), periodic trapezoid with doubling, nested box integration and
// trapezoid contour integrals.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include <Eigen/Core>

#include "lgf/error.hpp"

namespace lgf {

struct QuadResult {
  double value = 0;
  double error_estimate = 0;
  long evaluations = 0;
};

struct QuadVecResult {
  Eigen::VectorXd value;
  Eigen::VectorXd error_estimate;
  long evaluations = 0;
};

namespace detail {

// 15-point Kronrod nodes on [-1, 1] (non-negative half) and weights; the
// 7-point Gauss rule uses the odd-indexed nodes.
inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  Eigen::VectorXd value, error;
  double worst;
};

struct PanelOrder {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.worst != y.worst) return x.worst < y.worst;
    return x.a > y.a;
  }
};

// f(t, out) writes dim values into out.
template <typename F>
Panel gk15(F& f, double a, double b, int dim, long& evals) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Eigen::VectorXd fc(dim), f1(dim), f2(dim);
  Eigen::VectorXd k = Eigen::VectorXd::Zero(dim), g = Eigen::VectorXd::Zero(dim);
  f(c, fc.data());
  k += kWgk[7] * fc;
  g += kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    f(c - dx, f1.data());
    f(c + dx, f2.data());
    k += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) g += kWg[i / 2] * (f1 + f2);
  }
  evals += 15;
  Panel p{a, b, k * h, ((k - g) * h).cwiseAbs(), 0};
  p.worst = p.error.maxCoeff();
  return p;
}

}  // namespace detail

/// Adaptive GK15 for a vector of integrands sharing one subdivision.
/// f(t, double* out) fills dim values. Converges when every component meets
/// max(eps_a, eps_r |I_i|); panels whose error is at the rounding floor are
/// retired.
template <typename F>
QuadVecResult integrate_1d_vec(F&& f, int dim, double a, double b, double eps_a, double eps_r,
                               const std::vector<double>& breakpoints = {}, int max_subdivisions = 2000) {
  if (!(a < b)) throw DomainError("integrate_1d requires a < b");
  std::vector<double> edges{a};
  for (double x : breakpoints)
    if (x > a && x < b) edges.push_back(x);
  std::sort(edges.begin() + 1, edges.end());
  edges.push_back(b);

  long evals = 0;
  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelOrder> active;
  Eigen::VectorXd retired_val = Eigen::VectorXd::Zero(dim), retired_err = Eigen::VectorXd::Zero(dim);
  const double floor_eps = 100 * std::numeric_limits<double>::epsilon();

  auto push = [&](detail::Panel&& p) {
    // A panel is retired when its estimate sits at the rounding floor of
    // its own contribution; splitting further cannot improve it.
    bool at_floor = true;
    for (int i = 0; i < dim; ++i)
      if (p.error[i] > floor_eps * std::abs(p.value[i]) && p.error[i] > 1e-300) at_floor = false;
    if (at_floor) {
      retired_val += p.value;
      retired_err += p.error;
    } else {
      active.push(std::move(p));
    }
  };
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) push(detail::gk15(f, edges[i], edges[i + 1], dim, evals));

  auto totals = [&](Eigen::VectorXd& val, Eigen::VectorXd& err) {
    val = retired_val;
    err = retired_err;
    auto copy = active;
    // Summation in a fixed order (left to right) keeps results deterministic.
    std::vector<detail::Panel> panels;
    while (!copy.empty()) {
      panels.push_back(copy.top());
      copy.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    for (const auto& p : panels) {
      val += p.value;
      err += p.error;
    }
  };
  auto converged = [&](const Eigen::VectorXd& val, const Eigen::VectorXd& err) {
    for (int i = 0; i < dim; ++i)
      if (err[i] > std::max(eps_a, eps_r * std::abs(val[i]))) return false;
    return true;
  };

  Eigen::VectorXd val, err;
  // Track running sums to avoid re-summing on every step; re-sum exactly at the end.
  Eigen::VectorXd run_val = retired_val, run_err = retired_err;
  {
    auto copy = active;
    while (!copy.empty()) {
      run_val += copy.top().value;
      run_err += copy.top().error;
      copy.pop();
    }
  }
  int subdivisions = 0;
  while (!active.empty() && !converged(run_val, run_err)) {
    if (subdivisions >= max_subdivisions) {
      totals(val, err);
      throw QuadratureError("adaptive quadrature did not converge", val[0], err.maxCoeff());
    }
    detail::Panel p = active.top();
    active.pop();
    run_val -= p.value;
    run_err -= p.error;
    const double m = 0.5 * (p.a + p.b);
    detail::Panel left = detail::gk15(f, p.a, m, dim, evals);
    detail::Panel right = detail::gk15(f, m, p.b, dim, evals);
    run_val += left.value + right.value;
    run_err += left.error + right.error;
    push(std::move(left));
    push(std::move(right));
    ++subdivisions;
  }
  totals(val, err);
  return {val, err, evals};
}

/// Adaptive GK15 on [a, b]; |value - I| <= max(eps_a, eps_r |I|) on success.
template <typename F>
QuadResult integrate_1d(F&& f, double a, double b, double eps_a, double eps_r,
                        const std::vector<double>& breakpoints = {}, int max_subdivisions = 2000) {
  auto g = [&f](double t, double* out) { out[0] = f(t); };
  QuadVecResult r = integrate_1d_vec(g, 1, a, b, eps_a, eps_r, breakpoints, max_subdivisions);
  return {r.value[0], r.error_estimate[0], r.evaluations};
}

/// Trapezoid rule over one period with doubling; converged when successive
/// doublings differ by at most eps.
template <typename F>
QuadResult integrate_periodic(F&& f, double period, double eps, int min_points = 2, int max_points = 1 << 16) {
  int m = 2;
  double sum = 0;
  for (int i = 0; i < m; ++i) sum += f(period * i / m);
  long evals = m;
  double prev = sum * period / m;
  while (true) {
    if (2 * m > max_points) throw QuadratureError("periodic trapezoid reached its point cap", prev, std::abs(prev));
    double add = 0;
    for (int i = 0; i < m; ++i) add += f(period * (2 * i + 1) / (2.0 * m));
    evals += m;
    sum += add;
    m *= 2;
    double cur = sum * period / m;
    if (std::abs(cur - prev) <= eps && m >= min_points) return {cur, std::abs(cur - prev), evals};
    prev = cur;
  }
}

/// Box [lo, hi] in 3D, integrated as nested adaptive 1D rules.
template <typename F>
QuadResult integrate_box3(F&& f, const std::array<double, 3>& lo, const std::array<double, 3>& hi, double eps_a,
                          int max_subdivisions = 2000) {
  long evals = 0;
  double err_total = 0;
  auto inner_eps = eps_a / 8;
  auto outer = [&](double x) {
    auto middle = [&](double y) {
      auto inner = [&](double z) { return f(x, y, z); };
      QuadResult r = integrate_1d(inner, lo[2], hi[2], inner_eps, 0.0, {}, max_subdivisions);
      evals += r.evaluations;
      return r.value;
    };
    QuadResult r = integrate_1d(middle, lo[1], hi[1], inner_eps, 0.0, {}, max_subdivisions);
    return r.value;
  };
  QuadResult r = integrate_1d(outer, lo[0], hi[0], eps_a / 2, 0.0, {}, max_subdivisions);
  err_total = r.error_estimate;
  return {r.value, err_total, evals};
}

using cplx = std::complex<long double>;

/// (1 / 2 pi i) times the contour integral of f around |z - center| = radius,
/// by the trapezoid rule with doubling. Throws if f is not finite on the
/// contour (a pole on it).
template <typename F>
cplx contour_integral(F&& f, cplx center, long double radius, long double eps = 1e-17L, int max_points = 1 << 16) {
  const long double two_pi = 2 * std::acos(-1.0L);
  auto sample = [&](long double theta) {
    cplx dz = std::polar(radius, theta);
    cplx v = f(center + dz);
    if (!std::isfinite(std::abs(v))) throw QuadratureError("pole on integration contour", 0, 0);
    return v * dz;
  };
  int m = 16;
  cplx sum = 0;
  for (int k = 0; k < m; ++k) sum += sample(two_pi * k / m);
  cplx prev = sum / static_cast<long double>(m);
  while (true) {
    if (2 * m > max_points)
      throw QuadratureError("contour integral reached its point cap", static_cast<double>(prev.real()), 0);
    for (int k = 0; k < m; ++k) sum += sample(two_pi * (2 * k + 1) / (2.0L * m));
    m *= 2;
    cplx cur = sum / static_cast<long double>(m);
    if (std::abs(cur - prev) <= eps * std::max(1.0L, std::abs(cur))) return cur;
    prev = cur;
  }
}

/// G^(j)(n) = (-1)^j j! (1/2 pi i) int z^{n+(j+1)w-1} / p(z)^{j+1} dz for
/// j = 0 .. count-1 around the circle |z - center| = radius. p holds real
/// polynomial coefficients in ascending order.
std::vector<double> contour_derivatives(const std::vector<long double>& p, int n, int w, long double center,
                                        long double radius, int count);
/// Same integrals around a complex center, unrounded; picks out the
/// contribution of the poles enclosed by the circle.
std::vector<cplx> contour_derivatives(const std::vector<long double>& p, int n, int w, cplx center,
                                      long double radius, int count);

}  // namespace lgf
