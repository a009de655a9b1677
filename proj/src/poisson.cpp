#include "lgf/poisson.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <unsupported/Eigen/FFT>

#include "lgf/axial.hpp"
#include "lgf/series.hpp"

namespace lgf {

namespace {

using cd = std::complex<double>;

const double kPi = std::acos(-1.0);

std::string box_string(const Index3& lo, const Index3& hi) {
  std::ostringstream os;
  for (int a = 0; a < 3; ++a) os << (a ? "x" : "") << '[' << lo[a] << ',' << hi[a] << ']';
  return os.str();
}

ResidualReport residual_impl(const std::string& id, const std::function<double(const Index3&)>& G, const Index3& lo,
                             const Index3& hi, const std::array<int, 3>& period) {
  const auto L = lhs_taps(id), R = rhs_taps(id);
  auto is_origin = [&](Index3 n) {
    for (int a = 0; a < 3; ++a) {
      int v = n[a];
      if (period[a] > 0) v = ((v % period[a]) + period[a]) % period[a];
      if (v != 0) return false;
    }
    return true;
  };
  ResidualReport rep;
  rep.region = box_string(lo, hi);
  rep.n_res = lo;
  for (int a = lo[0]; a <= hi[0]; ++a)
    for (int b = lo[1]; b <= hi[1]; ++b)
      for (int c = lo[2]; c <= hi[2]; ++c) {
        long double r = 0;
        for (const auto& t : L) r += t.weight * static_cast<long double>(G({a + t.offset[0], b + t.offset[1], c + t.offset[2]}));
        for (const auto& t : R)
          if (is_origin({a + t.offset[0], b + t.offset[1], c + t.offset[2]})) r -= t.weight;
        const double v = static_cast<double>(std::abs(r));
        if (v > rep.R_max) {
          rep.R_max = v;
          rep.n_res = {a, b, c};
        }
      }
  return rep;
}

// Complex N0 x N1 x N2 array with an in-place FFT along one axis.
struct CArray {
  std::array<int, 3> n;
  std::vector<cd> v;
  explicit CArray(std::array<int, 3> shape) : n(shape), v(static_cast<std::size_t>(shape[0]) * shape[1] * shape[2]) {}
  cd& at(int i, int j, int k) { return v[(static_cast<std::size_t>(i) * n[1] + j) * n[2] + k]; }

  void fft(int axis, bool inverse) {
    Eigen::FFT<double> engine;
    const int len = n[axis];
    std::vector<cd> in(len), out(len);
    const int o1 = (axis + 1) % 3, o2 = (axis + 2) % 3;
    for (int a = 0; a < n[o1]; ++a)
      for (int b = 0; b < n[o2]; ++b) {
        auto ref = [&](int m) -> cd& {
          std::array<int, 3> idx;
          idx[axis] = m;
          idx[o1] = a;
          idx[o2] = b;
          return at(idx[0], idx[1], idx[2]);
        };
        for (int m = 0; m < len; ++m) in[m] = ref(m);
        if (inverse)
          engine.inv(out, in);
        else
          engine.fwd(out, in);
        for (int m = 0; m < len; ++m) ref(m) = out[m];
      }
  }
};

// Index of a padded (length 2N) sample: offsets 0..N-1, then -(N-1)..-1; slot N unused.
int padded_offset(int m, int N) { return m < N ? m : m - 2 * N; }

double lattice_symbol_ratio(const std::string& id, const std::array<double, 3>& y) {
  if (is_split_id(id)) {
    const auto& st = split_stencil(id);
    return 1.0 / (split_symbol_y(st, y[0]) + split_symbol_y(st, y[1]) + split_symbol_y(st, y[2]));
  }
  auto [sl, sr] = mehr_symbols(mehrstellen_pair(id), y);
  return sr / sl;
}

Field solve_periodic(const DomainSpec& dom, const Field& f, const std::string& id, std::vector<std::string>& warnings) {
  const int N = dom.N;
  CArray F({N, N, N});
  double mean = 0, fmax = 0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    F.v[i] = f.v[i];
    mean += f.v[i];
    fmax = std::max(fmax, std::abs(f.v[i]));
  }
  mean /= static_cast<double>(f.v.size());
  if (std::abs(mean) > 1e-14 * std::max(fmax, 1e-300))
    warnings.push_back("right-hand side has nonzero mean; projected out");
  for (int a = 0; a < 3; ++a) F.fft(a, false);
  const double h2 = dom.h() * dom.h();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        if (i == 0 && j == 0 && k == 0) {
          F.at(0, 0, 0) = 0;
          continue;
        }
        F.at(i, j, k) *= h2 * lattice_symbol_ratio(id, {wavenumber_y(i, N), wavenumber_y(j, N), wavenumber_y(k, N)});
      }
  for (int a = 0; a < 3; ++a) F.fft(a, true);
  Field u(N);
  for (std::size_t i = 0; i < u.v.size(); ++i) u.v[i] = F.v[i].real();
  return u;
}

Field solve_one_unbounded(const DomainSpec& dom, const Field& f, const std::string& id, int ax) {
  const int N = dom.N;
  const int p1 = (ax + 1) % 3, p2 = (ax + 2) % 3;
  // Axis 0 of F is the unbounded axis, padded to 2N.
  CArray F({2 * N, N, N});
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        Index3 idx;
        idx[ax] = i;
        idx[p1] = j;
        idx[p2] = k;
        F.at(i, j, k) = f(idx[0], idx[1], idx[2]);
      }
  F.fft(1, false);
  F.fft(2, false);
  // Spectral columns depend on the folded, unordered wavenumber pair.
  const int H = N / 2 + 1;
  std::map<std::pair<int, int>, std::vector<cd>> kernels;
  Eigen::FFT<double> engine;
  auto fold = [N](int j) { return std::min(j, N - j); };
  std::vector<cd> col(2 * N), tmp(2 * N);
  for (int a = 0; a < H; ++a)
    for (int b = a; b < H; ++b) {
      auto g = axial_spectral_column(id, a, b, N, N);
      for (int m = 0; m < 2 * N; ++m) col[m] = m == N ? 0.0 : g[std::abs(padded_offset(m, N))];
      engine.fwd(tmp, col);
      kernels[{a, b}] = tmp;
    }
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      int a = fold(j), b = fold(k);
      if (a > b) std::swap(a, b);
      const auto& K = kernels[{a, b}];
      for (int m = 0; m < 2 * N; ++m) col[m] = F.at(m, j, k);
      engine.fwd(tmp, col);
      for (int m = 0; m < 2 * N; ++m) tmp[m] *= K[m];
      engine.inv(col, tmp);
      for (int m = 0; m < 2 * N; ++m) F.at(m, j, k) = col[m];
    }
  F.fft(1, true);
  F.fft(2, true);
  const double h2 = dom.h() * dom.h();
  Field u(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        Index3 idx;
        idx[ax] = i;
        idx[p1] = j;
        idx[p2] = k;
        u(idx[0], idx[1], idx[2]) = h2 * F.at(i, j, k).real();
      }
  return u;
}

Field solve_fully_unbounded(const DomainSpec& dom, const Field& f, const LgfTable& table) {
  const int N = dom.N;
  const int P = 2 * N;
  CArray K({P, P, P}), F({P, P, P});
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < P; ++j)
      for (int k = 0; k < P; ++k) {
        if (i == N || j == N || k == N) continue;
        K.at(i, j, k) = table.lookup(Index3{padded_offset(i, N), padded_offset(j, N), padded_offset(k, N)});
      }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) F.at(i, j, k) = f(i, j, k);
  for (int a = 0; a < 3; ++a) {
    K.fft(a, false);
    F.fft(a, false);
  }
  for (std::size_t i = 0; i < F.v.size(); ++i) F.v[i] *= K.v[i];
  for (int a = 0; a < 3; ++a) F.fft(a, true);
  const double h2 = dom.h() * dom.h();
  Field u(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) u(i, j, k) = h2 * F.at(i, j, k).real();
  return u;
}

}  // namespace

nlohmann::json to_json(const ResidualReport& r) {
  return {{"R_max", r.R_max}, {"n_res", {r.n_res[0], r.n_res[1], r.n_res[2]}}, {"region", r.region}};
}

ResidualReport residual_field(const std::string& id, const std::function<double(const Index3&)>& G, const Index3& lo,
                              const Index3& hi) {
  return residual_impl(id, G, lo, hi, {0, 0, 0});
}

ResidualReport residual_3unb(const LgfTable& table, int m) {
  if (table.dimension != 3) throw DomainError("residual_3unb needs a 3D table");
  return residual_impl(table.stencil_id, [&](const Index3& n) { return table.lookup(n); }, {0, 0, 0}, {m, m, m},
                       {0, 0, 0});
}

ResidualReport residual_1unb(const std::string& id, int N, int threads) {
  const auto ch = axial_characteristic(id);
  const RealSpaceLgf G = axial_dft_realize(id, N, N + ch.w_L, threads);
  return residual_impl(id, [&](const Index3& n) { return G(n[0], n[1], n[2]); }, {0, 0, 0}, {N - 1, N - 1, N - 1},
                       {0, N, N});
}

SolveResult poisson_solve(const DomainSpec& dom, const Field& f, const KernelSource& ks) {
  if (dom.N < 2 || f.N != dom.N) throw DomainError("field size does not match the domain");
  if (!is_split_id(ks.id) && !is_mehrstellen_id(ks.id)) throw DomainError("unknown stencil '" + ks.id + "'");
  int unbounded = 0, ax = -1;
  for (int a = 0; a < 3; ++a)
    if (dom.bc[a] == Bc::unbounded) {
      ++unbounded;
      ax = a;
    }
  SolveResult out;
  switch (unbounded) {
    case 0:
      out.u = solve_periodic(dom, f, ks.id, out.warnings);
      break;
    case 1:
      out.u = solve_one_unbounded(dom, f, ks.id, ax);
      break;
    case 3:
      if (!ks.table) throw CoverageError("fully unbounded solve needs an LGF table");
      if (ks.table->stencil_id != ks.id || ks.table->dimension != 3)
        throw DomainError("table does not match stencil '" + ks.id + "'");
      if (ks.table->extent < dom.N - 1)
        throw CoverageError("table extent " + std::to_string(ks.table->extent) + " does not cover N - 1 = " +
                            std::to_string(dom.N - 1));
      out.u = solve_fully_unbounded(dom, f, *ks.table);
      break;
    default:
      throw DomainError("two unbounded axes are not supported");
  }
  return out;
}

Field direct_convolution(const Field& f, const std::function<double(const Index3&)>& K) {
  const int N = f.N;
  Field u(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        long double acc = 0;
        for (int a = 0; a < N; ++a)
          for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c) acc += static_cast<long double>(K({i - a, j - b, k - c})) * f(a, b, c);
        u(i, j, k) = static_cast<double>(acc);
      }
  return u;
}

double u_per(double x, double L) { return std::exp(std::sin(8 * kPi * x / L)) - 1; }

double u_per_dd(double x, double L) {
  const double w = 8 * kPi / L, p = w * x;
  return w * w * (std::cos(p) * std::cos(p) - std::sin(p)) * std::exp(std::sin(p));
}

double u_unb(double x, double L) {
  const double s = 2 * x / L - 1;
  if (std::abs(s) >= 1) return 0;
  return std::exp(10 * (1 - 1 / (1 - s * s)));
}

double u_unb_dd(double x, double L) {
  const double s = 2 * x / L - 1;
  if (std::abs(s) >= 1) return 0;
  const double d = 1 - s * s;
  const double g1 = -20 * s / (d * d);
  const double g2 = -20 * (1 + 3 * s * s) / (d * d * d);
  return (2 / L) * (2 / L) * std::exp(10 * (1 - 1 / d)) * (g1 * g1 + g2);
}

std::vector<ConvergenceRow> convergence_study(const std::vector<std::string>& ids, DomainKind kind,
                                              const std::vector<int>& Ns, int threads) {
  std::vector<ConvergenceRow> rows;
  for (const auto& id : ids) {
    double prev = 0;
    int prevN = 0;
    for (int N : Ns) {
      DomainSpec dom;
      dom.N = N;
      dom.L = 1;
      const double h = dom.h();
      std::vector<double> x(N);
      for (int i = 0; i < N; ++i) x[i] = (i + 0.5) * h;
      // Per-axis factors and second derivatives.
      std::array<std::vector<double>, 3> u1, d1;
      for (int a = 0; a < 3; ++a) {
        const bool unb = kind == DomainKind::fully_unbounded || a == 0;
        dom.bc[a] = unb ? Bc::unbounded : Bc::periodic;
        for (int i = 0; i < N; ++i) {
          u1[a].push_back(unb ? u_unb(x[i], dom.L) : u_per(x[i], dom.L));
          d1[a].push_back(unb ? u_unb_dd(x[i], dom.L) : u_per_dd(x[i], dom.L));
        }
      }
      Field f(N), exact(N);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          for (int k = 0; k < N; ++k) {
            exact(i, j, k) = u1[0][i] * u1[1][j] * u1[2][k];
            f(i, j, k) = -(d1[0][i] * u1[1][j] * u1[2][k] + u1[0][i] * d1[1][j] * u1[2][k] + u1[0][i] * u1[1][j] * d1[2][k]);
          }
      KernelSource ks{id, nullptr};
      LgfTable table;
      if (kind == DomainKind::fully_unbounded) {
        if (!is_split_id(id)) throw DomainError("fully unbounded tables exist only for split stencils");
        const auto& st = split_stencil(id);
        IEvaluator ev(st, make_expansion_pack(st, 10, std::max(12, N - 1), 1e-15, 1e-15));
        table = build_table(ev, N - 1, 3, threads);
        ks.table = &table;
      }
      SolveResult sol = poisson_solve(dom, f, ks);
      double err = 0;
      for (std::size_t i = 0; i < f.v.size(); ++i) err = std::max(err, std::abs(sol.u.v[i] - exact.v[i]));
      ConvergenceRow row{id, N, err, std::numeric_limits<double>::quiet_NaN()};
      if (prevN > 0) row.order = std::log(prev / err) / std::log(static_cast<double>(N) / prevN);
      rows.push_back(row);
      prev = err;
      prevN = N;
    }
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << "stencil,N,eps_inf,order\n";
  char buf[64];
  for (const auto& r : rows) {
    os << r.stencil << ',' << r.N << ',';
    std::snprintf(buf, sizeof buf, "%.6e", r.eps_inf);
    os << buf << ',';
    if (std::isnan(r.order))
      os << "";
    else {
      std::snprintf(buf, sizeof buf, "%.4f", r.order);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace lgf
