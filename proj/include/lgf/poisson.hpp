#pragma once

// Residual checks of computed LGFs and LGF-based Poisson solves on grids
// with periodic and unbounded axes.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lgf/free_space.hpp"
#include "lgf/stencil.hpp"

namespace lgf {

struct ResidualReport {
  double R_max = 0;
  Index3 n_res{0, 0, 0};
  std::string region;
};
nlohmann::json to_json(const ResidualReport& r);

/// max |[L G](n) - [R delta](n)| over the box [lo, hi] (first maximum in
/// lexicographic order). G may throw CoverageError for indices it lacks.
ResidualReport residual_field(const std::string& id, const std::function<double(const Index3&)>& G, const Index3& lo,
                              const Index3& hi);
/// Residual of a fully unbounded table over [0, m]^3.
ResidualReport residual_3unb(const LgfTable& table, int m);
/// Residual of the realized one-unbounded LGF over rows [0, N) and the periodic N x N plane.
ResidualReport residual_1unb(const std::string& id, int N, int threads = 1);

enum class Bc { periodic, unbounded };

struct DomainSpec {
  int N = 0;
  double L = 1;
  std::array<Bc, 3> bc{Bc::periodic, Bc::periodic, Bc::periodic};
  double h() const { return L / N; }
};

/// Dense N^3 field, index (i, j, k) at (i * N + j) * N + k.
struct Field {
  int N = 0;
  std::vector<double> v;
  explicit Field(int n = 0) : N(n), v(static_cast<std::size_t>(n) * n * n, 0.0) {}
  double& operator()(int i, int j, int k) { return v[(static_cast<std::size_t>(i) * N + j) * N + k]; }
  double operator()(int i, int j, int k) const { return v[(static_cast<std::size_t>(i) * N + j) * N + k]; }
};

/// Where the solver takes G from: the stencil id and, for fully unbounded
/// domains, a precomputed table covering [0, N-1]^3.
struct KernelSource {
  std::string id;
  const LgfTable* table = nullptr;
};

struct SolveResult {
  Field u;
  std::vector<std::string> warnings;
};

/// Solves L u = h^2 R f (the lattice form of -lap u = f). Fully periodic
/// domains divide by the symbol, one unbounded axis uses the axial closed
/// forms, three unbounded axes use the table; unbounded axes are convolved
/// with Hockney-Eastwood doubling.
SolveResult poisson_solve(const DomainSpec& dom, const Field& f, const KernelSource& ks);

/// Aperiodic convolution u(n) = sum_m K(n - m) f(m) on N^3 by direct
/// summation, for checking the FFT path.
Field direct_convolution(const Field& f, const std::function<double(const Index3&)>& K);

/// Manufactured solutions on [0, L] and their second derivatives.
double u_per(double x, double L);
double u_per_dd(double x, double L);
double u_unb(double x, double L);
double u_unb_dd(double x, double L);

enum class DomainKind { one_unbounded, fully_unbounded };

struct ConvergenceRow {
  std::string stencil;
  int N = 0;
  double eps_inf = 0;
  double order = 0;  // log2(eps(N/2) / eps(N)); NaN on the first row
};

/// Max-norm error of the manufactured-solution solve at each N.
/// One unbounded: axis 0 unbounded, axes 1, 2 periodic.
std::vector<ConvergenceRow> convergence_study(const std::vector<std::string>& ids, DomainKind kind,
                                              const std::vector<int>& Ns, int threads = 1);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace lgf
