#pragma once

// LGFs on domains with one unbounded direction: closed forms for the
// partially transformed G(n; k2, k3) by residues of
//   G(n) = (1 / 2 pi i) oint z^{n-m} p_R(z) / p_L(z) dz,
// and the real-space LGF by an inverse DFT over (k2, k3).

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "json.hpp"
#include "lgf/polynomial.hpp"
#include "lgf/stencil.hpp"

namespace lgf {

using cld = std::complex<long double>;

/// The 1D reduced scheme along the unbounded axis. For split stencils the
/// parameter enters through a_0 = a_0 + sigma(y2) + sigma(y3) and b_0 = 1.
struct AxialCharacteristic {
  std::string id;
  int w_L = 0, w_R = 0, m = 0;
  std::vector<MultiPoly<2>> a;  // a_0 .. a_{w_L}
  std::vector<MultiPoly<2>> b;  // b_0 .. b_{w_R}
  /// Coefficients of q(lambda; y) = a_0 + 2 sum_j a_j T_j(lambda), ascending.
  std::vector<MultiPoly<2>> q;
};
AxialCharacteristic axial_characteristic(const std::string& id);

enum class RootClass { all_real_distinct, conjugate_pairs, near_unity, near_repeated, degenerate_leading };
std::string to_string(RootClass c);

struct RootSet {
  std::vector<std::complex<double>> lambdas;
  std::vector<std::complex<double>> roots;  // |r| <= 1, one per lambda
  RootClass classification = RootClass::all_real_distinct;
  double rho = 0, theta = 0;  // polar data of the first conjugate pair
};

struct AxialOptions {
  /// Full relative precision for 0 < c < 1e-3: the root near unity is
  /// carried as u = lambda - 1 and r^n as exp(n log r).
  bool stable_small_c = false;
};

/// Regime thresholds.
inline constexpr double kSmallC = 1e-3;
inline constexpr double kTaylorWindow = 1e-5;

/// Roots of q(lambda) + c and the matching r = lambda - sqrt(lambda-1) sqrt(lambda+1).
RootSet q_roots_split(const SplitStencil& st, double c);
/// Root of the Mehrstellen characteristic polynomial (w_L = 1).
RootSet mehr_roots(const MehrstellenPair& mp, double y2, double y3);

double axial_eval_split(const SplitStencil& st, long n, double c, const AxialOptions& opt = {});
/// G(0; c) .. G(count - 1; c) sharing one root computation.
std::vector<double> axial_eval_split_range(const SplitStencil& st, double c, int count, const AxialOptions& opt = {});

double axial_eval_mehr(const MehrstellenPair& mp, long n, double y2, double y3);
std::vector<double> axial_eval_mehr_range(const MehrstellenPair& mp, double y2, double y3, int count);

/// Expansion of G about the repeated-root parameter c*:
///   G^(j)(n) = r0^n sum_k a[j][k] n^k + rho^n (cos(n theta) sum_k u[j][k] n^k + sin(n theta) sum_k v[j][k] n^k).
struct TaylorPack {
  std::string stencil_id;
  double c_star = 0;
  double r_bar = 0;
  double rho = 0, theta = 0;  // zero when there is no conjugate pair
  std::vector<std::vector<double>> a, u, v;  // orders j = 0..3
};

double locate_c_star(const SplitStencil& st);
TaylorPack derive_taylor_pack(const SplitStencil& st);
/// Cached pack for LGF4/LGF8.
const TaylorPack& taylor_pack(const SplitStencil& st);
/// G^(j)(n, c*) from a pack.
double taylor_derivative(const TaylorPack& tp, int j, long n);
/// sum_{j<=3} delta^j / j! G^(j)(n, c*).
double taylor_eval(const TaylorPack& tp, long n, double delta);
/// Pair term of the factorized (divided-difference) form, usable at any c
/// with a real colliding pair; exposed for the seam tests.
double axial_eval_split_factorized(const SplitStencil& st, long n, double c);

nlohmann::json to_json(const TaylorPack& tp);

/// y = sin^2(pi j / N) in a form exact at the symmetric points.
double wavenumber_y(int j, int N);
/// Partially transformed G(n1, k2_j, k3_l) for n1 in [0, rows).
std::vector<double> axial_spectral_column(const std::string& id, int j2, int j3, int N, int rows);

/// Real-space LGF on rows x N x N (row index n1 >= 0; axes 2 and 3 periodic).
struct RealSpaceLgf {
  std::string id;
  int N = 0, rows = 0;
  std::vector<double> data;
  double operator()(int n1, int n2, int n3) const;
};
RealSpaceLgf axial_dft_realize(const std::string& id, int N, int rows = 0, int threads = 1);

/// CSV "n,k2_index,k3_index,value" for n1 in [0, rows) over all (k2, k3).
std::string spectral_csv(const std::string& id, int N, int rows);

}  // namespace lgf
