#pragma once

// Finite-difference discretizations of -Laplacian on the unit lattice and
// their Fourier symbols.

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lgf/error.hpp"
#include "lgf/polynomial.hpp"

namespace lgf {

using Index3 = std::array<int, 3>;

/// One tap of a 3D stencil: offset and weight.
struct Tap {
  Index3 offset;
  double weight;
};

/// Symmetric, consistent 1D second-difference stencil, applied along each axis.
struct SplitStencil {
  std::string id;
  int order = 0;
  int width = 0;
  std::vector<Rational> coeffs;  // a_1 .. a_w
  Rational sigma_max;

  Rational a0() const;
  /// a_j for any integer j (a_{-j} = a_j, zero outside the support).
  Rational a(int j) const;
  double a_double(int j) const { return to_double(a(j)); }
};

/// Orbit representative (sorted non-negative indices) -> coefficient.
using OrbitMap = std::vector<std::pair<Index3, Rational>>;

/// Compact Mehrstellen pair (L, R) solving L u = R f.
struct MehrstellenPair {
  std::string id;
  int order = 0;
  OrbitMap lhs;
  OrbitMap rhs;
  int width_lhs = 0;
  int width_rhs = 0;
  MultiPoly<3> sigma_lhs_y;
  MultiPoly<3> sigma_rhs_y;
};

const SplitStencil& split_stencil(const std::string& id);
const MehrstellenPair& mehrstellen_pair(const std::string& id);
bool is_split_id(const std::string& id);
bool is_mehrstellen_id(const std::string& id);
const std::vector<std::string>& split_ids();
const std::vector<std::string>& mehrstellen_ids();

/// Every signed, permuted image of an index, without duplicates, in
/// lexicographic order.
std::vector<Index3> orbit(const Index3& rep);
/// Canonical orbit representative: absolute values sorted ascending.
Index3 canonical(const Index3& n);

/// sigma(k) = -4 sum_j a_j sin^2(j k / 2).
template <typename Scalar>
Scalar split_symbol(const SplitStencil& st, Scalar k) {
  using std::sin;
  Scalar acc = 0;
  for (int j = 1; j <= st.width; ++j) {
    Scalar s = sin(Scalar(j) * k / Scalar(2));
    acc += static_cast<Scalar>(to_long_double(st.coeffs[j - 1])) * s * s;
  }
  return Scalar(-4) * acc;
}

template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> split_symbol(
    const SplitStencil& st, const Eigen::ArrayBase<Derived>& k) {
  return k.unaryExpr([&st](typename Derived::Scalar v) { return split_symbol(st, v); });
}

/// sigma(k) = a_0 + 2 sum_j a_j cos(j k).
double split_symbol_trig(const SplitStencil& st, double k);

/// sigma as a polynomial in y = sin^2(k/2).
RationalPoly split_symbol_poly(const SplitStencil& st);
double split_symbol_y(const SplitStencil& st, double y);

/// q(lambda) = 2 sum_j a_j (T_j(lambda) - 1); the split characteristic
/// polynomial in the Chebyshev variable lambda = (z + 1/z)/2.
RationalPoly q_polynomial(const SplitStencil& st);

/// (sigma_L, sigma_R) from the stable polynomial form in y_i = sin^2(k_i/2).
std::pair<double, double> mehr_symbols(const MehrstellenPair& mp, const std::array<double, 3>& y);
/// (sigma_L, sigma_R) from the cosine form.
std::pair<double, double> mehr_symbols_trig(const MehrstellenPair& mp, const std::array<double, 3>& k);

/// Coefficients of the 1D scheme along axis 0 as polynomials in (y2, y3).
struct AxialCoefficients {
  int width_lhs = 0;
  int width_rhs = 0;
  std::vector<MultiPoly<2>> a;  // a_0 .. a_{w_L}
  std::vector<MultiPoly<2>> b;  // b_0 .. b_{w_R}
};
AxialCoefficients axial_coefficients(const MehrstellenPair& mp);

/// Orbit-expanded taps of the 3D operators.
std::vector<Tap> split_taps(const SplitStencil& st, int dim = 3);
std::vector<Tap> lhs_taps(const MehrstellenPair& mp);
std::vector<Tap> rhs_taps(const MehrstellenPair& mp);
/// L taps for any registered id; R taps (identity for split stencils).
std::vector<Tap> lhs_taps(const std::string& id);
std::vector<Tap> rhs_taps(const std::string& id);

enum class Boundary { parity, periodic, halo };

/// Read-only view of a dense 3D field with a per-axis out-of-box policy.
/// parity: index i < 0 reads |i|; periodic: wraps; halo: reading outside is
/// an error. Reads past the upper edge are errors under parity and halo.
class FieldView {
 public:
  FieldView(const double* data, Index3 extent, std::array<Boundary, 3> policy)
      : data_(data), extent_(extent), policy_(policy) {}

  double operator()(Index3 n) const;
  const Index3& extent() const { return extent_; }

 private:
  const double* data_;
  Index3 extent_;
  std::array<Boundary, 3> policy_;
};

/// sum over taps of weight * field(n + offset).
double apply_operator(const std::vector<Tap>& taps, const FieldView& field, const Index3& n);

}  // namespace lgf
