#pragma once

// Large-t expansion of I_{sigma,n}(t) for split stencils:
//   I(t) ~ (4 pi t)^{-1/2} sum_j b_j(n) t^{-j}
// and the polynomials g_j of the integrated products used for tails.

#include <string>
#include <vector>

#include "json.hpp"
#include "lgf/polynomial.hpp"
#include "lgf/stencil.hpp"

namespace lgf {

/// Exact expansion coefficients plus the thresholds they certify.
struct ExpansionPack {
  std::string stencil_id;
  int J = 0;
  std::vector<RationalPoly> b;   // b_0 .. b_J (b_J is the first neglected term)
  std::vector<MultiPoly<3>> g3;  // g_0 .. g_J, 3D tail
  std::vector<MultiPoly<2>> g2;  // g_0 .. g_J, 2D relative tail (g_0 = 0)
  double eps_a = 1e-15;
  double eps_r = 1e-15;
  int n_max = 0;
  double t_min = 0;
  double T_min = 0;  // 3D tail start
  double T_2d = 0;   // 2D tail start
};

struct Thresholds {
  double t_min;
  double T_min;
};

/// b_0 .. b_{count-1} as even polynomials in n.
std::vector<RationalPoly> build_b_coefficients(const SplitStencil& st, int count);

/// g_j(n) = 1/(2j+1) sum_{l1+l2+l3=j} b_l1(n1) b_l2(n2) b_l3(n3), j < count.
std::vector<MultiPoly<3>> build_g3(const std::vector<RationalPoly>& b, int count);

/// g_j(n) = 1/j sum_{l1+l2=j} [b_l1(n1) b_l2(n2) - b_l1(0) b_l2(0)], j < count
/// (g_0 is the zero polynomial).
std::vector<MultiPoly<2>> build_g2(const std::vector<RationalPoly>& b, int count);

/// Thresholds from the first neglected terms b_J and g_J. Requires b and g3
/// to hold at least J + 1 entries.
Thresholds select_thresholds(const ExpansionPack& pack, int J, int n_max, double eps_a, double eps_r);

/// Start of the 2D tail: first neglected term (1/4pi)|g2_J| T^-J <= eps_a,
/// never below t_min.
double select_threshold_2d(const ExpansionPack& pack, int J, int n_max, double eps_a, double t_min);

/// Builds b, g3, g2 with J + 1 entries and fills in all thresholds.
ExpansionPack make_expansion_pack(const SplitStencil& st, int J, int n_max, double eps_a, double eps_r);

/// Exact value of each b_j at integer n, rounded once.
std::vector<double> b_values(const ExpansionPack& pack, long n, int count);

nlohmann::json to_json(const ExpansionPack& pack);
ExpansionPack expansion_pack_from_json(const nlohmann::json& j);

}  // namespace lgf
