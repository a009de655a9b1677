#pragma once

// Fully unbounded LGFs of dimension-split stencils:
//   G(n) = int_0^inf I_{n1}(t) I_{n2}(t) I_{n3}(t) dt,
//   I_n(t) = (1 / 2 pi) int_{-pi}^{pi} exp(-t sigma(k)) cos(n k) dk,
// split into quadrature on [0, t_min], series-assisted quadrature on
// [t_min, T_min] and an analytic tail. The 2D variant is the relative LGF
// G(n) - G(0).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lgf/series.hpp"
#include "lgf/stencil.hpp"

namespace lgf {

/// Immutable evaluator of I_n(t); shareable across threads.
class IEvaluator {
 public:
  IEvaluator(const SplitStencil& st, ExpansionPack pack);

  const SplitStencil& stencil() const { return st_; }
  const ExpansionPack& pack() const { return pack_; }

  /// I_0 .. I_{count-1} at t by the periodic trapezoid rule (any t >= 0).
  void quadrature_values(double t, int count, double* out) const;
  /// I_0 .. I_{count-1} at t > 0 from the truncated large-t series;
  /// count <= n_max + 1.
  void series_values(double t, int count, double* out) const;
  /// Regime switch at t_min. Throws DomainError for |n| > n_max beyond t_min.
  double operator()(long n, double t) const;

  /// Double-rounded b_j(n), j < J, for 0 <= n <= n_max.
  const double* b_row(int n) const { return &bvals_[static_cast<std::size_t>(n) * pack_.J]; }

 private:
  SplitStencil st_;
  ExpansionPack pack_;
  std::vector<double> bvals_;
};

double I_eval(const IEvaluator& ev, long n, double t);

/// The three additive pieces of G for a batch of canonical tuples; the
/// quadratures share one subdivision across the batch.
struct Lgf3Parts {
  std::vector<double> near;    // [0, t_min]
  std::vector<double> middle;  // [t_min, T_min]
  std::vector<double> tail;    // [T_min, inf)
};

Lgf3Parts lgf3_parts(const IEvaluator& ev, const std::vector<Index3>& tuples);
/// Analytic tail from T to infinity.
double lgf3_tail(const IEvaluator& ev, const Index3& n, double T);
/// Series-regime quadrature of the product over [a, b], a >= t_min.
std::vector<double> lgf3_series_segment(const IEvaluator& ev, const std::vector<Index3>& tuples, double a, double b);

double lgf3_eval(const IEvaluator& ev, const Index3& n);
std::vector<double> lgf3_eval_many(const IEvaluator& ev, const std::vector<Index3>& tuples);

using Index2 = std::array<int, 2>;
double lgf2_eval(const IEvaluator& ev, const Index2& n);
std::vector<double> lgf2_eval_many(const IEvaluator& ev, const std::vector<Index2>& pairs);

/// Sorted non-negative tuples with entries <= extent, lexicographic. With
/// radius > 0 only tuples with |n| < radius are kept.
std::vector<std::vector<int>> canonical_tuples(int extent, int dimension, double radius = 0);
std::vector<int> canonical_key(const std::vector<int>& n);

struct LgfTable {
  std::string stencil_id;
  int dimension = 3;
  int extent = 0;
  int J = 0;
  double eps_a = 0, eps_r = 0, t_min = 0, T_min = 0;
  std::uint64_t timestamp = 0;
  std::map<std::vector<int>, double> values;

  /// Any signed, permuted index; throws CoverageError outside the box.
  double lookup(const std::vector<int>& n) const;
  double lookup(const Index3& n) const { return lookup(std::vector<int>(n.begin(), n.end())); }
};

/// Evaluates every canonical tuple of the box. Work is split into fixed
/// chunks so results do not depend on the thread count.
LgfTable build_table(const IEvaluator& ev, int extent, int dimension, int threads = 1, std::uint64_t timestamp = 0);

std::vector<std::uint8_t> serialize_table(const LgfTable& t);
LgfTable deserialize_table(const std::vector<std::uint8_t>& bytes);
void write_table(const LgfTable& t, const std::string& path);
LgfTable read_table(const std::string& path);
std::string table_csv(const LgfTable& t);

}  // namespace lgf
