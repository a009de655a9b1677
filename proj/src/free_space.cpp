#include "lgf/free_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include <boost/crc.hpp>
#include <boost/math/constants/constants.hpp>

#include "lgf/quadrature.hpp"

namespace lgf {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSubdivisions = 20000;

int max_entry(const std::vector<Index3>& tuples) {
  int m = 0;
  for (const auto& n : tuples)
    for (int v : n) m = std::max(m, std::abs(v));
  return m;
}

// Geometric breakpoints a*2^k strictly inside (lo, hi).
std::vector<double> geometric_breaks(double start, double lo, double hi) {
  std::vector<double> out;
  for (double x = start; x < hi; x *= 2)
    if (x > lo) out.push_back(x);
  return out;
}

void check_tuples(const IEvaluator& ev, int m) {
  if (m > ev.pack().n_max) throw DomainError("index beyond the n_max certified by the expansion pack");
}

}  // namespace

IEvaluator::IEvaluator(const SplitStencil& st, ExpansionPack pack) : st_(st), pack_(std::move(pack)) {
  if (pack_.stencil_id != st_.id) throw DomainError("expansion pack belongs to stencil " + pack_.stencil_id);
  if (static_cast<int>(pack_.b.size()) < pack_.J || pack_.t_min <= 0)
    throw DomainError("expansion pack is missing coefficients or thresholds");
  bvals_.resize(static_cast<std::size_t>(pack_.n_max + 1) * pack_.J);
  for (int n = 0; n <= pack_.n_max; ++n) {
    std::vector<double> row = b_values(pack_, n, pack_.J);
    std::copy(row.begin(), row.end(), bvals_.begin() + static_cast<std::ptrdiff_t>(n) * pack_.J);
  }
}

void IEvaluator::quadrature_values(double t, int count, double* out) const {
  if (t < 0) throw DomainError("I_n(t) requires t >= 0");
  if (t == 0) {
    for (int n = 0; n < count; ++n) out[n] = n == 0 ? 1.0 : 0.0;
    return;
  }
  int m = 16;
  while (m < 4 * count) m *= 2;
  std::vector<double> prev(count), cur(count), f, cosines;
  bool have_prev = false;
  for (;; m *= 2) {
    if (m > (1 << 22)) throw QuadratureError("trapezoid rule for I_n(t) did not converge", cur[0], 0);
    // Samples on [0, pi] using the evenness of the integrand.
    const int half = m / 2;
    f.resize(half + 1);
    for (int i = 0; i <= half; ++i) f[i] = std::exp(-t * split_symbol(st_, 2 * kPi * i / m));
    cosines.resize(m);
    for (int i = 0; i < m; ++i) cosines[i] = std::cos(2 * kPi * i / m);
    for (int n = 0; n < count; ++n) {
      double acc = 0;
      long idx = 0;
      for (int i = 1; i < half; ++i) {
        idx += n;
        if (idx >= m) idx -= m;
        acc += f[i] * cosines[idx];
      }
      cur[n] = (f[0] + 2 * acc + (n % 2 ? -f[half] : f[half])) / m;
    }
    if (have_prev) {
      double worst = 0;
      for (int n = 0; n < count; ++n) worst = std::max(worst, std::abs(cur[n] - prev[n]));
      // Exponential convergence: once consecutive levels agree to rounding
      // level relative to I_0 (the largest value), the finer level carries
      // only rounding error.
      if (worst <= 8 * kEps * cur[0]) break;
    }
    prev.swap(cur);
    have_prev = true;
  }
  std::copy(cur.begin(), cur.end(), out);
}

void IEvaluator::series_values(double t, int count, double* out) const {
  if (count > pack_.n_max + 1) throw DomainError("series for I_n(t) is not certified beyond n_max");
  const double inv = 1 / t;
  const double pre = 1 / std::sqrt(4 * kPi * t);
  for (int n = 0; n < count; ++n) {
    const double* b = b_row(n);
    double acc = b[pack_.J - 1];
    for (int j = pack_.J - 2; j >= 0; --j) acc = acc * inv + b[j];
    out[n] = pre * acc;
  }
}

double IEvaluator::operator()(long n, double t) const {
  n = std::abs(n);
  if (n > std::numeric_limits<int>::max() / 8) throw DomainError("index too large");
  std::vector<double> v(n + 1);
  if (t <= pack_.t_min) {
    quadrature_values(t, static_cast<int>(n + 1), v.data());
  } else {
    if (n > pack_.n_max) throw DomainError("series for I_n(t) is not certified beyond n_max");
    series_values(t, static_cast<int>(n + 1), v.data());
  }
  return v[n];
}

double I_eval(const IEvaluator& ev, long n, double t) { return ev(n, t); }

double lgf3_tail(const IEvaluator& ev, const Index3& n, double T) {
  const auto& p = ev.pack();
  const std::array<Rational, 3> x{Rational(std::abs(n[0])), Rational(std::abs(n[1])), Rational(std::abs(n[2]))};
  double acc = 0;
  for (int j = p.J - 1; j >= 0; --j) acc = acc / T + to_double(p.g3[j].eval_exact(x));
  return acc / std::sqrt(16 * kPi * kPi * kPi * T);
}

namespace {

std::vector<double> product_integral(const IEvaluator& ev, const std::vector<Index3>& tuples, double a, double b,
                                     bool series) {
  const int count = max_entry(tuples) + 1;
  const int dim = static_cast<int>(tuples.size());
  std::vector<double> I(count);
  auto f = [&](double t, double* out) {
    if (series)
      ev.series_values(t, count, I.data());
    else
      ev.quadrature_values(t, count, I.data());
    for (int i = 0; i < dim; ++i) {
      const auto& n = tuples[i];
      out[i] = I[std::abs(n[0])] * I[std::abs(n[1])] * I[std::abs(n[2])];
    }
  };
  const auto& p = ev.pack();
  std::vector<double> breaks = series ? geometric_breaks(a, a, b) : geometric_breaks(0.125, a, b);
  QuadVecResult r = integrate_1d_vec(f, dim, a, b, p.eps_a, p.eps_r, breaks, kMaxSubdivisions);
  return {r.value.data(), r.value.data() + dim};
}

}  // namespace

std::vector<double> lgf3_series_segment(const IEvaluator& ev, const std::vector<Index3>& tuples, double a, double b) {
  if (a < ev.pack().t_min) throw DomainError("series segment must start at or beyond t_min");
  check_tuples(ev, max_entry(tuples));
  return product_integral(ev, tuples, a, b, true);
}

Lgf3Parts lgf3_parts(const IEvaluator& ev, const std::vector<Index3>& tuples) {
  const auto& p = ev.pack();
  check_tuples(ev, max_entry(tuples));
  Lgf3Parts parts;
  if (tuples.empty()) return parts;
  parts.near = product_integral(ev, tuples, 0, p.t_min, false);
  if (p.T_min > p.t_min)
    parts.middle = product_integral(ev, tuples, p.t_min, p.T_min, true);
  else
    parts.middle.assign(tuples.size(), 0.0);
  parts.tail.resize(tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) parts.tail[i] = lgf3_tail(ev, tuples[i], p.T_min);
  return parts;
}

std::vector<double> lgf3_eval_many(const IEvaluator& ev, const std::vector<Index3>& tuples) {
  std::vector<Index3> canon(tuples.size());
  std::transform(tuples.begin(), tuples.end(), canon.begin(), canonical);
  Lgf3Parts parts = lgf3_parts(ev, canon);
  std::vector<double> out(canon.size());
  for (std::size_t i = 0; i < canon.size(); ++i) out[i] = parts.near[i] + parts.middle[i] + parts.tail[i];
  return out;
}

double lgf3_eval(const IEvaluator& ev, const Index3& n) { return lgf3_eval_many(ev, {n})[0]; }

std::vector<double> lgf2_eval_many(const IEvaluator& ev, const std::vector<Index2>& pairs) {
  const auto& p = ev.pack();
  std::vector<Index2> canon(pairs.size());
  int m = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    canon[i] = {std::abs(pairs[i][0]), std::abs(pairs[i][1])};
    if (canon[i][0] > canon[i][1]) std::swap(canon[i][0], canon[i][1]);
    m = std::max(m, canon[i][1]);
  }
  check_tuples(ev, m);
  const int dim = static_cast<int>(canon.size());
  std::vector<double> out(dim, 0.0);
  if (dim == 0) return out;
  const int count = m + 1;
  std::vector<double> I(count);
  auto integrand = [&](bool series) {
    return [&, series](double t, double* o) {
      if (series)
        ev.series_values(t, count, I.data());
      else
        ev.quadrature_values(t, count, I.data());
      const double base = I[0] * I[0];
      for (int i = 0; i < dim; ++i) o[i] = I[canon[i][0]] * I[canon[i][1]] - base;
    };
  };
  QuadVecResult near = integrate_1d_vec(integrand(false), dim, 0, p.t_min, p.eps_a, p.eps_r,
                                        geometric_breaks(0.125, 0, p.t_min), kMaxSubdivisions);
  for (int i = 0; i < dim; ++i) out[i] += near.value[i];
  if (p.T_2d > p.t_min) {
    QuadVecResult mid = integrate_1d_vec(integrand(true), dim, p.t_min, p.T_2d, p.eps_a, p.eps_r,
                                         geometric_breaks(p.t_min, p.t_min, p.T_2d), kMaxSubdivisions);
    for (int i = 0; i < dim; ++i) out[i] += mid.value[i];
  }
  for (int i = 0; i < dim; ++i) {
    const std::array<Rational, 2> x{Rational(canon[i][0]), Rational(canon[i][1])};
    double acc = 0;
    for (int j = p.J - 1; j >= 1; --j) acc = (acc + to_double(p.g2[j].eval_exact(x))) / p.T_2d;
    out[i] += acc / (4 * kPi);
  }
  return out;
}

double lgf2_eval(const IEvaluator& ev, const Index2& n) { return lgf2_eval_many(ev, {n})[0]; }

std::vector<int> canonical_key(const std::vector<int>& n) {
  std::vector<int> k(n.size());
  std::transform(n.begin(), n.end(), k.begin(), [](int v) { return std::abs(v); });
  std::sort(k.begin(), k.end());
  return k;
}

std::vector<std::vector<int>> canonical_tuples(int extent, int dimension, double radius) {
  if (dimension != 2 && dimension != 3) throw DomainError("table dimension must be 2 or 3");
  if (extent < 0) throw DomainError("table extent must be non-negative");
  std::vector<std::vector<int>> out;
  auto keep = [&](long r2) { return radius <= 0 || static_cast<double>(r2) < radius * radius; };
  for (int a = 0; a <= extent; ++a)
    for (int b = a; b <= extent; ++b) {
      if (dimension == 2) {
        if (keep(long(a) * a + long(b) * b)) out.push_back({a, b});
        continue;
      }
      for (int c = b; c <= extent; ++c)
        if (keep(long(a) * a + long(b) * b + long(c) * c)) out.push_back({a, b, c});
    }
  return out;
}

double LgfTable::lookup(const std::vector<int>& n) const {
  if (static_cast<int>(n.size()) != dimension) throw DomainError("index dimension does not match the table");
  auto it = values.find(canonical_key(n));
  if (it == values.end()) {
    std::ostringstream os;
    os << "index (";
    for (std::size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
    os << ") lies outside the table extent " << extent;
    throw CoverageError(os.str());
  }
  return it->second;
}

LgfTable build_table(const IEvaluator& ev, int extent, int dimension, int threads, std::uint64_t timestamp) {
  const auto& p = ev.pack();
  if (extent > p.n_max) throw DomainError("table extent exceeds the n_max certified by the expansion pack");
  auto tuples = canonical_tuples(extent, dimension);
  LgfTable t;
  t.stencil_id = ev.stencil().id;
  t.dimension = dimension;
  t.extent = extent;
  t.J = p.J;
  t.eps_a = p.eps_a;
  t.eps_r = p.eps_r;
  t.t_min = p.t_min;
  t.T_min = dimension == 3 ? p.T_min : p.T_2d;
  t.timestamp = timestamp;

  constexpr std::size_t chunk = 512;
  const std::size_t chunks = (tuples.size() + chunk - 1) / chunk;
  std::vector<double> values(tuples.size());
  std::vector<std::exception_ptr> errors(chunks);
  auto work = [&](std::size_t c) {
    try {
      const std::size_t lo = c * chunk, hi = std::min(tuples.size(), lo + chunk);
      std::vector<double> v;
      if (dimension == 3) {
        std::vector<Index3> batch;
        for (std::size_t i = lo; i < hi; ++i) batch.push_back({tuples[i][0], tuples[i][1], tuples[i][2]});
        v = lgf3_eval_many(ev, batch);
      } else {
        std::vector<Index2> batch;
        for (std::size_t i = lo; i < hi; ++i) batch.push_back({tuples[i][0], tuples[i][1]});
        v = lgf2_eval_many(ev, batch);
      }
      std::copy(v.begin(), v.end(), values.begin() + static_cast<std::ptrdiff_t>(lo));
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(chunks)));
  if (nthreads == 1) {
    for (std::size_t c = 0; c < chunks; ++c) work(c);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nthreads; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += nthreads) work(c);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (std::size_t i = 0; i < tuples.size(); ++i) t.values.emplace(tuples[i], values[i]);
  return t;
}

namespace {

constexpr std::uint16_t kFormatVersion = 1;

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  std::uint64_t bits = 0;
  if constexpr (std::is_floating_point_v<T>) {
    static_assert(sizeof(T) == 8);
    std::memcpy(&bits, &v, 8);
  } else {
    bits = static_cast<std::uint64_t>(v);
  }
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > b_.size()) throw FormatError("table file is truncated");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= std::uint64_t(b_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    if constexpr (std::is_floating_point_v<T>) {
      T v;
      std::memcpy(&v, &bits, 8);
      return v;
    } else {
      return static_cast<T>(bits);
    }
  }
  std::string bytes(std::size_t n) {
    if (pos_ + n > b_.size()) throw FormatError("table file is truncated");
    std::string s(b_.begin() + pos_, b_.begin() + pos_ + n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32(const std::uint8_t* data, std::size_t n) {
  boost::crc_32_type crc;
  crc.process_bytes(data, n);
  return crc.checksum();
}

}  // namespace

std::vector<std::uint8_t> serialize_table(const LgfTable& t) {
  if (t.stencil_id.size() > 8) throw DomainError("stencil id longer than 8 bytes");
  if (t.values.size() != canonical_tuples(t.extent, t.dimension).size())
    throw DomainError("only complete tables can be stored");
  std::vector<std::uint8_t> out{'L', 'G', 'F', 'T'};
  put<std::uint16_t>(out, kFormatVersion);
  std::string id = t.stencil_id;
  id.resize(8, '\0');
  out.insert(out.end(), id.begin(), id.end());
  put<std::uint8_t>(out, static_cast<std::uint8_t>(t.dimension));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(t.extent));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(t.J));
  put(out, t.eps_a);
  put(out, t.eps_r);
  put(out, t.t_min);
  put(out, t.T_min);
  put<std::uint64_t>(out, t.timestamp);
  const std::size_t payload = out.size();
  for (const auto& [k, v] : t.values) put(out, v);
  put<std::uint32_t>(out, crc32(out.data() + payload, out.size() - payload));
  return out;
}

LgfTable deserialize_table(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  if (r.bytes(4) != "LGFT") throw FormatError("not an LGF table (bad magic)");
  if (r.get<std::uint16_t>() != kFormatVersion) throw FormatError("unsupported table format version");
  LgfTable t;
  std::string id = r.bytes(8);
  t.stencil_id = id.substr(0, id.find('\0'));
  t.dimension = r.get<std::uint8_t>();
  t.extent = static_cast<int>(r.get<std::uint32_t>());
  t.J = static_cast<int>(r.get<std::uint32_t>());
  t.eps_a = r.get<double>();
  t.eps_r = r.get<double>();
  t.t_min = r.get<double>();
  t.T_min = r.get<double>();
  t.timestamp = r.get<std::uint64_t>();
  if (t.dimension != 2 && t.dimension != 3) throw FormatError("table dimension must be 2 or 3");
  if (t.extent > 1 << 16) throw FormatError("table extent is implausibly large");
  auto tuples = canonical_tuples(t.extent, t.dimension);
  const std::size_t payload = r.pos();
  if (bytes.size() != payload + 8 * tuples.size() + 4) throw FormatError("table payload size does not match header");
  for (const auto& k : tuples) t.values.emplace(k, r.get<double>());
  const std::uint32_t expect = crc32(bytes.data() + payload, 8 * tuples.size());
  if (r.get<std::uint32_t>() != expect) throw FormatError("table checksum mismatch");
  return t;
}

void write_table(const LgfTable& t, const std::string& path) {
  auto bytes = serialize_table(t);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("failed writing " + path);
}

LgfTable read_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize_table(bytes);
}

std::string table_csv(const LgfTable& t) {
  std::ostringstream os;
  os << (t.dimension == 3 ? "n1,n2,n3,value\n" : "n1,n2,value\n");
  os << std::setprecision(17);
  for (const auto& [k, v] : t.values) {
    for (int i : k) os << i << ',';
    os << v << '\n';
  }
  return os.str();
}

}  // namespace lgf
