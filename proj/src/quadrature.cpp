#include "lgf/quadrature.hpp"

namespace lgf {

namespace {

cplx ipow(cplx z, int k) {
  cplx r = 1;
  for (; k > 0; k >>= 1, z *= z)
    if (k & 1) r *= z;
  return r;
}

}  // namespace

std::vector<cplx> contour_derivatives(const std::vector<long double>& p, int n, int w, cplx center,
                                      long double radius, int count) {
  if (count < 1) throw DomainError("contour_derivatives needs count >= 1");
  std::vector<cplx> out(count);
  long double fact = 1;
  for (int j = 0; j < count; ++j) {
    if (j > 0) fact *= j;
    const int power = n + (j + 1) * w - 1;
    if (power < 0) throw DomainError("contour_derivatives needs n + (j + 1) w >= 1");
    auto f = [&](cplx z) {
      cplx pz = 0;
      for (auto it = p.rbegin(); it != p.rend(); ++it) pz = pz * z + *it;
      return ipow(z, power) / ipow(pz, j + 1);
    };
    cplx v = contour_integral(f, center, radius, 1e-18L, 1 << 18);
    out[j] = (j % 2 ? -1.0L : 1.0L) * fact * v;
  }
  return out;
}

std::vector<double> contour_derivatives(const std::vector<long double>& p, int n, int w, long double center,
                                        long double radius, int count) {
  std::vector<cplx> v = contour_derivatives(p, n, w, cplx(center, 0), radius, count);
  std::vector<double> out(count);
  for (int j = 0; j < count; ++j) out[j] = static_cast<double>(v[j].real());
  return out;
}

}  // namespace lgf
