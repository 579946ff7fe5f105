#include <algorithm>
#include <cmath>

#include "softwall/simd/kernels.hpp"

namespace softwall::simd::scalar {

double sum_abs2(std::span<const cplx> z) {
  double acc = 0.0;
  for (const cplx& v : z) acc += v.real() * v.real() + v.imag() * v.imag();
  return acc;
}

std::size_t count_below(std::span<const double> v, double threshold) {
  std::size_t c = 0;
  for (double x : v) c += (x < threshold) ? 1 : 0;
  return c;
}

std::size_t count_in_open(std::span<const double> v, double lo, double hi) {
  std::size_t c = 0;
  for (double x : v) c += (x > lo && x < hi) ? 1 : 0;
  return c;
}

std::size_t count_near(std::span<const double> v, double center, double tol) {
  std::size_t c = 0;
  for (double x : v) c += (std::abs(x - center) <= tol) ? 1 : 0;
  return c;
}

void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cplx{y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr};
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace softwall::simd::scalar
