#include "softwall/simd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace softwall::simd::avx2 {

bool compiled() { return true; }

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline std::size_t popcount_mask(__m256d m) {
  return static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(m))));
}

}  // namespace

double sum_abs2(std::span<const cplx> z) {
  // std::complex<double> is layout-compatible with double[2].
  const double* p = reinterpret_cast<const double*>(z.data());
  const std::size_t n = 2 * z.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a = _mm256_loadu_pd(p + i);
    const __m256d b = _mm256_loadu_pd(p + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += p[i] * p[i];
  return acc;
}

std::size_t count_below(std::span<const double> v, double threshold) {
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= v.size(); i += 4) {
    c += popcount_mask(_mm256_cmp_pd(_mm256_loadu_pd(v.data() + i), t, _CMP_LT_OQ));
  }
  for (; i < v.size(); ++i) c += (v[i] < threshold) ? 1 : 0;
  return c;
}

std::size_t count_in_open(std::span<const double> v, double lo, double hi) {
  const __m256d l = _mm256_set1_pd(lo);
  const __m256d h = _mm256_set1_pd(hi);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= v.size(); i += 4) {
    const __m256d x = _mm256_loadu_pd(v.data() + i);
    c += popcount_mask(_mm256_and_pd(_mm256_cmp_pd(x, l, _CMP_GT_OQ), _mm256_cmp_pd(x, h, _CMP_LT_OQ)));
  }
  for (; i < v.size(); ++i) c += (v[i] > lo && v[i] < hi) ? 1 : 0;
  return c;
}

std::size_t count_near(std::span<const double> v, double center, double tol) {
  const __m256d ctr = _mm256_set1_pd(center);
  const __m256d tl = _mm256_set1_pd(tol);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= v.size(); i += 4) {
    const __m256d d = _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(v.data() + i), ctr));
    c += popcount_mask(_mm256_cmp_pd(d, tl, _CMP_LE_OQ));
  }
  for (; i < v.size(); ++i) c += (std::abs(v[i] - center) <= tol) ? 1 : 0;
  return c;
}

void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  const double* xp = reinterpret_cast<const double*>(x.data());
  double* yp = reinterpret_cast<double*>(y.data());
  const std::size_t n = 2 * x.size();
  // (ar + i ai)(xr + i xi) = (ar xr - ai xi) + i (ar xi + ai xr)
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set_pd(alpha.imag(), -alpha.imag(), alpha.imag(), -alpha.imag());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(xp + i);
    const __m256d xs = _mm256_permute_pd(xv, 0b0101);  // swap re/im within each pair
    __m256d yv = _mm256_loadu_pd(yp + i);
    yv = _mm256_fmadd_pd(ar, xv, yv);
    yv = _mm256_fmadd_pd(ai, xs, yv);
    _mm256_storeu_pd(yp + i, yv);
  }
  for (std::size_t k = i / 2; k < x.size(); ++k) {
    const double xr = x[k].real();
    const double xi = x[k].imag();
    y[k] = cplx{y[k].real() + alpha.real() * xr - alpha.imag() * xi,
                y[k].imag() + alpha.real() * xi + alpha.imag() * xr};
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace softwall::simd::avx2

#else

#include <stdexcept>

namespace softwall::simd::avx2 {

bool compiled() { return false; }

namespace {
[[noreturn]] void unavailable() { throw std::logic_error("AVX2 kernels not compiled in"); }
}  // namespace

double sum_abs2(std::span<const cplx>) { unavailable(); }
std::size_t count_below(std::span<const double>, double) { unavailable(); }
std::size_t count_in_open(std::span<const double>, double, double) { unavailable(); }
std::size_t count_near(std::span<const double>, double, double) { unavailable(); }
void caxpy(cplx, std::span<const cplx>, std::span<cplx>) { unavailable(); }
double max_abs_diff(std::span<const double>, std::span<const double>) { unavailable(); }

}  // namespace softwall::simd::avx2

#endif
