#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "softwall/simd/kernels.hpp"

namespace softwall::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("SOFTWALL_SIMD")) {
    if (std::string(env) == "scalar") return Backend::scalar;
  }
  return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::atomic<int> g_forced{-1};

Backend current() {
  const int f = g_forced.load(std::memory_order_relaxed);
  if (f >= 0) return static_cast<Backend>(f);
  static const Backend detected = detect();
  return detected;
}

}  // namespace

std::string_view to_string(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool backend_available(Backend b) {
  if (b == Backend::scalar) return true;
  static const bool ok = avx2::compiled() && cpu_has_avx2();
  return ok;
}

Backend active_backend() { return current(); }

void force_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("SIMD backend not available: " + std::string(to_string(b)));
  }
  g_forced.store(static_cast<int>(b));
}

void reset_backend() { g_forced.store(-1); }

double sum_abs2(std::span<const cplx> z) {
  return current() == Backend::avx2 ? avx2::sum_abs2(z) : scalar::sum_abs2(z);
}

std::size_t count_below(std::span<const double> v, double threshold) {
  return current() == Backend::avx2 ? avx2::count_below(v, threshold)
                                    : scalar::count_below(v, threshold);
}

std::size_t count_in_open(std::span<const double> v, double lo, double hi) {
  return current() == Backend::avx2 ? avx2::count_in_open(v, lo, hi)
                                    : scalar::count_in_open(v, lo, hi);
}

std::size_t count_near(std::span<const double> v, double center, double tol) {
  return current() == Backend::avx2 ? avx2::count_near(v, center, tol)
                                    : scalar::count_near(v, center, tol);
}

void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  if (x.size() != y.size()) throw std::invalid_argument("caxpy: size mismatch");
  if (current() == Backend::avx2) {
    avx2::caxpy(alpha, x, y);
  } else {
    scalar::caxpy(alpha, x, y);
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
  return current() == Backend::avx2 ? avx2::max_abs_diff(a, b) : scalar::max_abs_diff(a, b);
}

}  // namespace softwall::simd
