#pragma once

// Data-parallel inner loops shared by the sweep code.
//
// Every kernel has a scalar reference in namespace scalar and, when the build
// targets x86-64, an AVX2 variant in namespace avx2. The unqualified entry
// points dispatch on the CPU detected at first use. Set SOFTWALL_SIMD=scalar
// in the environment (or call force_backend) to pin the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace softwall::simd {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b);
bool backend_available(Backend b);
Backend active_backend();
/// Throws std::invalid_argument if the backend is not available on this CPU.
void force_backend(Backend b);
/// Back to automatic selection.
void reset_backend();

/// sum_i |z_i|^2
double sum_abs2(std::span<const cplx> z);
/// #{i : v_i < threshold}
std::size_t count_below(std::span<const double> v, double threshold);
/// #{i : lo < v_i < hi}
std::size_t count_in_open(std::span<const double> v, double lo, double hi);
/// #{i : |v_i - center| <= tol}
std::size_t count_near(std::span<const double> v, double center, double tol);
/// y += alpha * x  (x.size() == y.size())
void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
/// max_i |a_i - b_i|  (a.size() == b.size()); 0 for empty input
double max_abs_diff(std::span<const double> a, std::span<const double> b);

namespace scalar {
double sum_abs2(std::span<const cplx> z);
std::size_t count_below(std::span<const double> v, double threshold);
std::size_t count_in_open(std::span<const double> v, double lo, double hi);
std::size_t count_near(std::span<const double> v, double center, double tol);
void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
}  // namespace scalar

namespace avx2 {
bool compiled();
double sum_abs2(std::span<const cplx> z);
std::size_t count_below(std::span<const double> v, double threshold);
std::size_t count_in_open(std::span<const double> v, double lo, double hi);
std::size_t count_near(std::span<const double> v, double center, double tol);
void caxpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
}  // namespace avx2

}  // namespace softwall::simd
