#include "softwall/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "softwall/errors.hpp"

namespace softwall {

namespace {

void check_square(const CMatrix& h) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorCode::EigensolverFailure, "matrix is not square");
  }
}

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw Error(ErrorCode::EigensolverFailure,
                std::string(routine) + " returned info=" + std::to_string(info));
  }
}

}  // namespace

EigenDecomposition eigh(const CMatrix& h) {
  check_square(h);
  const lapack_int n = static_cast<lapack_int>(h.rows());
  EigenDecomposition out;
  out.vectors = h;
  out.values.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 0) return out;
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'L', n, reinterpret_cast<lapack_complex_double*>(out.vectors.data()),
      n, out.values.data());
  check_info(info, "zheevd");
  return out;
}

std::vector<double> eigvalsh_dense(const CMatrix& h) {
  check_square(h);
  const lapack_int n = static_cast<lapack_int>(h.rows());
  std::vector<double> w(static_cast<std::size_t>(n));
  if (n == 0) return w;
  CMatrix work = h;
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                     reinterpret_cast<lapack_complex_double*>(work.data()), n, w.data());
  check_info(info, "zheevd");
  return w;
}

std::vector<double> eigvalsh_banded(const CMatrix& h, int kd) {
  check_square(h);
  const lapack_int n = static_cast<lapack_int>(h.rows());
  std::vector<double> w(static_cast<std::size_t>(n));
  if (n == 0) return w;
  kd = std::clamp(kd, 0, static_cast<int>(n) - 1);
  const lapack_int ldab = kd + 1;
  // Lower band storage: ab(i - j, j) = h(i, j) for j <= i <= min(n-1, j+kd).
  std::vector<cplx> ab(static_cast<std::size_t>(ldab) * n, cplx{0.0, 0.0});
  for (lapack_int j = 0; j < n; ++j) {
    const lapack_int last = std::min<lapack_int>(n - 1, j + kd);
    for (lapack_int i = j; i <= last; ++i) {
      ab[static_cast<std::size_t>(i - j) + static_cast<std::size_t>(j) * ldab] = h(i, j);
    }
  }
  lapack_complex_double dummy{};
  const lapack_int info =
      LAPACKE_zhbevd(LAPACK_COL_MAJOR, 'N', 'L', n, kd,
                     reinterpret_cast<lapack_complex_double*>(ab.data()), ldab, w.data(), &dummy,
                     1);
  check_info(info, "zhbevd");
  return w;
}

std::vector<double> eigvalsh(const CMatrix& h) {
  check_square(h);
  const int n = static_cast<int>(h.rows());
  if (n > 64) {
    const int kd = bandwidth(h);
    if (4 * kd < n) return eigvalsh_banded(h, kd);
  }
  return eigvalsh_dense(h);
}

int bandwidth(const CMatrix& h) {
  int kd = 0;
  const Eigen::Index n = h.rows();
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (h(i, j) != cplx{0.0, 0.0}) {
        kd = std::max(kd, static_cast<int>(std::abs(i - j)));
      }
    }
  }
  return kd;
}

double hermitian_defect(const CMatrix& h) {
  if (h.rows() != h.cols()) return INFINITY;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace softwall
