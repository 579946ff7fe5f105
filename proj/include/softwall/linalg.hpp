#pragma once

// Dense Hermitian eigensolvers (LAPACK zheevd / zhbevd) over Eigen storage.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace softwall {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column j belongs to values[j]
};

/// Full eigendecomposition of a Hermitian matrix. Only the lower triangle is read.
EigenDecomposition eigh(const CMatrix& h);

/// Eigenvalues only, ascending. Dispatches to the banded solver when the
/// matrix bandwidth is small compared to its size.
std::vector<double> eigvalsh(const CMatrix& h);

std::vector<double> eigvalsh_dense(const CMatrix& h);
std::vector<double> eigvalsh_banded(const CMatrix& h, int bandwidth);

/// Smallest kd such that h(i, j) == 0 whenever |i - j| > kd.
int bandwidth(const CMatrix& h);

/// max |h(i,j) - conj(h(j,i))|
double hermitian_defect(const CMatrix& h);

/// Spectral norm (largest singular value).
double op_norm(const CMatrix& m);

/// Largest entry modulus.
double max_abs(const CMatrix& m);

}  // namespace softwall
