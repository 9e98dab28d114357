#include "modcomm/linalg.hpp"

#include <string>

#include <lapacke.h>

#include "modcomm/errors.hpp"

namespace modcomm {

namespace {

RVector run_zheevd(CMatrix& a, char jobz) {
  if (a.rows() != a.cols()) throw InvalidArgument("linalg", "eigensolver needs a square matrix");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  RVector w(n);
  if (n == 0) return w;
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'L', n,
                                         reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
  if (info != 0) throw NumericalError("linalg", "zheevd failed with info=" + std::to_string(info));
  return w;
}

}  // namespace

HermitianEigen hermitian_eig(CMatrix a) {
  RVector w = run_zheevd(a, 'V');
  return {std::move(w), std::move(a)};
}

RVector hermitian_eigenvalues(CMatrix a) { return run_zheevd(a, 'N'); }

double hermiticity_residual(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix gather(const CMatrix& a, const IndexList& rows, const IndexList& cols) {
  CMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = a(rows[i], cols[j]);
  return out;
}

}  // namespace modcomm
