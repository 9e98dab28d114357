#pragma once

#include "modcomm/types.hpp"

namespace modcomm {

// Eigenvalues in ascending order with the matching orthonormal eigenvectors
// stored column-wise.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

// Divide-and-conquer LAPACK driver (zheevd). Only the lower triangle is read.
HermitianEigen hermitian_eig(CMatrix a);
RVector hermitian_eigenvalues(CMatrix a);

// max |a - a^H| over all entries
double hermiticity_residual(const CMatrix& a);

CMatrix gather(const CMatrix& a, const IndexList& rows, const IndexList& cols);

}  // namespace modcomm
