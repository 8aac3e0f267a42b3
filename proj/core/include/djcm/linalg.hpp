#pragma once

#include "djcm/fock.hpp"

namespace djcm {

/// Eigenvalues below -kPsdClip are a hard error; values in [-kPsdClip, 0)
/// are rounding noise and clipped to zero.
inline constexpr double kPsdClip = 1e-9;
inline constexpr double kHermitianTolerance = 1e-10;

struct EigenSystem {
  RVector values;   // ascending
  CMatrix vectors;  // orthonormal columns
};

EigenSystem hermitian_eigendecomposition(const CMatrix& a);
EigenSystem hermitian_eigendecomposition(const Operator& op);

CMatrix matrix_sqrt_psd(const CMatrix& a);
CMatrix matrix_sqrt_psd(const DensityMatrix& rho);

/// Dense matrix exponential (Pade approximant with scaling and squaring).
CMatrix expm(const CMatrix& a);

double max_abs(const CMatrix& a);
double hermiticity_defect(const CMatrix& a);

}  // namespace djcm
