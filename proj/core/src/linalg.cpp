#include "djcm/linalg.hpp"

#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "djcm/error.hpp"

namespace djcm {

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(a - a.adjoint());
}

EigenSystem hermitian_eigendecomposition(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "eigendecomposition needs a square matrix");
  }
  const double defect = hermiticity_defect(a);
  if (defect > kHermitianTolerance * std::max(1.0, max_abs(a))) {
    throw Error(ErrorCode::not_hermitian,
                "matrix deviates from Hermitian by " + std::to_string(defect));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::invalid_argument, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenSystem hermitian_eigendecomposition(const Operator& op) {
  return hermitian_eigendecomposition(op.matrix());
}

CMatrix matrix_sqrt_psd(const CMatrix& a) {
  EigenSystem eig = hermitian_eigendecomposition(a);
  const double lowest = eig.values.size() ? eig.values.minCoeff() : 0.0;
  if (lowest < -kPsdClip) {
    throw Error(ErrorCode::not_psd, "eigenvalue " + std::to_string(lowest) + " below -1e-9");
  }
  const RVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

CMatrix matrix_sqrt_psd(const DensityMatrix& rho) { return matrix_sqrt_psd(rho.matrix()); }

CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::dimension_mismatch, "expm needs a square matrix");
  return a.exp();
}

}  // namespace djcm
