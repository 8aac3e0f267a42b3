#include "djcm/bures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "djcm/error.hpp"
#include "djcm/qgt.hpp"

namespace djcm {

namespace {

constexpr double kFidelitySlack = 1e-9;

double clip_fidelity(double f) {
  if (f > 1.0 + kFidelitySlack) {
    throw Error(ErrorCode::not_psd, "fidelity " + std::to_string(f) + " exceeds 1");
  }
  return std::clamp(f, 0.0, 1.0);
}

double trace_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (std::min(m.rows(), m.cols()) <= 16) {
    return Eigen::JacobiSVD<CMatrix>(m).singularValues().sum();
  }
  return Eigen::BDCSVD<CMatrix>(m).singularValues().sum();
}

}  // namespace

double uhlmann_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) {
    throw Error(ErrorCode::dimension_mismatch,
                "fidelity between " + std::to_string(rho1.dim()) + " and " +
                    std::to_string(rho2.dim()) + " dimensional states");
  }
  // tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) is the trace norm of sqrt(rho1) sqrt(rho2);
  // the singular values avoid a square root of a nearly singular product.
  const CMatrix s1 = matrix_sqrt_psd(rho1);
  const CMatrix s2 = matrix_sqrt_psd(rho2);
  const double root = trace_norm(s1 * s2);
  return clip_fidelity(root * root);
}

double bures_distance_sq(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  return 2.0 * (1.0 - std::sqrt(uhlmann_fidelity(rho1, rho2)));
}

double root_fidelity_factored(const CMatrix& x, const CMatrix& y) {
  if (x.rows() != y.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "factored fidelity needs equal row counts");
  }
  return std::min(trace_norm(x.adjoint() * y), 1.0 + kFidelitySlack);
}

double bures_distance_sq_factored(const CMatrix& x, const CMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "factored Bures distance needs equal shapes");
  }
  // x^dag y = P S R^dag; the aligning unitary U = R P^dag maximizes
  // Re tr(x^dag y U), which then equals tr S = sqrt(F).
  const Eigen::JacobiSVD<CMatrix> svd(x.adjoint() * y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix u = svd.matrixV() * svd.matrixU().adjoint();
  return (x - y * u).squaredNorm();
}

CMatrix density_factor(const StateVector& psi, Subsystem subsystem) {
  if (subsystem == Subsystem::composite) return psi.amplitudes();
  const Index nf = psi.space().field_dim();
  // Row n, column s holds <n, s|psi>; rho_field = C C^dag, rho_qubit = C^T conj(C).
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, 2, Eigen::RowMajor>> c(
      psi.amplitudes().data(), nf, 2);
  if (subsystem == Subsystem::field) return CMatrix(c);
  // conj(C) = Q R gives C^T conj(C) = R^dag R.
  const Eigen::HouseholderQR<CMatrix> qr(CMatrix(c.conjugate()));
  const CMatrix r = qr.matrixQR().topRows(2).triangularView<Eigen::Upper>();
  return r.adjoint();
}

BuresResult bures_metric(const FockQubitSpace& space, const ModelParams& params,
                         const EigenLabel& label, Subsystem subsystem,
                         const BuresOptions& options) {
  const double gap = analytic_gap(label, params);
  if (gap < options.gap_floor * params.omega()) {
    throw Error(ErrorCode::gap_too_small,
                label.to_string() + " gap " + std::to_string(gap) +
                    " is below the finite-difference floor");
  }
  const double h = options.step;
  if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "Bures step must be > 0");
  if (params.eta() + h >= 1.0) throw Error(ErrorCode::invalid_argument, "eta step crosses eta = 1");

  const AnalyticEigenstate centre_state = analytic_eigenstate(space, label, params);
  const CMatrix centre = density_factor(centre_state.state, subsystem);
  const auto factor_at = [&](double d_eta, double d_phi) {
    const CVector v = stencil_state(space, label, params.omega(), params.eta() + d_eta,
                                    params.phi() + d_phi, StateSource::analytic);
    return density_factor(StateVector(space, v), subsystem);
  };
  // Symmetric second difference of dS^2 along (u_eta, u_phi).
  const auto curvature = [&](double u_eta, double u_phi) {
    const double forward = bures_distance_sq_factored(centre, factor_at(h * u_eta, h * u_phi));
    const double backward = bures_distance_sq_factored(centre, factor_at(-h * u_eta, -h * u_phi));
    return (forward + backward) / (2.0 * h * h);
  };

  Eigen::Matrix2d g;
  g(0, 0) = curvature(1.0, 0.0);
  g(1, 1) = curvature(0.0, 1.0);
  const double sum_dir = curvature(1.0, 1.0);
  const double diff_dir = curvature(1.0, -1.0);
  g(0, 1) = g(1, 0) = (sum_dir - diff_dir) / 4.0;

  BuresResult result{params, label, subsystem, g, h};
  for (int i = 0; i < 2; ++i) {
    if (result.g(i, i) >= 0.0) continue;
    if (result.g(i, i) > -options.negative_floor) {
      result.g(i, i) = 0.0;
      result.clamped = true;
    } else {
      throw Error(ErrorCode::negative_metric,
                  "Bures diagonal " + std::to_string(result.g(i, i)) + " for " +
                      label.to_string() + " on " + std::string(to_string(subsystem)));
    }
  }
  return result;
}

}  // namespace djcm
