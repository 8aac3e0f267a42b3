#pragma once

// Quantum geometric tensor over the (eta, phi) parameter plane, index 0 = eta,
// index 1 = phi.
//
//   Q_{mu nu} = <d_mu psi| (1 - |psi><psi|) |d_nu psi>
//   G = Re Q (quantum metric),  B = -2 Im Q (Berry curvature)
//
// Two independent evaluators are provided: a sum over the numerical spectrum
// of dH/dmu matrix elements, and central finite differences of gauge-fixed
// eigenstates.

#include <array>

#include "djcm/model.hpp"

namespace djcm {

enum class QgtMethod { sum, finite_difference };

std::string_view to_string(QgtMethod m) noexcept;

struct QGTResult {
  ModelParams params;
  EigenLabel label;
  Eigen::Matrix2cd Q;
  Eigen::Matrix2d G;
  Eigen::Matrix2d B;
  QgtMethod method;
  bool converged = true;
  double convergence_delta = 0.0;
  double step = 0.0;  // finite-difference step that produced Q
  int terms = 0;      // spectral terms summed

  /// Symmetry of G, antisymmetry of B, G >= 0 and sqrt(det G) >= |B_01| / 2,
  /// each with an absolute tolerance scaled by max(1, |G|).
  bool satisfies_invariants(double tolerance = 1e-9) const;
};

/// Eigendecomposition and parameter derivatives of H at one point.  Built once
/// and shared by every label evaluated at that point.
struct SpectralData {
  FockQubitSpace space;
  ModelParams params;
  EigenSystem eigen;
  CMatrix d_eta;
  CMatrix d_phi;
};

SpectralData prepare_spectral_data(const FockQubitSpace& space, const ModelParams& params);

struct QgtSumOptions {
  int m_cut = 0;  // 0: every eigenpair of the truncated space
  double convergence_tolerance = 1e-6;
  bool require_convergence = true;
  double degeneracy_floor = 1e-8;  // times Omega
  double coupling_floor = 1e-8;    // times Omega
};

/// Throws degenerate_level when a level within degeneracy_floor couples to
/// the target, and sum_not_converged when the m_cut/2 partial sum differs from
/// the m_cut sum by more than the tolerance (unless require_convergence is
/// false, in which case the flag is cleared instead).
QGTResult qgt_sum(const SpectralData& data, const EigenLabel& label,
                  const QgtSumOptions& options = {});
QGTResult qgt_sum(const FockQubitSpace& space, const ModelParams& params, const EigenLabel& label,
                  const QgtSumOptions& options = {});

enum class StateSource { analytic, numerical };

struct QgtFdOptions {
  double step_eta = 1e-4;
  double step_phi = 1e-4;
  StateSource source = StateSource::analytic;
  double gap_floor = 1e-4;  // times Omega
  double tolerance = 1e-6;
  int max_halvings = 4;
};

/// States at the centre and at +-step along eta and phi.
struct FdStencil {
  CVector center;
  std::array<CVector, 2> plus;
  std::array<CVector, 2> minus;
  std::array<double, 2> steps;
};

/// Q from a stencil.  Every state is rotated so that the amplitude at the
/// centre's largest-modulus index is real and positive, which removes any
/// phases carried by the inputs.
Eigen::Matrix2cd qgt_from_stencil(const FdStencil& stencil);

/// Eigenstate of the label at (eta, phi).  Negative eta is mapped through
/// H(-eta, phi) = H(eta, phi + pi) so stencils can straddle eta = 0.
CVector stencil_state(const FockQubitSpace& space, const EigenLabel& label, double omega,
                      double eta, double phi, StateSource source);

QGTResult qgt_fd(const FockQubitSpace& space, const ModelParams& params, const EigenLabel& label,
                 const QgtFdOptions& options = {});

}  // namespace djcm
