#pragma once

#include "djcm/model.hpp"

namespace djcm {

/// F = (tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2, clipped to [0, 1].
double uhlmann_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// dS^2 = 2 (1 - sqrt(F)).
double bures_distance_sq(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// sqrt(F) for rho1 = x x^dag and rho2 = y y^dag: the trace norm of x^dag y.
double root_fidelity_factored(const CMatrix& x, const CMatrix& y);

/// dS^2 for rho1 = x x^dag and rho2 = y y^dag (same column count), evaluated
/// as the purification distance min_U ||x - y U||_F^2.  Equal to
/// 2 (1 - sqrt(F)) but free of the cancellation between 1 and sqrt(F) when the
/// states are close, which is what the metric stencil needs.
double bures_distance_sq_factored(const CMatrix& x, const CMatrix& y);

/// Factor x with rho = x x^dag for the reduced state of a pure composite
/// state: the state itself (composite), the dim-by-2 coefficient matrix
/// (field), or a 2x2 triangular factor (qubit).
CMatrix density_factor(const StateVector& psi, Subsystem subsystem);

struct BuresResult {
  ModelParams params;
  EigenLabel label;
  Subsystem subsystem;
  Eigen::Matrix2d g;  // over (eta, phi)
  double step;
  bool clamped = false;  // a small negative diagonal was set to zero
};

struct BuresOptions {
  double step = 1e-4;
  double gap_floor = 1e-4;       // times Omega
  double negative_floor = 1e-6;  // diagonals in (-floor, 0) are clamped
};

/// Bures metric of the label's eigenstate, reduced to `subsystem`, from
/// symmetric second differences of dS^2.  Off-diagonals use the e_i +- e_j
/// directions so every fidelity compares two neighbouring states.
BuresResult bures_metric(const FockQubitSpace& space, const ModelParams& params,
                         const EigenLabel& label, Subsystem subsystem,
                         const BuresOptions& options = {});

}  // namespace djcm
