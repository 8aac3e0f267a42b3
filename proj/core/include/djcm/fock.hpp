#pragma once

// Truncated photon (x) qubit Hilbert space.
//
// Basis convention used everywhere in the library: the composite index of
// |n, s> is 2*n + s, with s = 0 for |g> and s = 1 for |e>.  Field-only
// operators live on the (n_max + 1)-dimensional photon space and are lifted
// to the composite space with Operator::embedded().

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace djcm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Qubit : int { g = 0, e = 1 };

enum class Subsystem { composite, qubit, field };

std::string_view to_string(Subsystem s) noexcept;
Subsystem parse_subsystem(std::string_view text);

class FockQubitSpace {
 public:
  /// Throws Error(invalid_argument) for n_max < 1.
  explicit FockQubitSpace(int n_max);

  int n_max() const noexcept { return n_max_; }
  int field_dim() const noexcept { return n_max_ + 1; }
  int dim() const noexcept { return 2 * (n_max_ + 1); }
  int dim_of(Subsystem s) const noexcept;

  static constexpr int index(int n, Qubit s) noexcept { return 2 * n + static_cast<int>(s); }
  static constexpr int photon_number(int index) noexcept { return index / 2; }
  static constexpr Qubit qubit(int index) noexcept { return static_cast<Qubit>(index % 2); }

  bool operator==(const FockQubitSpace&) const = default;

 private:
  int n_max_;
};

FockQubitSpace make_space(int n_max);

/// Dense square matrix tied to a space and the subsystem it acts on.
class Operator {
 public:
  Operator(FockQubitSpace space, Subsystem support, CMatrix entries);

  const FockQubitSpace& space() const noexcept { return space_; }
  Subsystem support() const noexcept { return support_; }
  const CMatrix& matrix() const noexcept { return entries_; }

  Operator adjoint() const;
  /// Lift a field or qubit operator to the composite space (identity on the
  /// other factor).  Composite operators are returned unchanged.
  Operator embedded() const;

 private:
  FockQubitSpace space_;
  Subsystem support_;
  CMatrix entries_;
};

/// field (x) qubit Kronecker product in the 2n + s ordering.
CMatrix kron_field_qubit(const CMatrix& field, const Eigen::Matrix2cd& qubit);

/// Normalized composite state.  The constructor rescales to unit norm and
/// rejects zero or non-finite input.
class StateVector {
 public:
  StateVector(FockQubitSpace space, CVector amplitudes);

  static StateVector basis(FockQubitSpace space, int n, Qubit s);

  const FockQubitSpace& space() const noexcept { return space_; }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  Index dim() const noexcept { return amplitudes_.size(); }

  /// <this|other>
  Complex inner(const StateVector& other) const;
  /// |<this|other>|^2
  double overlap(const StateVector& other) const;

 private:
  FockQubitSpace space_;
  CVector amplitudes_;
};

/// Hermitian unit-trace matrix.  Hermiticity and trace are checked on
/// construction (1e-10); positivity is enforced where a square root is taken
/// (see matrix_sqrt_psd), since it needs a full eigendecomposition.
class DensityMatrix {
 public:
  DensityMatrix(CMatrix entries, Subsystem subsystem);

  static DensityMatrix pure(const StateVector& psi);

  const CMatrix& matrix() const noexcept { return entries_; }
  Subsystem subsystem() const noexcept { return subsystem_; }
  Index dim() const noexcept { return entries_.rows(); }

 private:
  CMatrix entries_;
  Subsystem subsystem_;
};

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

/// Reduced state of a pure composite state, without forming |psi><psi|.
DensityMatrix reduced_state(const StateVector& psi, Subsystem keep);

/// Probability held in the top ceil(fraction * (n_max + 1)) photon levels.
double number_tail_weight(const StateVector& psi, double fraction);
double number_tail_weight(const CVector& field_amplitudes, double fraction);

Operator annihilation_op(const FockQubitSpace& space);
Operator creation_op(const FockQubitSpace& space);
Operator number_op(const FockQubitSpace& space);
/// D(alpha) = exp(alpha a^dag - conj(alpha) a) on the truncated field.
Operator displacement_op(const FockQubitSpace& space, Complex alpha);
/// S(xi) = exp(-(xi a^dag^2 - conj(xi) a^2) / 2) on the truncated field.
Operator squeeze_op(const FockQubitSpace& space, Complex xi);

}  // namespace djcm
