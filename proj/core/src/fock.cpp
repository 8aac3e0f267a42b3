#include "djcm/fock.hpp"

#include <cmath>
#include <string>

#include "djcm/error.hpp"
#include "djcm/linalg.hpp"

namespace djcm {

std::string_view to_string(Subsystem s) noexcept {
  switch (s) {
    case Subsystem::composite: return "composite";
    case Subsystem::qubit: return "qubit";
    case Subsystem::field: return "field";
  }
  return "composite";
}

Subsystem parse_subsystem(std::string_view text) {
  if (text == "composite") return Subsystem::composite;
  if (text == "qubit") return Subsystem::qubit;
  if (text == "field") return Subsystem::field;
  throw Error(ErrorCode::invalid_argument,
              "unknown subsystem '" + std::string(text) + "' (expected composite, qubit or field)");
}

FockQubitSpace::FockQubitSpace(int n_max) : n_max_(n_max) {
  if (n_max < 1) {
    throw Error(ErrorCode::invalid_argument,
                "photon cutoff n_max must be >= 1, got " + std::to_string(n_max));
  }
}

int FockQubitSpace::dim_of(Subsystem s) const noexcept {
  switch (s) {
    case Subsystem::composite: return dim();
    case Subsystem::qubit: return 2;
    case Subsystem::field: return field_dim();
  }
  return dim();
}

FockQubitSpace make_space(int n_max) { return FockQubitSpace(n_max); }

Operator::Operator(FockQubitSpace space, Subsystem support, CMatrix entries)
    : space_(space), support_(support), entries_(std::move(entries)) {
  const Index d = space_.dim_of(support_);
  if (entries_.rows() != d || entries_.cols() != d) {
    throw Error(ErrorCode::dimension_mismatch,
                "operator on " + std::string(to_string(support_)) + " needs " + std::to_string(d) +
                    "x" + std::to_string(d) + " entries, got " + std::to_string(entries_.rows()) +
                    "x" + std::to_string(entries_.cols()));
  }
}

Operator Operator::adjoint() const { return {space_, support_, entries_.adjoint()}; }

Operator Operator::embedded() const {
  switch (support_) {
    case Subsystem::composite: return *this;
    case Subsystem::field:
      return {space_, Subsystem::composite,
              kron_field_qubit(entries_, Eigen::Matrix2cd::Identity())};
    case Subsystem::qubit: {
      const CMatrix identity = CMatrix::Identity(space_.field_dim(), space_.field_dim());
      return {space_, Subsystem::composite, kron_field_qubit(identity, entries_)};
    }
  }
  return *this;
}

CMatrix kron_field_qubit(const CMatrix& field, const Eigen::Matrix2cd& qubit) {
  const Index nf = field.rows();
  CMatrix out = CMatrix::Zero(2 * nf, 2 * nf);
  for (Index m = 0; m < nf; ++m) {
    for (Index n = 0; n < nf; ++n) {
      const Complex f = field(n, m);
      if (f == Complex{}) continue;
      out.block<2, 2>(2 * n, 2 * m) = f * qubit;
    }
  }
  return out;
}

StateVector::StateVector(FockQubitSpace space, CVector amplitudes)
    : space_(space), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.dim()) {
    throw Error(ErrorCode::dimension_mismatch,
                "state needs " + std::to_string(space_.dim()) + " amplitudes, got " +
                    std::to_string(amplitudes_.size()));
  }
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || norm == 0.0) {
    throw Error(ErrorCode::invalid_argument, "state amplitudes must be finite and nonzero");
  }
  amplitudes_ /= norm;
}

StateVector StateVector::basis(FockQubitSpace space, int n, Qubit s) {
  if (n < 0 || n > space.n_max()) {
    throw Error(ErrorCode::invalid_argument,
                "photon number " + std::to_string(n) + " outside 0.." + std::to_string(space.n_max()));
  }
  CVector v = CVector::Zero(space.dim());
  v(FockQubitSpace::index(n, s)) = 1.0;
  return {space, std::move(v)};
}

Complex StateVector::inner(const StateVector& other) const {
  if (other.dim() != dim()) throw Error(ErrorCode::dimension_mismatch, "inner product of states");
  return amplitudes_.dot(other.amplitudes_);
}

double StateVector::overlap(const StateVector& other) const { return std::norm(inner(other)); }

DensityMatrix::DensityMatrix(CMatrix entries, Subsystem subsystem)
    : entries_(std::move(entries)), subsystem_(subsystem) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw Error(ErrorCode::dimension_mismatch, "density matrix must be square and nonempty");
  }
  if (subsystem_ == Subsystem::qubit && entries_.rows() != 2) {
    throw Error(ErrorCode::dimension_mismatch, "qubit density matrix must be 2x2");
  }
  if (subsystem_ == Subsystem::composite && entries_.rows() % 2 != 0) {
    throw Error(ErrorCode::dimension_mismatch, "composite density matrix needs even dimension");
  }
  const double defect = hermiticity_defect(entries_);
  if (defect > kHermitianTolerance) {
    throw Error(ErrorCode::not_hermitian,
                "density matrix deviates from Hermitian by " + std::to_string(defect));
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw Error(ErrorCode::invalid_argument,
                "density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const CVector& v = psi.amplitudes();
  return {v * v.adjoint(), Subsystem::composite};
}

namespace {

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  if (rho.subsystem() != Subsystem::composite) {
    throw Error(ErrorCode::dimension_mismatch, "partial trace needs a composite density matrix");
  }
  const CMatrix& m = rho.matrix();
  const Index nf = m.rows() / 2;
  switch (keep) {
    case Subsystem::composite: return rho;
    case Subsystem::qubit: {
      CMatrix q = CMatrix::Zero(2, 2);
      for (Index n = 0; n < nf; ++n) q += m.block<2, 2>(2 * n, 2 * n);
      return {hermitize(q), Subsystem::qubit};
    }
    case Subsystem::field: {
      CMatrix f(nf, nf);
      for (Index n = 0; n < nf; ++n) {
        for (Index k = 0; k < nf; ++k) {
          f(n, k) = m(2 * n, 2 * k) + m(2 * n + 1, 2 * k + 1);
        }
      }
      return {hermitize(f), Subsystem::field};
    }
  }
  return rho;
}

DensityMatrix reduced_state(const StateVector& psi, Subsystem keep) {
  if (keep == Subsystem::composite) return DensityMatrix::pure(psi);
  // Row n, column s of the coefficient matrix holds <n, s|psi>.
  const Index nf = psi.space().field_dim();
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, 2, Eigen::RowMajor>> c(
      psi.amplitudes().data(), nf, 2);
  if (keep == Subsystem::qubit) {
    CMatrix q = c.transpose() * c.conjugate();
    return {hermitize(q), Subsystem::qubit};
  }
  CMatrix f = c * c.adjoint();
  return {hermitize(f), Subsystem::field};
}

namespace {

double tail_of_populations(const RVector& populations, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::invalid_argument,
                "tail fraction must lie in (0, 1], got " + std::to_string(fraction));
  }
  const Index levels = populations.size();
  const auto top = static_cast<Index>(std::ceil(fraction * static_cast<double>(levels) - 1e-12));
  const Index count = std::clamp<Index>(top, 1, levels);
  return populations.tail(count).sum();
}

}  // namespace

double number_tail_weight(const StateVector& psi, double fraction) {
  const Index nf = psi.space().field_dim();
  RVector populations(nf);
  const CVector& a = psi.amplitudes();
  for (Index n = 0; n < nf; ++n) populations(n) = std::norm(a(2 * n)) + std::norm(a(2 * n + 1));
  return tail_of_populations(populations, fraction);
}

double number_tail_weight(const CVector& field_amplitudes, double fraction) {
  return tail_of_populations(field_amplitudes.cwiseAbs2(), fraction);
}

Operator annihilation_op(const FockQubitSpace& space) {
  const int nf = space.field_dim();
  CMatrix a = CMatrix::Zero(nf, nf);
  for (int n = 1; n < nf; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {space, Subsystem::field, std::move(a)};
}

Operator creation_op(const FockQubitSpace& space) { return annihilation_op(space).adjoint(); }

Operator number_op(const FockQubitSpace& space) {
  const int nf = space.field_dim();
  CMatrix n = CMatrix::Zero(nf, nf);
  for (int k = 0; k < nf; ++k) n(k, k) = static_cast<double>(k);
  return {space, Subsystem::field, std::move(n)};
}

Operator displacement_op(const FockQubitSpace& space, Complex alpha) {
  const CMatrix a = annihilation_op(space).matrix();
  const CMatrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
  return {space, Subsystem::field, expm(generator)};
}

Operator squeeze_op(const FockQubitSpace& space, Complex xi) {
  const CMatrix a = annihilation_op(space).matrix();
  const CMatrix a2 = a * a;
  const CMatrix generator = -0.5 * (xi * a2.adjoint() - std::conj(xi) * a2);
  return {space, Subsystem::field, expm(generator)};
}

}  // namespace djcm
