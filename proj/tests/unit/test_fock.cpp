#include <doctest.h>

#include <cmath>
#include <random>

#include "djcm/error.hpp"
#include "djcm/fock.hpp"
#include "djcm/linalg.hpp"
#include "oracles.hpp"

using namespace djcm;

namespace {

CVector field_basis(int dim, int n) {
  CVector v = CVector::Zero(dim);
  v(n) = 1.0;
  return v;
}

double mean_photons(const CMatrix& n_op, const CVector& field) {
  return (field.adjoint() * n_op * field)(0, 0).real();
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected djcm::Error");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_SUITE("fock-core") {
  TEST_CASE("space dimensions and basis ordering") {
    const FockQubitSpace one(1);
    CHECK(one.dim() == 4);
    CHECK(FockQubitSpace::index(0, Qubit::g) == 0);
    CHECK(FockQubitSpace::index(0, Qubit::e) == 1);
    CHECK(FockQubitSpace::index(1, Qubit::g) == 2);
    CHECK(FockQubitSpace::index(1, Qubit::e) == 3);
    CHECK(FockQubitSpace::photon_number(3) == 1);
    CHECK(FockQubitSpace::qubit(3) == Qubit::e);
    CHECK(make_space(200).dim() == 402);
    CHECK(code_of([] { make_space(0); }) == ErrorCode::invalid_argument);
  }

  TEST_CASE("annihilation operator matrix elements") {
    const FockQubitSpace space(2);
    const CMatrix a = annihilation_op(space).matrix();
    CHECK(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);
    CHECK((a * field_basis(3, 0)).norm() == 0.0);

    const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
    CMatrix expected = CMatrix::Identity(3, 3);
    expected(2, 2) = -2.0;  // the truncation artifact sits at the cutoff only
    CHECK(max_abs(comm - expected) < 1e-14);

    const Operator lifted = annihilation_op(space).embedded();
    CHECK(lifted.support() == Subsystem::composite);
    CHECK(std::abs(lifted.matrix()(FockQubitSpace::index(1, Qubit::e),
                                   FockQubitSpace::index(2, Qubit::e)) -
                   std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(lifted.matrix()(FockQubitSpace::index(1, Qubit::g),
                                   FockQubitSpace::index(2, Qubit::e))) == 0.0);
  }

  TEST_CASE("operator dimension checked") {
    const FockQubitSpace space(2);
    CHECK(code_of([&] { Operator(space, Subsystem::field, CMatrix::Zero(4, 4)); }) ==
          ErrorCode::dimension_mismatch);
  }

  TEST_CASE("displacement operator") {
    const FockQubitSpace space(60);
    const int nf = space.field_dim();
    CHECK(max_abs(displacement_op(space, 0.0).matrix() - CMatrix::Identity(nf, nf)) < 1e-15);

    const CMatrix d = displacement_op(space, 0.6).matrix();
    const CVector coherent = d * field_basis(nf, 0);
    CHECK(number_tail_weight(coherent, 0.1) < 1e-10);
    CHECK(std::abs(mean_photons(number_op(space).matrix(), coherent) - 0.36) < 1e-10);

    const Complex alpha(0.4, -0.7);
    const CMatrix round_trip =
        displacement_op(space, alpha).matrix() * displacement_op(space, -alpha).matrix();
    // Probe the retained low-photon block, where the truncation is invisible.
    CHECK(max_abs(round_trip.topLeftCorner(20, 20) - CMatrix::Identity(20, 20)) < 1e-8);
    const CMatrix dd = displacement_op(space, alpha).matrix();
    CHECK(max_abs((dd.adjoint() * dd).topLeftCorner(20, 20) - CMatrix::Identity(20, 20)) < 1e-8);
  }

  TEST_CASE("squeeze operator") {
    const FockQubitSpace space(60);
    const int nf = space.field_dim();
    CHECK(max_abs(squeeze_op(space, 0.0).matrix() - CMatrix::Identity(nf, nf)) < 1e-15);

    const double r = -0.111572;
    const CVector squeezed = squeeze_op(space, r).matrix() * field_basis(nf, 0);
    const double mean = mean_photons(number_op(space).matrix(), squeezed);
    CHECK(mean == doctest::Approx(oracle::squeezed_vacuum_mean(r)).epsilon(1e-10));
    CHECK(mean == doctest::Approx(0.012478).epsilon(1e-4));

    const Complex xi = std::polar(0.3, 0.8);
    const CMatrix round_trip = squeeze_op(space, xi).matrix() * squeeze_op(space, -xi).matrix();
    CHECK(max_abs(round_trip.topLeftCorner(20, 20) - CMatrix::Identity(20, 20)) < 1e-8);
  }

  TEST_CASE("hermitian eigendecomposition") {
    SUBCASE("diagonal input sorts the diagonal") {
      CMatrix d = CMatrix::Zero(3, 3);
      d.diagonal() << 3.0, -1.0, 2.0;
      const EigenSystem eig = hermitian_eigendecomposition(d);
      CHECK(eig.values(0) == doctest::Approx(-1.0));
      CHECK(eig.values(1) == doctest::Approx(2.0));
      CHECK(eig.values(2) == doctest::Approx(3.0));
    }
    SUBCASE("pauli x") {
      CMatrix x(2, 2);
      x << 0.0, 1.0, 1.0, 0.0;
      const EigenSystem eig = hermitian_eigendecomposition(x);
      CHECK(eig.values(0) == doctest::Approx(-1.0));
      CHECK(eig.values(1) == doctest::Approx(1.0));
    }
    SUBCASE("random hermitian up to dim 802") {
      std::mt19937_64 rng(7);
      for (int dim : {4, 50, 402, 802}) {
        const CMatrix a = oracle::random_hermitian(dim, rng);
        const EigenSystem eig = hermitian_eigendecomposition(a);
        const double scale = a.norm();
        const CMatrix recon = eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
        CHECK(max_abs(a - recon) < 1e-9 * scale);
        CHECK(max_abs(a * eig.vectors - eig.vectors * eig.values.asDiagonal()) < 1e-9 * scale);
        CHECK(max_abs(eig.vectors.adjoint() * eig.vectors - CMatrix::Identity(dim, dim)) < 1e-10);
        for (Index i = 1; i < eig.values.size(); ++i) CHECK(eig.values(i - 1) <= eig.values(i));
      }
    }
    SUBCASE("non-hermitian input rejected") {
      CMatrix m = CMatrix::Zero(2, 2);
      m(0, 1) = 1.0;
      CHECK(code_of([&] { hermitian_eigendecomposition(m); }) == ErrorCode::not_hermitian);
    }
  }

  TEST_CASE("state vector normalization") {
    const FockQubitSpace space(3);
    CVector v = CVector::Zero(space.dim());
    v(0) = 3.0;
    v(3) = Complex(0.0, 4.0);
    const StateVector s(space, v);
    CHECK(std::abs(s.amplitudes().norm() - 1.0) < 1e-15);
    CHECK(code_of([&] { StateVector(space, CVector::Zero(space.dim())); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([&] { StateVector(space, CVector::Ones(3)); }) == ErrorCode::dimension_mismatch);
  }

  TEST_CASE("density matrix contract") {
    CMatrix bad_trace = CMatrix::Identity(2, 2);
    CHECK(code_of([&] { DensityMatrix(bad_trace, Subsystem::qubit); }) ==
          ErrorCode::invalid_argument);
    CMatrix skew = 0.5 * CMatrix::Identity(2, 2);
    skew(0, 1) = 0.1;
    CHECK(code_of([&] { DensityMatrix(skew, Subsystem::qubit); }) == ErrorCode::not_hermitian);
  }

  TEST_CASE("partial trace") {
    const FockQubitSpace space(3);
    SUBCASE("entangled state gives maximally mixed qubit") {
      CVector v = CVector::Zero(space.dim());
      v(FockQubitSpace::index(0, Qubit::e)) = 1.0;
      v(FockQubitSpace::index(1, Qubit::g)) = 1.0;
      const StateVector psi(space, v);
      const DensityMatrix q = partial_trace(DensityMatrix::pure(psi), Subsystem::qubit);
      CHECK(q.dim() == 2);
      CHECK(max_abs(q.matrix() - 0.5 * CMatrix::Identity(2, 2)) < 1e-15);
      const DensityMatrix f = partial_trace(DensityMatrix::pure(psi), Subsystem::field);
      CHECK(f.dim() == space.field_dim());
      CHECK(max_abs(reduced_state(psi, Subsystem::qubit).matrix() - q.matrix()) < 1e-15);
      CHECK(max_abs(reduced_state(psi, Subsystem::field).matrix() - f.matrix()) < 1e-15);
    }
    SUBCASE("product state reductions are pure") {
      const StateVector psi = StateVector::basis(space, 2, Qubit::g);
      for (Subsystem s : {Subsystem::qubit, Subsystem::field}) {
        const CMatrix r = partial_trace(DensityMatrix::pure(psi), s).matrix();
        CHECK(std::abs((r * r).trace() - 1.0) < 1e-15);
      }
    }
    SUBCASE("random input keeps unit trace and positivity") {
      std::mt19937_64 rng(11);
      const DensityMatrix rho(oracle::random_density(space.dim(), rng), Subsystem::composite);
      for (Subsystem s : {Subsystem::qubit, Subsystem::field}) {
        const DensityMatrix r = partial_trace(rho, s);
        CHECK(std::abs(r.matrix().trace() - 1.0) < 1e-12);
        CHECK(hermitian_eigendecomposition(r.matrix()).values.minCoeff() > -1e-9);
      }
    }
    SUBCASE("reduced input rejected") {
      const DensityMatrix q(0.5 * CMatrix::Identity(2, 2), Subsystem::qubit);
      CHECK(code_of([&] { partial_trace(q, Subsystem::field); }) == ErrorCode::dimension_mismatch);
    }
  }

  TEST_CASE("psd square root") {
    CHECK(max_abs(matrix_sqrt_psd(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)) < 1e-15);

    CMatrix d = CMatrix::Zero(2, 2);
    d.diagonal() << 4.0 / 13.0, 9.0 / 13.0;
    CMatrix expected = CMatrix::Zero(2, 2);
    expected.diagonal() << 2.0 / std::sqrt(13.0), 3.0 / std::sqrt(13.0);
    CHECK(max_abs(matrix_sqrt_psd(d) - expected) < 1e-15);

    std::mt19937_64 rng(3);
    const CMatrix rho = oracle::random_density(6, rng, 3);
    const CMatrix root = matrix_sqrt_psd(rho);
    CHECK(max_abs(root * root - rho) < 1e-8);

    CMatrix clipped = CMatrix::Zero(2, 2);
    clipped.diagonal() << 1.0, -1e-10;
    CHECK(std::abs(matrix_sqrt_psd(clipped)(1, 1)) == 0.0);

    CMatrix negative = CMatrix::Zero(2, 2);
    negative.diagonal() << 1.0, -1e-8;
    CHECK(code_of([&] { matrix_sqrt_psd(negative); }) == ErrorCode::not_psd);
  }

  TEST_CASE("number tail weight") {
    const FockQubitSpace space(9);
    CHECK(number_tail_weight(StateVector::basis(space, 0, Qubit::e), 0.5) == 0.0);

    const CVector uniform = CVector::Constant(space.dim(), 1.0);
    CHECK(number_tail_weight(StateVector(space, uniform), 0.5) == doctest::Approx(0.5));
    CHECK(code_of([&] { number_tail_weight(StateVector(space, uniform), 0.0); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([&] { number_tail_weight(StateVector(space, uniform), 1.5); }) ==
          ErrorCode::invalid_argument);

    // A strongly squeezed vacuum overflows a small cutoff; doubling fixes it.
    const auto squeezed_tail = [](int n_max) {
      const FockQubitSpace s(n_max);
      const CVector v = squeeze_op(s, -0.9).matrix().col(0);
      return number_tail_weight(v, 0.1);
    };
    CHECK(squeezed_tail(20) > 1e-10);
    CHECK(squeezed_tail(160) < 1e-10);
  }

  TEST_CASE("subsystem names round trip") {
    for (Subsystem s : {Subsystem::composite, Subsystem::qubit, Subsystem::field}) {
      CHECK(parse_subsystem(to_string(s)) == s);
    }
    CHECK(code_of([] { parse_subsystem("photon"); }) == ErrorCode::invalid_argument);
  }
}
