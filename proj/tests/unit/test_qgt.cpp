#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "djcm/error.hpp"
#include "djcm/qgt.hpp"
#include "oracles.hpp"

using namespace djcm;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected djcm::Error");
  return ErrorCode::invalid_argument;
}

double relative_frobenius(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  return (a - b).norm() / b.norm();
}

const EigenLabel kDark = EigenLabel::dark();

}  // namespace

TEST_SUITE("quantum-geometry") {
  TEST_CASE("dark state at eta = 0") {
    const FockQubitSpace space(200);
    const QGTResult q = qgt_sum(space, {1.0, 0.0, 0.0}, kDark);
    CHECK(q.G(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(q.G(1, 1)) < 1e-15);
    CHECK(std::abs(q.B(0, 1)) < 1e-15);
    CHECK(q.converged);
    CHECK(q.method == QgtMethod::sum);

    const QGTResult fd = qgt_fd(space, {1.0, 0.0, 0.0}, kDark);
    CHECK(fd.G(0, 0) == doctest::Approx(0.25).epsilon(1e-6));
  }

  TEST_CASE("phi row and column vanish at eta = 0 for every label") {
    const FockQubitSpace space(100);
    const SpectralData data = prepare_spectral_data(space, {1.0, 0.0, 0.3});
    for (const EigenLabel& l : labels_through(3)) {
      const QGTResult q = qgt_sum(data, l);
      CHECK(std::abs(q.Q(0, 1)) == 0.0);
      CHECK(std::abs(q.Q(1, 0)) == 0.0);
      CHECK(std::abs(q.Q(1, 1)) == 0.0);
    }
  }

  TEST_CASE("dark state against the product-state closed form") {
    const FockQubitSpace space(200);
    for (double eta : {0.3, 0.6, 0.9}) {
      const oracle::DarkGeometry ref = oracle::dark_geometry(eta);
      const QGTResult q = qgt_sum(space, {1.0, eta, 0.0}, kDark);
      CHECK(q.G(0, 0) == doctest::Approx(ref.g_eta_eta).epsilon(1e-9));
      CHECK(q.G(1, 1) == doctest::Approx(ref.g_phi_phi).epsilon(1e-9));
      CHECK(q.B(0, 1) == doctest::Approx(ref.b_eta_phi).epsilon(1e-9));
    }
  }

  TEST_CASE("Omega invariance") {
    const FockQubitSpace space(100);
    for (const EigenLabel& l : labels_through(2)) {
      const QGTResult a = qgt_sum(space, {1.0, 0.5, 0.4}, l);
      const QGTResult b = qgt_sum(space, {2.7, 0.5, 0.4}, l);
      CHECK((a.Q - b.Q).cwiseAbs().maxCoeff() < 1e-10 * a.Q.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("sum and finite-difference routes agree") {
    const FockQubitSpace space(200);
    for (double eta : {0.2, 0.5, 0.8}) {
      const SpectralData data = prepare_spectral_data(space, {1.0, eta, 0.0});
      for (const EigenLabel& l : labels_through(3)) {
        const QGTResult sum = qgt_sum(data, l);
        const QGTResult fd = qgt_fd(space, {1.0, eta, 0.0}, l);
        CHECK(relative_frobenius(fd.Q, sum.Q) < 1e-2);
        CHECK(sum.satisfies_invariants());
        CHECK(fd.satisfies_invariants(1e-6));
      }
    }
  }

  TEST_CASE("finite differences from numerical eigenvectors") {
    const FockQubitSpace space(100);
    QgtFdOptions opts;
    opts.source = StateSource::numerical;
    const ModelParams p(1.0, 0.5, 0.0);
    const QGTResult fd = qgt_fd(space, p, EigenLabel::bright(1, Branch::minus), opts);
    const QGTResult sum = qgt_sum(space, p, EigenLabel::bright(1, Branch::minus));
    CHECK(relative_frobenius(fd.Q, sum.Q) < 1e-4);
  }

  TEST_CASE("finite-difference gauge fixing removes input phases") {
    const FockQubitSpace space(100);
    const EigenLabel l = EigenLabel::bright(2, Branch::plus);
    const double eta = 0.5, phi = 0.3, h = 1e-4;
    const auto state = [&](double e, double p) {
      return stencil_state(space, l, 1.0, e, p, StateSource::analytic);
    };
    FdStencil s{state(eta, phi),
                {state(eta + h, phi), state(eta, phi + h)},
                {state(eta - h, phi), state(eta, phi - h)},
                {h, h}};
    const Eigen::Matrix2cd ref = qgt_from_stencil(s);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    for (int trial = 0; trial < 5; ++trial) {
      FdStencil r = s;
      r.center *= std::polar(1.0, angle(rng));
      for (int mu = 0; mu < 2; ++mu) {
        r.plus[mu] *= std::polar(1.0, angle(rng));
        r.minus[mu] *= std::polar(1.0, angle(rng));
      }
      CHECK((qgt_from_stencil(r) - ref).cwiseAbs().maxCoeff() < 1e-12 * ref.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("ambiguous gauge anchor is rejected") {
    CVector centre(2), shifted(2);
    centre << 1.0, 1.0;
    shifted << 1.0, std::polar(1.0, 0.5);
    centre /= centre.norm();
    shifted /= shifted.norm();
    const FdStencil s{centre, {shifted, centre}, {centre, centre}, {1e-4, 1e-4}};
    CHECK(code_of([&] { qgt_from_stencil(s); }) == ErrorCode::gauge_anchor_ambiguous);
  }

  TEST_CASE("zero components at phi = 0") {
    const FockQubitSpace space(200);
    for (double eta : {0.3, 0.9}) {
      const SpectralData data = prepare_spectral_data(space, {1.0, eta, 0.0});
      for (const EigenLabel& l : labels_through(2)) {
        const QGTResult q = qgt_sum(data, l);
        CHECK(std::abs(q.G(0, 1)) < 1e-8);
        CHECK(std::abs(q.B(0, 0)) < 1e-8);
        CHECK(std::abs(q.B(1, 1)) < 1e-8);
        const QGTResult fd = qgt_fd(space, {1.0, eta, 0.0}, l);
        CHECK(std::abs(fd.G(0, 1)) < 1e-8);
        CHECK(std::abs(fd.B(0, 0)) < 1e-8);
      }
    }
  }

  TEST_CASE("phi independence of the reported components") {
    const FockQubitSpace space(200);
    const SpectralData base = prepare_spectral_data(space, {1.0, 0.7, 0.0});
    for (double phi : {0.7, 2.1}) {
      const SpectralData data = prepare_spectral_data(space, {1.0, 0.7, phi});
      for (const EigenLabel& l : labels_through(2)) {
        const QGTResult a = qgt_sum(base, l);
        const QGTResult b = qgt_sum(data, l);
        CHECK(b.G(0, 0) == doctest::Approx(a.G(0, 0)).epsilon(1e-6));
        CHECK(b.G(1, 1) == doctest::Approx(a.G(1, 1)).epsilon(1e-6));
        CHECK(b.B(0, 1) == doctest::Approx(a.B(0, 1)).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("both branches of a doublet share the tensor") {
    const FockQubitSpace space(200);
    const SpectralData data = prepare_spectral_data(space, {1.0, 0.8, 0.0});
    for (int n = 1; n <= 3; ++n) {
      const QGTResult plus = qgt_sum(data, EigenLabel::bright(n, Branch::plus));
      const QGTResult minus = qgt_sum(data, EigenLabel::bright(n, Branch::minus));
      CHECK(relative_frobenius(plus.Q, minus.Q) < 1e-8);
    }
  }

  TEST_CASE("error paths") {
    const FockQubitSpace space(100);
    SUBCASE("finite differences need a gap") {
      CHECK(code_of([&] { qgt_fd(space, {1.0, 0.99999, 0.0}, EigenLabel::bright(2, Branch::plus)); }) ==
            ErrorCode::gap_too_small);
    }
    SUBCASE("a coupled degenerate partner") {
      const FockQubitSpace tiny(1);
      SpectralData data{tiny, {1.0, 0.0, 0.0}, {RVector(4), CMatrix::Identity(4, 4)},
                        CMatrix::Zero(4, 4), CMatrix::Zero(4, 4)};
      data.eigen.values << 0.0, 0.0, 1.0, 2.0;
      data.d_eta(1, 0) = data.d_eta(0, 1) = 1.0;
      CHECK(code_of([&] { qgt_sum(data, kDark); }) == ErrorCode::degenerate_level);
      data.d_eta(1, 0) = data.d_eta(0, 1) = 0.0;
      data.d_eta(2, 0) = data.d_eta(0, 2) = 1.0;
      CHECK(qgt_sum(data, kDark).G(0, 0) == doctest::Approx(1.0));
    }
    SUBCASE("a truncated sum that has not converged") {
      QgtSumOptions opts;
      opts.m_cut = 2;
      CHECK(code_of([&] { qgt_sum(space, {1.0, 0.5, 0.0}, kDark, opts); }) ==
            ErrorCode::sum_not_converged);
      opts.require_convergence = false;
      const QGTResult q = qgt_sum(space, {1.0, 0.5, 0.0}, kDark, opts);
      CHECK_FALSE(q.converged);
      CHECK(q.terms == 2);
    }
  }

  TEST_CASE("truncation doubling leaves the tensor unchanged") {
    for (const EigenLabel& l : labels_through(2)) {
      const ModelParams p(1.0, 0.9, 0.0);
      const QGTResult a = qgt_sum(FockQubitSpace(150), p, l);
      const QGTResult b = qgt_sum(FockQubitSpace(300), p, l);
      CHECK(relative_frobenius(a.Q, b.Q) < 1e-3);
    }
  }
}
