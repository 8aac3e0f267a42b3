#include "djcm/qgt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/QR>

#include "djcm/error.hpp"

namespace djcm {

std::string_view to_string(QgtMethod m) noexcept {
  return m == QgtMethod::sum ? "sum" : "finite-difference";
}

bool QGTResult::satisfies_invariants(double tolerance) const {
  const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
  const double tol = tolerance * scale;
  if (std::abs(G(0, 1) - G(1, 0)) > tol) return false;
  if (std::abs(B(0, 0)) > tol || std::abs(B(1, 1)) > tol) return false;
  if (std::abs(B(0, 1) + B(1, 0)) > tol) return false;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(0.5 * (G + G.transpose()));
  if (eig.eigenvalues().minCoeff() < -tol) return false;
  const double det = G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0);
  return std::sqrt(std::max(det, 0.0)) >= std::abs(B(0, 1)) / 2.0 - tol;
}

namespace {

QGTResult make_result(const ModelParams& params, const EigenLabel& label,
                      const Eigen::Matrix2cd& q, QgtMethod method) {
  QGTResult r{params, label, q, q.real(), -2.0 * q.imag(), method};
  return r;
}

struct SpectralTerm {
  double gap;
  Complex a_eta;
  Complex a_phi;
};

Eigen::Matrix2cd accumulate(const std::vector<SpectralTerm>& terms, std::size_t count) {
  Eigen::Matrix2cd q = Eigen::Matrix2cd::Zero();
  for (std::size_t i = 0; i < count; ++i) {
    const SpectralTerm& t = terms[i];
    const Eigen::Vector2cd a(t.a_eta, t.a_phi);
    q += a.conjugate() * a.transpose() / (t.gap * t.gap);
  }
  return q;
}

}  // namespace

SpectralData prepare_spectral_data(const FockQubitSpace& space, const ModelParams& params) {
  return {space, params, hermitian_eigendecomposition(build_hamiltonian(space, params)),
          dH_deta(space, params).matrix(), dH_dphi(space, params).matrix()};
}

QGTResult qgt_sum(const SpectralData& data, const EigenLabel& label,
                  const QgtSumOptions& options) {
  const double omega = data.params.omega();
  const AnalyticEigenstate reference = realize_eigenstate(data.space, label, data.params);
  const MatchedLevel level =
      match_level(data.eigen, reference.state.amplitudes(), kDegeneracyTolerance * omega);
  if (level.overlap < kLabelOverlap) {
    throw Error(ErrorCode::labeling_ambiguous,
                label.to_string() + ": best squared overlap " + std::to_string(level.overlap));
  }
  const CVector& target = level.vector;
  const CVector d_eta_psi = data.d_eta * target;
  const CVector d_phi_psi = data.d_phi * target;

  std::vector<SpectralTerm> terms;
  const Index count = data.eigen.values.size();
  terms.reserve(static_cast<std::size_t>(count));
  const CVector a_eta_all = data.eigen.vectors.adjoint() * d_eta_psi;
  const CVector a_phi_all = data.eigen.vectors.adjoint() * d_phi_psi;
  const auto in_cluster = [&](Index m) {
    return std::find(level.cluster.begin(), level.cluster.end(), m) != level.cluster.end();
  };
  for (Index m = 0; m < count; ++m) {
    if (in_cluster(m)) continue;
    terms.push_back({data.eigen.values(m) - level.energy, a_eta_all(m), a_phi_all(m)});
  }
  if (level.cluster.size() > 1) {
    // Inside a degenerate cluster the target is the projection of the analytic
    // state; its orthogonal complement within the cluster supplies the
    // remaining (zero-gap) partners.
    CMatrix basis(target.size(), static_cast<Index>(level.cluster.size()));
    for (std::size_t j = 0; j < level.cluster.size(); ++j) {
      basis.col(static_cast<Index>(j)) = data.eigen.vectors.col(level.cluster[j]);
    }
    const CVector coords = basis.adjoint() * target;
    const Eigen::HouseholderQR<CMatrix> qr(coords);
    const CMatrix full_q = qr.householderQ() * CMatrix::Identity(coords.size(), coords.size());
    for (Index j = 1; j < full_q.cols(); ++j) {
      const CVector partner = basis * full_q.col(j);
      const Index m = level.cluster[static_cast<std::size_t>(j)];
      terms.push_back({data.eigen.values(m) - level.energy, partner.dot(d_eta_psi),
                       partner.dot(d_phi_psi)});
    }
  }

  const double degeneracy_floor = options.degeneracy_floor * omega;
  const double coupling_floor = options.coupling_floor * omega;
  std::erase_if(terms, [&](const SpectralTerm& t) {
    if (std::abs(t.gap) >= degeneracy_floor) return false;
    const double coupling = std::max(std::abs(t.a_eta), std::abs(t.a_phi));
    if (coupling < coupling_floor) return true;
    throw Error(ErrorCode::degenerate_level,
                label.to_string() + " at eta=" + std::to_string(data.params.eta()) +
                    " couples (" + std::to_string(coupling) + ") to a level within " +
                    std::to_string(std::abs(t.gap)));
  });
  std::stable_sort(terms.begin(), terms.end(), [](const SpectralTerm& a, const SpectralTerm& b) {
    return std::abs(a.gap) < std::abs(b.gap);
  });

  std::size_t m_cut = terms.size();
  if (options.m_cut > 0) m_cut = std::min(m_cut, static_cast<std::size_t>(options.m_cut));
  const Eigen::Matrix2cd q = accumulate(terms, m_cut);
  const Eigen::Matrix2cd half = accumulate(terms, m_cut / 2);
  const double norm = q.norm();
  const double delta = norm > 0.0 ? (q - half).norm() / norm : (q - half).norm();

  QGTResult result = make_result(data.params, label, q, QgtMethod::sum);
  result.terms = static_cast<int>(m_cut);
  result.convergence_delta = delta;
  result.converged = delta < options.convergence_tolerance;
  if (!result.converged && options.require_convergence) {
    throw Error(ErrorCode::sum_not_converged,
                label.to_string() + " at eta=" + std::to_string(data.params.eta()) +
                    ": half-sum relative change " + std::to_string(delta));
  }
  return result;
}

QGTResult qgt_sum(const FockQubitSpace& space, const ModelParams& params, const EigenLabel& label,
                  const QgtSumOptions& options) {
  return qgt_sum(prepare_spectral_data(space, params), label, options);
}

namespace {

constexpr double kAnchorDominance = 10.0;
constexpr double kAnchorPhaseTolerance = 0.01;

CVector gauge_fixed(const CVector& v, Index anchor) {
  const Complex a = v(anchor);
  if (std::abs(a) == 0.0) {
    throw Error(ErrorCode::gauge_anchor_ambiguous, "stencil state vanishes at the gauge anchor");
  }
  return v * (std::conj(a) / std::abs(a));
}

}  // namespace

Eigen::Matrix2cd qgt_from_stencil(const FdStencil& stencil) {
  const RVector moduli = stencil.center.cwiseAbs();
  Index anchor = 0;
  const double top = moduli.maxCoeff(&anchor);
  double second = 0.0;
  for (Index i = 0; i < moduli.size(); ++i) {
    if (i != anchor) second = std::max(second, moduli(i));
  }
  const CVector c = gauge_fixed(stencil.center, anchor);
  std::array<CVector, 2> p{gauge_fixed(stencil.plus[0], anchor),
                           gauge_fixed(stencil.plus[1], anchor)};
  std::array<CVector, 2> m{gauge_fixed(stencil.minus[0], anchor),
                           gauge_fixed(stencil.minus[1], anchor)};

  if (top < kAnchorDominance * second) {
    for (const CVector* v : {&p[0], &p[1], &m[0], &m[1]}) {
      const double drift = std::abs(std::arg(c.dot(*v)));
      if (drift > kAnchorPhaseTolerance) {
        throw Error(ErrorCode::gauge_anchor_ambiguous,
                    "anchor amplitude not dominant and overlap phase drifts by " +
                        std::to_string(drift));
      }
    }
  }

  std::array<CVector, 2> d;
  for (int mu = 0; mu < 2; ++mu) d[mu] = (p[mu] - m[mu]) / (2.0 * stencil.steps[mu]);
  Eigen::Matrix2cd q;
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) {
      q(mu, nu) = d[mu].dot(d[nu]) - d[mu].dot(c) * c.dot(d[nu]);
    }
  }
  return q;
}

CVector stencil_state(const FockQubitSpace& space, const EigenLabel& label, double omega,
                      double eta, double phi, StateSource source) {
  if (eta < 0.0) {
    eta = -eta;
    phi += std::numbers::pi;
  }
  const ModelParams params(omega, eta, phi);
  const AnalyticEigenstate analytic = realize_eigenstate(space, label, params);
  if (source == StateSource::analytic) return analytic.state.amplitudes();
  const EigenSystem eig = hermitian_eigendecomposition(build_hamiltonian(space, params));
  const MatchedLevel level =
      match_level(eig, analytic.state.amplitudes(), kDegeneracyTolerance * omega);
  if (level.overlap < kLabelOverlap) {
    throw Error(ErrorCode::labeling_ambiguous,
                label.to_string() + " stencil point: best squared overlap " +
                    std::to_string(level.overlap));
  }
  return level.vector;
}

QGTResult qgt_fd(const FockQubitSpace& space, const ModelParams& params, const EigenLabel& label,
                 const QgtFdOptions& options) {
  const double gap = analytic_gap(label, params);
  if (gap < options.gap_floor * params.omega()) {
    throw Error(ErrorCode::gap_too_small,
                label.to_string() + " gap " + std::to_string(gap) +
                    " is below the finite-difference floor; use the spectral sum");
  }
  if (!(options.step_eta > 0.0 && options.step_phi > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "finite-difference steps must be > 0");
  }
  // Truncation check at the centre point.
  (void)analytic_eigenstate(space, label, params);

  const double omega = params.omega();
  const CVector center =
      stencil_state(space, label, omega, params.eta(), params.phi(), options.source);
  const auto evaluate = [&](double h_eta, double h_phi) {
    if (params.eta() + h_eta >= 1.0) {
      throw Error(ErrorCode::invalid_argument, "eta step crosses eta = 1");
    }
    FdStencil s;
    s.center = center;
    s.steps = {h_eta, h_phi};
    s.plus[0] = stencil_state(space, label, omega, params.eta() + h_eta, params.phi(), options.source);
    s.minus[0] = stencil_state(space, label, omega, params.eta() - h_eta, params.phi(), options.source);
    s.plus[1] = stencil_state(space, label, omega, params.eta(), params.phi() + h_phi, options.source);
    s.minus[1] = stencil_state(space, label, omega, params.eta(), params.phi() - h_phi, options.source);
    return qgt_from_stencil(s);
  };

  double h_eta = options.step_eta;
  double h_phi = options.step_phi;
  Eigen::Matrix2cd coarse = evaluate(h_eta, h_phi);
  Eigen::Matrix2cd fine = coarse;
  double delta = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int halving = 0; halving < std::max(1, options.max_halvings); ++halving) {
    h_eta *= 0.5;
    h_phi *= 0.5;
    fine = evaluate(h_eta, h_phi);
    const double norm = fine.norm();
    delta = norm > 0.0 ? (fine - coarse).norm() / norm : (fine - coarse).norm();
    if (delta < options.tolerance) {
      converged = true;
      break;
    }
    coarse = fine;
  }

  QGTResult result = make_result(params, label, fine, QgtMethod::finite_difference);
  result.converged = converged;
  result.convergence_delta = delta;
  result.step = h_eta;
  return result;
}

}  // namespace djcm
