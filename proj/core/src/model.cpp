#include "djcm/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "djcm/error.hpp"

namespace djcm {

namespace {

bool finite(double x) { return std::isfinite(x); }

// Fills the three bosonic ladders of H: a^dag |g><e| + h.c. with weight
// `coupling`, and a^dag (x) 1 with weight `drive` (plus its conjugate).
CMatrix ladder_matrix(const FockQubitSpace& space, double coupling, Complex drive) {
  const int d = space.dim();
  CMatrix h = CMatrix::Zero(d, d);
  for (int n = 0; n < space.n_max(); ++n) {
    const double amp = std::sqrt(static_cast<double>(n + 1));
    const int up_g = FockQubitSpace::index(n + 1, Qubit::g);
    const int up_e = FockQubitSpace::index(n + 1, Qubit::e);
    const int lo_g = FockQubitSpace::index(n, Qubit::g);
    const int lo_e = FockQubitSpace::index(n, Qubit::e);
    if (coupling != 0.0) {
      h(up_g, lo_e) = coupling * amp;
      h(lo_e, up_g) = coupling * amp;
    }
    if (drive != Complex{}) {
      h(up_g, lo_g) = drive * amp;
      h(lo_g, up_g) = std::conj(drive) * amp;
      h(up_e, lo_e) = drive * amp;
      h(lo_e, up_e) = std::conj(drive) * amp;
    }
  }
  return h;
}

Complex phase(double angle) { return std::polar(1.0, angle); }

double doublet_scale(const ModelParams& p) {
  return p.omega() * std::pow(1.0 - p.eta() * p.eta(), 0.75);
}

}  // namespace

ModelParams::ModelParams(double omega, double eta, double phi)
    : omega_(omega), eta_(eta), phi_(phi) {
  if (!finite(omega) || omega <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "omega must be > 0, got " + std::to_string(omega));
  }
  if (!finite(eta) || eta < 0.0 || eta >= 1.0) {
    throw Error(ErrorCode::invalid_argument, "eta must lie in [0, 1), got " + std::to_string(eta));
  }
  if (!finite(phi)) throw Error(ErrorCode::invalid_argument, "phi must be finite");
}

EigenLabel EigenLabel::bright(int n, Branch branch) {
  if (n < 1) {
    throw Error(ErrorCode::invalid_argument,
                "bright label needs n >= 1, got " + std::to_string(n));
  }
  return {n, branch};
}

EigenLabel EigenLabel::parse(std::string_view text) {
  if (text == "dark") return dark();
  const auto fail = [&] {
    return Error(ErrorCode::invalid_argument,
                 "bad label '" + std::string(text) + "' (expected dark, n<k>+ or n<k>-)");
  };
  if (text.size() < 3 || text.front() != 'n') throw fail();
  const char sign = text.back();
  if (sign != '+' && sign != '-') throw fail();
  const std::string_view digits = text.substr(1, text.size() - 2);
  int n = 0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || end != digits.data() + digits.size() || n < 1) throw fail();
  return bright(n, sign == '+' ? Branch::plus : Branch::minus);
}

std::string EigenLabel::to_string() const {
  if (is_dark()) return "dark";
  return "n" + std::to_string(n_) + (branch_ == Branch::plus ? "+" : "-");
}

std::strong_ordering EigenLabel::operator<=>(const EigenLabel& other) const noexcept {
  if (auto c = n_ <=> other.n_; c != 0) return c;
  if (is_dark()) return std::strong_ordering::equal;
  return static_cast<int>(branch_) <=> static_cast<int>(other.branch_);
}

std::vector<EigenLabel> canonical_labels(int count) {
  if (count < 1) throw Error(ErrorCode::invalid_argument, "label count must be >= 1");
  std::vector<EigenLabel> labels{EigenLabel::dark()};
  for (int n = 1; static_cast<int>(labels.size()) < count; ++n) {
    labels.push_back(EigenLabel::bright(n, Branch::plus));
    if (static_cast<int>(labels.size()) < count) {
      labels.push_back(EigenLabel::bright(n, Branch::minus));
    }
  }
  return labels;
}

std::vector<EigenLabel> labels_through(int n_top) {
  if (n_top < 0) throw Error(ErrorCode::invalid_argument, "n_top must be >= 0");
  return canonical_labels(1 + 2 * n_top);
}

Operator build_hamiltonian(const FockQubitSpace& space, const ModelParams& params) {
  const Complex drive = 0.5 * params.omega() * params.eta() * phase(-params.phi());
  return {space, Subsystem::composite, ladder_matrix(space, params.omega(), drive)};
}

Operator dH_deta(const FockQubitSpace& space, const ModelParams& params) {
  const Complex drive = 0.5 * params.omega() * phase(-params.phi());
  return {space, Subsystem::composite, ladder_matrix(space, 0.0, drive)};
}

Operator dH_dphi(const FockQubitSpace& space, const ModelParams& params) {
  const Complex drive =
      Complex(0.0, -0.5 * params.omega() * params.eta()) * phase(-params.phi());
  return {space, Subsystem::composite, ladder_matrix(space, 0.0, drive)};
}

double analytic_energy(const EigenLabel& label, const ModelParams& params) {
  if (label.is_dark()) return 0.0;
  return label.sign() * std::sqrt(static_cast<double>(label.n())) * doublet_scale(params);
}

double analytic_gap(const EigenLabel& label, const ModelParams& params) {
  const double e = analytic_energy(label, params);
  double gap = std::numeric_limits<double>::infinity();
  const auto consider = [&](const EigenLabel& other) {
    if (other == label) return;
    gap = std::min(gap, std::abs(analytic_energy(other, params) - e));
  };
  consider(EigenLabel::dark());
  const int lo = std::max(1, label.n() - 1);
  for (int m = lo; m <= label.n() + 1; ++m) {
    consider(EigenLabel::bright(m, Branch::plus));
    consider(EigenLabel::bright(m, Branch::minus));
  }
  return gap;
}

AnalyticEigenstate realize_eigenstate(const FockQubitSpace& space, const EigenLabel& label,
                                      const ModelParams& params) {
  const double eta = params.eta();
  const double phi = params.phi();
  if (!label.is_dark() && label.n() > space.n_max()) {
    throw Error(ErrorCode::truncation_inadequate,
                "label " + label.to_string() + " needs n_max >= " + std::to_string(label.n()));
  }

  const double root = std::sqrt(1.0 - eta * eta);
  const double c_plus = std::sqrt(0.5 * (1.0 + root));
  // Equal to sqrt((1 - root) / 2) without the cancellation at small eta.
  const double c_minus = eta / std::sqrt(2.0 * (1.0 + root));
  const Complex xi = 0.25 * phase(-2.0 * phi) * std::log1p(-eta * eta);
  const Complex alpha =
      label.is_dark() ? Complex{} : -label.sign() * std::sqrt(double(label.n())) * eta * phase(-phi);

  const Eigen::Vector2cd phi0(c_plus, -phase(-phi) * c_minus);
  const Eigen::Vector2cd phi1(-phase(phi) * c_minus, c_plus);

  const CMatrix squeeze = squeeze_op(space, xi).matrix();
  const int nf = space.field_dim();
  CVector amplitudes = CVector::Zero(space.dim());
  const auto add_product = [&](const CVector& field, const Eigen::Vector2cd& qubit, Complex w) {
    for (int n = 0; n < nf; ++n) {
      amplitudes(2 * n) += w * field(n) * qubit(0);
      amplitudes(2 * n + 1) += w * field(n) * qubit(1);
    }
  };
  if (label.is_dark()) {
    add_product(squeeze.col(0), phi0, 1.0);
  } else {
    const CMatrix displaced = displacement_op(space, alpha).matrix();
    const double w = 1.0 / std::sqrt(2.0);
    const CVector upper = squeeze * displaced.col(label.n() - 1);
    const CVector lower = squeeze * displaced.col(label.n());
    add_product(upper, phi1, w);
    add_product(lower, phi0, w * label.sign());
  }

  StateVector state(space, std::move(amplitudes));
  const double tail = number_tail_weight(state, kTailFraction);
  return {label, analytic_energy(label, params), xi, alpha, c_plus, c_minus, phi0, phi1,
          std::move(state), tail};
}

AnalyticEigenstate analytic_eigenstate(const FockQubitSpace& space, const EigenLabel& label,
                                       const ModelParams& params, double tail_tolerance) {
  AnalyticEigenstate s = realize_eigenstate(space, label, params);
  if (!(s.tail_weight < tail_tolerance)) {
    throw Error(ErrorCode::truncation_inadequate,
                label.to_string() + " at eta=" + std::to_string(params.eta()) +
                    " has tail weight " + std::to_string(s.tail_weight) + " at n_max=" +
                    std::to_string(space.n_max()) + "; raise n_max");
  }
  return s;
}

MatchedLevel match_level(const EigenSystem& eig, const CVector& reference,
                         double degeneracy_tolerance) {
  const CVector coeffs = eig.vectors.adjoint() * reference;
  const RVector weights = coeffs.cwiseAbs2();
  Index best = 0;
  weights.maxCoeff(&best);
  const double centre = eig.values(best);

  std::vector<Index> cluster;
  Index lo = best;
  while (lo > 0 && std::abs(eig.values(lo - 1) - centre) < degeneracy_tolerance) --lo;
  Index hi = best;
  while (hi + 1 < eig.values.size() && std::abs(eig.values(hi + 1) - centre) < degeneracy_tolerance)
    ++hi;
  for (Index j = lo; j <= hi; ++j) cluster.push_back(j);

  const double ref_norm2 = reference.squaredNorm();
  if (cluster.size() == 1) {
    return {cluster, eig.vectors.col(best), centre, weights(best) / ref_norm2};
  }
  CVector projected = CVector::Zero(reference.size());
  double weight = 0.0;
  for (Index j : cluster) {
    projected += coeffs(j) * eig.vectors.col(j);
    weight += weights(j);
  }
  projected /= projected.norm();
  return {cluster, std::move(projected), centre, weight / ref_norm2};
}

std::vector<LabeledEigenpair> numerical_spectrum(const FockQubitSpace& space,
                                                 const ModelParams& params,
                                                 std::span<const EigenLabel> labels) {
  const EigenSystem eig = hermitian_eigendecomposition(build_hamiltonian(space, params));
  std::vector<LabeledEigenpair> out;
  out.reserve(labels.size());
  for (const EigenLabel& label : labels) {
    const AnalyticEigenstate a = realize_eigenstate(space, label, params);
    const MatchedLevel m =
        match_level(eig, a.state.amplitudes(), kDegeneracyTolerance * params.omega());
    if (m.overlap < kLabelOverlap) {
      throw Error(ErrorCode::labeling_ambiguous,
                  label.to_string() + " at eta=" + std::to_string(params.eta()) +
                      ": best squared overlap " + std::to_string(m.overlap) + " < " +
                      std::to_string(kLabelOverlap) + " (analytic tail weight " +
                      std::to_string(a.tail_weight) + ")");
    }
    out.push_back({label, m.energy / params.omega(), a.energy / params.omega(),
                   StateVector(space, m.vector), m.overlap, a.tail_weight, m.cluster.size()});
  }
  return out;
}

std::vector<LabeledEigenpair> numerical_spectrum(const FockQubitSpace& space,
                                                 const ModelParams& params, int count) {
  const std::vector<EigenLabel> labels = canonical_labels(count);
  return numerical_spectrum(space, params, std::span<const EigenLabel>(labels));
}

Operator covariance_unitary(const FockQubitSpace& space, double phi) {
  CMatrix u = CMatrix::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const int excitations =
        FockQubitSpace::photon_number(i) + static_cast<int>(FockQubitSpace::qubit(i));
    u(i, i) = phase(-phi * excitations);
  }
  return {space, Subsystem::composite, std::move(u)};
}

int adequate_n_max(const ModelParams& params, std::span<const EigenLabel> labels, int start,
                   int limit) {
  if (start < 1) throw Error(ErrorCode::invalid_argument, "start n_max must be >= 1");
  int top_n = 0;
  for (const EigenLabel& l : labels) top_n = std::max(top_n, l.n());
  for (int n_max = start; n_max <= limit; n_max *= 2) {
    if (n_max < top_n + 1) continue;
    const FockQubitSpace space(n_max);
    const bool ok = std::all_of(labels.begin(), labels.end(), [&](const EigenLabel& l) {
      return realize_eigenstate(space, l, params).tail_weight < kTailTolerance;
    });
    if (ok) return n_max;
  }
  throw Error(ErrorCode::truncation_inadequate,
              "no n_max <= " + std::to_string(limit) + " keeps the tail weight below " +
                  std::to_string(kTailTolerance) + " at eta=" + std::to_string(params.eta()));
}

}  // namespace djcm
