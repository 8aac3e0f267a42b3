#pragma once

// Driven Jaynes-Cummings model on resonance, in the interaction picture:
//
//   H = Omega [ a^dag |g><e| + a |e><g| + eta (a^dag e^{-i phi} + a e^{i phi}) / 2 ]
//
// Closed-form spectrum: a unique dark level E_0 = 0 and bright doublets
// E_{n,+-} = +- sqrt(n) Omega (1 - eta^2)^{3/4}, n >= 1.  All energies are
// reported in units of Omega.

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "djcm/fock.hpp"
#include "djcm/linalg.hpp"

namespace djcm {

/// Default upper end of the drive amplitude range used by scans.  Above it the
/// squeezing of the eigenstates makes truncation demands grow very quickly.
inline constexpr double kEtaCap = 0.99;
/// Truncation diagnostics: tail probability allowed in the top kTailFraction
/// of the photon levels.
inline constexpr double kTailTolerance = 1e-10;
inline constexpr double kTailFraction = 0.1;
/// Squared overlap required to attach an analytic label to a numerical
/// eigenvector.
inline constexpr double kLabelOverlap = 0.99;
/// Eigenvalues closer than this (times Omega) are treated as one cluster.
inline constexpr double kDegeneracyTolerance = 1e-10;

class ModelParams {
 public:
  /// Requires omega > 0, 0 <= eta < 1 and finite phi.
  ModelParams(double omega, double eta, double phi);

  double omega() const noexcept { return omega_; }
  double eta() const noexcept { return eta_; }
  double phi() const noexcept { return phi_; }

  ModelParams with_omega(double omega) const { return {omega, eta_, phi_}; }
  ModelParams with_eta(double eta) const { return {omega_, eta, phi_}; }
  ModelParams with_phi(double phi) const { return {omega_, eta_, phi}; }

  bool operator==(const ModelParams&) const = default;

 private:
  double omega_;
  double eta_;
  double phi_;
};

enum class Branch { plus, minus };

class EigenLabel {
 public:
  static EigenLabel dark() noexcept { return EigenLabel(); }
  /// Throws Error(invalid_argument) for n < 1.
  static EigenLabel bright(int n, Branch branch);
  /// Accepts "dark", "n<k>+" and "n<k>-".
  static EigenLabel parse(std::string_view text);

  bool is_dark() const noexcept { return n_ == 0; }
  int n() const noexcept { return n_; }
  Branch branch() const noexcept { return branch_; }
  int sign() const noexcept { return branch_ == Branch::plus ? 1 : -1; }

  std::string to_string() const;

  /// dark < n1+ < n1- < n2+ < ...
  std::strong_ordering operator<=>(const EigenLabel& other) const noexcept;
  bool operator==(const EigenLabel& other) const noexcept = default;

 private:
  EigenLabel() = default;
  EigenLabel(int n, Branch b) : n_(n), branch_(b) {}

  int n_ = 0;
  Branch branch_ = Branch::plus;
};

/// The first `count` labels in the order dark, n1+, n1-, n2+, n2-, ...
std::vector<EigenLabel> canonical_labels(int count);
/// dark plus both branches of n = 1..n_top.
std::vector<EigenLabel> labels_through(int n_top);

struct AnalyticEigenstate {
  EigenLabel label;
  double energy;
  Complex xi;     // squeeze parameter e^{-2 i phi} ln(1 - eta^2) / 4
  Complex alpha;  // displacement -+ sqrt(n) eta e^{-i phi}; zero for dark
  double c_plus;
  double c_minus;
  Eigen::Vector2cd phi0;  // c+ |g> - e^{-i phi} c- |e>, components (g, e)
  Eigen::Vector2cd phi1;  // c+ |e> - e^{+i phi} c- |g>
  StateVector state;
  double tail_weight;
};

Operator build_hamiltonian(const FockQubitSpace& space, const ModelParams& params);
Operator dH_deta(const FockQubitSpace& space, const ModelParams& params);
Operator dH_dphi(const FockQubitSpace& space, const ModelParams& params);

double analytic_energy(const EigenLabel& label, const ModelParams& params);
/// Distance from the level to its nearest closed-form neighbour.
double analytic_gap(const EigenLabel& label, const ModelParams& params);

/// Closed-form eigenstate realized in the truncated space.  Throws
/// Error(truncation_inadequate) when the tail weight exceeds tail_tolerance.
AnalyticEigenstate analytic_eigenstate(const FockQubitSpace& space, const EigenLabel& label,
                                       const ModelParams& params,
                                       double tail_tolerance = kTailTolerance);

/// Same construction without the truncation check; tail_weight is still set.
AnalyticEigenstate realize_eigenstate(const FockQubitSpace& space, const EigenLabel& label,
                                      const ModelParams& params);

/// Numerical eigenvector (or degenerate cluster) best matching a reference
/// vector.  For a cluster the returned vector is the normalized projection of
/// the reference onto the cluster subspace.
struct MatchedLevel {
  std::vector<Index> cluster;
  CVector vector;
  double energy;
  double overlap;
};

MatchedLevel match_level(const EigenSystem& eig, const CVector& reference,
                         double degeneracy_tolerance);

struct LabeledEigenpair {
  EigenLabel label;
  double energy;
  double analytic_energy;
  StateVector state;
  double overlap;
  double analytic_tail_weight;
  std::size_t cluster_size;
};

/// Diagonalizes H and attaches analytic labels by maximum squared overlap.
/// Throws Error(labeling_ambiguous) if any overlap falls below kLabelOverlap.
std::vector<LabeledEigenpair> numerical_spectrum(const FockQubitSpace& space,
                                                 const ModelParams& params, int count);
std::vector<LabeledEigenpair> numerical_spectrum(const FockQubitSpace& space,
                                                 const ModelParams& params,
                                                 std::span<const EigenLabel> labels);

/// exp(-i phi (a^dag a + |e><e|)), which maps H(eta, 0) to H(eta, phi).
Operator covariance_unitary(const FockQubitSpace& space, double phi);

/// Smallest n_max = start * 2^k (k >= 0, n_max <= limit) for which every
/// requested analytic eigenstate passes the truncation check.
int adequate_n_max(const ModelParams& params, std::span<const EigenLabel> labels, int start,
                   int limit = 1600);

}  // namespace djcm
