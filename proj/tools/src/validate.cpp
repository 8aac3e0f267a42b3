#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include <json.hpp>

#include "djcm/bures.hpp"
#include "djcm/cli/commands.hpp"
#include "djcm/cli/rows.hpp"
#include "djcm/error.hpp"
#include "djcm/qgt.hpp"
#include "djcm/sweep.hpp"

namespace djcm::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Suite {
 public:
  explicit Suite(ValidationReport& report) : report_(report) {}

  /// Runs `measure` and records measured < bound (or > bound).  Exceptions
  /// become a failed check with a NaN measurement.
  void check(const std::string& module, const std::string& name, double bound,
             const std::string& relation, const std::function<double()>& measure) {
    double value = kNaN;
    try {
      value = measure();
    } catch (const std::exception&) {
      value = kNaN;
    }
    const bool passed = relation == "<" ? value < bound : value > bound;
    report_.checks.push_back({module, name, value, bound, relation, passed});
  }

 private:
  ValidationReport& report_;
};

CMatrix random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = {normal(rng), normal(rng)};
  return 0.5 * (m + m.adjoint());
}

CMatrix random_density(int dim, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix g(dim, rank);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = {normal(rng), normal(rng)};
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

double identity_defect(const CMatrix& m, int block) {
  return max_abs(m.topLeftCorner(block, block) - CMatrix::Identity(block, block));
}

double relative_frobenius(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  return (a - b).norm() / b.norm();
}

SpectralData spectral(const FockQubitSpace& space, const ModelParams& p, Fault fault) {
  SpectralData data = prepare_spectral_data(space, p);
  if (fault == Fault::flip_dphi) data.d_phi = -data.d_phi;
  return data;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

void fock_checks(Suite& suite, std::mt19937_64& rng) {
  const std::string m = "fock-core";
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double angle = 2.0 * std::numbers::pi * unit(rng);
  const Complex alpha = std::polar(unit(rng), angle);
  const Complex xi = std::polar(0.5 * unit(rng), 2.0 * std::numbers::pi * unit(rng));
  const FockQubitSpace space(60);

  suite.check(m, "displacement_unitarity", 1e-8, "<", [&] {
    const CMatrix d = displacement_op(space, alpha).matrix();
    return identity_defect(d.adjoint() * d, 20);
  });
  suite.check(m, "displacement_inverse", 1e-8, "<", [&] {
    return identity_defect(
        displacement_op(space, alpha).matrix() * displacement_op(space, -alpha).matrix(), 20);
  });
  suite.check(m, "squeeze_inverse", 1e-8, "<", [&] {
    return identity_defect(squeeze_op(space, xi).matrix() * squeeze_op(space, -xi).matrix(), 20);
  });
  suite.check(m, "squeezed_vacuum_mean_error", 1e-10, "<", [&] {
    const CVector v = squeeze_op(space, -0.111572).matrix().col(0);
    const double mean = (v.adjoint() * number_op(space).matrix() * v)(0, 0).real();
    return std::abs(mean - std::pow(std::sinh(0.111572), 2));
  });
  suite.check(m, "commutator_defect_below_cutoff", 1e-12, "<", [&] {
    const CMatrix a = annihilation_op(space).matrix();
    const CMatrix c = a * a.adjoint() - a.adjoint() * a;
    const int keep = space.field_dim() - 1;
    return identity_defect(c, keep);
  });
  const CMatrix h = random_hermitian(402, rng);
  const EigenSystem eig = hermitian_eigendecomposition(h);
  suite.check(m, "eigen_residual_dim402", 1e-9, "<", [&] {
    return max_abs(h * eig.vectors - eig.vectors * eig.values.asDiagonal()) / h.norm();
  });
  suite.check(m, "eigen_orthonormality_dim402", 1e-10, "<", [&] {
    return max_abs(eig.vectors.adjoint() * eig.vectors - CMatrix::Identity(402, 402));
  });
  suite.check(m, "partial_trace_trace_error", 1e-12, "<", [&] {
    const DensityMatrix rho(random_density(22, 22, rng), Subsystem::composite);
    double worst = 0.0;
    for (Subsystem s : {Subsystem::qubit, Subsystem::field}) {
      worst = std::max(worst, std::abs(partial_trace(rho, s).matrix().trace() - 1.0));
    }
    return worst;
  });
  suite.check(m, "psd_sqrt_square_error", 1e-8, "<", [&] {
    const CMatrix rho = random_density(12, 4, rng);
    const CMatrix r = matrix_sqrt_psd(rho);
    return max_abs(r * r - rho);
  });
}

void model_checks(Suite& suite, std::mt19937_64& rng) {
  const std::string m = "djcm-model";
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ModelParams random_params(0.2 + 2.0 * unit(rng), 0.99 * unit(rng), 6.0 * unit(rng));
  suite.check(m, "hamiltonian_hermiticity", 1e-12, "<", [&] {
    return hermiticity_defect(build_hamiltonian(FockQubitSpace(100), random_params).matrix());
  });

  const FockQubitSpace space(200);
  double worst_energy = 0.0, worst_infidelity = 0.0, worst_residual = 0.0;
  bool spectrum_ok = true;
  try {
    for (double eta : {0.0, 0.4, 0.8, 0.95}) {
      const ModelParams p(1.0, eta, 0.0);
      const CMatrix h = build_hamiltonian(space, p).matrix();
      for (const LabeledEigenpair& e : numerical_spectrum(space, p, 11)) {
        worst_energy = std::max(worst_energy, std::abs(e.energy - e.analytic_energy));
        worst_infidelity = std::max(worst_infidelity, 1.0 - e.overlap);
        const AnalyticEigenstate a = analytic_eigenstate(space, e.label, p);
        const CVector& v = a.state.amplitudes();
        worst_residual = std::max(worst_residual, (h * v - a.energy * v).norm());
      }
    }
  } catch (const Error&) {
    spectrum_ok = false;
  }
  suite.check(m, "energy_error_max", 1e-6, "<", [&] { return spectrum_ok ? worst_energy : kNaN; });
  suite.check(m, "eigenvector_infidelity_max", 1e-8, "<",
              [&] { return spectrum_ok ? worst_infidelity : kNaN; });
  suite.check(m, "eigen_residual_max", 1e-7, "<",
              [&] { return spectrum_ok ? worst_residual : kNaN; });

  const double phi = 6.0 * unit(rng);
  suite.check(m, "phi_covariance_spectrum", 1e-9, "<", [&] {
    const FockQubitSpace s(100);
    const RVector a = hermitian_eigendecomposition(build_hamiltonian(s, {1.0, 0.7, 0.0})).values;
    const RVector b = hermitian_eigendecomposition(build_hamiltonian(s, {1.0, 0.7, phi})).values;
    return (a - b).cwiseAbs().maxCoeff();
  });
  suite.check(m, "dark_energy_at_eta_0.99", 1e-8, "<", [&] {
    const ModelParams p(1.0, 0.99, 0.0);
    const std::vector<EigenLabel> dark{EigenLabel::dark()};
    const FockQubitSpace s(adequate_n_max(p, dark, 200));
    return std::abs(numerical_spectrum(s, p, dark).front().energy);
  });
  suite.check(m, "doublet_splitting_error", 1e-6, "<", [&] {
    const ModelParams p(1.0, 0.6, 0.0);
    const auto spectrum = numerical_spectrum(space, p, 11);
    double worst = 0.0;
    for (int n = 1; n <= 5; ++n) {
      const double split = spectrum[2 * n - 1].energy - spectrum[2 * n].energy;
      worst = std::max(worst, std::abs(split - 2.0 * std::sqrt(double(n)) * std::pow(0.64, 0.75)));
    }
    return worst;
  });
}

void geometry_checks(Suite& suite, const RunConfig& config) {
  const std::string m = "quantum-geometry";
  const Fault fault = config.fault;
  const FockQubitSpace space(200);
  const std::vector<EigenLabel> through3 = labels_through(3);
  const std::vector<EigenLabel> through5 = labels_through(5);

  suite.check(m, "dark_G_eta_eta_at_eta_0_error", 1e-6, "<", [&] {
    return std::abs(qgt_sum(spectral(space, {1.0, 0.0, 0.0}, fault), EigenLabel::dark()).G(0, 0) -
                    0.25);
  });

  suite.check(m, "route_equivalence_rel_frobenius", 1e-2, "<", [&] {
    double worst = 0.0;
    for (double eta : {0.2, 0.5, 0.8}) {
      const ModelParams p(1.0, eta, 0.0);
      const SpectralData data = spectral(space, p, fault);
      for (const EigenLabel& l : through3) {
        worst = std::max(worst, relative_frobenius(qgt_fd(space, p, l).Q, qgt_sum(data, l).Q));
      }
    }
    return worst;
  });

  suite.check(m, "zero_components_qgt_phi0", 1e-8, "<", [&] {
    double worst = 0.0;
    for (double eta : {0.5, 0.9}) {
      const SpectralData data = spectral(space, {1.0, eta, 0.0}, fault);
      for (const EigenLabel& l : through3) {
        const QGTResult q = qgt_sum(data, l);
        worst = std::max({worst, std::abs(q.G(0, 1)), std::abs(q.B(0, 0)), std::abs(q.B(1, 1))});
      }
    }
    return worst;
  });

  suite.check(m, "zero_components_bures_phi0", 1e-8, "<", [&] {
    double worst = 0.0;
    for (const EigenLabel& l : labels_through(1)) {
      for (Subsystem s : {Subsystem::composite, Subsystem::qubit, Subsystem::field}) {
        worst = std::max(worst, std::abs(bures_metric(space, {1.0, 0.6, 0.0}, l, s).g(0, 1)));
      }
    }
    return worst;
  });

  suite.check(m, "phi_independence_rel", 1e-6, "<", [&] {
    double worst = 0.0;
    const SpectralData base = spectral(space, {1.0, 0.7, 0.0}, fault);
    for (double phi : {0.7, 2.1}) {
      const SpectralData data = spectral(space, {1.0, 0.7, phi}, fault);
      for (const EigenLabel& l : labels_through(2)) {
        const QGTResult a = qgt_sum(base, l), b = qgt_sum(data, l);
        worst = std::max({worst, rel(b.G(0, 0), a.G(0, 0)), rel(b.G(1, 1), a.G(1, 1)),
                          rel(b.B(0, 1), a.B(0, 1))});
      }
    }
    return worst;
  });

  suite.check(m, "omega_independence_rel", 1e-10, "<", [&] {
    double worst = 0.0;
    const FockQubitSpace s(100);
    const SpectralData a = spectral(s, {1.0, 0.5, 0.4}, fault);
    const SpectralData b = spectral(s, {2.7, 0.5, 0.4}, fault);
    for (const EigenLabel& l : labels_through(2)) {
      const QGTResult qa = qgt_sum(a, l), qb = qgt_sum(b, l);
      worst = std::max(worst, (qa.Q - qb.Q).cwiseAbs().maxCoeff() / qa.Q.cwiseAbs().maxCoeff());
    }
    return worst;
  });

  suite.check(m, "qgt_invariant_violations", 0.5, "<", [&] {
    int violations = 0;
    for (double eta : {0.0, 0.5, 0.9}) {
      const SpectralData data = spectral(space, {1.0, eta, 0.3}, fault);
      for (const EigenLabel& l : through5) violations += qgt_sum(data, l).satisfies_invariants() ? 0 : 1;
    }
    return double(violations);
  });

  {
    // Truncation doubling at eta = 0.9, reported per quantity.
    std::array<double, 3> worst{kNaN, kNaN, kNaN};
    try {
      const ModelParams p(1.0, 0.9, 0.0);
      const SpectralData a = spectral(FockQubitSpace(200), p, fault);
      const SpectralData b = spectral(FockQubitSpace(400), p, fault);
      worst = {0.0, 0.0, 0.0};
      for (const EigenLabel& l : through3) {
        const QGTResult qa = qgt_sum(a, l), qb = qgt_sum(b, l);
        worst[0] = std::max(worst[0], rel(qa.G(0, 0), qb.G(0, 0)));
        worst[1] = std::max(worst[1], rel(qa.G(1, 1), qb.G(1, 1)));
        worst[2] = std::max(worst[2], rel(qa.B(0, 1), qb.B(0, 1)));
      }
    } catch (const Error&) {
    }
    suite.check(m, "truncation_doubling_G_eta_eta", 1e-3, "<", [&] { return worst[0]; });
    suite.check(m, "truncation_doubling_G_phi_phi", 1e-3, "<", [&] { return worst[1]; });
    suite.check(m, "truncation_doubling_B_eta_phi", 1e-3, "<", [&] { return worst[2]; });
  }

  suite.check(m, "divergence_ratio_min", 100.0, ">", [&] {
    const ModelParams mid(1.0, 0.5, 0.0), crit(1.0, 0.99, 0.0);
    const SpectralData a = spectral(space, mid, fault);
    const SpectralData b = spectral(FockQubitSpace(adequate_n_max(crit, through5, 200)), crit, fault);
    double worst = std::numeric_limits<double>::infinity();
    for (const EigenLabel& l : through5) {
      worst = std::min(worst, qgt_sum(b, l).G(0, 0) / qgt_sum(a, l).G(0, 0));
    }
    return worst;
  });

  {
    double bright_over_dark = kNaN, step_ratio = kNaN;
    try {
      const SpectralData data = spectral(space, {1.0, 0.95, 0.0}, fault);
      const auto values = [&](const EigenLabel& l) {
        const QGTResult q = qgt_sum(data, l);
        return std::array<double, 3>{q.G(0, 0), q.G(1, 1), std::abs(q.B(0, 1))};
      };
      const auto dark = values(EigenLabel::dark());
      bright_over_dark = step_ratio = std::numeric_limits<double>::infinity();
      for (Branch b : {Branch::plus, Branch::minus}) {
        std::array<double, 3> previous{};
        for (int n = 1; n <= 5; ++n) {
          const auto v = values(EigenLabel::bright(n, b));
          for (int i = 0; i < 3; ++i) {
            bright_over_dark = std::min(bright_over_dark, v[i] / dark[i]);
            if (n > 1) step_ratio = std::min(step_ratio, v[i] / previous[i]);
          }
          previous = v;
        }
      }
    } catch (const Error&) {
    }
    suite.check(m, "hierarchy_bright_over_dark_min", 1.0, ">", [&] { return bright_over_dark; });
    suite.check(m, "monotonicity_in_n_min_ratio", 1.0, ">", [&] { return step_ratio; });
  }

  suite.check(m, "bures_composite_vs_metric_rel", 2e-2, "<", [&] {
    double worst = 0.0;
    for (double eta : {0.5, 0.9}) {
      const ModelParams p(1.0, eta, 0.0);
      const SpectralData data = spectral(space, p, fault);
      for (const EigenLabel& l : labels_through(2)) {
        const QGTResult q = qgt_sum(data, l);
        const BuresResult b = bures_metric(space, p, l, Subsystem::composite);
        worst = std::max({worst, rel(b.g(0, 0), q.G(0, 0)), rel(b.g(1, 1), q.G(1, 1))});
      }
    }
    return worst;
  });

  // The dark state is an exact product state, so its qubit factor keeps a
  // finite share of the composite metric; the field-dominance property is
  // checked on the bright doublets only.
  suite.check(m, "field_dominance_bright_eta_0.95", 0.1, "<", [&] {
    double worst = 0.0;
    const ModelParams p(1.0, 0.95, 0.0);
    for (const EigenLabel& l : labels_through(2)) {
      if (l.is_dark()) continue;
      const double c = bures_metric(space, p, l, Subsystem::composite).g(0, 0);
      const double f = bures_metric(space, p, l, Subsystem::field).g(0, 0);
      worst = std::max(worst, std::abs(c - f) / c);
    }
    return worst;
  });
}

void sweep_checks(Suite& suite) {
  const std::string m = "adiabatic-sweep";
  const FockQubitSpace space(100);
  const double dt = 5e-4;
  const auto ramp = [](double k, double target) { return RampSchedule{k, ramp_time_to(k, target)}; };

  suite.check(m, "norm_drift_max", 1e-6, "<", [&] {
    double worst = 0.0;
    for (const EigenLabel& l : labels_through(1)) {
      worst = std::max(worst, evolve(space, ramp(0.4, 0.8), l, dt).max_norm_drift);
    }
    return worst;
  });
  suite.check(m, "dt_halving_fidelity_delta", 1e-8, "<", [&] {
    const RampSchedule r = ramp(0.4, 0.8);
    return std::abs(evolve(space, r, EigenLabel::dark(), dt).final_fidelity() -
                    evolve(space, r, EigenLabel::dark(), 0.5 * dt).final_fidelity());
  });
  suite.check(m, "infidelity_increase_as_k_decreases_max", 0.0, "<", [&] {
    double worst = -std::numeric_limits<double>::infinity();
    double previous = kNaN;
    for (double k : {0.4, 0.2, 0.1, 0.05}) {
      const double infidelity = 1.0 - evolve(space, ramp(k, 0.8), EigenLabel::dark(), dt).final_fidelity();
      if (!std::isnan(previous)) worst = std::max(worst, infidelity - previous);
      previous = infidelity;
    }
    return worst;
  });
  suite.check(m, "phi_covariance_fidelity_delta", 1e-8, "<", [&] {
    const EigenLabel l = EigenLabel::bright(1, Branch::minus);
    RampSchedule base = ramp(0.5, 0.6), rotated = base;
    rotated.phi = 1.3;
    const SweepTrajectory a = evolve(space, base, l, 1e-3);
    const SweepTrajectory b = evolve(space, rotated, l, 1e-3);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.fidelities.size(); ++i) {
      worst = std::max(worst, std::abs(a.fidelities[i] - b.fidelities[i]));
    }
    return worst;
  });
  suite.check(m, "frozen_ramp_infidelity", 1e-12, "<", [&] {
    const SweepTrajectory t = evolve(space, {0.0, 5.0}, EigenLabel::dark(), 1e-2);
    return 1.0 - *std::min_element(t.fidelities.begin(), t.fidelities.end());
  });
}

void cli_checks(Suite& suite, std::mt19937_64& rng) {
  suite.check("cli-io", "double_roundtrip_mismatches", 0.5, "<", [&] {
    std::uniform_real_distribution<double> exponent(-300.0, 300.0);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
      const double x = mantissa(rng) * std::pow(10.0, exponent(rng));
      if (std::strtod(format_double(x).c_str(), nullptr) != x) ++mismatches;
    }
    return double(mismatches);
  });
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

ValidationReport run_validate(const RunConfig& config) {
  ValidationReport report{config.seed, {}};
  Suite suite(report);
  std::mt19937_64 rng(config.seed);
  fock_checks(suite, rng);
  model_checks(suite, rng);
  geometry_checks(suite, config);
  sweep_checks(suite);
  cli_checks(suite, rng);
  return report;
}

void write_report(std::ostream& os, const ValidationReport& report, const RunConfig& config) {
  if (config.format == OutputFormat::json) {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : describe(config)) meta[key] = value;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const ValidationCheck& c : report.checks) {
      const auto number = [](double x) {
        return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
      };
      checks.push_back({{"module", c.module},
                        {"check", c.check},
                        {"measured", number(c.measured)},
                        {"bound", number(c.bound)},
                        {"relation", c.relation},
                        {"status", c.passed ? "pass" : "fail"}});
    }
    nlohmann::ordered_json doc;
    doc["metadata"] = std::move(meta);
    doc["checks"] = std::move(checks);
    doc["passed"] = report.all_passed();
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# seed=" << report.seed << '\n';
  os << "# fault=" << to_string(config.fault) << '\n';
  os << "module,check,measured,bound,relation,status\n";
  for (const ValidationCheck& c : report.checks) {
    os << c.module << ',' << c.check << ',' << format_double(c.measured) << ','
       << format_double(c.bound) << ',' << c.relation << ',' << (c.passed ? "pass" : "fail") << '\n';
  }
}

}  // namespace djcm::cli
