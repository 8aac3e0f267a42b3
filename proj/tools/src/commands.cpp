#include "djcm/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <random>

#include <json.hpp>

#include "djcm/bures.hpp"
#include "djcm/cli/parallel.hpp"
#include "djcm/error.hpp"
#include "djcm/qgt.hpp"
#include "djcm/sweep.hpp"

namespace djcm::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEnergyTolerance = 1e-6;
constexpr double kTruncationTolerance = 1e-3;
constexpr double kHalvingTolerance = 1e-8;
constexpr double kNormTolerance = 1e-6;

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string method_for_ramp(double k) { return "rk4 k=" + short_number(k); }

struct PointOutput {
  std::vector<ScanRow> rows;
  std::vector<std::string> failures;
  int n_max = 0;
};

std::string point_prefix(double eta, const std::string& label) {
  return "eta=" + format_double(eta) + " " + label + ": ";
}

// Rows are produced point by point (label order inside each point); a stable
// sort by label position then yields the documented (label, eta) ordering.
ScanResult gather(const RunConfig& config, std::vector<PointOutput> points) {
  ScanResult result;
  std::string n_max_used;
  const std::vector<double> grid = config.eta_grid();
  for (std::size_t i = 0; i < points.size(); ++i) {
    PointOutput& p = points[i];
    result.rows.insert(result.rows.end(), std::make_move_iterator(p.rows.begin()),
                       std::make_move_iterator(p.rows.end()));
    result.failures.insert(result.failures.end(), p.failures.begin(), p.failures.end());
    if (i < grid.size() && p.n_max > 0) {
      if (!n_max_used.empty()) n_max_used += ',';
      n_max_used += format_double(grid[i]) + ":" + std::to_string(p.n_max);
    }
  }
  const auto rank = [&](const std::string& label) {
    for (std::size_t i = 0; i < config.labels.size(); ++i) {
      if (config.labels[i].to_string() == label) return i;
    }
    return config.labels.size();
  };
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [&](const ScanRow& a, const ScanRow& b) { return rank(a.label) < rank(b.label); });

  result.metadata = describe(config);
  result.metadata.emplace_back("tool", "djcm");
  result.metadata.emplace_back("version", DJCM_VERSION);
  result.metadata.emplace_back("eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                            std::to_string(EIGEN_MINOR_VERSION));
  if (!n_max_used.empty()) result.metadata.emplace_back("n_max_used", n_max_used);
  result.metadata.emplace_back("failures", std::to_string(result.failures.size()));
  return result;
}

template <class PointFn>
ScanResult scan_grid(const RunConfig& config, PointFn&& point) {
  const std::vector<double> grid = config.eta_grid();
  std::vector<PointOutput> points = parallel_map(
      config.threads, grid.size(), [&](std::size_t i) { return point(grid[i]); });
  return gather(config, std::move(points));
}

int cutoff_for(const ModelParams& params, std::span<const EigenLabel> labels, int start,
               bool fixed) {
  return fixed ? start : adequate_n_max(params, labels, start);
}

// ---------------------------------------------------------------- spectrum

void spectrum_rows(PointOutput& out, const ModelParams& p, const EigenLabel& label,
                   const LabeledEigenpair* pair) {
  const std::string name = label.to_string();
  const double analytic = analytic_energy(label, p) / p.omega();
  const double numeric = pair ? pair->energy : kNaN;
  const double delta = numeric - analytic;
  const double overlap = pair ? pair->overlap : kNaN;
  const bool ok = pair && std::abs(delta) < kEnergyTolerance && overlap >= kLabelOverlap;
  out.rows.push_back({p.eta(), p.phi(), name, "composite", "energy", analytic, "analytic", true});
  out.rows.push_back({p.eta(), p.phi(), name, "composite", "energy", numeric, "numerical", ok});
  out.rows.push_back({p.eta(), p.phi(), name, "composite", "energy_delta", delta, "numerical", ok});
  out.rows.push_back({p.eta(), p.phi(), name, "composite", "overlap", overlap, "numerical", ok});
}

PointOutput spectrum_point(const RunConfig& config, double eta) {
  PointOutput out;
  const ModelParams p(config.omega, eta, config.phi);
  try {
    out.n_max = cutoff_for(p, config.labels, config.n_max, config.fixed_n_max);
    const FockQubitSpace space(out.n_max);
    const auto pairs = numerical_spectrum(space, p, config.labels);
    for (std::size_t i = 0; i < pairs.size(); ++i) spectrum_rows(out, p, config.labels[i], &pairs[i]);
    return out;
  } catch (const Error&) {
    // Fall through to label-by-label evaluation to isolate the failure.
  }
  const FockQubitSpace space(std::max(out.n_max, config.n_max));
  for (const EigenLabel& label : config.labels) {
    try {
      const std::vector<EigenLabel> one{label};
      const auto pairs = numerical_spectrum(space, p, one);
      spectrum_rows(out, p, label, &pairs.front());
    } catch (const Error& e) {
      spectrum_rows(out, p, label, nullptr);
      out.failures.push_back(point_prefix(eta, label.to_string()) + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------- qgt

void tensor_rows(PointOutput& out, const ModelParams& p, const std::string& label,
                 const Eigen::Matrix2d& g, const Eigen::Matrix2d& b, const std::string& method,
                 bool converged) {
  const auto row = [&](const char* quantity, double value) {
    out.rows.push_back({p.eta(), p.phi(), label, "composite", quantity, value, method, converged});
  };
  row("G_eta_eta", g(0, 0));
  row("G_phi_phi", g(1, 1));
  row("B_eta_phi", b(0, 1));
  row("B_phi_eta", b(1, 0));
}

double entry_delta(const QGTResult& a, const QGTResult& b) {
  const double scale = b.Q.norm();
  double worst = 0.0;
  const std::array<std::pair<double, double>, 3> pairs{
      std::pair{a.G(0, 0), b.G(0, 0)}, {a.G(1, 1), b.G(1, 1)}, {a.B(0, 1), b.B(0, 1)}};
  for (const auto& [x, y] : pairs) {
    worst = std::max(worst, std::abs(x - y) / std::max(std::abs(y), 1e-8 * scale + 1e-300));
  }
  return worst;
}

SpectralData spectral_data(const FockQubitSpace& space, const ModelParams& p, Fault fault) {
  SpectralData data = prepare_spectral_data(space, p);
  if (fault == Fault::flip_dphi) data.d_phi = -data.d_phi;
  return data;
}

PointOutput qgt_point(const RunConfig& config, double eta) {
  PointOutput out;
  const ModelParams p(config.omega, eta, config.phi);
  const Eigen::Matrix2d nan2 = Eigen::Matrix2d::Constant(kNaN);
  std::optional<SpectralData> data;
  std::optional<SpectralData> doubled;
  try {
    out.n_max = cutoff_for(p, config.labels, config.n_max, config.fixed_n_max);
    data = spectral_data(FockQubitSpace(out.n_max), p, config.fault);
    if (config.truncation_check) {
      doubled = spectral_data(FockQubitSpace(2 * out.n_max), p, config.fault);
    }
  } catch (const Error& e) {
    out.failures.push_back(point_prefix(eta, "*") + e.what());
  }

  QgtSumOptions sum_options;
  sum_options.require_convergence = false;
  QgtFdOptions fd_options;
  fd_options.step_eta = fd_options.step_phi = config.fd_step;

  for (const EigenLabel& label : config.labels) {
    const std::string name = label.to_string();
    if (!data) {
      tensor_rows(out, p, name, nan2, nan2, "sum", false);
      continue;
    }
    try {
      const QGTResult sum = qgt_sum(*data, label, sum_options);
      bool converged = sum.converged;
      if (doubled) {
        const double delta = entry_delta(sum, qgt_sum(*doubled, label, sum_options));
        converged = converged && delta < kTruncationTolerance;
        out.rows.push_back({eta, config.phi, name, "composite", "truncation_delta", delta, "sum",
                            delta < kTruncationTolerance});
      }
      tensor_rows(out, p, name, sum.G, sum.B, "sum", converged);
    } catch (const Error& e) {
      tensor_rows(out, p, name, nan2, nan2, "sum", false);
      out.failures.push_back(point_prefix(eta, name) + e.what());
    }
    if (analytic_gap(label, p) < fd_options.gap_floor * p.omega()) continue;
    try {
      const QGTResult fd = qgt_fd(data->space, p, label, fd_options);
      tensor_rows(out, p, name, fd.G, fd.B, "finite-difference", fd.converged);
    } catch (const Error& e) {
      tensor_rows(out, p, name, nan2, nan2, "finite-difference", false);
      out.failures.push_back(point_prefix(eta, name) + "finite-difference: " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------- bures

PointOutput bures_point(const RunConfig& config, double eta) {
  PointOutput out;
  const ModelParams p(config.omega, eta, config.phi);
  BuresOptions options;
  options.step = config.bures_step;
  try {
    out.n_max = cutoff_for(p, config.labels, config.n_max, config.fixed_n_max);
  } catch (const Error& e) {
    out.failures.push_back(point_prefix(eta, "*") + e.what());
  }
  for (const EigenLabel& label : config.labels) {
    const std::string name = label.to_string();
    for (Subsystem sub : config.subsystems) {
      const std::string sub_name(to_string(sub));
      Eigen::Matrix2d g = Eigen::Matrix2d::Constant(kNaN);
      bool ok = false;
      if (out.n_max > 0) {
        try {
          const BuresResult r = bures_metric(FockQubitSpace(out.n_max), p, label, sub, options);
          g = r.g;
          ok = !r.clamped;
        } catch (const Error& e) {
          out.failures.push_back(point_prefix(eta, name) + sub_name + ": " + e.what());
        }
      }
      out.rows.push_back({eta, config.phi, name, sub_name, "g_eta_eta", g(0, 0), "bures", ok});
      out.rows.push_back({eta, config.phi, name, sub_name, "g_phi_phi", g(1, 1), "bures", ok});
    }
  }
  return out;
}

// ---------------------------------------------------------------- sweep

RampSchedule schedule_for(const RunConfig& config, double k) {
  RampSchedule s;
  s.k = k;
  s.t_max = config.t_max > 0.0 ? config.t_max : ramp_time_to(k, config.eta_target);
  s.phi = config.phi;
  s.omega = config.omega;
  return s;
}

PointOutput sweep_task(const RunConfig& config, const EigenLabel& label, double k) {
  PointOutput out;
  const std::string name = label.to_string();
  const std::string method = method_for_ramp(k);
  const RampSchedule schedule = schedule_for(config, k);
  SweepOptions options;
  options.samples = config.samples;
  try {
    const double eta_end = schedule.eta(schedule.stop_time());
    const std::vector<EigenLabel> one{label};
    out.n_max = cutoff_for(ModelParams(config.omega, eta_end, config.phi), one, config.n_max,
                           config.fixed_n_max);
    const FockQubitSpace space(out.n_max);
    const SweepTrajectory traj = evolve(space, schedule, label, config.dt, options);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double eta = traj.etas[i];
      out.rows.push_back({eta, config.phi, name, "composite", "t", traj.times[i], method, true});
      out.rows.push_back({eta, config.phi, name, "composite", "norm", traj.norms[i], method, true});
      out.rows.push_back(
          {eta, config.phi, name, "composite", "fidelity", traj.fidelities[i], method, true});
    }
    const double eta_final = traj.etas.back();
    out.rows.push_back({eta_final, config.phi, name, "composite", "max_norm_drift",
                        traj.max_norm_drift, method, traj.max_norm_drift < kNormTolerance});
    if (config.dt_halving) {
      const SweepTrajectory half = evolve(space, schedule, label, 0.5 * config.dt, options);
      const double delta = std::abs(half.final_fidelity() - traj.final_fidelity());
      out.rows.push_back({eta_final, config.phi, name, "composite", "dt_halving_delta", delta,
                          method, delta < kHalvingTolerance});
    }
  } catch (const Error& e) {
    out.rows.push_back({kNaN, config.phi, name, "composite", "fidelity", kNaN, method, false});
    out.failures.push_back(name + " " + method + ": " + e.what());
  }
  out.n_max = 0;  // cutoffs vary per trajectory; not reported per eta
  return out;
}

}  // namespace

ScanResult run_spectrum(const RunConfig& config) {
  return scan_grid(config, [&](double eta) { return spectrum_point(config, eta); });
}

ScanResult run_qgt_scan(const RunConfig& config) {
  return scan_grid(config, [&](double eta) { return qgt_point(config, eta); });
}

ScanResult run_bures_scan(const RunConfig& config) {
  return scan_grid(config, [&](double eta) { return bures_point(config, eta); });
}

ScanResult run_sweep(const RunConfig& config) {
  std::vector<std::pair<EigenLabel, double>> tasks;
  for (const EigenLabel& label : config.labels) {
    for (double k : config.k_values) tasks.emplace_back(label, k);
  }
  std::vector<PointOutput> outputs = parallel_map(config.threads, tasks.size(), [&](std::size_t i) {
    return sweep_task(config, tasks[i].first, tasks[i].second);
  });
  return gather(config, std::move(outputs));
}

void write_scan(std::ostream& os, const ScanResult& result, const RunConfig& config) {
  if (config.format == OutputFormat::json) {
    write_json(os, result.rows, result.metadata);
  } else {
    for (const auto& [key, value] : result.metadata) os << "# " << key << '=' << value << '\n';
    write_csv(os, result.rows);
  }
}

}  // namespace djcm::cli
