#include "djcm/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseCore>

#include "djcm/error.hpp"

namespace djcm {

namespace {

using SparseC = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

SparseC sparse_of(const CMatrix& dense) { return dense.sparseView(); }

void require_ramp(double k) {
  if (!std::isfinite(k) || k < 0.0) {
    throw Error(ErrorCode::invalid_argument, "ramp velocity k must be >= 0, got " + std::to_string(k));
  }
}

}  // namespace

double ramp_eta(double k, double t) {
  require_ramp(k);
  if (!(t >= 0.0)) throw Error(ErrorCode::invalid_argument, "ramp time must be >= 0");
  const double x = std::pow(k * t, 4.0 / 3.0);
  // sqrt(1 - 1 / (x + 1)) without the cancellation for small x.
  return std::sqrt(x / (x + 1.0));
}

double ramp_time_to(double k, double eta) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorCode::invalid_argument, "ramp velocity must be > 0 to reach a target eta");
  }
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "target eta must lie in [0, 1)");
  }
  const double x = eta * eta / (1.0 - eta * eta);
  return std::pow(x, 0.75) / k;
}

double RampSchedule::stop_time() const {
  if (k == 0.0) return t_max;
  return std::min(t_max, ramp_time_to(k, eta_cap));
}

StateVector initial_state(const FockQubitSpace& space, const EigenLabel& label) {
  if (label.is_dark()) return StateVector::basis(space, 0, Qubit::g);
  if (label.n() > space.n_max()) {
    throw Error(ErrorCode::truncation_inadequate,
                label.to_string() + " needs n_max >= " + std::to_string(label.n()));
  }
  CVector v = CVector::Zero(space.dim());
  v(FockQubitSpace::index(label.n() - 1, Qubit::e)) = 1.0 / std::sqrt(2.0);
  v(FockQubitSpace::index(label.n(), Qubit::g)) = label.sign() / std::sqrt(2.0);
  return {space, std::move(v)};
}

SweepTrajectory evolve(const FockQubitSpace& space, const RampSchedule& schedule,
                       const EigenLabel& label, double dt, const SweepOptions& options) {
  require_ramp(schedule.k);
  if (!(schedule.t_max > 0.0) || !std::isfinite(schedule.t_max)) {
    throw Error(ErrorCode::invalid_argument, "t_max must be finite and > 0");
  }
  if (!(schedule.eta_cap > 0.0 && schedule.eta_cap < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "eta_cap must lie in (0, 1)");
  }
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "dt must be > 0");
  if (dt * schedule.omega > 0.01 * (1.0 + 1e-12)) {
    throw Error(ErrorCode::step_too_large,
                "dt * omega = " + std::to_string(dt * schedule.omega) + " exceeds 0.01");
  }
  if (options.samples < 1) throw Error(ErrorCode::invalid_argument, "samples must be >= 1");

  const ModelParams base(schedule.omega, 0.0, schedule.phi);
  const SparseC h0 = sparse_of(build_hamiltonian(space, base).matrix());
  const SparseC h1 = sparse_of(dH_deta(space, base).matrix());
  const Complex minus_i(0.0, -1.0);
  const auto derivative = [&](double t, const CVector& psi) -> CVector {
    CVector out = h0 * psi;
    out.noalias() += schedule.eta(t) * (h1 * psi);
    if (options.extra_term) out.noalias() += options.extra_term(t) * psi;
    return minus_i * out;
  };

  const double t_end = schedule.stop_time();
  const auto steps = static_cast<int>(std::max(1.0, std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / steps;
  const int samples = std::min(options.samples, steps);

  SweepTrajectory traj{label, schedule, h, steps, {}, {}, {}, {}, {}, 0.0, schedule.capped(),
                       schedule.capped() ? "eta_cap" : "t_max"};
  traj.times.reserve(static_cast<std::size_t>(samples) + 1);

  CVector psi = initial_state(space, label).amplitudes();
  const auto record = [&](int step) {
    const double t = step == steps ? t_end : step * h;
    const double eta = schedule.eta(t);
    const ModelParams params(schedule.omega, eta, schedule.phi);
    const AnalyticEigenstate target =
        analytic_eigenstate(space, label, params, options.tail_tolerance);
    const double leak = number_tail_weight(psi, kTailFraction);
    if (!(leak < options.tail_tolerance)) {
      throw Error(ErrorCode::truncation_inadequate,
                  "evolved state leaks " + std::to_string(leak) + " into the top photon levels at t=" +
                      std::to_string(t));
    }
    traj.times.push_back(t);
    traj.etas.push_back(eta);
    traj.norms.push_back(psi.norm());
    traj.fidelities.push_back(std::norm(target.state.amplitudes().dot(psi)));
    traj.states.push_back(psi);
  };

  record(0);
  int next_sample = 1;
  for (int step = 0; step < steps; ++step) {
    const double t = step * h;
    const CVector k1 = derivative(t, psi);
    const CVector k2 = derivative(t + 0.5 * h, psi + 0.5 * h * k1);
    const CVector k3 = derivative(t + 0.5 * h, psi + 0.5 * h * k2);
    const CVector k4 = derivative(t + h, psi + h * k3);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double drift = std::abs(psi.norm() - 1.0);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    if (drift > options.norm_tolerance) {
      throw Error(ErrorCode::step_too_large,
                  "norm drift " + std::to_string(drift) + " at t=" + std::to_string(t + h) +
                      "; reduce dt");
    }
    const int done = step + 1;
    // Sample k sits at step round(k * steps / samples).
    const auto sample_step = static_cast<int>(
        std::llround(static_cast<double>(next_sample) * steps / samples));
    if (done == sample_step) {
      record(done);
      ++next_sample;
    }
  }
  return traj;
}

}  // namespace djcm
