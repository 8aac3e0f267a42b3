#pragma once

// Adiabatic ramp of the drive amplitude,
//   eta(t) = sqrt(1 - 1 / ((k t)^{4/3} + 1)),
// integrated with fixed-step RK4 from the bare Jaynes-Cummings eigenstate.

#include <functional>
#include <string>
#include <vector>

#include "djcm/model.hpp"

namespace djcm {

double ramp_eta(double k, double t);
/// Time at which the ramp reaches eta (k > 0, 0 <= eta < 1).
double ramp_time_to(double k, double eta);

struct RampSchedule {
  double k = 0.0;  // ramp velocity in units of Omega; 0 freezes eta at 0
  double t_max = 0.0;
  double phi = 0.0;
  double omega = 1.0;
  double eta_cap = kEtaCap;

  double eta(double t) const { return ramp_eta(k, t); }
  /// min(t_max, time at which eta reaches eta_cap).
  double stop_time() const;
  bool capped() const { return stop_time() < t_max; }
};

/// |0>|g> for the dark label, (|n-1>|e> +- |n>|g>)/sqrt(2) for bright ones.
StateVector initial_state(const FockQubitSpace& space, const EigenLabel& label);

/// Optional extra Hermitian term added to H(t), e.g. a counterdiabatic drive.
using ExtraTerm = std::function<CMatrix(double t)>;

struct SweepOptions {
  int samples = 50;
  double norm_tolerance = 1e-6;
  double tail_tolerance = kTailTolerance;
  ExtraTerm extra_term;
};

struct SweepTrajectory {
  EigenLabel label;
  RampSchedule schedule;
  double dt;  // step actually used (t_end / n_steps)
  int steps;
  std::vector<double> times;
  std::vector<double> etas;
  std::vector<double> norms;
  std::vector<double> fidelities;
  std::vector<CVector> states;
  double max_norm_drift;
  bool capped;
  std::string stop_reason;

  double final_fidelity() const { return fidelities.back(); }
};

/// Requires dt * omega <= 0.01.  Throws step_too_large when the norm drifts by
/// more than options.norm_tolerance and truncation_inadequate when a sampled
/// state leaks into the top photon levels.
SweepTrajectory evolve(const FockQubitSpace& space, const RampSchedule& schedule,
                       const EigenLabel& label, double dt, const SweepOptions& options = {});

}  // namespace djcm
