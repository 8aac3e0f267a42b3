#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "djcm/fock.hpp"
#include "djcm/model.hpp"

namespace djcm::cli {

enum class Command { spectrum, qgt, bures, sweep, validate };
enum class OutputFormat { csv, json };
/// Test hook for the validation suite: deliberately corrupt one ingredient so
/// the matching check must fail.
enum class Fault { none, flip_dphi };

std::string_view to_string(Command c) noexcept;
std::string_view to_string(OutputFormat f) noexcept;
std::string_view to_string(Fault f) noexcept;

/// Invalid or inconsistent configuration; maps to exit status 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::spectrum;

  double eta_min = 0.0;
  double eta_max = 0.95;
  double eta_step = 0.05;
  double phi = 0.0;
  double omega = 1.0;
  std::vector<EigenLabel> labels;
  int n_max = 200;  // starting cutoff; raised by doubling where states need it
  bool fixed_n_max = false;  // use n_max as given; truncation failures are reported
  bool truncation_check = true;

  OutputFormat format = OutputFormat::csv;
  std::string out;  // empty: standard output
  std::uint64_t seed = 12345;
  int threads = 1;

  std::vector<Subsystem> subsystems{Subsystem::composite, Subsystem::qubit, Subsystem::field};
  double fd_step = 1e-4;
  double bures_step = 1e-4;

  std::vector<double> k_values{0.4, 0.2, 0.1, 0.05};
  double eta_target = 0.8;
  double t_max = 0.0;  // 0: run each ramp until it reaches eta_target
  double dt = 5e-4;
  bool dt_halving = false;
  int samples = 50;

  Fault fault = Fault::none;

  /// eta_min, eta_min + eta_step, ... up to eta_max (inclusive within 1e-9).
  std::vector<double> eta_grid() const;
};

/// Labels used when the configuration does not name any.
std::vector<EigenLabel> default_labels(Command c);

/// Parses `djcm <command> [options]`, reading `--config <file>` (key = value
/// lines, # comments) with command-line values taking precedence.  Returns
/// nullopt after printing help to `out`.  Throws ConfigError.
std::optional<RunConfig> parse_arguments(int argc, const char* const* argv, std::ostream& out);

/// Checks the cross-field invariants; throws ConfigError with an actionable
/// message.
void validate_config(const RunConfig& config);

/// key=value echo of every setting, in a fixed order.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

}  // namespace djcm::cli
