#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "djcm/cli/config.hpp"
#include "djcm/cli/rows.hpp"

namespace djcm::cli {

/// Output of a scan command.  Failed points still produce rows (value NaN,
/// converged = false); `failures` lists what went wrong.
struct ScanResult {
  std::vector<ScanRow> rows;
  Metadata metadata;
  std::vector<std::string> failures;
};

ScanResult run_spectrum(const RunConfig& config);
ScanResult run_qgt_scan(const RunConfig& config);
ScanResult run_bures_scan(const RunConfig& config);
ScanResult run_sweep(const RunConfig& config);

struct ValidationCheck {
  std::string module;
  std::string check;
  double measured;
  double bound;
  std::string relation;  // "<" or ">"
  bool passed;
};

struct ValidationReport {
  std::uint64_t seed;
  std::vector<ValidationCheck> checks;

  bool all_passed() const;
};

/// Runs the invariant suite of every module.  Numerical exceptions inside a
/// check are reported as a failed check, never thrown.
ValidationReport run_validate(const RunConfig& config);

void write_report(std::ostream& os, const ValidationReport& report, const RunConfig& config);

/// Writes a scan in the configured format.
void write_scan(std::ostream& os, const ScanResult& result, const RunConfig& config);

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitValidation = 3;

}  // namespace djcm::cli
