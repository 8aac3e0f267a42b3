// djcm: spectrum, quantum-geometry, Bures and adiabatic-sweep scans of the
// driven Jaynes-Cummings model, plus a seeded self-validation suite.

#include <fstream>
#include <iostream>

#include "djcm/cli/commands.hpp"
#include "djcm/cli/config.hpp"
#include "djcm/error.hpp"

namespace {

using namespace djcm::cli;

/// Writes to --out when given, otherwise to standard output.
template <class Writer>
bool emit(const RunConfig& config, Writer&& write) {
  if (config.out.empty()) {
    write(std::cout);
    std::cout.flush();
    return static_cast<bool>(std::cout);
  }
  std::ofstream file(config.out, std::ios::binary);
  if (!file) return false;
  write(file);
  return static_cast<bool>(file);
}

int run(const RunConfig& config) {
  if (config.command == Command::validate) {
    const ValidationReport report = run_validate(config);
    if (!emit(config, [&](std::ostream& os) { write_report(os, report, config); })) {
      std::cerr << "djcm: cannot write " << config.out << '\n';
      return kExitConfig;
    }
    for (const ValidationCheck& c : report.checks) {
      if (!c.passed) std::cerr << "djcm: check failed: " << c.module << '/' << c.check << '\n';
    }
    return report.all_passed() ? kExitOk : kExitValidation;
  }

  ScanResult result;
  switch (config.command) {
    case Command::spectrum: result = run_spectrum(config); break;
    case Command::qgt: result = run_qgt_scan(config); break;
    case Command::bures: result = run_bures_scan(config); break;
    case Command::sweep: result = run_sweep(config); break;
    case Command::validate: break;
  }
  if (!emit(config, [&](std::ostream& os) { write_scan(os, result, config); })) {
    std::cerr << "djcm: cannot write " << config.out << '\n';
    return kExitConfig;
  }
  for (const std::string& failure : result.failures) std::cerr << "djcm: " << failure << '\n';
  return result.failures.empty() ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    const auto config = parse_arguments(argc, argv, std::cout);
    if (!config) return kExitOk;
    return run(*config);
  } catch (const ConfigError& e) {
    std::cerr << "djcm: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const djcm::Error& e) {
    std::cerr << "djcm: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "djcm: " << e.what() << '\n';
    return kExitNumerical;
  }
}
