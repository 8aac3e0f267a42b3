#include "djcm/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "djcm/cli/rows.hpp"
#include "djcm/error.hpp"

namespace djcm::cli {

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::qgt: return "qgt";
    case Command::bures: return "bures";
    case Command::sweep: return "sweep";
    case Command::validate: return "validate";
  }
  return "spectrum";
}

std::string_view to_string(OutputFormat f) noexcept { return f == OutputFormat::csv ? "csv" : "json"; }

std::string_view to_string(Fault f) noexcept { return f == Fault::none ? "none" : "flip-dphi"; }

std::vector<double> RunConfig::eta_grid() const {
  std::vector<double> grid;
  for (long i = 0;; ++i) {
    const double eta = eta_min + static_cast<double>(i) * eta_step;
    if (eta > eta_max + 1e-9) break;
    // Snap to 12 decimals so 0.1 * 3 prints as 0.3 in every output.
    grid.push_back(std::round(std::min(eta, eta_max) * 1e12) / 1e12);
  }
  return grid;
}

std::vector<EigenLabel> default_labels(Command c) {
  switch (c) {
    case Command::bures: return labels_through(2);
    case Command::sweep:
      return {EigenLabel::dark(), EigenLabel::bright(1, Branch::plus),
              EigenLabel::bright(1, Branch::minus)};
    default: return labels_through(5);
  }
}

namespace {

struct RawOptions {
  std::vector<std::string> labels;
  std::vector<std::string> subsystems;
  std::string format = "csv";
  std::string fault = "none";
};

std::vector<EigenLabel> parse_labels(const std::vector<std::string>& items) {
  std::vector<EigenLabel> labels;
  for (const std::string& item : items) {
    if (item.empty()) continue;
    try {
      labels.push_back(EigenLabel::parse(item));
    } catch (const Error& e) {
      throw ConfigError(std::string("labels: ") + e.what());
    }
  }
  if (labels.empty()) throw ConfigError("no labels requested");
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

void add_common_options(CLI::App& app, RunConfig& c, RawOptions& raw) {
  app.add_option("--out", c.out, "Output file (default: standard output)");
  app.add_option("--format", raw.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--n-max,--n_max", c.n_max, "Starting photon cutoff (raised by doubling as needed)");
  app.add_option("--seed", c.seed, "Seed for randomized checks");
  app.add_option("--threads", c.threads, "Worker threads for grid scans");

  app.add_option("--eta-min,--eta_min", c.eta_min, "First eta of the grid");
  app.add_option("--eta-max,--eta_max", c.eta_max, "Last eta of the grid");
  app.add_option("--eta-step,--eta_step", c.eta_step, "Grid spacing in eta");
  app.add_option("--phi", c.phi, "Drive phase (radians)");
  app.add_option("--omega", c.omega, "Coupling strength Omega");
  app.add_option("--labels", raw.labels, "Comma-separated labels: dark, n<k>+, n<k>-")
      ->delimiter(',')
      ->expected(0, CLI::detail::expected_max_vector_size);
  app.add_option("--fixed-n-max,--fixed_n_max", c.fixed_n_max,
                 "Use n_max as given instead of raising it until states fit");
  app.add_option("--truncation-check,--truncation_check", c.truncation_check,
                 "Re-evaluate the QGT at doubled n_max and flag changes above 0.1%");
  app.add_option("--subsystems", raw.subsystems, "Bures subsystems: composite, qubit, field")
      ->delimiter(',');
  app.add_option("--fd-step,--fd_step", c.fd_step, "Initial finite-difference step");
  app.add_option("--bures-step,--bures_step", c.bures_step, "Bures stencil step");
  app.add_option("--k-values,--k_values", c.k_values, "Comma-separated ramp velocities")
      ->delimiter(',');
  app.add_option("--eta-target,--eta_target", c.eta_target, "Final eta of each ramp");
  app.add_option("--t-max,--t_max", c.t_max, "Ramp duration (0: until eta_target)");
  app.add_option("--dt", c.dt, "Integrator step");
  app.add_option("--dt-halving,--dt_halving", c.dt_halving,
                 "Repeat each trajectory at dt/2 and report the fidelity change");
  app.add_option("--samples", c.samples, "Samples per trajectory");
  app.add_option("--fault", raw.fault, "Validation test hook")
      ->check(CLI::IsMember({"none", "flip-dphi"}));
}

}  // namespace

std::optional<RunConfig> parse_arguments(int argc, const char* const* argv, std::ostream& out) {
  RunConfig config;
  RawOptions raw;
  CLI::App app{"Driven Jaynes-Cummings model: spectrum, quantum geometry and adiabatic sweeps",
               "djcm"};
  app.set_config("--config", "", "key = value configuration file");
  add_common_options(app, config, raw);
  app.require_subcommand(1);

  const std::map<std::string, std::pair<Command, std::string>> commands{
      {"spectrum", {Command::spectrum, "Analytic vs numerical eigenenergies and overlaps"}},
      {"qgt", {Command::qgt, "Quantum metric and Berry curvature scan"}},
      {"bures", {Command::bures, "Bures metric of composite and reduced states"}},
      {"sweep", {Command::sweep, "Adiabatic ramp trajectories"}},
      {"validate", {Command::validate, "Run the invariant suite and report pass/fail"}},
  };
  for (const auto& [name, entry] : commands) {
    app.add_subcommand(name, entry.second)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  for (const auto& [name, entry] : commands) {
    if (app.got_subcommand(name)) config.command = entry.first;
  }
  config.format = raw.format == "json" ? OutputFormat::json : OutputFormat::csv;
  config.fault = raw.fault == "flip-dphi" ? Fault::flip_dphi : Fault::none;
  if (app.get_option("--labels")->count() > 0) {
    config.labels = parse_labels(raw.labels);
  } else {
    config.labels = default_labels(config.command);
  }
  if (app.get_option("--subsystems")->count() > 0) {
    config.subsystems.clear();
    for (const std::string& s : raw.subsystems) {
      if (s.empty()) continue;
      try {
        config.subsystems.push_back(parse_subsystem(s));
      } catch (const Error& e) {
        throw ConfigError(std::string("subsystems: ") + e.what());
      }
    }
  }
  validate_config(config);
  return config;
}

void validate_config(const RunConfig& c) {
  const auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  require(std::isfinite(c.omega) && c.omega > 0.0, "omega must be > 0");
  require(std::isfinite(c.phi), "phi must be finite");
  require(c.eta_min >= 0.0 && c.eta_max <= kEtaCap,
          "eta grid must lie within [0, 0.99]; got [" + format_double(c.eta_min) + ", " +
              format_double(c.eta_max) + "]");
  require(c.eta_min <= c.eta_max, "eta_min must not exceed eta_max");
  require(c.eta_step > 0.0, "eta_step must be > 0");
  require(c.eta_grid().size() <= 100000, "eta grid has more than 100000 points; raise eta_step");
  require(!c.labels.empty(), "no labels requested");
  require(c.threads >= 1, "threads must be >= 1");
  const bool geometry = c.command == Command::qgt || c.command == Command::bures;
  require(c.n_max >= (geometry ? 50 : 1),
          geometry ? "n_max must be >= 50 for qgt and bures" : "n_max must be >= 1");
  require(c.fd_step > 0.0 && c.fd_step < 0.01, "fd_step must lie in (0, 0.01)");
  require(c.bures_step > 0.0 && c.bures_step < 0.01, "bures_step must lie in (0, 0.01)");
  require(!c.subsystems.empty(), "no subsystems requested");
  require(!c.k_values.empty(), "no ramp velocities (k_values) requested");
  for (double k : c.k_values) require(std::isfinite(k) && k >= 0.0, "k_values must be >= 0");
  require(c.eta_target > 0.0 && c.eta_target <= kEtaCap, "eta_target must lie in (0, 0.99]");
  require(c.t_max >= 0.0 && std::isfinite(c.t_max), "t_max must be >= 0");
  if (c.command == Command::sweep) {
    for (double k : c.k_values) {
      require(k > 0.0 || c.t_max > 0.0, "k = 0 freezes the ramp; set t_max > 0");
    }
  }
  require(c.dt > 0.0 && c.dt * c.omega <= 0.01, "dt must satisfy 0 < dt * omega <= 0.01");
  require(c.samples >= 1, "samples must be >= 1");
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
  const auto join = [](const auto& items, auto&& fmt) {
    std::string s;
    for (const auto& item : items) {
      if (!s.empty()) s += ',';
      s += fmt(item);
    }
    return s;
  };
  return {
      {"command", std::string(to_string(c.command))},
      {"eta_min", format_double(c.eta_min)},
      {"eta_max", format_double(c.eta_max)},
      {"eta_step", format_double(c.eta_step)},
      {"phi", format_double(c.phi)},
      {"omega", format_double(c.omega)},
      {"labels", join(c.labels, [](const EigenLabel& l) { return l.to_string(); })},
      {"n_max", std::to_string(c.n_max)},
      {"fixed_n_max", c.fixed_n_max ? "true" : "false"},
      {"truncation_check", c.truncation_check ? "true" : "false"},
      {"format", std::string(to_string(c.format))},
      {"seed", std::to_string(c.seed)},
      {"subsystems", join(c.subsystems, [](Subsystem s) { return std::string(to_string(s)); })},
      {"fd_step", format_double(c.fd_step)},
      {"bures_step", format_double(c.bures_step)},
      {"k_values", join(c.k_values, [](double k) { return format_double(k); })},
      {"eta_target", format_double(c.eta_target)},
      {"t_max", format_double(c.t_max)},
      {"dt", format_double(c.dt)},
      {"dt_halving", c.dt_halving ? "true" : "false"},
      {"samples", std::to_string(c.samples)},
      {"fault", std::string(to_string(c.fault))},
  };
}

}  // namespace djcm::cli
