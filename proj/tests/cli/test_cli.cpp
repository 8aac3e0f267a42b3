#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "djcm/cli/commands.hpp"
#include "djcm/cli/config.hpp"
#include "djcm/cli/rows.hpp"
#include "oracles.hpp"

using namespace djcm;
using namespace djcm::cli;

namespace {

RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "djcm");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream help;
  const auto config = parse_arguments(static_cast<int>(argv.size()), argv.data(), help);
  REQUIRE(config.has_value());
  return *config;
}

std::string scan_text(const RunConfig& config, ScanResult (*run)(const RunConfig&)) {
  std::ostringstream os;
  write_scan(os, run(config), config);
  return os.str();
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) fields.push_back(f);
  return fields;
}

}  // namespace

TEST_SUITE("cli-io") {
  TEST_CASE("format_double round-trips with 17 significant digits") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
      CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  }

  TEST_CASE("csv header is exact") {
    std::ostringstream os;
    write_csv(os, {});
    CHECK(os.str() == "eta,phi,label,subsystem,quantity,value,method,converged\n");
  }

  TEST_CASE("json rows mirror csv rows and non-finite values become null") {
    const std::vector<ScanRow> rows{
        {0.5, 0.0, "dark", "composite", "G_eta_eta", 0.25, "sum", true},
        {0.5, 0.0, "n1+", "composite", "G_eta_eta", std::nan(""), "sum", false}};
    std::ostringstream os;
    write_json(os, rows, {{"seed", "7"}});
    const auto doc = nlohmann::json::parse(os.str());
    CHECK(doc["metadata"]["seed"] == "7");
    REQUIRE(doc["rows"].size() == 2);
    CHECK(doc["rows"][0]["value"] == 0.25);
    CHECK(doc["rows"][0]["label"] == "dark");
    CHECK(doc["rows"][1]["value"].is_null());
    CHECK(doc["rows"][1]["converged"] == false);
  }

  TEST_CASE("defaults and overrides") {
    const RunConfig c = parse({"qgt"});
    CHECK(c.command == Command::qgt);
    CHECK(c.n_max == 200);
    CHECK(c.seed == 12345);
    CHECK(c.labels.size() == 11);
    const RunConfig d = parse({"spectrum", "--n-max", "120", "--labels", "n2-,dark,n1+", "--format", "json"});
    CHECK(d.n_max == 120);
    CHECK(d.format == OutputFormat::json);
    REQUIRE(d.labels.size() == 3);
    CHECK(d.labels.front() == EigenLabel::dark());
  }

  TEST_CASE("config file precedence: command line over file over defaults") {
    const std::string path = "djcm_cli_test_config.ini";
    {
      std::ofstream file(path);
      file << "# scan settings\n"
           << "eta_max = 0.5\n"
           << "eta_step = 0.25\n"
           << "seed = 99\n";
    }
    const RunConfig c = parse({"spectrum", "--config", path, "--seed", "7"});
    CHECK(c.eta_max == doctest::Approx(0.5));
    CHECK(c.eta_step == doctest::Approx(0.25));
    CHECK(c.seed == 7);
    CHECK(c.eta_min == 0.0);
    std::remove(path.c_str());
  }

  TEST_CASE("invalid configurations are rejected with actionable messages") {
    const auto fails_with = [](std::vector<std::string> args, const std::string& fragment) {
      args.insert(args.begin(), "djcm");
      std::vector<const char*> argv;
      for (const std::string& a : args) argv.push_back(a.c_str());
      std::ostringstream help;
      try {
        parse_arguments(static_cast<int>(argv.size()), argv.data(), help);
      } catch (const ConfigError& e) {
        INFO(e.what());
        CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        return;
      }
      FAIL("expected ConfigError");
    };
    fails_with({"spectrum", "--labels", ""}, "no labels requested");
    fails_with({"spectrum", "--labels", "n0+"}, "labels");
    fails_with({"spectrum", "--eta-max", "0.995"}, "0.99");
    fails_with({"spectrum", "--eta-step", "0"}, "step");
    fails_with({"qgt", "--n-max", "40"}, "n_max");
    fails_with({"sweep", "--dt", "0.02"}, "dt");
    fails_with({"spectrum", "--format", "xml"}, "format");
    fails_with({}, "subcommand");
  }

  TEST_CASE("spectrum: three grid points, dark and n=1..2 give 15 records") {
    const RunConfig c = parse({"spectrum", "--eta-min", "0", "--eta-max", "0.6", "--eta-step", "0.3",
                               "--labels", "dark,n1+,n1-,n2+,n2-"});
    const ScanResult r = run_spectrum(c);
    CHECK(r.failures.empty());
    std::set<std::pair<double, std::string>> records;
    for (const ScanRow& row : r.rows) {
      records.insert({row.eta, row.label});
      if (row.quantity == "energy_delta") CHECK(std::abs(row.value) < 1e-6);
      if (row.quantity == "energy" && row.method == "numerical" && row.eta == 0.0 && row.label == "n1+") {
        CHECK(row.value == doctest::Approx(1.0).epsilon(1e-12));
      }
      if (row.quantity == "energy" && row.method == "analytic") {
        const EigenLabel l = EigenLabel::parse(row.label);
        CHECK(row.value == doctest::Approx(oracle::energy(l.n(), l.sign(), 1.0, row.eta)).epsilon(1e-14));
      }
    }
    CHECK(records.size() == 15);
    CHECK(r.rows.size() == 60);
  }

  TEST_CASE("rows are ordered by (label, eta)") {
    const RunConfig c = parse({"spectrum", "--eta-max", "0.4", "--eta-step", "0.2", "--labels", "n1-,dark,n1+"});
    const ScanResult r = run_spectrum(c);
    std::vector<std::string> label_order;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      if (label_order.empty() || label_order.back() != r.rows[i].label) label_order.push_back(r.rows[i].label);
      if (i > 0 && r.rows[i].label == r.rows[i - 1].label) CHECK(r.rows[i].eta >= r.rows[i - 1].eta);
    }
    CHECK(label_order == std::vector<std::string>{"dark", "n1+", "n1-"});
  }

  TEST_CASE("parallel scans are byte-identical to serial scans") {
    const RunConfig serial = parse({"qgt", "--eta-max", "0.6", "--eta-step", "0.2", "--labels", "dark,n1+",
                                    "--n-max", "60", "--truncation-check", "false"});
    RunConfig parallel = serial;
    parallel.threads = 3;
    const std::string a = scan_text(serial, run_qgt_scan);
    // The metadata echoes the thread count; compare the data rows only.
    CHECK(data_lines(a) == data_lines(scan_text(parallel, run_qgt_scan)));
    CHECK(a == scan_text(serial, run_qgt_scan));
  }

  TEST_CASE("qgt scan: dark row at eta=0, antisymmetry and the eta=0.95 hierarchy") {
    const RunConfig c = parse({"qgt", "--eta-min", "0", "--eta-max", "0.95", "--eta-step", "0.95",
                               "--labels", "dark,n1+,n2-", "--truncation-check", "false"});
    const ScanResult r = run_qgt_scan(c);
    CHECK(r.failures.empty());
    std::map<std::tuple<double, std::string, std::string, std::string>, double> value;
    for (const ScanRow& row : r.rows) value[{row.eta, row.label, row.quantity, row.method}] = row.value;
    CHECK(value.at({0.0, "dark", "G_eta_eta", "sum"}) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(std::abs(value.at({0.0, "dark", "G_phi_phi", "sum"})) < 1e-12);
    CHECK(std::abs(value.at({0.0, "dark", "B_eta_phi", "sum"})) < 1e-12);
    for (const auto& [key, v] : value) {
      if (std::get<2>(key) == "B_eta_phi") {
        CHECK(value.at({std::get<0>(key), std::get<1>(key), "B_phi_eta", std::get<3>(key)}) == -v);
      }
    }
    for (const char* q : {"G_eta_eta", "G_phi_phi", "B_eta_phi"}) {
      const double dark = std::abs(value.at({0.95, "dark", q, "sum"}));
      CHECK(std::abs(value.at({0.95, "n1+", q, "sum"})) > dark);
      CHECK(std::abs(value.at({0.95, "n2-", q, "sum"})) > dark);
    }
  }

  TEST_CASE("bures scan omits g_eta_phi and covers every subsystem") {
    const RunConfig c = parse({"bures", "--eta-min", "0.5", "--eta-max", "0.5", "--labels", "n1+"});
    const ScanResult r = run_bures_scan(c);
    CHECK(r.failures.empty());
    std::set<std::string> subsystems, quantities;
    for (const ScanRow& row : r.rows) {
      subsystems.insert(row.subsystem);
      quantities.insert(row.quantity);
    }
    CHECK(subsystems == std::set<std::string>{"composite", "qubit", "field"});
    CHECK(quantities == std::set<std::string>{"g_eta_eta", "g_phi_phi"});
  }

  TEST_CASE("sweep: one trajectory per k, unit fidelity at t=0, dt-halving delta reported") {
    const RunConfig c = parse({"sweep", "--labels", "dark", "--k-values", "0.4,0.2", "--samples", "4",
                               "--dt-halving", "true", "--n-max", "60"});
    const ScanResult r = run_sweep(c);
    CHECK(r.failures.empty());
    std::set<std::string> trajectories;
    int halving_rows = 0;
    for (const ScanRow& row : r.rows) {
      trajectories.insert(row.method);
      if (row.quantity == "dt_halving_delta") {
        ++halving_rows;
        CHECK(row.value < 1e-8);
      }
    }
    CHECK(trajectories.size() == 2);
    CHECK(halving_rows == 2);
    for (std::size_t i = 0; i + 2 < r.rows.size(); ++i) {
      if (r.rows[i].quantity == "t" && r.rows[i].value == 0.0) {
        CHECK(r.rows[i + 2].quantity == "fidelity");
        CHECK(r.rows[i + 2].value == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("validate report echoes the seed and lists each check with bound and status") {
    ValidationReport report{42, {{"fock-core", "x", 1e-12, 1e-8, "<", true},
                                 {"djcm-model", "y", std::nan(""), 1e-6, "<", false}}};
    CHECK_FALSE(report.all_passed());
    RunConfig c;
    std::ostringstream os;
    write_report(os, report, c);
    const std::string text = os.str();
    CHECK(text.rfind("# seed=42\n", 0) == 0);
    CHECK(text.find("module,check,measured,bound,relation,status\n") != std::string::npos);
    CHECK(text.find("djcm-model,y,nan,9.9999999999999995e-07,<,fail\n") != std::string::npos);
  }
}
