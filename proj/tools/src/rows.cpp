#include "djcm/cli/rows.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace djcm::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << kCsvHeader << '\n';
  for (const ScanRow& r : rows) {
    os << format_double(r.eta) << ',' << format_double(r.phi) << ',' << r.label << ','
       << r.subsystem << ',' << r.quantity << ',' << format_double(r.value) << ',' << r.method
       << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<ScanRow>& rows, const Metadata& metadata) {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [key, value] : metadata) meta[key] = value;
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  const auto number = [](double x) {
    return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
  };
  for (const ScanRow& r : rows) {
    array.push_back({{"eta", number(r.eta)},
                     {"phi", number(r.phi)},
                     {"label", r.label},
                     {"subsystem", r.subsystem},
                     {"quantity", r.quantity},
                     {"value", number(r.value)},
                     {"method", r.method},
                     {"converged", r.converged}});
  }
  nlohmann::ordered_json doc;
  doc["metadata"] = std::move(meta);
  doc["rows"] = std::move(array);
  os << doc.dump(2) << '\n';
}

}  // namespace djcm::cli
