#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace djcm::cli {

/// One value in the long-format output: one row per (point, label, quantity).
struct ScanRow {
  double eta;
  double phi;
  std::string label;
  std::string subsystem;
  std::string quantity;
  double value;
  std::string method;
  bool converged;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

inline constexpr const char* kCsvHeader = "eta,phi,label,subsystem,quantity,value,method,converged";

/// 17 significant digits; "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double x);

void write_csv(std::ostream& os, const std::vector<ScanRow>& rows);
/// {"metadata": {...}, "rows": [{...}, ...]}; non-finite values become null.
void write_json(std::ostream& os, const std::vector<ScanRow>& rows, const Metadata& metadata);

}  // namespace djcm::cli
