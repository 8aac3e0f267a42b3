#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace djcm {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  not_hermitian,
  not_psd,
  truncation_inadequate,
  labeling_ambiguous,
  degenerate_level,
  sum_not_converged,
  gap_too_small,
  gauge_anchor_ambiguous,
  negative_metric,
  step_too_large,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Numerical or contract failure raised by the core library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::not_hermitian: return "not-hermitian";
    case ErrorCode::not_psd: return "not-psd";
    case ErrorCode::truncation_inadequate: return "truncation-inadequate";
    case ErrorCode::labeling_ambiguous: return "labeling-ambiguous";
    case ErrorCode::degenerate_level: return "degenerate-level";
    case ErrorCode::sum_not_converged: return "sum-not-converged";
    case ErrorCode::gap_too_small: return "gap-too-small";
    case ErrorCode::gauge_anchor_ambiguous: return "gauge-anchor-ambiguous";
    case ErrorCode::negative_metric: return "negative-metric";
    case ErrorCode::step_too_large: return "step-too-large";
  }
  return "unknown";
}

}  // namespace djcm
