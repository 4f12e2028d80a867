#pragma once

#include <stdexcept>
#include <string>

namespace adqec {

enum class ErrorKind {
  out_of_range,
  not_psd,
  dimension_cap,
  shape_mismatch,
  schema_error,
  not_orthonormal,
  level_overflow,
  chi_zero,
  conditions_not_met,
  not_contraction,
  singular_support,
  unsupported_k,
  insufficient_samples,
  io_error,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace adqec
