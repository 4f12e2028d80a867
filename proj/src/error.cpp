#include "adqec/error.hpp"

namespace adqec {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::out_of_range: return "OutOfRange";
    case ErrorKind::not_psd: return "NotPSD";
    case ErrorKind::dimension_cap: return "DimensionCap";
    case ErrorKind::shape_mismatch: return "ShapeMismatch";
    case ErrorKind::schema_error: return "SchemaError";
    case ErrorKind::not_orthonormal: return "NotOrthonormal";
    case ErrorKind::level_overflow: return "LevelOverflow";
    case ErrorKind::chi_zero: return "ChiZero";
    case ErrorKind::conditions_not_met: return "ConditionsNotMet";
    case ErrorKind::not_contraction: return "NotContraction";
    case ErrorKind::singular_support: return "SingularSupport";
    case ErrorKind::unsupported_k: return "UnsupportedK";
    case ErrorKind::insufficient_samples: return "InsufficientSamples";
    case ErrorKind::io_error: return "IOError";
  }
  return "Unknown";
}

}  // namespace adqec
