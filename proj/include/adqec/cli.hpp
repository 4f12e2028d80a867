#pragma once

// Command-line driver. Exit status: 0 success, 1 verification negative,
// 2 usage or I/O error.

#include <iosfwd>
#include <string>
#include <vector>

#include "adqec/fidelity_metrics.hpp"

namespace adqec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;

/// Builtin schemes: 31, 51, 41-prob, 41-petz, bare, qutrit.
Scheme builtin_scheme(const std::string& name, Index cap = kDefaultDimensionCap);
std::vector<std::string> builtin_names();

/// Family selector "k=1,t=1": the permutation-invariant code with probabilistic
/// recovery of orders 0..t.
Scheme family_scheme(const std::string& selector, Index cap = kDefaultDimensionCap);

/// "start:stop:count" (inclusive) or a single value; every point must lie in [0, 1].
std::vector<double> parse_gamma_grid(const std::string& spec);
/// A number, "pi", "pi/<x>" or "<x>pi".
double parse_angle(const std::string& text);

/// Dimension cap from ADQEC_DIM_CAP, or the library default.
Index dimension_cap_from_env();

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adqec::cli
