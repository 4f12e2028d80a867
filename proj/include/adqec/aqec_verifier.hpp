#pragma once

// Checks of the grouped (probabilistic) error-correction conditions.
//
// Theorem-1 form, for groups a, b and codewords i, j:
//   <i|E_m^(a)+ E_p^(b)|j> = 0             whenever i != j or a != b,
//   sum_m <i|E_m^(a)+ E_p^(a)|i> = chi_i^a  independent of p, chi_i^a != 0.
// The relaxed form only requires the group sums sum_m <i|E_m^(a)+ E_p^(b)|j>
// to vanish off the (i, a) = (j, b) diagonal.

#include <complex>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "adqec/ad_channels.hpp"
#include "adqec/code_constructions.hpp"

namespace adqec {

enum class Condition { theorem1, theorem_s2 };

struct OverlapViolation {
  int i = 0;
  int j = 0;
  int a = 0;  ///< group order on the bra side
  int b = 0;  ///< group order on the ket side
  std::size_t m = 0;  ///< Kraus index (within the channel) on the bra side; unused for group sums
  std::size_t p = 0;  ///< Kraus index on the ket side
  double magnitude = 0.0;
};

/// chi_i^a at one damping strength; chi[i][g] follows grouping order.
struct ChiTable {
  double gamma = 0.0;
  std::vector<int> orders;
  std::vector<std::vector<std::complex<double>>> chi;
};

struct AqecReport {
  bool passed = false;
  Condition condition = Condition::theorem1;
  std::vector<ChiTable> chi;
  double max_violation = 0.0;
  bool chi_zero = false;
  std::vector<OverlapViolation> violating_entries;
};

struct VerifierOptions {
  double tolerance = kDefaultTolerance;
  double chi_floor = 1e-12;
  bool throw_on_chi_zero = true;
  std::size_t max_reported = 64;
};

inline const std::vector<double> kDefaultGammaSamples{0.05, 0.1, 0.2, 0.3};

/// Grouped channel as a function of the damping strength.
using ChannelFamily = std::function<GroupedChannel(double gamma)>;

/// Qudit amplitude damping on every physical system of `code`, restricted to
/// the listed orders (all orders when empty).
ChannelFamily ad_channel_family(const QuantumCode& code, std::set<int> orders = {},
                                Index cap = kDefaultDimensionCap);

/// Single-gamma checks; `gamma` is only used to label the chi table.
AqecReport check_theorem1(const QuantumCode& code, const GroupedChannel& noise, double gamma,
                          const VerifierOptions& opts = {});
AqecReport check_theorem_s2(const QuantumCode& code, const GroupedChannel& noise, double gamma,
                            const VerifierOptions& opts = {});

/// Multi-gamma checks; passed only when every sample passes.
AqecReport check_theorem1(const QuantumCode& code, const ChannelFamily& family,
                          std::span<const double> gammas, const VerifierOptions& opts = {});
AqecReport check_theorem_s2(const QuantumCode& code, const ChannelFamily& family,
                            std::span<const double> gammas, const VerifierOptions& opts = {});

/// Closed form of chi for a permutation-invariant codeword of excitation e
/// under order-a qubit damping on n qubits.
double chi_closed_form(int n, int e, int a, double gamma);

/// Orthonormal bases of S_i^(a) = span{E_m^(a)|i_L>}.
struct SubspaceAtlas {
  std::vector<int> orders;
  std::vector<std::vector<CMatrix>> bases;  ///< [group][codeword], columns orthonormal
  CMatrix cross_overlap;  ///< largest |<u|v>| between subspaces, indexed group * d + codeword
  double max_cross_overlap = 0.0;

  Index dimension(std::size_t group, std::size_t codeword) const {
    return bases[group][codeword].cols();
  }
  /// Orthonormal basis of the direct sum over codewords for one group.
  CMatrix group_basis(std::size_t group) const;
};

SubspaceAtlas build_subspace_atlas(const QuantumCode& code, const GroupedChannel& noise,
                                   double drop = 1e-10);

std::string to_json(const AqecReport& report);
const char* to_string(Condition condition) noexcept;

}  // namespace adqec
