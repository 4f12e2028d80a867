#pragma once

// Amplitude-damping channels and their n-fold tensor extensions.
//
// Basis convention: a computational basis index is the big-endian digit string
// (i_1 ... i_n), so the first tensor factor is the most significant digit. Kraus
// multi-indices follow the same order: A_{i_1 ... i_n} = A_{i_1} (x) ... (x) A_{i_n}.

#include <cstddef>
#include <set>
#include <variant>
#include <vector>

#include "adqec/tensor_algebra.hpp"

namespace adqec {

inline constexpr Index kDefaultDimensionCap = 4096;

/// A Kraus operator stored either densely or as a tensor product of square
/// local factors. Product operators are applied factor by factor and never
/// materialised unless to_dense() is called.
class KrausOperator {
 public:
  static KrausOperator dense(CMatrix m);
  static KrausOperator product(std::vector<CMatrix> factors);

  Index rows() const;
  Index cols() const;
  bool is_product() const { return std::holds_alternative<std::vector<CMatrix>>(rep_); }

  /// K * x, columnwise.
  CMatrix apply(const CMatrix& x) const;
  /// K^dagger * x, columnwise.
  CMatrix apply_adjoint(const CMatrix& x) const;
  CMatrix to_dense() const;

  const std::vector<CMatrix>& factors() const { return std::get<std::vector<CMatrix>>(rep_); }

 private:
  explicit KrausOperator(std::variant<CMatrix, std::vector<CMatrix>> rep) : rep_(std::move(rep)) {}
  std::variant<CMatrix, std::vector<CMatrix>> rep_;
};

enum class ChannelKind { trace_preserving, trace_non_increasing };

struct KrausChannel {
  Index dim_in = 0;
  Index dim_out = 0;
  std::vector<KrausOperator> kraus;
  ChannelKind kind = ChannelKind::trace_preserving;
};

struct ErrorGroup {
  int order = 0;                     ///< damping order a
  std::vector<std::size_t> members;  ///< indices into KrausChannel::kraus
};

/// Partition of a channel's Kraus operators; group sizes are the eta_a.
struct ErrorGrouping {
  std::vector<ErrorGroup> groups;

  std::vector<std::size_t> sizes() const;
  const ErrorGroup* find(int order) const;
};

/// A channel together with its damping-order grouping and the multi-index of
/// every Kraus operator.
struct GroupedChannel {
  KrausChannel channel;
  ErrorGrouping grouping;
  std::vector<std::vector<int>> multi_index;
};

KrausChannel make_channel(std::vector<CMatrix> kraus, ChannelKind kind);
KrausChannel identity_channel(Index dim);

KrausChannel ad_qubit_kraus(double gamma);
KrausChannel ad_qudit_kraus(int levels, double gamma);

/// n-fold tensor power of a single-system channel, grouped by total damping
/// order sum(i_j). Throws DimensionCap when levels^n exceeds cap.
GroupedChannel tensor_channel(const KrausChannel& base, int n, Index cap = kDefaultDimensionCap);

/// Keep only the groups whose order is in `orders`.
GroupedChannel restrict_to_orders(const GroupedChannel& full, const std::set<int>& orders);
/// Keep only groups of order <= t.
GroupedChannel truncate_to_order(const GroupedChannel& full, int t);

/// sum_i K_i rho K_i^dagger
CMatrix apply_channel(const KrausChannel& channel, const CMatrix& rho);

/// sum_i K_i^dagger K_i (dense).
CMatrix completeness_matrix(const KrausChannel& channel);
bool is_trace_preserving(const KrausChannel& channel, double tol = kDefaultTolerance);
bool is_trace_non_increasing(const KrausChannel& channel, double tol = kDefaultTolerance);

/// Sequential composition: apply `first`, then `second`.
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);

}  // namespace adqec
