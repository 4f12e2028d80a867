#include "adqec/ad_channels.hpp"

#include <cmath>
#include <string>

namespace adqec {

namespace {

void require_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::out_of_range, "damping strength must lie in [0, 1], got " +
                                             std::to_string(gamma));
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

CMatrix apply_factors(const std::vector<CMatrix>& factors, CMatrix x, bool adjoint) {
  const Index dim = x.rows();
  Index trailing = dim;
  CMatrix y(dim, x.cols());
  for (const CMatrix& f : factors) {
    const Index q = f.rows();
    trailing /= q;
    const Index block = q * trailing;
    // Within a block of q * trailing entries, (s, r) sits at r * trailing + s,
    // i.e. a column-major (trailing x q) matrix whose columns are the local digit.
    const CMatrix local = adjoint ? CMatrix(f.conjugate()) : CMatrix(f.transpose());
    for (Index c = 0; c < x.cols(); ++c) {
      for (Index offset = 0; offset < dim; offset += block) {
        Eigen::Map<const CMatrix> in(x.col(c).data() + offset, trailing, q);
        Eigen::Map<CMatrix> out(y.col(c).data() + offset, trailing, q);
        out.noalias() = in * local;
      }
    }
    x.swap(y);
  }
  return x;
}

}  // namespace

KrausOperator KrausOperator::dense(CMatrix m) { return KrausOperator(std::move(m)); }

KrausOperator KrausOperator::product(std::vector<CMatrix> factors) {
  if (factors.empty()) {
    throw Error(ErrorKind::shape_mismatch, "product Kraus operator needs at least one factor");
  }
  for (const auto& f : factors) {
    if (f.rows() != f.cols() || f.rows() == 0) {
      throw Error(ErrorKind::shape_mismatch, "product Kraus factors must be square");
    }
  }
  return KrausOperator(std::move(factors));
}

Index KrausOperator::rows() const {
  if (const auto* m = std::get_if<CMatrix>(&rep_)) return m->rows();
  Index dim = 1;
  for (const auto& f : factors()) dim *= f.rows();
  return dim;
}

Index KrausOperator::cols() const {
  if (const auto* m = std::get_if<CMatrix>(&rep_)) return m->cols();
  return rows();
}

CMatrix KrausOperator::apply(const CMatrix& x) const {
  if (x.rows() != cols()) {
    throw Error(ErrorKind::shape_mismatch, "Kraus operator applied to wrong dimension");
  }
  if (const auto* m = std::get_if<CMatrix>(&rep_)) return *m * x;
  return apply_factors(factors(), x, false);
}

CMatrix KrausOperator::apply_adjoint(const CMatrix& x) const {
  if (x.rows() != rows()) {
    throw Error(ErrorKind::shape_mismatch, "Kraus adjoint applied to wrong dimension");
  }
  if (const auto* m = std::get_if<CMatrix>(&rep_)) return m->adjoint() * x;
  return apply_factors(factors(), x, true);
}

CMatrix KrausOperator::to_dense() const {
  if (const auto* m = std::get_if<CMatrix>(&rep_)) return *m;
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& f : factors()) out = kron(out, f);
  return out;
}

std::vector<std::size_t> ErrorGrouping::sizes() const {
  std::vector<std::size_t> eta;
  eta.reserve(groups.size());
  for (const auto& g : groups) eta.push_back(g.members.size());
  return eta;
}

const ErrorGroup* ErrorGrouping::find(int order) const {
  for (const auto& g : groups) {
    if (g.order == order) return &g;
  }
  return nullptr;
}

KrausChannel make_channel(std::vector<CMatrix> kraus, ChannelKind kind) {
  if (kraus.empty()) throw Error(ErrorKind::shape_mismatch, "channel needs Kraus operators");
  KrausChannel ch;
  ch.dim_out = kraus.front().rows();
  ch.dim_in = kraus.front().cols();
  ch.kind = kind;
  for (auto& k : kraus) {
    if (k.rows() != ch.dim_out || k.cols() != ch.dim_in) {
      throw Error(ErrorKind::shape_mismatch, "Kraus operators have inconsistent shapes");
    }
    ch.kraus.push_back(KrausOperator::dense(std::move(k)));
  }
  return ch;
}

KrausChannel identity_channel(Index dim) {
  return make_channel({CMatrix::Identity(dim, dim)}, ChannelKind::trace_preserving);
}

KrausChannel ad_qubit_kraus(double gamma) {
  require_gamma(gamma);
  CMatrix a0 = CMatrix::Zero(2, 2);
  CMatrix a1 = CMatrix::Zero(2, 2);
  a0(0, 0) = 1.0;
  a0(1, 1) = std::sqrt(1.0 - gamma);
  a1(0, 1) = std::sqrt(gamma);
  return make_channel({a0, a1}, ChannelKind::trace_preserving);
}

KrausChannel ad_qudit_kraus(int levels, double gamma) {
  if (levels < 2) throw Error(ErrorKind::out_of_range, "qudit damping needs at least 2 levels");
  require_gamma(gamma);
  std::vector<CMatrix> ops;
  for (int k = 0; k < levels; ++k) {
    CMatrix a = CMatrix::Zero(levels, levels);
    for (int r = k; r < levels; ++r) {
      a(r - k, r) = std::sqrt(binomial(r, k)) * std::sqrt(std::pow(1.0 - gamma, r - k) *
                                                          std::pow(gamma, k));
    }
    ops.push_back(std::move(a));
  }
  return make_channel(std::move(ops), ChannelKind::trace_preserving);
}

GroupedChannel tensor_channel(const KrausChannel& base, int n, Index cap) {
  if (n < 1) throw Error(ErrorKind::out_of_range, "tensor power needs n >= 1");
  if (base.dim_in != base.dim_out) {
    throw Error(ErrorKind::shape_mismatch, "tensor_channel needs a square single-system channel");
  }
  const Index q = base.dim_in;
  Index dim = 1;
  for (int i = 0; i < n; ++i) {
    if (dim > cap / q) {
      throw Error(ErrorKind::dimension_cap, "Hilbert space dimension " + std::to_string(q) + "^" +
                                                std::to_string(n) + " exceeds cap " +
                                                std::to_string(cap));
    }
    dim *= q;
  }
  std::vector<CMatrix> local;
  for (const auto& k : base.kraus) local.push_back(k.to_dense());
  const int m = static_cast<int>(local.size());

  GroupedChannel out;
  out.channel.dim_in = dim;
  out.channel.dim_out = dim;
  out.channel.kind = base.kind;
  std::vector<int> digits(n, 0);
  int max_order = 0;
  std::vector<int> orders;
  while (true) {
    std::vector<CMatrix> factors;
    int order = 0;
    for (int d : digits) {
      factors.push_back(local[d]);
      order += d;
    }
    out.channel.kraus.push_back(KrausOperator::product(std::move(factors)));
    out.multi_index.push_back(digits);
    orders.push_back(order);
    max_order = std::max(max_order, order);
    int pos = n - 1;
    while (pos >= 0 && ++digits[pos] == m) digits[pos--] = 0;
    if (pos < 0) break;
  }
  for (int a = 0; a <= max_order; ++a) {
    ErrorGroup g{a, {}};
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (orders[i] == a) g.members.push_back(i);
    }
    if (!g.members.empty()) out.grouping.groups.push_back(std::move(g));
  }
  return out;
}

GroupedChannel restrict_to_orders(const GroupedChannel& full, const std::set<int>& orders) {
  GroupedChannel out;
  out.channel.dim_in = full.channel.dim_in;
  out.channel.dim_out = full.channel.dim_out;
  bool dropped = false;
  for (const auto& g : full.grouping.groups) {
    if (!orders.count(g.order)) {
      dropped = true;
      continue;
    }
    ErrorGroup kept{g.order, {}};
    for (std::size_t idx : g.members) {
      kept.members.push_back(out.channel.kraus.size());
      out.channel.kraus.push_back(full.channel.kraus[idx]);
      if (idx < full.multi_index.size()) out.multi_index.push_back(full.multi_index[idx]);
    }
    out.grouping.groups.push_back(std::move(kept));
  }
  out.channel.kind = dropped ? ChannelKind::trace_non_increasing : full.channel.kind;
  return out;
}

GroupedChannel truncate_to_order(const GroupedChannel& full, int t) {
  std::set<int> orders;
  for (const auto& g : full.grouping.groups) {
    if (g.order <= t) orders.insert(g.order);
  }
  return restrict_to_orders(full, orders);
}

CMatrix apply_channel(const KrausChannel& channel, const CMatrix& rho) {
  if (rho.rows() != channel.dim_in || rho.cols() != channel.dim_in) {
    throw Error(ErrorKind::shape_mismatch, "state dimension " + std::to_string(rho.rows()) +
                                               " does not match channel input " +
                                               std::to_string(channel.dim_in));
  }
  CMatrix out = CMatrix::Zero(channel.dim_out, channel.dim_out);
  for (const auto& k : channel.kraus) {
    const CMatrix left = k.apply(rho);                   // K rho
    out += k.apply(CMatrix(left.adjoint())).adjoint();  // (K (K rho)^dagger)^dagger
  }
  return out;
}

CMatrix completeness_matrix(const KrausChannel& channel) {
  const CMatrix id = CMatrix::Identity(channel.dim_in, channel.dim_in);
  CMatrix sum = CMatrix::Zero(channel.dim_in, channel.dim_in);
  for (const auto& k : channel.kraus) sum += k.apply_adjoint(k.apply(id));
  return sum;
}

bool is_trace_preserving(const KrausChannel& channel, double tol) {
  const CMatrix sum = completeness_matrix(channel);
  return max_abs_entry(sum - CMatrix::Identity(sum.rows(), sum.cols())) <= tol;
}

bool is_trace_non_increasing(const KrausChannel& channel, double tol) {
  return largest_eigenvalue_psd(completeness_matrix(channel), tol) <= 1.0 + tol;
}

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (second.dim_in != first.dim_out) {
    throw Error(ErrorKind::shape_mismatch, "compose: dimensions do not chain");
  }
  std::vector<CMatrix> ops;
  for (const auto& b : second.kraus) {
    const CMatrix bd = b.to_dense();
    for (const auto& a : first.kraus) ops.push_back(a.apply_adjoint(CMatrix(bd.adjoint())).adjoint());
  }
  const bool tp = second.kind == ChannelKind::trace_preserving &&
                  first.kind == ChannelKind::trace_preserving;
  return make_channel(std::move(ops),
                      tp ? ChannelKind::trace_preserving : ChannelKind::trace_non_increasing);
}

}  // namespace adqec
