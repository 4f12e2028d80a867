#include "adqec/aqec_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace adqec {

namespace {

// All vectors E_m^(a)|i_L>, stacked as columns, plus their Gram matrix.
struct ImageSet {
  std::size_t d = 0;
  std::vector<std::size_t> group_offset;  // first column of each group
  std::vector<std::vector<std::size_t>> members;
  CMatrix vectors;
  CMatrix gram;
  RVector norms;
  double zero_threshold = 0.0;

  std::size_t column(std::size_t g, std::size_t pos, std::size_t i) const {
    return group_offset[g] + pos * d + i;
  }
  bool is_zero(std::size_t col) const { return norms(static_cast<Index>(col)) <= zero_threshold; }
};

ImageSet collect_images(const QuantumCode& code, const GroupedChannel& noise) {
  if (noise.channel.dim_in != code.physical_dim()) {
    throw Error(ErrorKind::shape_mismatch, "channel dimension " +
                                               std::to_string(noise.channel.dim_in) +
                                               " does not match code dimension " +
                                               std::to_string(code.physical_dim()));
  }
  ImageSet set;
  set.d = static_cast<std::size_t>(code.logical_dim());
  std::size_t total = 0;
  for (const auto& g : noise.grouping.groups) {
    set.group_offset.push_back(total);
    set.members.push_back(g.members);
    total += g.members.size() * set.d;
  }
  set.vectors.resize(code.physical_dim(), static_cast<Index>(total));
  for (std::size_t g = 0; g < noise.grouping.groups.size(); ++g) {
    const auto& members = noise.grouping.groups[g].members;
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
      set.vectors.middleCols(static_cast<Index>(set.column(g, pos, 0)), code.logical_dim()) =
          noise.channel.kraus[members[pos]].apply(code.codewords);
    }
  }
  set.gram = set.vectors.adjoint() * set.vectors;
  set.norms = set.gram.diagonal().real().cwiseMax(0.0).cwiseSqrt();
  const double scale = set.norms.size() > 0 ? set.norms.maxCoeff() : 0.0;
  set.zero_threshold = 1e-13 * scale;
  return set;
}

class ViolationLog {
 public:
  ViolationLog(double tol, std::size_t cap) : tol_(tol), cap_(cap) {}

  void record(const OverlapViolation& v) {
    max_ = std::max(max_, v.magnitude);
    if (v.magnitude <= tol_) return;
    entries_.push_back(v);
    if (entries_.size() > 4 * cap_ + 16) trim();
  }

  double max() const { return max_; }

  std::vector<OverlapViolation> take() {
    trim();
    return std::move(entries_);
  }

 private:
  void trim() {
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const auto& x, const auto& y) { return x.magnitude > y.magnitude; });
    if (entries_.size() > cap_) entries_.resize(cap_);
  }

  double tol_;
  std::size_t cap_;
  double max_ = 0.0;
  std::vector<OverlapViolation> entries_;
};

// chi_i^a from the p-indexed group sums, recording spread violations.
ChiTable group_sum_chi(const ImageSet& set, const GroupedChannel& noise, double gamma,
                       const VerifierOptions& opts, ViolationLog& log, bool& chi_zero) {
  ChiTable table;
  table.gamma = gamma;
  for (const auto& g : noise.grouping.groups) table.orders.push_back(g.order);
  table.chi.assign(set.d, std::vector<std::complex<double>>(noise.grouping.groups.size()));
  for (std::size_t g = 0; g < set.members.size(); ++g) {
    const auto& members = set.members[g];
    for (std::size_t i = 0; i < set.d; ++i) {
      std::vector<std::complex<double>> sums(members.size());
      for (std::size_t p = 0; p < members.size(); ++p) {
        std::complex<double> s = 0.0;
        for (std::size_t m = 0; m < members.size(); ++m) {
          s += set.gram(static_cast<Index>(set.column(g, m, i)),
                        static_cast<Index>(set.column(g, p, i)));
        }
        sums[p] = s;
      }
      std::complex<double> chi = 0.0;
      for (const auto& s : sums) chi += s;
      chi /= static_cast<double>(sums.size());
      table.chi[i][g] = chi;
      if (std::abs(chi) <= opts.chi_floor) {
        chi_zero = true;
        continue;
      }
      for (std::size_t p = 0; p < members.size(); ++p) {
        const int ii = static_cast<int>(i);
        log.record({ii, ii, noise.grouping.groups[g].order, noise.grouping.groups[g].order,
                    members[0], members[p], std::abs(sums[p] - chi) / std::abs(chi)});
      }
    }
  }
  return table;
}

AqecReport finish(Condition condition, ChiTable table, ViolationLog& log, bool chi_zero,
                  const VerifierOptions& opts) {
  if (chi_zero && opts.throw_on_chi_zero) {
    throw Error(ErrorKind::chi_zero, "some chi_i^a vanishes at gamma = " +
                                         std::to_string(table.gamma));
  }
  AqecReport report;
  report.condition = condition;
  report.chi.push_back(std::move(table));
  report.max_violation = log.max();
  report.chi_zero = chi_zero;
  report.violating_entries = log.take();
  report.passed = !chi_zero && report.max_violation <= opts.tolerance;
  return report;
}

AqecReport check_many(Condition condition, const QuantumCode& code, const ChannelFamily& family,
                      std::span<const double> gammas, const VerifierOptions& opts) {
  AqecReport merged;
  merged.condition = condition;
  merged.passed = true;
  for (double gamma : gammas) {
    const GroupedChannel noise = family(gamma);
    AqecReport one = condition == Condition::theorem1 ? check_theorem1(code, noise, gamma, opts)
                                                      : check_theorem_s2(code, noise, gamma, opts);
    merged.passed = merged.passed && one.passed;
    merged.chi_zero = merged.chi_zero || one.chi_zero;
    merged.max_violation = std::max(merged.max_violation, one.max_violation);
    for (auto& t : one.chi) merged.chi.push_back(std::move(t));
    for (auto& v : one.violating_entries) {
      if (merged.violating_entries.size() < opts.max_reported) merged.violating_entries.push_back(v);
    }
  }
  if (gammas.empty()) merged.passed = false;
  return merged;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

}  // namespace

ChannelFamily ad_channel_family(const QuantumCode& code, std::set<int> orders, Index cap) {
  const int n = code.n;
  const int levels = code.q_p;
  return [n, levels, orders = std::move(orders), cap](double gamma) {
    GroupedChannel full = tensor_channel(ad_qudit_kraus(levels, gamma), n, cap);
    return orders.empty() ? full : restrict_to_orders(full, orders);
  };
}

AqecReport check_theorem1(const QuantumCode& code, const GroupedChannel& noise, double gamma,
                          const VerifierOptions& opts) {
  const ImageSet set = collect_images(code, noise);
  ViolationLog log(opts.tolerance, opts.max_reported);
  const auto& groups = noise.grouping.groups;
  for (std::size_t ga = 0; ga < groups.size(); ++ga) {
    for (std::size_t gb = 0; gb < groups.size(); ++gb) {
      for (std::size_t m = 0; m < set.members[ga].size(); ++m) {
        for (std::size_t p = 0; p < set.members[gb].size(); ++p) {
          for (std::size_t i = 0; i < set.d; ++i) {
            for (std::size_t j = 0; j < set.d; ++j) {
              if (ga == gb && i == j) continue;
              const auto x = set.column(ga, m, i);
              const auto y = set.column(gb, p, j);
              if (set.is_zero(x) || set.is_zero(y)) continue;
              const double cosine = std::abs(set.gram(static_cast<Index>(x), static_cast<Index>(y))) /
                                    (set.norms(static_cast<Index>(x)) * set.norms(static_cast<Index>(y)));
              log.record({static_cast<int>(i), static_cast<int>(j), groups[ga].order,
                          groups[gb].order, set.members[ga][m], set.members[gb][p], cosine});
            }
          }
        }
      }
    }
  }
  bool chi_zero = false;
  ChiTable table = group_sum_chi(set, noise, gamma, opts, log, chi_zero);
  return finish(Condition::theorem1, std::move(table), log, chi_zero, opts);
}

AqecReport check_theorem_s2(const QuantumCode& code, const GroupedChannel& noise, double gamma,
                            const VerifierOptions& opts) {
  const ImageSet set = collect_images(code, noise);
  ViolationLog log(opts.tolerance, opts.max_reported);
  const auto& groups = noise.grouping.groups;
  for (std::size_t ga = 0; ga < groups.size(); ++ga) {
    for (std::size_t i = 0; i < set.d; ++i) {
      // Bound on |sum_m <E_m i|y>| by Cauchy-Schwarz, so a Theorem-1 pass
      // implies a pass here at the same tolerance.
      double weight = 0.0;
      for (std::size_t m = 0; m < set.members[ga].size(); ++m) {
        weight += set.norms(static_cast<Index>(set.column(ga, m, i)));
      }
      if (weight <= set.zero_threshold) continue;
      for (std::size_t gb = 0; gb < groups.size(); ++gb) {
        for (std::size_t j = 0; j < set.d; ++j) {
          if (ga == gb && i == j) continue;
          for (std::size_t p = 0; p < set.members[gb].size(); ++p) {
            const auto y = set.column(gb, p, j);
            if (set.is_zero(y)) continue;
            std::complex<double> s = 0.0;
            for (std::size_t m = 0; m < set.members[ga].size(); ++m) {
              s += set.gram(static_cast<Index>(set.column(ga, m, i)), static_cast<Index>(y));
            }
            log.record({static_cast<int>(i), static_cast<int>(j), groups[ga].order,
                        groups[gb].order, std::numeric_limits<std::size_t>::max(),
                        set.members[gb][p],
                        std::abs(s) / (weight * set.norms(static_cast<Index>(y)))});
          }
        }
      }
    }
  }
  bool chi_zero = false;
  ChiTable table = group_sum_chi(set, noise, gamma, opts, log, chi_zero);
  return finish(Condition::theorem_s2, std::move(table), log, chi_zero, opts);
}

AqecReport check_theorem1(const QuantumCode& code, const ChannelFamily& family,
                          std::span<const double> gammas, const VerifierOptions& opts) {
  return check_many(Condition::theorem1, code, family, gammas, opts);
}

AqecReport check_theorem_s2(const QuantumCode& code, const ChannelFamily& family,
                            std::span<const double> gammas, const VerifierOptions& opts) {
  return check_many(Condition::theorem_s2, code, family, gammas, opts);
}

double chi_closed_form(int n, int e, int a, double gamma) {
  if (a < 0 || e < a || n < e) {
    throw Error(ErrorKind::out_of_range, "chi_closed_form needs 0 <= a <= e <= n");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::out_of_range, "damping strength must lie in [0, 1]");
  }
  const double c = binomial(n - a, e - a);
  return c * c * binomial(n, a) / (binomial(n, e) * binomial(n, e - a)) *
         std::pow(1.0 - gamma, e - a) * std::pow(gamma, a);
}

CMatrix SubspaceAtlas::group_basis(std::size_t group) const {
  Index cols = 0;
  for (const auto& b : bases[group]) cols += b.cols();
  const Index rows = bases[group].empty() ? 0 : bases[group].front().rows();
  CMatrix stacked(rows, cols);
  Index at = 0;
  for (const auto& b : bases[group]) {
    stacked.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return orthonormal_basis(stacked);
}

SubspaceAtlas build_subspace_atlas(const QuantumCode& code, const GroupedChannel& noise,
                                   double drop) {
  const ImageSet set = collect_images(code, noise);
  SubspaceAtlas atlas;
  const std::size_t d = set.d;
  for (std::size_t g = 0; g < set.members.size(); ++g) {
    atlas.orders.push_back(noise.grouping.groups[g].order);
    std::vector<CMatrix> per_codeword;
    for (std::size_t i = 0; i < d; ++i) {
      CMatrix cols(code.physical_dim(), static_cast<Index>(set.members[g].size()));
      for (std::size_t m = 0; m < set.members[g].size(); ++m) {
        cols.col(static_cast<Index>(m)) = set.vectors.col(static_cast<Index>(set.column(g, m, i)));
      }
      per_codeword.push_back(orthonormal_basis(cols, drop));
    }
    atlas.bases.push_back(std::move(per_codeword));
  }
  const Index count = static_cast<Index>(atlas.bases.size() * d);
  atlas.cross_overlap = CMatrix::Zero(count, count);
  for (Index s = 0; s < count; ++s) {
    for (Index t = 0; t < count; ++t) {
      if (s == t) continue;
      const CMatrix& qs = atlas.bases[s / d][s % d];
      const CMatrix& qt = atlas.bases[t / d][t % d];
      if (qs.cols() == 0 || qt.cols() == 0) continue;
      const CMatrix overlap = qs.adjoint() * qt;
      Eigen::JacobiSVD<CMatrix> svd(overlap);
      const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
      atlas.cross_overlap(s, t) = top;
      atlas.max_cross_overlap = std::max(atlas.max_cross_overlap, top);
    }
  }
  return atlas;
}

const char* to_string(Condition condition) noexcept {
  return condition == Condition::theorem1 ? "theorem1" : "theoremS2";
}

std::string to_json(const AqecReport& report) {
  nlohmann::json doc;
  doc["passed"] = report.passed;
  doc["condition"] = to_string(report.condition);
  doc["max_violation"] = report.max_violation;
  doc["chi_zero"] = report.chi_zero;
  nlohmann::json chi = nlohmann::json::array();
  for (const auto& table : report.chi) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.chi) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& z : row) r.push_back({z.real(), z.imag()});
      rows.push_back(std::move(r));
    }
    chi.push_back({{"gamma", table.gamma}, {"orders", table.orders}, {"chi", std::move(rows)}});
  }
  doc["chi"] = std::move(chi);
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& v : report.violating_entries) {
    nlohmann::json e{{"i", v.i}, {"j", v.j}, {"a", v.a}, {"b", v.b}, {"p", v.p},
                     {"magnitude", v.magnitude}};
    if (v.m != std::numeric_limits<std::size_t>::max()) {
      e["m"] = v.m;
    } else {
      e["m"] = nullptr;
    }
    entries.push_back(std::move(e));
  }
  doc["violating_entries"] = std::move(entries);
  return doc.dump(2);
}

}  // namespace adqec
