#include "adqec/hamming_bounds.hpp"

#include <algorithm>
#include <ostream>

#include "adqec/error.hpp"
#include "json.hpp"

namespace adqec {

namespace {

void require_range(int n, int a, int q_p) {
  if (n < 1 || q_p < 2) throw Error(ErrorKind::out_of_range, "zeta needs n >= 1 and q_p >= 2");
  if (a < 0 || a > n * (q_p - 1)) {
    throw Error(ErrorKind::out_of_range, "order " + std::to_string(a) + " not in [0, " +
                                             std::to_string(n * (q_p - 1)) + "]");
  }
}

nlohmann::json report_json(const BoundReport& r) {
  return {{"n", r.n},           {"k", r.k},
          {"t", r.t},           {"q_p", r.q_p},
          {"q_l", r.q_l},       {"lhs", r.lhs.str()},
          {"rhs", r.rhs.str()}, {"satisfied", r.satisfied},
          {"saturated", r.saturated}};
}

}  // namespace

BigInt binomial(long m, long r) {
  if (r < 0 || m < 0 || r > m) return 0;
  r = std::min(r, m - r);
  // Row m of Pascal's triangle, truncated at column r.
  std::vector<BigInt> row(static_cast<std::size_t>(r) + 1, 0);
  row[0] = 1;
  for (long i = 1; i <= m; ++i) {
    for (long j = std::min(i, r); j >= 1; --j) {
      row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
    }
  }
  return row[static_cast<std::size_t>(r)];
}

BigInt zeta_inclusion_exclusion(int n, int a, int q_p) {
  require_range(n, a, q_p);
  BigInt sum = 0;
  for (int i = 0; i <= n; ++i) {
    const long top = static_cast<long>(a) - static_cast<long>(i) * q_p + n - 1;
    const BigInt term = binomial(n, i) * binomial(top, n - 1);
    if (i % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

BigInt zeta_polynomial(int n, int a, int q_p) {
  require_range(n, a, q_p);
  std::vector<BigInt> poly{1};
  for (int f = 0; f < n; ++f) {
    std::vector<BigInt> next(poly.size() + static_cast<std::size_t>(q_p - 1), 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      for (int j = 0; j < q_p; ++j) next[i + static_cast<std::size_t>(j)] += poly[i];
    }
    poly = std::move(next);
  }
  return poly[static_cast<std::size_t>(a)];
}

BigInt zeta(int n, int a, int q_p) {
  const BigInt by_sum = zeta_inclusion_exclusion(n, a, q_p);
  const BigInt by_poly = zeta_polynomial(n, a, q_p);
  if (by_sum != by_poly) {
    throw Error(ErrorKind::out_of_range, "zeta routes disagree: " + by_sum.str() + " vs " +
                                             by_poly.str());
  }
  return by_sum;
}

BoundReport check_bound(int n, int k, int t, int q_p, int q_l) {
  if (n < 1 || k < 1 || t < 0 || q_p < 2 || q_l < 2) {
    throw Error(ErrorKind::out_of_range, "bound parameters must be positive");
  }
  if (t > n * (q_p - 1)) {
    throw Error(ErrorKind::out_of_range, "t exceeds the largest damping order n (q_p - 1)");
  }
  BoundReport r{n, k, t, q_p, q_l, 0, 0, false, false};
  r.lhs = boost::multiprecision::pow(BigInt(q_p), static_cast<unsigned>(n));
  const BigInt logical = boost::multiprecision::pow(BigInt(q_l), static_cast<unsigned>(k));
  for (int a = 0; a <= t; ++a) r.rhs += zeta(n, a, q_p) * logical;
  r.satisfied = r.lhs >= r.rhs;
  r.saturated = r.lhs == r.rhs;
  return r;
}

std::vector<BoundReport> verify_family_optimality(int t_max) {
  std::vector<BoundReport> out;
  for (int t = 1; t <= t_max; ++t) out.push_back(check_bound(2 * t + 1, 1, t));
  return out;
}

std::string to_json(const BoundReport& report) { return report_json(report).dump(); }

std::string to_json(const std::vector<BoundReport>& reports) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : reports) doc.push_back(report_json(r));
  return doc.dump();
}

void write_csv(std::ostream& out, const std::vector<BoundReport>& reports) {
  out << "n,k,t,q_p,q_l,lhs,rhs,satisfied,saturated\n";
  for (const auto& r : reports) {
    out << r.n << ',' << r.k << ',' << r.t << ',' << r.q_p << ',' << r.q_l << ',' << r.lhs << ','
        << r.rhs << ',' << (r.satisfied ? "true" : "false") << ','
        << (r.saturated ? "true" : "false") << '\n';
  }
}

}  // namespace adqec
