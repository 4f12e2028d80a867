#pragma once

// Packing bound for amplitude-damping codes in exact integer arithmetic.
//
// zeta_a(n, q_p) counts the order-a damping patterns on n q_p-level systems,
// i.e. the coefficient of x^a in (1 + x + ... + x^{q_p - 1})^n. A code
// correcting every pattern of order <= t must satisfy
//   q_p^n >= sum_{a <= t} zeta_a q_l^k.

#include <boost/multiprecision/cpp_int.hpp>
#include <iosfwd>
#include <string>
#include <vector>

namespace adqec {

using BigInt = boost::multiprecision::cpp_int;

/// C(m, r), zero when r < 0 or r > m.
BigInt binomial(long m, long r);

/// Inclusion-exclusion: sum_i (-1)^i C(n, i) C(a - i q_p + n - 1, n - 1).
BigInt zeta_inclusion_exclusion(int n, int a, int q_p);
/// Direct expansion of (1 + x + ... + x^{q_p - 1})^n.
BigInt zeta_polynomial(int n, int a, int q_p);
/// Both routes; throws OutOfRange when they disagree or a is outside [0, n (q_p - 1)].
BigInt zeta(int n, int a, int q_p);

struct BoundReport {
  int n = 0;
  int k = 0;
  int t = 0;
  int q_p = 2;
  int q_l = 2;
  BigInt lhs;  ///< q_p^n
  BigInt rhs;  ///< sum_{a <= t} zeta_a q_l^k
  bool satisfied = false;
  bool saturated = false;
};

BoundReport check_bound(int n, int k, int t, int q_p = 2, int q_l = 2);

/// Reports for the (n = 2t + 1, k = 1) qubit codes, t = 1 ... t_max.
std::vector<BoundReport> verify_family_optimality(int t_max);

std::string to_json(const BoundReport& report);
std::string to_json(const std::vector<BoundReport>& reports);
void write_csv(std::ostream& out, const std::vector<BoundReport>& reports);

}  // namespace adqec
