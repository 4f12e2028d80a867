#include "adqec/fidelity_metrics.hpp"

#include <algorithm>
#include <array>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

namespace adqec {

namespace {

void accumulate(LogicalProcess& process, const CMatrix& logical, const CMatrix& physical) {
  process.transfer += kron(logical, logical.conjugate());
  process.gram += physical.adjoint() * physical;
}

double quartic(const LogicalProcess& process, const CVector& psi) {
  const CVector v = kron(psi, psi.conjugate());
  return (v.adjoint() * process.transfer * v)(0, 0).real();
}

double conditioned(double value, double norm, FidelityConvention convention) {
  if (convention == FidelityConvention::unnormalized) return value;
  return norm > 0.0 ? value / norm : 0.0;
}

using Point = std::array<double, 2>;

// Nelder-Mead on two parameters; stops when the simplex diameter drops below tol.
template <typename F>
std::pair<Point, double> nelder_mead(F&& f, Point start, Point step, double tol, int max_iter) {
  std::array<Point, 3> x{start, start, start};
  x[1][0] += step[0];
  x[2][1] += step[1];
  std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
  for (int iter = 0; iter < max_iter; ++iter) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0], mid = order[1], worst = order[2];
    double diameter = 0.0;
    for (int v : {mid, worst}) {
      diameter = std::max(diameter, std::hypot(x[v][0] - x[best][0], x[v][1] - x[best][1]));
    }
    if (diameter < tol) break;
    const Point centroid{(x[best][0] + x[mid][0]) / 2, (x[best][1] + x[mid][1]) / 2};
    auto along = [&](double t) {
      return Point{centroid[0] + t * (x[worst][0] - centroid[0]),
                   centroid[1] + t * (x[worst][1] - centroid[1])};
    };
    const Point reflected = along(-1.0);
    const double fr = f(reflected);
    if (fr < fx[best]) {
      const Point expanded = along(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        x[worst] = expanded;
        fx[worst] = fe;
      } else {
        x[worst] = reflected;
        fx[worst] = fr;
      }
    } else if (fr < fx[mid]) {
      x[worst] = reflected;
      fx[worst] = fr;
    } else {
      const Point contracted = fr < fx[worst] ? along(-0.5) : along(0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, fx[worst])) {
        x[worst] = contracted;
        fx[worst] = fc;
      } else {
        for (int v : {mid, worst}) {
          x[v] = {(x[v][0] + x[best][0]) / 2, (x[v][1] + x[best][1]) / 2};
          fx[v] = f(x[v]);
        }
      }
    }
  }
  const auto it = std::min_element(fx.begin(), fx.end());
  return {x[static_cast<std::size_t>(it - fx.begin())], *it};
}

// Map (theta, phi) to the same Bloch vector with theta in [0, pi], phi in [0, 2 pi).
Point canonical_angles(double theta, double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  theta = std::fmod(std::fabs(theta), two_pi);
  if (theta > std::numbers::pi) {
    theta = two_pi - theta;
    phi += std::numbers::pi;
  }
  phi = std::fmod(phi, two_pi);
  if (phi < 0.0) phi += two_pi;
  return {theta, phi};
}

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Quadrature gauss_legendre(int n) {
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  Quadrature q;
  for (double x : zeros) {
    const double dp = boost::math::legendre_p_prime(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes.push_back(x);
    q.weights.push_back(w);
    if (x != 0.0) {
      q.nodes.push_back(-x);
      q.weights.push_back(w);
    }
  }
  return q;
}

}  // namespace

LogicalProcess logical_process(const QuantumCode& code, const RecoveryPlan& plan,
                               const KrausChannel& noise) {
  const Index d = code.logical_dim();
  if (noise.dim_in != code.physical_dim() || plan.dim() != code.physical_dim()) {
    throw Error(ErrorKind::shape_mismatch, "code, noise and recovery dimensions differ");
  }
  LogicalProcess process{d, CMatrix::Zero(d * d, d * d), CMatrix::Zero(d, d)};
  for (const auto& e : noise.kraus) {
    const CMatrix w = e.apply(code.codewords);
    for (const auto& g : plan.groups) {
      const CMatrix l = g.coefficients * w;
      accumulate(process, l, l);  // R_a P_a = V C_a with V an isometry
    }
  }
  return process;
}

LogicalProcess logical_process(const QuantumCode& code, const KrausChannel& recovery,
                               const KrausChannel& noise) {
  const Index d = code.logical_dim();
  if (noise.dim_in != code.physical_dim() || recovery.dim_in != noise.dim_out ||
      recovery.dim_out != code.physical_dim()) {
    throw Error(ErrorKind::shape_mismatch, "code, noise and recovery dimensions differ");
  }
  LogicalProcess process{d, CMatrix::Zero(d * d, d * d), CMatrix::Zero(d, d)};
  for (const auto& e : noise.kraus) {
    const CMatrix w = e.apply(code.codewords);
    for (const auto& r : recovery.kraus) {
      const CMatrix x = r.apply(w);
      accumulate(process, CMatrix(code.codewords.adjoint() * x), x);
    }
  }
  return process;
}

CVector bloch_state(double theta, double phi) {
  CVector psi(2);
  psi(0) = std::cos(theta / 2);
  psi(1) = std::polar(std::sin(theta / 2), phi);
  return psi;
}

double state_fidelity(const LogicalProcess& process, const CVector& psi,
                      FidelityConvention convention) {
  if (psi.size() != process.dim) {
    throw Error(ErrorKind::shape_mismatch, "logical state has dimension " +
                                               std::to_string(psi.size()) + ", expected " +
                                               std::to_string(process.dim));
  }
  const CVector unit = psi.normalized();
  return conditioned(quartic(process, unit), success_probability(process, unit), convention);
}

double success_probability(const LogicalProcess& process, const CVector& psi) {
  if (psi.size() != process.dim) {
    throw Error(ErrorKind::shape_mismatch, "logical state has wrong dimension");
  }
  return (psi.adjoint() * process.gram * psi)(0, 0).real() / psi.squaredNorm();
}

double entanglement_fidelity(const LogicalProcess& process, FidelityConvention convention) {
  const double d = static_cast<double>(process.dim);
  return conditioned(process.transfer.trace().real() / (d * d), average_success_probability(process),
                     convention);
}

double average_success_probability(const LogicalProcess& process) {
  return process.gram.trace().real() / static_cast<double>(process.dim);
}

double entanglement_fidelity_purified(const QuantumCode& code, const KrausChannel& recovery,
                                      const KrausChannel& noise, Index cap,
                                      FidelityConvention convention) {
  const Index dim = code.physical_dim();
  const Index d = code.logical_dim();
  if (dim * d > cap) {
    throw Error(ErrorKind::dimension_cap, "purified dimension " + std::to_string(dim * d) +
                                              " exceeds cap " + std::to_string(cap));
  }
  if (noise.dim_in != dim || recovery.dim_in != noise.dim_out || recovery.dim_out != dim) {
    throw Error(ErrorKind::shape_mismatch, "code, noise and recovery dimensions differ");
  }
  // |psi_p> = sum_i |i_L> (x) |i> / sqrt(d), reference system last.
  CVector psi_p = CVector::Zero(dim * d);
  for (Index s = 0; s < dim; ++s) {
    for (Index r = 0; r < d; ++r) psi_p(s * d + r) = code.codewords(s, r);
  }
  psi_p /= std::sqrt(static_cast<double>(d));
  const CMatrix rho = psi_p * psi_p.adjoint();
  const CMatrix id_ref = CMatrix::Identity(d, d);
  CMatrix out = CMatrix::Zero(dim * d, dim * d);
  for (const auto& e : noise.kraus) {
    const CMatrix e_dense = e.to_dense();
    for (const auto& r : recovery.kraus) {
      const CMatrix big = kron(CMatrix(r.apply(e_dense)), id_ref);
      out += big * rho * big.adjoint();
    }
  }
  return conditioned((psi_p.adjoint() * out * psi_p)(0, 0).real(), out.trace().real(), convention);
}

WorstCase worst_case_fidelity(const LogicalProcess& process, const WorstCaseConfig& cfg) {
  if (process.dim != 2) {
    throw Error(ErrorKind::unsupported_k, "worst-case search needs a single logical qubit");
  }
  if (cfg.theta_points < 2 || cfg.phi_points < 1) {
    throw Error(ErrorKind::out_of_range, "worst-case grid needs at least 2 x 1 points");
  }
  auto f = [&](const Point& p) {
    return state_fidelity(process, bloch_state(p[0], p[1]), cfg.convention);
  };
  const double dtheta = std::numbers::pi / (cfg.theta_points - 1);
  const double dphi = 2.0 * std::numbers::pi / cfg.phi_points;
  Point best{0.0, 0.0};
  double best_f = f(best);
  for (int i = 0; i < cfg.theta_points; ++i) {
    for (int j = 0; j < cfg.phi_points; ++j) {
      const Point p{i * dtheta, j * dphi};
      const double v = f(p);
      if (v < best_f) {
        best_f = v;
        best = p;
      }
    }
  }
  const auto [refined, refined_f] =
      nelder_mead(f, best, {dtheta / 2, dphi / 2}, cfg.tolerance, cfg.max_iterations);
  if (refined_f < best_f) {
    best = refined;
    best_f = refined_f;
  }
  const Point angles = canonical_angles(best[0], best[1]);
  return {best_f, angles[0], angles[1]};
}

std::string recovery_label(RecoveryKind kind) {
  switch (kind) {
    case RecoveryKind::probabilistic:
      return "prob";
    case RecoveryKind::petz:
      return "petz";
    case RecoveryKind::identity:
      return "none";
  }
  return "unknown";
}

KrausChannel code_noise(const QuantumCode& code, double gamma, Index cap) {
  return tensor_channel(ad_qudit_kraus(code.q_p, gamma), code.n, cap).channel;
}

LogicalProcess evaluate_scheme(const Scheme& scheme, double gamma_noise, double gamma_recovery,
                               Index cap) {
  const QuantumCode& code = scheme.code;
  const KrausChannel base_noise = ad_qudit_kraus(code.q_p, gamma_noise);
  const GroupedChannel noise = tensor_channel(base_noise, code.n, cap);
  switch (scheme.recovery) {
    case RecoveryKind::probabilistic: {
      const GroupedChannel design =
          gamma_recovery == gamma_noise
              ? noise
              : tensor_channel(ad_qudit_kraus(code.q_p, gamma_recovery), code.n, cap);
      SynthesisOptions opts;
      opts.drop_vanishing_groups = true;
      const RecoveryPlan plan =
          synthesize_recovery(code, restrict_to_orders(design, scheme.correctable_orders), opts);
      return logical_process(code, plan, noise.channel);
    }
    case RecoveryKind::petz: {
      const KrausChannel design =
          gamma_recovery == gamma_noise ? noise.channel : code_noise(code, gamma_recovery, cap);
      return logical_process(code, petz_recovery(code, design), noise.channel);
    }
    case RecoveryKind::identity:
      return logical_process(code, identity_channel(code.physical_dim()), noise.channel);
  }
  throw Error(ErrorKind::out_of_range, "unknown recovery kind");
}

double robust_entanglement_fidelity(const Scheme& scheme, double gamma_true,
                                    const RobustnessConfig& cfg, Index cap) {
  if (!(cfg.sigma >= 0.0) || cfg.nodes < 1) {
    throw Error(ErrorKind::out_of_range, "robustness needs sigma >= 0 and at least one node");
  }
  auto fidelity_at = [&](double gamma_e) {
    return entanglement_fidelity(evaluate_scheme(scheme, gamma_true, gamma_e, cap));
  };
  if (cfg.sigma == 0.0) return fidelity_at(gamma_true);

  const double lo = std::max(0.0, gamma_true - cfg.span * cfg.sigma);
  const double hi = std::min(1.0, gamma_true + cfg.span * cfg.sigma);
  if (cfg.rule == IntegrationRule::monte_carlo) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> estimate(gamma_true, cfg.sigma);
    double total = 0.0;
    for (int s = 0; s < cfg.nodes; ++s) {
      double g = estimate(rng);
      while (g < lo || g > hi) g = estimate(rng);
      total += fidelity_at(g);
    }
    return total / cfg.nodes;
  }
  const Quadrature q = gauss_legendre(cfg.nodes);
  const double mid = (lo + hi) / 2;
  const double half = (hi - lo) / 2;
  double total = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double g = mid + half * q.nodes[i];
    const double z = (g - gamma_true) / cfg.sigma;
    const double w = q.weights[i] * std::exp(-0.5 * z * z);
    total += w * fidelity_at(g);
    mass += w;
  }
  return total / mass;
}

const char* to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::state:
      return "state";
    case MetricKind::worst_case:
      return "worst_case";
    case MetricKind::entanglement:
      return "entanglement";
    case MetricKind::success_prob:
      return "success_prob";
    case MetricKind::robust_entanglement:
      return "robust_entanglement";
  }
  return "unknown";
}

FitResult fit_leading_order(const FidelityCurve& curve, int degree, double fit_min,
                            double fit_max) {
  if (degree < 1) throw Error(ErrorKind::out_of_range, "fit degree must be at least 1");
  if (curve.gammas.size() != curve.values.size()) {
    throw Error(ErrorKind::shape_mismatch, "curve has mismatched gamma and value lists");
  }
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < curve.gammas.size(); ++i) {
    const double g = curve.gammas[i];
    if (g >= fit_min * (1 - 1e-12) && g <= fit_max * (1 + 1e-12)) used.push_back(i);
  }
  const auto n = static_cast<Index>(used.size());
  if (n < 20 || n <= degree) {
    throw Error(ErrorKind::insufficient_samples,
                std::to_string(n) + " samples in the fit window, need at least 20");
  }
  RMatrix a(n, degree);
  RVector y(n);
  for (Index r = 0; r < n; ++r) {
    const double g = curve.gammas[used[static_cast<std::size_t>(r)]];
    y(r) = 1.0 - curve.values[used[static_cast<std::size_t>(r)]];
    double power = 1.0;
    for (int p = 0; p < degree; ++p) {
      power *= g;
      a(r, p) = power;
    }
  }
  const RVector scale = a.colwise().norm().transpose();
  const RMatrix scaled = a * scale.cwiseInverse().asDiagonal();
  const Eigen::ColPivHouseholderQR<RMatrix> qr(scaled);
  const RVector solution = qr.solve(y);
  const RVector residual = y - scaled * solution;

  // Covariance sigma^2 (A^T A)^{-1} with A P = Q R.
  const RMatrix r = qr.matrixR().topLeftCorner(degree, degree).triangularView<Eigen::Upper>();
  const RMatrix r_inv =
      r.triangularView<Eigen::Upper>().solve(RMatrix::Identity(degree, degree));
  const RMatrix cov_perm = r_inv * r_inv.transpose();
  const RMatrix cov = qr.colsPermutation() * cov_perm * qr.colsPermutation().transpose();
  const double dof = static_cast<double>(n - degree);
  const double sigma2 = residual.squaredNorm() / dof;

  FitResult fit;
  fit.samples = static_cast<std::size_t>(n);
  fit.residual_rms = std::sqrt(residual.squaredNorm() / static_cast<double>(n));
  for (int p = 0; p < degree; ++p) {
    fit.coefficients.push_back(solution(p) / scale(p));
    fit.standard_errors.push_back(std::sqrt(std::max(0.0, sigma2 * cov(p, p))) / scale(p));
  }
  return fit;
}

FidelityCurve sweep(const Scheme& scheme, const std::vector<double>& gammas, MetricKind metric,
                    const SweepOptions& opts) {
  FidelityCurve curve;
  curve.metric = metric;
  curve.code = scheme.code.label;
  curve.recovery = recovery_label(scheme.recovery);
  curve.gammas = gammas;
  for (double gamma : gammas) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
      throw Error(ErrorKind::out_of_range, "damping strength outside [0, 1]");
    }
    double value = 0.0;
    if (metric == MetricKind::robust_entanglement) {
      value = robust_entanglement_fidelity(scheme, gamma, opts.robustness, opts.cap);
    } else {
      const LogicalProcess process = evaluate_scheme(scheme, gamma, opts.cap);
      switch (metric) {
        case MetricKind::state:
          value = state_fidelity(process, bloch_state(opts.theta, opts.phi), opts.convention);
          break;
        case MetricKind::worst_case: {
          WorstCaseConfig cfg = opts.worst_case;
          cfg.convention = opts.convention;
          value = worst_case_fidelity(process, cfg).fidelity;
          break;
        }
        case MetricKind::entanglement:
          value = entanglement_fidelity(process, opts.convention);
          break;
        case MetricKind::success_prob:
          value = success_probability(process, bloch_state(opts.theta, opts.phi));
          break;
        case MetricKind::robust_entanglement:
          break;
      }
    }
    curve.values.push_back(value);
  }
  return curve;
}

std::vector<double> linear_grid(double start, double stop, int count) {
  if (count < 1) throw Error(ErrorKind::out_of_range, "grid needs at least one point");
  if (count == 1) return {start};
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] = start + (stop - start) * i / (count - 1);
  }
  grid.back() = stop;
  return grid;
}

void write_csv_header(std::ostream& out) { out << "gamma,value,metric,code,recovery\n"; }

void write_csv_rows(std::ostream& out, const FidelityCurve& curve) {
  char buf[64];
  for (std::size_t i = 0; i < curve.gammas.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", curve.gammas[i], curve.values[i]);
    out << buf << ',' << to_string(curve.metric) << ',' << curve.code << ',' << curve.recovery
        << '\n';
  }
}

}  // namespace adqec
