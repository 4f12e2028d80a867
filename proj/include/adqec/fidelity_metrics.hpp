#pragma once

// Figures of merit for a code, a recovery and amplitude-damping noise.
//
// Every quantity is computed from the logical process
//   rho -> sum_j L_j rho L_j+,  L_j = V+ R_j E_k V,
// together with its Gram matrix G = sum_j (R_j E_k V)+ (R_j E_k V), so that
// tr of the recovered state for input psi is psi+ G psi. Fidelities are
// conditioned on success by default (divided by that trace).

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "adqec/ad_channels.hpp"
#include "adqec/code_constructions.hpp"
#include "adqec/recovery_engine.hpp"

namespace adqec {

enum class FidelityConvention { success_conditioned, unnormalized };

/// Logical action of recovery after noise on a d-level logical space.
struct LogicalProcess {
  Index dim = 0;
  CMatrix transfer;  ///< sum_j L_j (x) conj(L_j), d^2 x d^2
  CMatrix gram;      ///< sum_j (R_j E_k V)+ (R_j E_k V), d x d
};

LogicalProcess logical_process(const QuantumCode& code, const RecoveryPlan& plan,
                               const KrausChannel& noise);
/// General recovery channel acting on the physical space (Petz, identity, ...).
LogicalProcess logical_process(const QuantumCode& code, const KrausChannel& recovery,
                               const KrausChannel& noise);

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
CVector bloch_state(double theta, double phi);

double state_fidelity(const LogicalProcess& process, const CVector& psi,
                      FidelityConvention convention = FidelityConvention::success_conditioned);
double success_probability(const LogicalProcess& process, const CVector& psi);
double entanglement_fidelity(const LogicalProcess& process,
                             FidelityConvention convention = FidelityConvention::success_conditioned);
/// Success probability on the maximally mixed logical input.
double average_success_probability(const LogicalProcess& process);

/// Entanglement fidelity from the explicit purification (system (x) reference)
/// and dense Kraus operators. Throws DimensionCap when D d exceeds cap.
double entanglement_fidelity_purified(const QuantumCode& code, const KrausChannel& recovery,
                                      const KrausChannel& noise, Index cap = 1024,
                                      FidelityConvention convention =
                                          FidelityConvention::success_conditioned);

struct WorstCaseConfig {
  int theta_points = 181;
  int phi_points = 73;
  double tolerance = 1e-10;
  int max_iterations = 2000;
  FidelityConvention convention = FidelityConvention::success_conditioned;
};

struct WorstCase {
  double fidelity = 1.0;
  double theta = 0.0;  ///< in [0, pi]
  double phi = 0.0;    ///< in [0, 2 pi)
};

/// Minimum state fidelity over the Bloch sphere: grid search then Nelder-Mead.
/// Throws UnsupportedK unless the logical space is a single qubit.
WorstCase worst_case_fidelity(const LogicalProcess& process, const WorstCaseConfig& cfg = {});

enum class RecoveryKind { probabilistic, petz, identity };

/// A code with the recovery used to protect it. For probabilistic recovery
/// `correctable_orders` lists the damping orders the plan corrects.
struct Scheme {
  QuantumCode code;
  RecoveryKind recovery = RecoveryKind::probabilistic;
  std::set<int> correctable_orders;
};

std::string recovery_label(RecoveryKind kind);

/// Noise at gamma_noise, recovery designed for gamma_recovery.
LogicalProcess evaluate_scheme(const Scheme& scheme, double gamma_noise, double gamma_recovery,
                               Index cap = kDefaultDimensionCap);
inline LogicalProcess evaluate_scheme(const Scheme& scheme, double gamma,
                                      Index cap = kDefaultDimensionCap) {
  return evaluate_scheme(scheme, gamma, gamma, cap);
}

/// Full qudit amplitude damping on every physical system of the code.
KrausChannel code_noise(const QuantumCode& code, double gamma, Index cap = kDefaultDimensionCap);

enum class IntegrationRule { gauss_legendre, monte_carlo };

struct RobustnessConfig {
  double sigma = 0.0;
  IntegrationRule rule = IntegrationRule::gauss_legendre;
  int nodes = 129;     ///< quadrature nodes, or samples for Monte Carlo
  double span = 6.0;   ///< integrate over gamma +- span * sigma, clipped to [0, 1]
  std::uint64_t seed = 0;
};

/// Average of the entanglement fidelity over a Gaussian estimate gamma_e of the
/// damping strength, restricted to [0, 1] and renormalised there.
double robust_entanglement_fidelity(const Scheme& scheme, double gamma_true,
                                    const RobustnessConfig& cfg, Index cap = kDefaultDimensionCap);

struct FitResult {
  std::vector<double> coefficients;     ///< c_1 ... c_degree of 1 - F = sum c_p gamma^p
  std::vector<double> standard_errors;
  double residual_rms = 0.0;
  std::size_t samples = 0;
};

enum class MetricKind { state, worst_case, entanglement, success_prob, robust_entanglement };

const char* to_string(MetricKind kind) noexcept;

struct FidelityCurve {
  std::vector<double> gammas;
  std::vector<double> values;
  MetricKind metric = MetricKind::entanglement;
  std::string code;
  std::string recovery;
};

/// Least squares fit of 1 - value in powers gamma^1 ... gamma^degree, using
/// the samples with gamma in [fit_min, fit_max]. Throws InsufficientSamples
/// below 20 usable samples.
FitResult fit_leading_order(const FidelityCurve& curve, int degree, double fit_min = 1e-3,
                            double fit_max = 5e-2);

struct SweepOptions {
  double theta = 0.0;
  double phi = 0.0;
  WorstCaseConfig worst_case{};
  RobustnessConfig robustness{};
  FidelityConvention convention = FidelityConvention::success_conditioned;
  Index cap = kDefaultDimensionCap;
};

FidelityCurve sweep(const Scheme& scheme, const std::vector<double>& gammas, MetricKind metric,
                    const SweepOptions& opts = {});

/// `count` evenly spaced points from start to stop inclusive.
std::vector<double> linear_grid(double start, double stop, int count);

void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, const FidelityCurve& curve);

}  // namespace adqec
