#pragma once

// Probabilistic recovery built from a grouped error set, its evaluation as a
// trace-non-increasing channel, and the two ancilla dilations used to check it.
//
// For group a with members E_m^(a):
//   R_a = lambda_a sum_i (1/chi_i^a) |i_L><i_L| sum_m E_m^(a)+
// with lambda_a fixing the top eigenvalue of R_a+ R_a to one. The syndrome
// measurement projects onto S^(a) = (+)_i span{E_m^(a)|i_L>}; the remainder of
// the space is the abort outcome.

#include <string>
#include <vector>

#include "adqec/ad_channels.hpp"
#include "adqec/aqec_verifier.hpp"
#include "adqec/code_constructions.hpp"

namespace adqec {

struct RecoveryGroup {
  int order = 0;
  std::size_t eta = 0;
  CMatrix projector_basis;  ///< D x r, orthonormal columns spanning S^(a)
  CVector chi;              ///< chi_i^a per codeword
  double scale = 1.0;       ///< lambda_a
  /// R_a P_a = encoder * coefficients (coefficients is d x D, lambda included).
  CMatrix coefficients;
};

struct RecoveryPlan {
  CMatrix encoder;  ///< D x d codeword isometry
  std::vector<RecoveryGroup> groups;

  Index dim() const { return encoder.rows(); }
  std::size_t group_count() const { return groups.size(); }
};

struct SynthesisOptions {
  VerifierOptions verifier{};
  bool verify = true;  ///< run check_theorem1 first and throw ConditionsNotMet on failure
  /// Omit groups whose operators annihilate every codeword (e.g. all damping
  /// orders above zero at gamma = 0) instead of failing with ChiZero.
  bool drop_vanishing_groups = false;
};

RecoveryPlan synthesize_recovery(const QuantumCode& code, const GroupedChannel& correctable,
                                 const SynthesisOptions& opts = {});

CMatrix projector(const RecoveryPlan& plan, std::size_t group);
CMatrix abort_projector(const RecoveryPlan& plan);
/// Normalised R_a (top eigenvalue of R_a+ R_a equal to one).
CMatrix recovery_operator(const RecoveryPlan& plan, std::size_t group);
/// R_a before the lambda_a rescaling.
CMatrix unscaled_recovery_operator(const RecoveryPlan& plan, std::size_t group);
/// Kraus operators {R_a P_a}, trace non-increasing.
KrausChannel recovery_channel(const RecoveryPlan& plan);

struct CorrectionOutcome {
  CMatrix recovered;  ///< sum_a R_a P_a rho P_a R_a+, unnormalised
  double p_success = 0.0;
  double p_abort = 0.0;
};

/// Syndrome measurement followed by R_a; rho is the output of the full noise channel.
CorrectionOutcome correct_state(const RecoveryPlan& plan, const CMatrix& rho);

/// Kraus operators {M_k (x) I, M_alpha (x) X} on system (x) ancilla, with
/// M_alpha = sqrt(I - sum M_k+ M_k). Ancilla |0> marks success.
struct DilationChannel {
  KrausChannel extended;
  CMatrix residual;  ///< M_alpha
};

DilationChannel build_dilation_channel(const KrausChannel& trace_non_increasing);
DilationChannel build_dilation_channel(const RecoveryPlan& plan);
/// Run on rho (x) |0><0| and keep the ancilla-|0> block.
CMatrix dilation_success_branch(const DilationChannel& dilation, const CMatrix& rho);

/// Ancilla-first block unitary [[sqrt(R+R), -sqrt(I-R+R)], [sqrt(I-R+R), sqrt(R+R)]]
/// followed by the polar unitary U of R = U sqrt(R+R).
struct NonunitaryGate {
  CMatrix dilation;  ///< 2D x 2D, ancilla is the most significant digit
  CMatrix polar;     ///< D x D unitary
};

NonunitaryGate build_nonunitary_gate(const CMatrix& r, double tol = 1e-9);

struct GateOutcome {
  CVector state;  ///< unnormalised system state in the ancilla-|0> branch
  double probability = 0.0;
};

GateOutcome run_gate(const NonunitaryGate& gate, const CVector& psi);
/// Density-matrix version: ancilla-|0> block of (I (x) U) U~ (|0><0| (x) rho) U~+ (I (x) U)+.
CMatrix run_gate(const NonunitaryGate& gate, const CMatrix& rho);

/// Whole protocol through the gate dilation: projective syndrome measurement,
/// then the non-unitary gate for the observed group.
CMatrix correct_state_via_gates(const RecoveryPlan& plan, const std::vector<NonunitaryGate>& gates,
                                const CMatrix& rho);

/// Petz recovery with reference state P / d (P the code projector), completed
/// to a trace-preserving channel on the complement of the support of N(P).
KrausChannel petz_recovery(const QuantumCode& code, const KrausChannel& noise,
                           double cutoff = 1e-12);

std::string to_json(const RecoveryPlan& plan);
RecoveryPlan plan_from_json(std::string_view document);

}  // namespace adqec
