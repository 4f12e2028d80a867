#include <gtest/gtest.h>

#include "adqec/recovery_engine.hpp"
#include "oracles.hpp"

using namespace adqec;

namespace {

GroupedChannel qubit_noise(int n, double gamma) {
  return tensor_channel(ad_qubit_kraus(gamma), n);
}

RecoveryPlan plan_31(double gamma) {
  return synthesize_recovery(build_family_code(1, 1),
                             restrict_to_orders(qubit_noise(3, gamma), {0, 1}));
}

CMatrix ket_bra(const CVector& a, const CVector& b) { return a * b.adjoint(); }

}  // namespace

TEST(RecoveryEngine, ThreeQubitOperatorsMatchClosedForm) {
  const double g = 0.2;
  const QuantumCode code = build_family_code(1, 1);
  const RecoveryPlan plan = plan_31(g);
  ASSERT_EQ(plan.group_count(), 2u);
  const CVector zero_l = code.codeword(0), one_l = code.codeword(1);

  // R_0 = (1 - g)|0_L><0_L| + |1_L><1_L| once normalised.
  const CMatrix r0 = (1 - g) * ket_bra(zero_l, zero_l) + ket_bra(one_l, one_l);
  EXPECT_LT(max_abs_entry(recovery_operator(plan, 0) - r0), 1e-12);

  // R_1 = (1 - g)|0_L><000| + |1_L>(<011| + <101| + <110|)/sqrt3 once normalised.
  CVector b000 = CVector::Zero(8), w2 = CVector::Zero(8);
  b000(0) = 1.0;
  w2(0b011) = w2(0b101) = w2(0b110) = 1.0 / std::sqrt(3.0);
  const CMatrix r1 = (1 - g) * ket_bra(zero_l, b000) + ket_bra(one_l, w2);
  EXPECT_LT(max_abs_entry(recovery_operator(plan, 1) - r1), 1e-12);
}

TEST(RecoveryEngine, UnscaledOperatorFollowsDefinition) {
  const double g = 0.15;
  const QuantumCode code = build_family_code(1, 1);
  const RecoveryPlan plan = plan_31(g);
  const auto brute = oracle::brute_recovery(code.codewords, 3, g, {0, 1});
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_LT(max_abs_entry(recovery_operator(plan, a) - brute.ops[a]), 1e-10);
    EXPECT_NEAR(largest_eigenvalue_psd(CMatrix(recovery_operator(plan, a).adjoint() *
                                               recovery_operator(plan, a))),
                1.0, 1e-12);
  }
  // Before rescaling the group-0 operator has (1/chi) weights 1/(1-g) and 1/(1-g)^3.
  const CMatrix u0 = unscaled_recovery_operator(plan, 0);
  EXPECT_NEAR(std::abs((code.codeword(1).adjoint() * u0 * code.codeword(1))(0, 0)),
              1.0 / std::pow(1 - g, 3) * std::pow(1 - g, 1.5), 1e-12);
}

TEST(RecoveryEngine, ProjectorsAreOrthogonalAndComplete) {
  const RecoveryPlan plan = plan_31(0.1);
  const CMatrix p0 = projector(plan, 0), p1 = projector(plan, 1);
  EXPECT_LT(max_abs_entry(p0 * p1), 1e-14);
  EXPECT_LT(max_abs_entry(p0 * p0 - p0), 1e-14);
  EXPECT_NEAR(p0.trace().real(), 2.0, 1e-14);
  EXPECT_NEAR(p1.trace().real(), 4.0, 1e-14);
  const CMatrix abort = abort_projector(plan);
  EXPECT_LT(max_abs_entry(abort + p0 + p1 - CMatrix::Identity(8, 8)), 1e-14);
  EXPECT_NEAR(abort.trace().real(), 2.0, 1e-14);
}

TEST(RecoveryEngine, LargerProjectorGivesSameOutput) {
  // Any projector containing S^(0) leaves R_0 P_0 unchanged, e.g. the span of
  // |100>, |010>, |001>, |111>.
  const RecoveryPlan plan = plan_31(0.2);
  CMatrix big = CMatrix::Zero(8, 8);
  for (int b : {0b100, 0b010, 0b001, 0b111}) big(b, b) = 1.0;
  const CMatrix r0 = recovery_operator(plan, 0);
  EXPECT_LT(max_abs_entry(r0 * big - r0 * projector(plan, 0)), 1e-12);
}

TEST(RecoveryEngine, PerfectCorrectionOnTruncatedNoise) {
  std::mt19937_64 rng(21);
  const QuantumCode code = build_family_code(1, 2);
  const GroupedChannel noise = truncate_to_order(qubit_noise(5, 0.17), 2);
  const RecoveryPlan plan = synthesize_recovery(code, noise);
  double p_ref = -1.0;
  for (int trial = 0; trial < 10; ++trial) {
    const CVector psi = code.codewords * oracle::random_state(rng, 2);
    const CorrectionOutcome out = correct_state(plan, apply_channel(noise.channel, psi * psi.adjoint()));
    const double f = (psi.adjoint() * out.recovered * psi)(0, 0).real() / out.p_success;
    EXPECT_NEAR(f, 1.0, 1e-10);
    if (p_ref < 0) p_ref = out.p_success;
    EXPECT_NEAR(out.p_success, p_ref, 1e-10);
  }
}

TEST(RecoveryEngine, CorrectStateMatchesBruteForce) {
  std::mt19937_64 rng(22);
  const double g = 0.25;
  const QuantumCode code = build_family_code(1, 1);
  const RecoveryPlan plan = plan_31(g);
  const auto brute = oracle::brute_recovery(code.codewords, 3, g, {0, 1});
  const auto noise = oracle::full_noise(3, g);
  for (int trial = 0; trial < 5; ++trial) {
    const CVector psi = code.codewords * oracle::random_state(rng, 2);
    const CMatrix rho = oracle::apply_ops(noise, psi * psi.adjoint());
    const CorrectionOutcome out = correct_state(plan, rho);
    const CMatrix expected = oracle::apply_ops(brute.ops, rho);
    EXPECT_LT(max_abs_entry(out.recovered - expected), 1e-12);
    EXPECT_NEAR(out.p_success, expected.trace().real(), 1e-12);
    EXPECT_NEAR(out.p_abort + (brute.projectors[0] * rho).trace().real() +
                    (brute.projectors[1] * rho).trace().real(),
                1.0, 1e-12);
  }
}

TEST(RecoveryEngine, RecoveryChannelIsTraceNonIncreasing) {
  for (double g : {0.05, 0.3, 0.6}) {
    const KrausChannel r = recovery_channel(plan_31(g));
    EXPECT_EQ(r.kind, ChannelKind::trace_non_increasing);
    EXPECT_TRUE(is_trace_non_increasing(r));
  }
}

TEST(RecoveryEngine, SynthesisRejectsUncorrectableGrouping) {
  try {
    synthesize_recovery(build_family_code(1, 1), restrict_to_orders(qubit_noise(3, 0.1), {0, 1, 2}));
    FAIL() << "expected ChiZero";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::chi_zero);
  }
  // {|01>, |10>}: both single-damping branches land on |00>.
  QuantumCode code;
  code.n = 2;
  code.k = 1;
  code.codewords = CMatrix::Zero(4, 2);
  code.codewords(1, 0) = 1.0;
  code.codewords(2, 1) = 1.0;
  try {
    synthesize_recovery(code, restrict_to_orders(qubit_noise(2, 0.1), {0, 1}));
    FAIL() << "expected ConditionsNotMet";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::conditions_not_met);
  }
}

TEST(RecoveryEngine, GammaZeroNeedsDroppingVanishingGroups) {
  const QuantumCode code = build_family_code(1, 1);
  const GroupedChannel noise = restrict_to_orders(qubit_noise(3, 0.0), {0, 1});
  try {
    synthesize_recovery(code, noise);
    FAIL() << "expected ChiZero";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::chi_zero);
  }
  SynthesisOptions opts;
  opts.drop_vanishing_groups = true;
  const RecoveryPlan plan = synthesize_recovery(code, noise, opts);
  ASSERT_EQ(plan.group_count(), 1u);
  const CorrectionOutcome out = correct_state(plan, code.projector() / 2.0);
  EXPECT_NEAR(out.p_success, 1.0, 1e-14);
}

TEST(RecoveryEngine, DilationChannelReproducesCorrection) {
  std::mt19937_64 rng(23);
  const RecoveryPlan plan = plan_31(0.2);
  const DilationChannel dil = build_dilation_channel(plan);
  EXPECT_TRUE(is_trace_preserving(dil.extended, 1e-9));
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix rho = oracle::random_density(rng, 8);
    const CorrectionOutcome out = correct_state(plan, rho);
    const CMatrix branch = dilation_success_branch(dil, rho);
    EXPECT_LT(trace_distance(branch, out.recovered), 1e-10);
  }
}

TEST(RecoveryEngine, NonunitaryGate) {
  std::mt19937_64 rng(24);
  const RecoveryPlan plan = plan_31(0.3);
  for (std::size_t a = 0; a < plan.group_count(); ++a) {
    const CMatrix r = recovery_operator(plan, a);
    const NonunitaryGate gate = build_nonunitary_gate(r);
    EXPECT_TRUE(is_unitary(gate.dilation, 1e-10));
    EXPECT_TRUE(is_unitary(gate.polar, 1e-10));
    for (int trial = 0; trial < 5; ++trial) {
      const CVector psi = oracle::random_state(rng, 8);
      const GateOutcome out = run_gate(gate, psi);
      EXPECT_LT(max_abs_entry(out.state - r * psi), 1e-12);
      EXPECT_NEAR(out.probability, (r * psi).squaredNorm(), 1e-12);
    }
  }
}

TEST(RecoveryEngine, NonunitaryGateRejectsExpansion) {
  try {
    build_nonunitary_gate(CMatrix(1.5 * CMatrix::Identity(2, 2)));
    FAIL() << "expected NotContraction";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_contraction);
  }
}

TEST(RecoveryEngine, GateProtocolMatchesCorrectState) {
  std::mt19937_64 rng(25);
  const RecoveryPlan plan = plan_31(0.1);
  std::vector<NonunitaryGate> gates;
  for (std::size_t a = 0; a < plan.group_count(); ++a) {
    gates.push_back(build_nonunitary_gate(recovery_operator(plan, a)));
  }
  const CMatrix rho = oracle::random_density(rng, 8);
  EXPECT_LT(trace_distance(correct_state_via_gates(plan, gates, rho), correct_state(plan, rho).recovered),
            1e-10);
}

TEST(RecoveryEngine, PetzRecoveryIsTracePreserving) {
  const QuantumCode code = build_literature_41_code();
  const KrausChannel noise = tensor_channel(ad_qubit_kraus(0.1), 4).channel;
  const KrausChannel petz = petz_recovery(code, noise);
  EXPECT_TRUE(is_trace_preserving(petz, 1e-9));
  // Recovery of the noiseless code is the identity on code states.
  const KrausChannel clean = tensor_channel(ad_qubit_kraus(0.0), 4).channel;
  const KrausChannel petz0 = petz_recovery(code, clean);
  const CVector psi = code.codeword(1);
  const CMatrix out = apply_channel(petz0, CMatrix(psi * psi.adjoint()));
  EXPECT_NEAR((psi.adjoint() * out * psi)(0, 0).real(), 1.0, 1e-12);
}

TEST(RecoveryEngine, PetzSingularSupport) {
  const QuantumCode code = build_family_code(1, 1);
  const KrausChannel zero = make_channel({CMatrix::Zero(8, 8)}, ChannelKind::trace_non_increasing);
  try {
    petz_recovery(code, zero);
    FAIL() << "expected SingularSupport";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular_support);
  }
}

TEST(RecoveryEngine, PlanJsonRoundTrip) {
  const RecoveryPlan plan = plan_31(0.2);
  const RecoveryPlan back = plan_from_json(to_json(plan));
  ASSERT_EQ(back.group_count(), plan.group_count());
  for (std::size_t a = 0; a < plan.group_count(); ++a) {
    EXPECT_EQ(back.groups[a].coefficients, plan.groups[a].coefficients);
    EXPECT_EQ(back.groups[a].projector_basis, plan.groups[a].projector_basis);
    EXPECT_EQ(back.groups[a].scale, plan.groups[a].scale);
    EXPECT_EQ(back.groups[a].eta, plan.groups[a].eta);
  }
  try {
    plan_from_json(R"({"encoder": 3})");
    FAIL() << "expected SchemaError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::schema_error);
  }
}
