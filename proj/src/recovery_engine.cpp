#include "adqec/recovery_engine.hpp"

#include <cmath>

#include "json.hpp"

namespace adqec {

namespace {

GroupedChannel without_vanishing_groups(const QuantumCode& code, const GroupedChannel& noise) {
  std::set<int> keep;
  for (const auto& g : noise.grouping.groups) {
    for (std::size_t idx : g.members) {
      if (max_abs_entry(noise.channel.kraus[idx].apply(code.codewords)) > 0.0) {
        keep.insert(g.order);
        break;
      }
    }
  }
  return restrict_to_orders(noise, keep);
}

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

CMatrix matrix_from_json(const nlohmann::json& doc) {
  const Index rows = doc.at("rows").get<Index>();
  const Index cols = doc.at("cols").get<Index>();
  const auto& data = doc.at("data");
  if (static_cast<Index>(data.size()) != rows) {
    throw Error(ErrorKind::schema_error, "matrix row count mismatch");
  }
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(data[r].size()) != cols) {
      throw Error(ErrorKind::schema_error, "matrix column count mismatch");
    }
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = {data[r][c].at(0).get<double>(), data[r][c].at(1).get<double>()};
    }
  }
  return m;
}

}  // namespace

RecoveryPlan synthesize_recovery(const QuantumCode& code, const GroupedChannel& correctable,
                                 const SynthesisOptions& opts) {
  const GroupedChannel noise =
      opts.drop_vanishing_groups ? without_vanishing_groups(code, correctable) : correctable;
  if (noise.channel.dim_in != code.physical_dim()) {
    throw Error(ErrorKind::shape_mismatch, "noise and code dimensions differ");
  }
  if (opts.verify) {
    VerifierOptions vopts = opts.verifier;
    vopts.throw_on_chi_zero = false;
    const AqecReport report = check_theorem1(code, noise, std::nan(""), vopts);
    if (report.chi_zero) {
      throw Error(ErrorKind::chi_zero, "recovery needs every chi_i^a to be non-zero");
    }
    if (!report.passed) {
      throw Error(ErrorKind::conditions_not_met,
                  "grouped error-correction conditions fail, max violation " +
                      std::to_string(report.max_violation));
    }
  }

  RecoveryPlan plan;
  plan.encoder = code.codewords;
  const Index dim = code.physical_dim();
  const Index d = code.logical_dim();
  for (const auto& g : noise.grouping.groups) {
    RecoveryGroup group;
    group.order = g.order;
    group.eta = g.members.size();
    CMatrix images(dim, static_cast<Index>(g.members.size()) * d);
    CMatrix sums = CMatrix::Zero(dim, d);  // column i: sum_m E_m |i_L>
    for (std::size_t m = 0; m < g.members.size(); ++m) {
      const CMatrix w = noise.channel.kraus[g.members[m]].apply(code.codewords);
      images.middleCols(static_cast<Index>(m) * d, d) = w;
      sums += w;
    }
    // Under the conditions sum_p <s_i|E_p i> = |s_i|^2 = eta chi_i.
    group.chi = (sums.colwise().squaredNorm().transpose() / static_cast<double>(group.eta))
                    .cast<std::complex<double>>();
    for (Index i = 0; i < d; ++i) {
      if (std::abs(group.chi(i)) <= opts.verifier.chi_floor) {
        throw Error(ErrorKind::chi_zero, "chi vanishes for codeword " + std::to_string(i) +
                                             " in order-" + std::to_string(g.order) + " group");
      }
    }
    const CMatrix unscaled = group.chi.cwiseInverse().asDiagonal() * sums.adjoint();  // d x D
    // R+R = C+ V+ V C = C+ C shares its non-zero spectrum with C C+.
    const double top = largest_eigenvalue_psd(CMatrix(unscaled * unscaled.adjoint()));
    group.scale = 1.0 / std::sqrt(top);
    group.projector_basis = orthonormal_basis(images);
    group.coefficients =
        group.scale * (unscaled * group.projector_basis) * group.projector_basis.adjoint();
    plan.groups.push_back(std::move(group));
  }
  return plan;
}

CMatrix projector(const RecoveryPlan& plan, std::size_t group) {
  const CMatrix& q = plan.groups.at(group).projector_basis;
  return q * q.adjoint();
}

CMatrix abort_projector(const RecoveryPlan& plan) {
  CMatrix p = CMatrix::Identity(plan.dim(), plan.dim());
  for (std::size_t a = 0; a < plan.group_count(); ++a) p -= projector(plan, a);
  return p;
}

CMatrix recovery_operator(const RecoveryPlan& plan, std::size_t group) {
  return plan.encoder * plan.groups.at(group).coefficients;
}

CMatrix unscaled_recovery_operator(const RecoveryPlan& plan, std::size_t group) {
  return recovery_operator(plan, group) / plan.groups.at(group).scale;
}

KrausChannel recovery_channel(const RecoveryPlan& plan) {
  std::vector<CMatrix> ops;
  for (std::size_t a = 0; a < plan.group_count(); ++a) ops.push_back(recovery_operator(plan, a));
  return make_channel(std::move(ops), ChannelKind::trace_non_increasing);
}

CorrectionOutcome correct_state(const RecoveryPlan& plan, const CMatrix& rho) {
  if (rho.rows() != plan.dim() || rho.cols() != plan.dim()) {
    throw Error(ErrorKind::shape_mismatch, "state does not match recovery dimension");
  }
  const Index d = plan.encoder.cols();
  CMatrix logical = CMatrix::Zero(d, d);
  double kept = 0.0;
  for (const auto& g : plan.groups) {
    logical += g.coefficients * rho * g.coefficients.adjoint();
    kept += (g.projector_basis.adjoint() * rho * g.projector_basis).trace().real();
  }
  CorrectionOutcome out;
  out.recovered = plan.encoder * logical * plan.encoder.adjoint();
  out.p_success = logical.trace().real();
  out.p_abort = rho.trace().real() - kept;
  return out;
}

DilationChannel build_dilation_channel(const KrausChannel& trace_non_increasing) {
  const CMatrix completeness = completeness_matrix(trace_non_increasing);
  const Index dim = completeness.rows();
  DilationChannel out;
  out.residual = principal_sqrt_psd(CMatrix(CMatrix::Identity(dim, dim) - completeness), 1e-9);
  CMatrix id2 = CMatrix::Identity(2, 2);
  CMatrix pauli_x = CMatrix::Zero(2, 2);
  pauli_x(0, 1) = 1.0;
  pauli_x(1, 0) = 1.0;
  std::vector<CMatrix> ops;
  for (const auto& k : trace_non_increasing.kraus) ops.push_back(kron(k.to_dense(), id2));
  ops.push_back(kron(out.residual, pauli_x));
  out.extended = make_channel(std::move(ops), ChannelKind::trace_preserving);
  return out;
}

DilationChannel build_dilation_channel(const RecoveryPlan& plan) {
  return build_dilation_channel(recovery_channel(plan));
}

CMatrix dilation_success_branch(const DilationChannel& dilation, const CMatrix& rho) {
  CMatrix ancilla0 = CMatrix::Zero(2, 2);
  ancilla0(0, 0) = 1.0;
  const CMatrix out = apply_channel(dilation.extended, kron(rho, ancilla0));
  const Index dim = rho.rows();
  const auto even = Eigen::seqN(0, dim, 2);
  return out(even, even);
}

NonunitaryGate build_nonunitary_gate(const CMatrix& r, double tol) {
  if (r.rows() != r.cols()) throw Error(ErrorKind::shape_mismatch, "gate operator must be square");
  const Index dim = r.rows();
  const CMatrix rr = r.adjoint() * r;
  const double top = largest_eigenvalue_psd(rr, tol);
  if (top > 1.0 + tol) {
    throw Error(ErrorKind::not_contraction,
                "R+R has eigenvalue " + std::to_string(top) + " above one");
  }
  Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sigma = svd.singularValues().cwiseMin(1.0);
  const Eigen::VectorXd cosine = (1.0 - sigma.array().square()).sqrt().matrix();
  const CMatrix& v = svd.matrixV();
  const CMatrix s = v * sigma.cast<std::complex<double>>().asDiagonal() * v.adjoint();
  const CMatrix c = v * cosine.cast<std::complex<double>>().asDiagonal() * v.adjoint();
  NonunitaryGate gate;
  gate.dilation.resize(2 * dim, 2 * dim);
  gate.dilation << s, -c, c, s;
  gate.polar = svd.matrixU() * v.adjoint();
  return gate;
}

GateOutcome run_gate(const NonunitaryGate& gate, const CVector& psi) {
  const Index dim = gate.polar.rows();
  if (psi.size() != dim) throw Error(ErrorKind::shape_mismatch, "gate input has wrong dimension");
  CVector in = CVector::Zero(2 * dim);
  in.head(dim) = psi;
  const CVector out = gate.dilation * in;
  GateOutcome result;
  result.state = gate.polar * out.head(dim);
  result.probability = result.state.squaredNorm();
  return result;
}

CMatrix run_gate(const NonunitaryGate& gate, const CMatrix& rho) {
  const Index dim = gate.polar.rows();
  if (rho.rows() != dim || rho.cols() != dim) {
    throw Error(ErrorKind::shape_mismatch, "gate input has wrong dimension");
  }
  CMatrix in = CMatrix::Zero(2 * dim, 2 * dim);
  in.topLeftCorner(dim, dim) = rho;
  const CMatrix out = gate.dilation * in * gate.dilation.adjoint();
  return gate.polar * out.topLeftCorner(dim, dim) * gate.polar.adjoint();
}

CMatrix correct_state_via_gates(const RecoveryPlan& plan, const std::vector<NonunitaryGate>& gates,
                                const CMatrix& rho) {
  if (gates.size() != plan.group_count()) {
    throw Error(ErrorKind::shape_mismatch, "one gate per recovery group is required");
  }
  CMatrix out = CMatrix::Zero(plan.dim(), plan.dim());
  for (std::size_t a = 0; a < gates.size(); ++a) {
    const CMatrix p = projector(plan, a);
    out += run_gate(gates[a], CMatrix(p * rho * p));
  }
  return out;
}

KrausChannel petz_recovery(const QuantumCode& code, const KrausChannel& noise, double cutoff) {
  if (noise.dim_in != code.physical_dim() || noise.dim_out != code.physical_dim()) {
    throw Error(ErrorKind::shape_mismatch, "noise and code dimensions differ");
  }
  const CMatrix p = code.projector();
  const CMatrix np = apply_channel(noise, p);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(CMatrix((np + np.adjoint()) / 2.0));
  const RVector& evals = solver.eigenvalues();
  const double top = evals.size() ? evals.maxCoeff() : 0.0;
  if (!(top > 0.0)) {
    throw Error(ErrorKind::singular_support, "noise maps the code projector to zero");
  }
  RVector inv_sqrt(evals.size());
  std::vector<Index> outside;
  for (Index i = 0; i < evals.size(); ++i) {
    if (evals(i) > cutoff * top) {
      inv_sqrt(i) = 1.0 / std::sqrt(evals(i));
    } else {
      inv_sqrt(i) = 0.0;
      outside.push_back(i);
    }
  }
  const CMatrix& vecs = solver.eigenvectors();
  const CMatrix n_inv_sqrt = vecs * inv_sqrt.asDiagonal() * vecs.adjoint();
  std::vector<CMatrix> ops;
  for (const auto& e : noise.kraus) {
    const CMatrix op = p * e.apply_adjoint(n_inv_sqrt);
    if (max_abs_entry(op) > 0.0) ops.push_back(op);
  }
  // States outside the support of N(P) never occur for encoded inputs; send
  // them to |0_L> so the map stays trace preserving.
  for (Index i : outside) {
    ops.push_back(code.codewords.col(0) * vecs.col(i).adjoint());
  }
  return make_channel(std::move(ops), ChannelKind::trace_preserving);
}

std::string to_json(const RecoveryPlan& plan) {
  nlohmann::json doc;
  doc["encoder"] = matrix_to_json(plan.encoder);
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : plan.groups) {
    nlohmann::json chi = nlohmann::json::array();
    for (Index i = 0; i < g.chi.size(); ++i) chi.push_back({g.chi(i).real(), g.chi(i).imag()});
    groups.push_back({{"order", g.order},
                      {"eta", g.eta},
                      {"scale", g.scale},
                      {"chi", std::move(chi)},
                      {"projector_basis", matrix_to_json(g.projector_basis)},
                      {"coefficients", matrix_to_json(g.coefficients)}});
  }
  doc["groups"] = std::move(groups);
  return doc.dump();
}

RecoveryPlan plan_from_json(std::string_view document) {
  try {
    const auto doc = nlohmann::json::parse(document);
    RecoveryPlan plan;
    plan.encoder = matrix_from_json(doc.at("encoder"));
    for (const auto& g : doc.at("groups")) {
      RecoveryGroup group;
      group.order = g.at("order").get<int>();
      group.eta = g.at("eta").get<std::size_t>();
      group.scale = g.at("scale").get<double>();
      const auto& chi = g.at("chi");
      group.chi.resize(static_cast<Index>(chi.size()));
      for (std::size_t i = 0; i < chi.size(); ++i) {
        group.chi(static_cast<Index>(i)) = {chi[i].at(0).get<double>(), chi[i].at(1).get<double>()};
      }
      group.projector_basis = matrix_from_json(g.at("projector_basis"));
      group.coefficients = matrix_from_json(g.at("coefficients"));
      if (group.coefficients.rows() != plan.encoder.cols() ||
          group.coefficients.cols() != plan.encoder.rows() ||
          group.projector_basis.rows() != plan.encoder.rows()) {
        throw Error(ErrorKind::schema_error, "recovery group shapes disagree with the encoder");
      }
      plan.groups.push_back(std::move(group));
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::schema_error, std::string("malformed recovery plan: ") + e.what());
  }
}

}  // namespace adqec
