#include "adqec/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "adqec/aqec_verifier.hpp"
#include "adqec/hamming_bounds.hpp"
#include "adqec/recovery_engine.hpp"
#include "json.hpp"

namespace adqec::cli {

namespace {

Error usage_error(const std::string& message) { return Error(ErrorKind::out_of_range, message); }

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw usage_error("not a number: '" + text + "'");
  }
  if (used != text.size()) throw usage_error("not a number: '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CodeSelector {
  std::string family;
  std::string builtin;
  std::string path;
  std::vector<int> orders;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family, "Permutation-invariant family, e.g. k=1,t=1");
    cmd->add_option("--builtin", builtin, "Builtin code: 31, 51, 41-prob, 41-petz, bare, qutrit");
    cmd->add_option("--code", path, "Code JSON file");
    cmd->add_option("--orders", orders, "Correctable damping orders")->delimiter(',');
  }

  Scheme resolve(Index cap) const {
    const int chosen = !family.empty() + !builtin.empty() + !path.empty();
    if (chosen != 1) throw usage_error("choose exactly one of --family, --builtin, --code");
    Scheme scheme;
    if (!family.empty()) {
      scheme = family_scheme(family, cap);
    } else if (!builtin.empty()) {
      scheme = builtin_scheme(builtin, cap);
    } else {
      scheme.code = load_code_file(path);
      scheme.correctable_orders = {0, 1};
    }
    if (!orders.empty()) scheme.correctable_orders = {orders.begin(), orders.end()};
    return scheme;
  }
};

void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& f) {
  if (path.empty() || path == "-") {
    f(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorKind::io_error, "cannot write " + path);
  f(file);
  if (!file) throw Error(ErrorKind::io_error, "write to " + path + " failed");
}

MetricKind parse_metric(const std::string& name) {
  if (name == "ent" || name == "entanglement") return MetricKind::entanglement;
  if (name == "state") return MetricKind::state;
  if (name == "worst" || name == "worst_case") return MetricKind::worst_case;
  if (name == "success" || name == "success_prob") return MetricKind::success_prob;
  if (name == "robust" || name == "robust_entanglement") return MetricKind::robust_entanglement;
  throw usage_error("unknown metric '" + name + "'");
}

IntegrationRule parse_rule(const std::string& name) {
  if (name == "gauss" || name == "gauss_legendre") return IntegrationRule::gauss_legendre;
  if (name == "mc" || name == "monte_carlo") return IntegrationRule::monte_carlo;
  throw usage_error("unknown integration rule '" + name + "'");
}

nlohmann::json matrix_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CVector vector_from_json(const nlohmann::json& doc) {
  CVector v(static_cast<Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    v(static_cast<Index>(i)) = {doc[i].at(0).get<double>(), doc[i].at(1).get<double>()};
  }
  return v;
}

CMatrix matrix_from_json(const nlohmann::json& doc) {
  const auto rows = static_cast<Index>(doc.size());
  CMatrix m(rows, rows);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = doc[static_cast<std::size_t>(r)];
    if (static_cast<Index>(row.size()) != rows) {
      throw Error(ErrorKind::schema_error, "density matrix must be square");
    }
    m.row(r) = vector_from_json(row).transpose();
  }
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int cmd_verify(const Scheme& scheme, const std::string& gamma_spec, const std::string& condition,
               double tolerance, const std::string& output, Index cap, std::ostream& out) {
  const std::vector<double> gammas =
      gamma_spec.empty() ? kDefaultGammaSamples : parse_gamma_grid(gamma_spec);
  VerifierOptions opts;
  opts.throw_on_chi_zero = false;
  if (tolerance > 0.0) opts.tolerance = tolerance;
  const ChannelFamily family = ad_channel_family(scheme.code, scheme.correctable_orders, cap);
  AqecReport report;
  if (condition == "theorem1") {
    report = check_theorem1(scheme.code, family, gammas, opts);
  } else if (condition == "s2" || condition == "theorem_s2") {
    report = check_theorem_s2(scheme.code, family, gammas, opts);
  } else {
    throw usage_error("unknown condition '" + condition + "'");
  }
  emit(output, out, [&](std::ostream& os) { os << to_json(report) << '\n'; });
  return report.passed ? kExitOk : kExitNegative;
}

int cmd_bounds(const std::string& tuples, int q_p, int q_l, int family_tmax,
               const std::string& format, const std::string& output, std::ostream& out) {
  std::vector<BoundReport> reports;
  for (const auto& tuple : split(tuples, ';')) {
    const auto fields = split(tuple, ',');
    if (fields.size() != 3) throw usage_error("tuples are n,k,t separated by ';'");
    reports.push_back(check_bound(static_cast<int>(parse_number(fields[0])),
                                  static_cast<int>(parse_number(fields[1])),
                                  static_cast<int>(parse_number(fields[2])), q_p, q_l));
  }
  if (family_tmax > 0) {
    for (auto& r : verify_family_optimality(family_tmax)) reports.push_back(std::move(r));
  }
  if (format != "csv" && format != "json") throw usage_error("format must be csv or json");
  emit(output, out, [&](std::ostream& os) {
    if (format == "json") {
      os << to_json(reports) << '\n';
    } else {
      write_csv(os, reports);
    }
  });
  const bool all = std::all_of(reports.begin(), reports.end(),
                               [](const BoundReport& r) { return r.satisfied; });
  return all ? kExitOk : kExitNegative;
}

int cmd_recover(const Scheme& scheme, double gamma, const std::string& state_path,
                const std::string& plan_path, const std::string& output, Index cap,
                std::ostream& out) {
  if (scheme.recovery != RecoveryKind::probabilistic) {
    throw usage_error("recover needs a code with probabilistic recovery");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw usage_error("gamma must lie in [0, 1]");
  const QuantumCode& code = scheme.code;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(state_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::schema_error, std::string("state document: ") + e.what());
  }
  const GroupedChannel noise = tensor_channel(ad_qudit_kraus(code.q_p, gamma), code.n, cap);
  SynthesisOptions opts;
  opts.drop_vanishing_groups = true;
  const RecoveryPlan plan =
      synthesize_recovery(code, restrict_to_orders(noise, scheme.correctable_orders), opts);

  nlohmann::json result;
  result["gamma"] = gamma;
  CMatrix rho;
  CVector logical;
  try {
    if (doc.contains("logical")) {
      logical = vector_from_json(doc.at("logical"));
      if (logical.size() != code.logical_dim() || !(logical.norm() > 0.0)) {
        throw Error(ErrorKind::shape_mismatch, "logical state has the wrong dimension");
      }
      logical.normalize();
      const CVector encoded = code.codewords * logical;
      rho = apply_channel(noise.channel, CMatrix(encoded * encoded.adjoint()));
    } else {
      rho = matrix_from_json(doc.at("density"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::schema_error, std::string("state document: ") + e.what());
  }
  const CorrectionOutcome outcome = correct_state(plan, rho);
  result["p_success"] = outcome.p_success;
  result["p_abort"] = outcome.p_abort;
  if (logical.size() > 0) {
    const CVector encoded = code.codewords * logical;
    const double overlap = (encoded.adjoint() * outcome.recovered * encoded)(0, 0).real();
    result["fidelity"] = outcome.p_success > 0.0 ? overlap / outcome.p_success : 0.0;
  }
  result["recovered"] = matrix_json(outcome.recovered);
  if (!plan_path.empty()) {
    emit(plan_path, out, [&](std::ostream& os) { os << to_json(plan) << '\n'; });
  }
  emit(output, out, [&](std::ostream& os) { os << result.dump() << '\n'; });
  return kExitOk;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"31", "51", "41-prob", "41-petz", "bare", "qutrit"};
}

Scheme builtin_scheme(const std::string& name, Index cap) {
  if (name == "31") return {build_family_code(1, 1, cap), RecoveryKind::probabilistic, {0, 1}};
  if (name == "51") return {build_family_code(1, 2, cap), RecoveryKind::probabilistic, {0, 1, 2}};
  if (name == "41-prob") return {build_literature_41_code(), RecoveryKind::probabilistic, {0, 1}};
  if (name == "41-petz") return {build_literature_41_code(), RecoveryKind::petz, {}};
  if (name == "bare") return {bare_qubit(), RecoveryKind::identity, {}};
  if (name == "qutrit") return {build_two_qutrit_code(), RecoveryKind::probabilistic, {0, 1}};
  throw usage_error("unknown builtin code '" + name + "'");
}

Scheme family_scheme(const std::string& selector, Index cap) {
  int k = 0;
  int t = 0;
  for (const auto& field : split(selector, ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw usage_error("family selector fields are key=value");
    const std::string key = field.substr(0, eq);
    const int value = static_cast<int>(parse_number(field.substr(eq + 1)));
    if (key == "k") {
      k = value;
    } else if (key == "t") {
      t = value;
    } else {
      throw usage_error("unknown family key '" + key + "'");
    }
  }
  Scheme scheme{build_family_code(k, t, cap), RecoveryKind::probabilistic, {}};
  for (int a = 0; a <= t; ++a) scheme.correctable_orders.insert(a);
  return scheme;
}

std::vector<double> parse_gamma_grid(const std::string& spec) {
  const auto fields = split(spec, ':');
  std::vector<double> grid;
  if (fields.size() == 1) {
    grid = {parse_number(fields[0])};
  } else if (fields.size() == 3) {
    const double count = parse_number(fields[2]);
    if (count < 1 || count != std::floor(count)) throw usage_error("grid count must be >= 1");
    grid = linear_grid(parse_number(fields[0]), parse_number(fields[1]), static_cast<int>(count));
  } else {
    throw usage_error("gamma grid must be start:stop:count or a single value");
  }
  for (double g : grid) {
    if (!(g >= 0.0 && g <= 1.0)) throw usage_error("gamma values must lie in [0, 1]");
  }
  return grid;
}

double parse_angle(const std::string& text) {
  constexpr double pi = std::numbers::pi;
  if (text == "pi") return pi;
  if (text == "-pi") return -pi;
  if (text.rfind("pi/", 0) == 0) return pi / parse_number(text.substr(3));
  if (text.size() > 2 && text.compare(text.size() - 2, 2, "pi") == 0) {
    return parse_number(text.substr(0, text.size() - 2)) * pi;
  }
  return parse_number(text);
}

Index dimension_cap_from_env() {
  const char* value = std::getenv("ADQEC_DIM_CAP");
  if (value == nullptr || *value == '\0') return kDefaultDimensionCap;
  const double cap = parse_number(value);
  if (cap < 2) throw usage_error("ADQEC_DIM_CAP must be at least 2");
  return static_cast<Index>(cap);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Amplitude-damping code workbench", "adqec"};
  app.require_subcommand(1);

  std::string output;
  std::uint64_t seed = 0;

  auto* verify = app.add_subcommand("verify", "Check the grouped error-correction conditions");
  CodeSelector verify_code;
  verify_code.attach(verify);
  std::string verify_gammas;
  std::string condition = "theorem1";
  double tolerance = 0.0;
  verify->add_option("--gammas", verify_gammas, "start:stop:count or a single value");
  verify->add_option("--condition", condition, "theorem1 or s2");
  verify->add_option("--tolerance", tolerance, "Override the overlap tolerance");
  verify->add_option("--output,-o", output, "Output path");

  auto* fidelity = app.add_subcommand("fidelity", "Sweep a figure of merit over gamma");
  std::vector<std::string> codes;
  CodeSelector fidelity_code;
  std::string metric = "ent";
  std::string fidelity_gammas = "0:0.4:81";
  std::string theta = "0";
  std::string phi = "0";
  double sigma = 0.0;
  int nodes = 129;
  std::string rule = "gauss";
  bool unnormalized = false;
  fidelity->add_option("--codes", codes, "Builtin codes")->delimiter(',');
  fidelity_code.attach(fidelity);
  fidelity->add_option("--metric", metric, "ent, state, worst, success or robust");
  fidelity->add_option("--gammas", fidelity_gammas, "start:stop:count");
  fidelity->add_option("--theta", theta, "Polar angle (accepts pi, pi/2, ...)");
  fidelity->add_option("--phi", phi, "Azimuthal angle");
  fidelity->add_option("--sigma", sigma, "Standard deviation of the gamma estimate");
  fidelity->add_option("--nodes", nodes, "Quadrature nodes or Monte Carlo samples");
  fidelity->add_option("--rule", rule, "gauss or mc");
  fidelity->add_option("--seed", seed, "Random seed");
  fidelity->add_flag("--unnormalized", unnormalized, "Do not condition on success");
  fidelity->add_option("--output,-o", output, "Output path");

  auto* bounds = app.add_subcommand("bounds", "Evaluate the amplitude-damping Hamming bound");
  std::string tuples = "3,1,1;5,1,2;7,2,1;7,1,3;11,2,2;15,3,1";
  int q_p = 2;
  int q_l = 2;
  int family_tmax = 0;
  std::string format = "csv";
  bounds->add_option("--tuples", tuples, "n,k,t triples separated by ';'");
  bounds->add_option("--q-p", q_p, "Physical levels");
  bounds->add_option("--q-l", q_l, "Logical levels");
  bounds->add_option("--family-tmax", family_tmax, "Also report the (2t+1, 1, t) family");
  bounds->add_option("--format", format, "csv or json");
  bounds->add_option("--output,-o", output, "Output path");

  auto* robustness = app.add_subcommand("robustness", "Entanglement fidelity under misestimated gamma");
  std::vector<std::string> robust_codes{"31"};
  std::string robust_gammas = "0.01:0.4:40";
  std::vector<double> sigmas{0.0, 0.01, 0.02};
  robustness->add_option("--codes", robust_codes, "Builtin codes")->delimiter(',');
  robustness->add_option("--gammas", robust_gammas, "start:stop:count");
  robustness->add_option("--sigmas", sigmas, "Standard deviations")->delimiter(',');
  robustness->add_option("--nodes", nodes, "Quadrature nodes or Monte Carlo samples");
  robustness->add_option("--rule", rule, "gauss or mc");
  robustness->add_option("--seed", seed, "Random seed");
  robustness->add_option("--output,-o", output, "Output path");

  auto* recover = app.add_subcommand("recover", "Run the recovery on one state");
  CodeSelector recover_code;
  recover_code.attach(recover);
  double gamma = 0.1;
  std::string state_path;
  std::string plan_path;
  recover->add_option("--gamma", gamma, "Damping strength");
  recover->add_option("--state", state_path, "JSON with \"logical\" amplitudes or \"density\"")
      ->required();
  recover->add_option("--plan", plan_path, "Also write the recovery plan here");
  recover->add_option("--output,-o", output, "Output path");

  auto* dump = app.add_subcommand("dump-code", "Print a code as JSON");
  CodeSelector dump_selector;
  dump_selector.attach(dump);
  dump->add_option("--output,-o", output, "Output path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Index cap = dimension_cap_from_env();
    if (verify->parsed()) {
      return cmd_verify(verify_code.resolve(cap), verify_gammas, condition, tolerance, output, cap,
                        out);
    }
    if (fidelity->parsed()) {
      std::vector<Scheme> schemes;
      for (const auto& name : codes) schemes.push_back(builtin_scheme(name, cap));
      if (!fidelity_code.family.empty() || !fidelity_code.builtin.empty() ||
          !fidelity_code.path.empty()) {
        schemes.push_back(fidelity_code.resolve(cap));
      }
      if (schemes.empty()) throw usage_error("no code selected");
      SweepOptions opts;
      opts.theta = parse_angle(theta);
      opts.phi = parse_angle(phi);
      opts.robustness.sigma = sigma;
      opts.robustness.nodes = nodes;
      opts.robustness.rule = parse_rule(rule);
      opts.robustness.seed = seed;
      opts.convention = unnormalized ? FidelityConvention::unnormalized
                                     : FidelityConvention::success_conditioned;
      opts.cap = cap;
      const MetricKind kind = parse_metric(metric);
      const std::vector<double> grid = parse_gamma_grid(fidelity_gammas);
      std::vector<FidelityCurve> curves;
      for (const auto& s : schemes) curves.push_back(sweep(s, grid, kind, opts));
      emit(output, out, [&](std::ostream& os) {
        write_csv_header(os);
        for (const auto& c : curves) write_csv_rows(os, c);
      });
      return kExitOk;
    }
    if (bounds->parsed()) return cmd_bounds(tuples, q_p, q_l, family_tmax, format, output, out);
    if (robustness->parsed()) {
      if (sigmas.empty()) throw usage_error("need at least one sigma");
      RobustnessConfig cfg;
      cfg.nodes = nodes;
      cfg.rule = parse_rule(rule);
      cfg.seed = seed;
      const std::vector<double> grid = parse_gamma_grid(robust_gammas);
      std::ostringstream table;
      table << "gamma,sigma,value,code,recovery\n";
      for (const auto& name : robust_codes) {
        const Scheme scheme = builtin_scheme(name, cap);
        for (double s : sigmas) {
          if (!(s >= 0.0)) throw usage_error("sigma must be non-negative");
          cfg.sigma = s;
          for (double g : grid) {
            table << format_double(g) << ',' << format_double(s) << ','
                  << format_double(robust_entanglement_fidelity(scheme, g, cfg, cap)) << ','
                  << scheme.code.label << ',' << recovery_label(scheme.recovery) << '\n';
          }
        }
      }
      emit(output, out, [&](std::ostream& os) { os << table.str(); });
      return kExitOk;
    }
    if (recover->parsed()) {
      return cmd_recover(recover_code.resolve(cap), gamma, state_path, plan_path, output, cap, out);
    }
    if (dump->parsed()) {
      const Scheme scheme = dump_selector.resolve(cap);
      emit(output, out, [&](std::ostream& os) { os << dump_code(scheme.code) << '\n'; });
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    const bool negative =
        e.kind() == ErrorKind::chi_zero || e.kind() == ErrorKind::conditions_not_met;
    return negative ? kExitNegative : kExitUsage;
  }
  return kExitUsage;
}

}  // namespace adqec::cli
