#include "adqec/code_constructions.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace adqec {

namespace {

Index checked_power(int base, int exponent, Index cap) {
  Index dim = 1;
  for (int i = 0; i < exponent; ++i) {
    if (dim > cap / base) {
      throw Error(ErrorKind::dimension_cap, std::to_string(base) + "^" + std::to_string(exponent) +
                                                " exceeds dimension cap " + std::to_string(cap));
    }
    dim *= base;
  }
  return dim;
}

// Index of a big-endian digit string in base q.
Index digits_index(std::initializer_list<int> digits, int q) {
  Index idx = 0;
  for (int d : digits) idx = idx * q + d;
  return idx;
}

}  // namespace

CVector pis_state(int n, int e) {
  if (n < 1 || n > 30) throw Error(ErrorKind::out_of_range, "pis_state: n out of range");
  if (e < 0 || e > n) {
    throw Error(ErrorKind::out_of_range, "excitation " + std::to_string(e) + " not in [0, " +
                                             std::to_string(n) + "]");
  }
  const Index dim = Index{1} << n;
  CVector v = CVector::Zero(dim);
  Index count = 0;
  for (Index b = 0; b < dim; ++b) {
    if (std::popcount(static_cast<unsigned long long>(b)) == e) {
      v(b) = 1.0;
      ++count;
    }
  }
  return v / std::sqrt(static_cast<double>(count));
}

PermutationInvariantSpec family_spec(int k, int t) {
  if (k < 1 || t < 1 || k > 20) {
    throw Error(ErrorKind::out_of_range, "family code needs k >= 1 and t >= 1");
  }
  PermutationInvariantSpec spec;
  spec.n = (1 << k) * (t + 1) - 1;
  for (int i = 0; i < (1 << k); ++i) spec.excitations.push_back((t + 1) * i + t);
  return spec;
}

QuantumCode build_family_code(int k, int t, Index cap) {
  const auto spec = family_spec(k, t);
  const Index dim = checked_power(2, spec.n, cap);
  QuantumCode code;
  code.label = "family[" + std::to_string(spec.n) + "," + std::to_string(k) + "] t=" +
               std::to_string(t);
  code.n = spec.n;
  code.q_p = 2;
  code.k = k;
  code.q_l = 2;
  code.codewords.resize(dim, static_cast<Index>(spec.excitations.size()));
  for (std::size_t i = 0; i < spec.excitations.size(); ++i) {
    code.codewords.col(static_cast<Index>(i)) = pis_state(spec.n, spec.excitations[i]);
  }
  return code;
}

QuantumCode build_literature_41_code() {
  const double h = 1.0 / std::sqrt(2.0);
  QuantumCode code{"[4,1]", 4, 2, 1, 2, CMatrix::Zero(16, 2)};
  code.codewords(0b0000, 0) = h;
  code.codewords(0b1111, 0) = h;
  code.codewords(0b0011, 1) = h;
  code.codewords(0b1100, 1) = h;
  return code;
}

QuantumCode build_two_qutrit_code() {
  const double h = 1.0 / std::sqrt(2.0);
  QuantumCode code{"two-qutrit", 2, 3, 1, 2, CMatrix::Zero(9, 2)};
  code.codewords(digits_index({0, 1}, 3), 0) = h;
  code.codewords(digits_index({1, 0}, 3), 0) = h;
  code.codewords(digits_index({2, 1}, 3), 1) = h;
  code.codewords(digits_index({1, 2}, 3), 1) = h;
  return code;
}

QuantumCode build_bosonic_code(int n_logical, int q_l, int t, int q_p) {
  if (n_logical < 1 || q_l < 2 || t < 1 || q_p < 2) {
    throw Error(ErrorKind::out_of_range, "bosonic code parameters out of range");
  }
  const Index logical = checked_power(q_l, n_logical, Index{1} << 20);
  const Index top_level = (t + 1) * (logical - 1) + t;
  if (top_level >= q_p) {
    throw Error(ErrorKind::level_overflow, "highest Fock level " + std::to_string(top_level) +
                                               " does not fit in " + std::to_string(q_p) +
                                               " levels");
  }
  QuantumCode code;
  code.label = "bosonic q_l=" + std::to_string(q_l) + " k=" + std::to_string(n_logical) +
               " t=" + std::to_string(t) + " levels=" + std::to_string(q_p);
  code.n = 1;
  code.q_p = q_p;
  code.k = n_logical;
  code.q_l = q_l;
  code.codewords = CMatrix::Zero(q_p, logical);
  for (Index j = 0; j < logical; ++j) code.codewords((t + 1) * j + t, j) = 1.0;
  return code;
}

QuantumCode bare_qubit() {
  return QuantumCode{"bare", 1, 2, 1, 2, CMatrix::Identity(2, 2)};
}

void validate_code(const QuantumCode& code, double tol) {
  if (code.n < 1 || code.q_p < 2 || code.k < 1 || code.q_l < 2) {
    throw Error(ErrorKind::schema_error, "code sizes must satisfy n, k >= 1 and q_p, q_l >= 2");
  }
  const double phys = std::pow(static_cast<double>(code.q_p), code.n);
  const double logi = std::pow(static_cast<double>(code.q_l), code.k);
  if (static_cast<double>(code.codewords.rows()) != phys ||
      static_cast<double>(code.codewords.cols()) != logi) {
    throw Error(ErrorKind::schema_error, "codeword matrix is " +
                                             std::to_string(code.codewords.rows()) + "x" +
                                             std::to_string(code.codewords.cols()) +
                                             ", expected q_p^n x q_l^k");
  }
  if (logi > phys) throw Error(ErrorKind::schema_error, "q_l^k exceeds q_p^n");
  if (!code.codewords.allFinite()) throw Error(ErrorKind::schema_error, "non-finite amplitude");
  const CMatrix gram = code.codewords.adjoint() * code.codewords;
  const double defect = max_abs_entry(gram - CMatrix::Identity(gram.rows(), gram.cols()));
  if (defect > tol) {
    throw Error(ErrorKind::not_orthonormal,
                "codeword Gram matrix deviates from identity by " + std::to_string(defect));
  }
}

QuantumCode load_code(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::schema_error, std::string("code document is not JSON: ") + e.what());
  }
  QuantumCode code;
  try {
    code.label = doc.value("label", std::string("custom"));
    code.n = doc.at("n").get<int>();
    code.q_p = doc.at("q_p").get<int>();
    code.k = doc.at("k").get<int>();
    code.q_l = doc.at("q_l").get<int>();
    const auto& words = doc.at("codewords");
    if (!words.is_array() || words.empty()) {
      throw Error(ErrorKind::schema_error, "codewords must be a non-empty array");
    }
    const Index dim = static_cast<Index>(words.front().size());
    code.codewords.resize(dim, static_cast<Index>(words.size()));
    for (std::size_t c = 0; c < words.size(); ++c) {
      const auto& amps = words[c];
      if (!amps.is_array() || static_cast<Index>(amps.size()) != dim) {
        throw Error(ErrorKind::schema_error, "codeword " + std::to_string(c) + " has wrong length");
      }
      for (std::size_t r = 0; r < amps.size(); ++r) {
        const auto& z = amps[r];
        if (!z.is_array() || z.size() != 2) {
          throw Error(ErrorKind::schema_error, "amplitudes must be [re, im] pairs");
        }
        code.codewords(static_cast<Index>(r), static_cast<Index>(c)) =
            std::complex<double>(z[0].get<double>(), z[1].get<double>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::schema_error, std::string("malformed code document: ") + e.what());
  }
  validate_code(code);
  return code;
}

QuantumCode load_code_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_code(buffer.str());
}

std::string dump_code(const QuantumCode& code) {
  nlohmann::json doc;
  doc["label"] = code.label;
  doc["n"] = code.n;
  doc["q_p"] = code.q_p;
  doc["k"] = code.k;
  doc["q_l"] = code.q_l;
  nlohmann::json words = nlohmann::json::array();
  for (Index c = 0; c < code.codewords.cols(); ++c) {
    nlohmann::json amps = nlohmann::json::array();
    for (Index r = 0; r < code.codewords.rows(); ++r) {
      const auto z = code.codewords(r, c);
      amps.push_back({z.real(), z.imag()});
    }
    words.push_back(std::move(amps));
  }
  doc["codewords"] = std::move(words);
  return doc.dump();
}

}  // namespace adqec
