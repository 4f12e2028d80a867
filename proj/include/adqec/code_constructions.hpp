#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "adqec/tensor_algebra.hpp"

namespace adqec {

/// [n, k] code over q_p-level physical systems encoding k logical q_l-level
/// systems. Codewords are the columns of `codewords` (an isometry, so the
/// matrix doubles as the encoder).
struct QuantumCode {
  std::string label;
  int n = 0;
  int q_p = 2;
  int k = 0;
  int q_l = 2;
  CMatrix codewords;

  Index physical_dim() const { return codewords.rows(); }
  Index logical_dim() const { return codewords.cols(); }
  CVector codeword(Index i) const { return codewords.col(i); }
  CMatrix projector() const { return codewords * codewords.adjoint(); }
};

/// Excitation numbers of the permutation-invariant family, one per codeword.
struct PermutationInvariantSpec {
  int n = 0;
  std::vector<int> excitations;
};

/// Uniform superposition of all weight-e bitstrings on n qubits.
CVector pis_state(int n, int e);

/// n = 2^k (t+1) - 1, codeword i has excitation (t+1) i + t.
PermutationInvariantSpec family_spec(int k, int t);
QuantumCode build_family_code(int k, int t, Index cap = 4096);

/// Four-qubit amplitude-damping code: (|0000>+|1111>)/sqrt2, (|0011>+|1100>)/sqrt2.
QuantumCode build_literature_41_code();

/// Two qutrits: (|01>+|10>)/sqrt2, (|21>+|12>)/sqrt2.
QuantumCode build_two_qutrit_code();

/// Single-mode code with |j_L> = |(t+1) decimal(j) + t> in a q_p-level Fock space,
/// where j runs over base-q_l strings of length n_logical.
QuantumCode build_bosonic_code(int n_logical, int q_l, int t, int q_p);

/// One physical qubit used as its own code (identity encoding).
QuantumCode bare_qubit();

/// Throws NotOrthonormal unless the codewords are orthonormal to tol, and
/// SchemaError when the declared sizes disagree with the matrix shape.
void validate_code(const QuantumCode& code, double tol = kDefaultTolerance);

/// JSON document: {"label", "n", "q_p", "k", "q_l", "codewords": [[[re, im], ...], ...]}.
QuantumCode load_code(std::string_view document);
QuantumCode load_code_file(const std::filesystem::path& path);
std::string dump_code(const QuantumCode& code);

}  // namespace adqec
