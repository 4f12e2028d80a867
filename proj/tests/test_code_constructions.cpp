#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "adqec/code_constructions.hpp"
#include "oracles.hpp"

using namespace adqec;

TEST(CodeConstructions, DickeStatesMatchEnumeration) {
  for (int n = 1; n <= 7; ++n) {
    for (int e = 0; e <= n; ++e) {
      EXPECT_LT(max_abs_entry(pis_state(n, e) - oracle::dicke(n, e)), 1e-15);
    }
  }
  EXPECT_THROW(pis_state(3, 4), Error);
  EXPECT_THROW(pis_state(3, -1), Error);
}

TEST(CodeConstructions, FamilySpec) {
  const auto s = family_spec(1, 1);
  EXPECT_EQ(s.n, 3);
  EXPECT_EQ(s.excitations, (std::vector<int>{1, 3}));
  const auto s2 = family_spec(2, 1);
  EXPECT_EQ(s2.n, 7);
  EXPECT_EQ(s2.excitations, (std::vector<int>{1, 3, 5, 7}));
  const auto s3 = family_spec(1, 3);
  EXPECT_EQ(s3.n, 7);
  EXPECT_EQ(s3.excitations, (std::vector<int>{3, 7}));
  EXPECT_THROW(family_spec(0, 1), Error);
  EXPECT_THROW(family_spec(1, 0), Error);
}

TEST(CodeConstructions, ThreeQubitCodewords) {
  const QuantumCode code = build_family_code(1, 1);
  EXPECT_EQ(code.physical_dim(), 8);
  EXPECT_LT(max_abs_entry(code.codewords - oracle::three_qubit_codewords()), 1e-15);
  EXPECT_NO_THROW(validate_code(code));
}

TEST(CodeConstructions, FiveQubitCodewords) {
  const QuantumCode code = build_family_code(1, 2);
  EXPECT_EQ(code.n, 5);
  EXPECT_LT(max_abs_entry(code.codeword(0) - oracle::dicke(5, 2)), 1e-15);
  EXPECT_LT(max_abs_entry(code.codeword(1) - oracle::dicke(5, 5)), 1e-15);
}

TEST(CodeConstructions, FamilyDimensionCap) {
  try {
    build_family_code(3, 1);  // n = 15
    FAIL() << "expected DimensionCap";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension_cap);
  }
  EXPECT_THROW(build_family_code(2, 2, 1024), Error);
  EXPECT_EQ(build_family_code(2, 2).physical_dim(), 2048);
}

TEST(CodeConstructions, LiteratureAndQutritCodes) {
  const QuantumCode c41 = build_literature_41_code();
  EXPECT_NO_THROW(validate_code(c41));
  EXPECT_NEAR(std::abs(c41.codewords(0b1111, 0)), 1.0 / std::sqrt(2.0), 1e-15);
  const QuantumCode q = build_two_qutrit_code();
  EXPECT_NO_THROW(validate_code(q));
  EXPECT_NEAR(std::abs(q.codewords(2 * 3 + 1, 1)), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(q.codewords(0 * 3 + 1, 0)), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(CodeConstructions, BosonicCode) {
  const QuantumCode code = build_bosonic_code(1, 2, 1, 4);
  EXPECT_EQ(code.physical_dim(), 4);
  EXPECT_EQ(code.codewords(1, 0), std::complex<double>(1.0));
  EXPECT_EQ(code.codewords(3, 1), std::complex<double>(1.0));
  EXPECT_NO_THROW(validate_code(code));
  try {
    build_bosonic_code(1, 2, 1, 3);
    FAIL() << "expected LevelOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::level_overflow);
  }
  const QuantumCode qutrit = build_bosonic_code(1, 3, 2, 9);
  EXPECT_EQ(qutrit.codewords(8, 2), std::complex<double>(1.0));
}

TEST(CodeConstructions, ValidateRejectsNonOrthonormal) {
  QuantumCode code = build_family_code(1, 1);
  code.codewords.col(1) = code.codewords.col(0);
  try {
    validate_code(code);
    FAIL() << "expected NotOrthonormal";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_orthonormal);
  }
  QuantumCode wrong = build_family_code(1, 1);
  wrong.n = 4;
  try {
    validate_code(wrong);
    FAIL() << "expected SchemaError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::schema_error);
  }
}

TEST(CodeConstructions, JsonRoundTrip) {
  const QuantumCode code = build_two_qutrit_code();
  const QuantumCode back = load_code(dump_code(code));
  EXPECT_EQ(back.label, code.label);
  EXPECT_EQ(back.q_p, 3);
  EXPECT_EQ(back.codewords, code.codewords);
}

TEST(CodeConstructions, JsonErrors) {
  auto kind_of = [](const std::string& doc) {
    try {
      load_code(doc);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io_error;
  };
  EXPECT_EQ(kind_of("not json"), ErrorKind::schema_error);
  EXPECT_EQ(kind_of(R"({"n": 1})"), ErrorKind::schema_error);
  EXPECT_EQ(kind_of(R"({"n":1,"q_p":2,"k":1,"q_l":2,"codewords":[[[1,0],[0,0]],[[1,0],[0,0]]]})"),
            ErrorKind::not_orthonormal);
  EXPECT_EQ(kind_of(R"({"n":2,"q_p":2,"k":1,"q_l":2,"codewords":[[[1,0],[0,0]],[[0,0],[1,0]]]})"),
            ErrorKind::schema_error);
}

TEST(CodeConstructions, LoadFromFile) {
  const std::string path = "adqec_code_roundtrip.json";
  {
    std::ofstream out(path);
    out << dump_code(build_family_code(1, 1));
  }
  EXPECT_EQ(load_code_file(path).n, 3);
  std::remove(path.c_str());
  try {
    load_code_file("does/not/exist.json");
    FAIL() << "expected IOError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io_error);
  }
}
