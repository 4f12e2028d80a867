#include <gtest/gtest.h>

#include "adqec/tensor_algebra.hpp"
#include "oracles.hpp"

using namespace adqec;

TEST(TensorAlgebra, KronMatchesLoops) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix a = oracle::random_density(rng, 2 + trial % 2);
    const CMatrix b = oracle::random_unitary(rng, 3);
    EXPECT_LT(max_abs_entry(kron(a, b) - oracle::kron_loops(a, b)), 1e-15);
  }
}

TEST(TensorAlgebra, KronBasisOrderIsBigEndian) {
  CVector zero = CVector::Zero(2), one = CVector::Zero(2);
  zero(0) = 1.0;
  one(1) = 1.0;
  const CVector v = kron(one, kron(zero, zero));
  EXPECT_EQ(v(0b100), std::complex<double>(1.0));
}

TEST(TensorAlgebra, UnitaryAndHermitianChecks) {
  std::mt19937_64 rng(2);
  const CMatrix u = oracle::random_unitary(rng, 5);
  EXPECT_TRUE(is_unitary(u));
  EXPECT_FALSE(is_unitary(CMatrix(2.0 * u)));
  const CMatrix rho = oracle::random_density(rng, 4);
  EXPECT_TRUE(is_hermitian(rho));
  CMatrix skew = rho;
  skew(0, 1) += 0.1;
  EXPECT_FALSE(is_hermitian(skew));
}

TEST(TensorAlgebra, PsdDetection) {
  std::mt19937_64 rng(3);
  const CMatrix rho = oracle::random_density(rng, 6);
  EXPECT_TRUE(is_psd(rho));
  CMatrix neg = rho;
  neg -= CMatrix::Identity(6, 6);
  EXPECT_FALSE(is_psd(neg));
}

TEST(TensorAlgebra, LargestEigenvalueAgreesWithPowerIteration) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix rho = oracle::random_density(rng, 7);
    EXPECT_NEAR(largest_eigenvalue_psd(rho), oracle::power_top(rho), 1e-9);
  }
}

TEST(TensorAlgebra, LargestEigenvalueRejectsNegative) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 1) = -1.0;
  try {
    largest_eigenvalue_psd(m);
    FAIL() << "expected NotPSD";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_psd);
  }
}

TEST(TensorAlgebra, PrincipalSqrtSquaresBack) {
  std::mt19937_64 rng(5);
  const CMatrix rho = oracle::random_density(rng, 5);
  const CMatrix s = principal_sqrt_psd(rho);
  EXPECT_LT(max_abs_entry(s * s - rho), 1e-12);
  EXPECT_TRUE(is_psd(s));
}

TEST(TensorAlgebra, PrincipalSqrtClampsRoundoff) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1e-14;
  const CMatrix s = principal_sqrt_psd(m);
  EXPECT_NEAR(s(1, 1).real(), 0.0, 1e-15);
}

TEST(TensorAlgebra, PseudoInverseSqrtOnSupport) {
  std::mt19937_64 rng(6);
  const CMatrix u = oracle::random_unitary(rng, 4);
  RVector d(4);
  d << 4.0, 1.0, 0.0, 0.0;
  const CMatrix m = u * d.cast<std::complex<double>>().asDiagonal() * u.adjoint();
  const CMatrix inv = pseudo_inverse_sqrt_psd(m);
  const CMatrix support = inv * m * inv;
  // Projector onto the two-dimensional support.
  EXPECT_LT(max_abs_entry(support * support - support), 1e-10);
  EXPECT_NEAR(support.trace().real(), 2.0, 1e-10);
}

TEST(TensorAlgebra, TraceDistance) {
  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  EXPECT_NEAR(trace_distance(a, b), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-15);
  EXPECT_THROW(trace_distance(a, CMatrix::Zero(3, 3)), Error);
}

TEST(TensorAlgebra, OrthonormalBasisDropsDependentColumns) {
  CMatrix cols(3, 3);
  cols << 1, 0, 1, 0, 1, 1, 0, 0, 0;
  const CMatrix q = orthonormal_basis(cols);
  ASSERT_EQ(q.cols(), 2);
  EXPECT_LT(max_abs_entry(q.adjoint() * q - CMatrix::Identity(2, 2)), 1e-14);
}

TEST(TensorAlgebra, OrthonormalBasisOfNearlyParallelColumns) {
  CMatrix cols(2, 2);
  cols << 1.0, 1.0, 0.0, 1e-6;
  const CMatrix q = orthonormal_basis(cols);
  ASSERT_EQ(q.cols(), 2);
  EXPECT_LT(max_abs_entry(q.adjoint() * q - CMatrix::Identity(2, 2)), 1e-12);
}

TEST(TensorAlgebra, LongDoubleInstantiation) {
  MatrixX<long double> m = MatrixX<long double>::Identity(3, 3);
  m(0, 0) = 4.0L;
  const auto s = principal_sqrt_psd(m);
  EXPECT_NEAR(static_cast<double>(s(0, 0).real()), 2.0, 1e-15);
  EXPECT_TRUE(is_hermitian(s));
}
