#pragma once

// Dense complex linear algebra used throughout the library. Everything here is
// a free function over Eigen expressions; the scalar is templated so the same
// routines serve long double spot checks in tests.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "adqec/error.hpp"

namespace adqec {

using Index = Eigen::Index;

template <typename Real>
using MatrixX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using CMatrix = MatrixX<double>;
using CVector = VectorX<double>;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kDefaultTolerance = 1e-10;

/// Kronecker product; the left operand indexes the most significant digit.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Derived>
double max_abs_entry(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultTolerance) {
  return m.rows() == m.cols() && max_abs_entry(m - m.adjoint()) <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultTolerance) {
  if (m.rows() != m.cols()) return false;
  using Plain = typename Derived::PlainObject;
  return max_abs_entry(m.adjoint() * m - Plain::Identity(m.rows(), m.cols())) <= tol;
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Eigenvalues (ascending) of the Hermitian part of m.
template <typename Derived>
auto hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  const Plain h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Plain> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().eval();
}

template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultTolerance) {
  if (!is_hermitian(m, tol)) return false;
  if (m.rows() == 0) return true;
  return hermitian_eigenvalues(m).minCoeff() >= -tol;
}

namespace detail {

template <typename Derived>
auto psd_eigensystem(const Eigen::MatrixBase<Derived>& m, double tol, const char* what) {
  using Plain = typename Derived::PlainObject;
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::shape_mismatch, std::string(what) + ": matrix is not square");
  }
  if (!is_hermitian(m, tol * std::max<double>(1.0, max_abs_entry(m)))) {
    throw Error(ErrorKind::not_psd, std::string(what) + ": matrix is not Hermitian");
  }
  const Plain h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Plain> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::not_psd, std::string(what) + ": eigendecomposition failed");
  }
  if (m.rows() > 0 && solver.eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorKind::not_psd, std::string(what) + ": negative eigenvalue " +
                                        std::to_string(solver.eigenvalues().minCoeff()));
  }
  return solver;
}

}  // namespace detail

/// Largest eigenvalue of a PSD matrix. Throws NotPSD below -tol.
template <typename Derived>
double largest_eigenvalue_psd(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultTolerance) {
  if (m.rows() == 0) return 0.0;
  const auto solver = detail::psd_eigensystem(m, tol, "largest_eigenvalue_psd");
  return std::max(0.0, static_cast<double>(solver.eigenvalues().maxCoeff()));
}

/// Principal square root via Hermitian eigendecomposition; eigenvalues in
/// [-tol, 0] are clamped to zero.
template <typename Derived>
typename Derived::PlainObject principal_sqrt_psd(const Eigen::MatrixBase<Derived>& m,
                                                 double tol = kDefaultTolerance) {
  using Plain = typename Derived::PlainObject;
  if (m.rows() == 0) return Plain(0, 0);
  const auto solver = detail::psd_eigensystem(m, tol, "principal_sqrt_psd");
  const auto roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().eval();
  const auto& vecs = solver.eigenvectors();
  return vecs * roots.asDiagonal() * vecs.adjoint();
}

/// Moore-Penrose inverse square root of a PSD matrix. Eigenvalues at or below
/// cutoff * (largest eigenvalue) are treated as outside the support.
template <typename Derived>
typename Derived::PlainObject pseudo_inverse_sqrt_psd(const Eigen::MatrixBase<Derived>& m,
                                                      double cutoff = 1e-12,
                                                      double tol = kDefaultTolerance) {
  const auto solver = detail::psd_eigensystem(m, tol, "pseudo_inverse_sqrt_psd");
  const auto& evals = solver.eigenvalues();
  const double top = m.rows() > 0 ? std::max(0.0, static_cast<double>(evals.maxCoeff())) : 0.0;
  auto inv = evals.eval();
  for (Index i = 0; i < inv.size(); ++i) {
    inv(i) = (evals(i) > cutoff * top && evals(i) > 0) ? 1.0 / std::sqrt(evals(i)) : 0.0;
  }
  const auto& vecs = solver.eigenvectors();
  return vecs * inv.asDiagonal() * vecs.adjoint();
}

/// Half the trace norm of a - b, for Hermitian arguments.
template <typename DerivedA, typename DerivedB>
double trace_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::shape_mismatch, "trace_distance: operand shapes differ");
  }
  using Plain = typename DerivedA::PlainObject;
  const Plain diff = a - b;
  return 0.5 * static_cast<double>(hermitian_eigenvalues(diff).cwiseAbs().sum());
}

/// Orthonormal basis of span(columns) by modified Gram-Schmidt with one
/// re-orthogonalisation pass. Columns are normalised before projection and
/// dropped when the residual falls below `drop`.
template <typename Derived>
typename Derived::PlainObject orthonormal_basis(const Eigen::MatrixBase<Derived>& columns,
                                                double drop = 1e-10) {
  using Plain = typename Derived::PlainObject;
  Plain basis(columns.rows(), columns.cols());
  Index rank = 0;
  for (Index c = 0; c < columns.cols(); ++c) {
    const double norm = columns.col(c).norm();
    if (!(norm > 0.0)) continue;
    auto v = (columns.col(c) / norm).eval();
    for (int pass = 0; pass < 2; ++pass) {
      for (Index b = 0; b < rank; ++b) {
        v -= basis.col(b) * basis.col(b).dot(v);
      }
    }
    const double residual = v.norm();
    if (residual < drop) continue;
    basis.col(rank++) = v / residual;
  }
  return basis.leftCols(rank);
}

}  // namespace adqec
