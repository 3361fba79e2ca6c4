#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>

#include "cencon/errors.hpp"

namespace cencon {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Relative singular-value threshold used by every numerical rank decision.
struct RankTolerance {
  double rel_eps = 1e-10;
};

/// Integer power by repeated squaring; e may be negative.
template <typename Scalar>
Scalar ipow(Scalar base, int e) {
  if (e < 0) return Scalar(1) / ipow(base, -e);
  Scalar result(1);
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

/// Numerical rank: number of singular values above
/// rel_eps * sigma_max * max(rows, cols).
template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& m, RankTolerance tol = {}) {
  if (tol.rel_eps <= 0) throw InputError("numerical_rank: rel_eps must be positive");
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<Mat> svd(m.derived());
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = tol.rel_eps * sv(0) * static_cast<double>(std::max(m.rows(), m.cols()));
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

/// Determinant by partial-pivoting LU.
template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& m) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.rows() != m.cols()) throw InputError("determinant: matrix must be square");
  if (m.rows() == 0) return typename Derived::Scalar(1);
  return Eigen::PartialPivLU<Mat>(m.derived()).determinant();
}

/// Adjugate by the Faddeev-LeVerrier recursion: works for singular
/// matrices, O(n^4), no pivots. Satisfies A * adj(A) = det(A) * I.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> adjugate(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw InputError("adjugate: matrix must be square");
  if (n == 0) return Mat::Zero(0, 0);
  if (n == 1) {
    Mat r(1, 1);
    r(0, 0) = Scalar(1);
    return r;
  }
  Mat m = Mat::Identity(n, n);  // M_1
  Scalar c;
  for (int k = 1; k < n; ++k) {
    Mat am = a * m;
    c = -am.trace() / Scalar(k);
    m = am + c * Mat::Identity(n, n);
  }
  // adj(A) = (-1)^(n-1) * M_n
  return (n % 2 == 0) ? Mat(-m) : m;
}

/// Signed cofactor of entry (i,j) by deleting row i and column j.
template <typename Scalar>
Scalar cofactor(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a, int i, int j) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw InputError("cofactor: matrix must be square");
  if (i < 0 || i >= n || j < 0 || j >= n) throw InputError("cofactor: index out of range");
  if (n == 1) return Scalar(1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> minor(n - 1, n - 1);
  for (int r = 0, rr = 0; r < n; ++r) {
    if (r == i) continue;
    for (int c = 0, cc = 0; c < n; ++c) {
      if (c == j) continue;
      minor(rr, cc++) = a(r, c);
    }
    ++rr;
  }
  const Scalar d = determinant(minor);
  return ((i + j) % 2 == 0) ? d : Scalar(-d);
}

/// Full cofactor matrix; uses the adjugate recursion for small orders and
/// per-minor determinants beyond that.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cofactor_matrix(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const int n = static_cast<int>(a.rows());
  if (n <= 8) return Mat(adjugate(a).transpose());
  Mat c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = cofactor(a, i, j);
  return c;
}

/// Central finite difference of a scalar-valued function of one real
/// coordinate. f must be callable with a double.
template <typename F>
auto central_difference(F&& f, double x, double h) -> decltype(f(x)) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace cencon
