#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cencon/errors.hpp"
#include "cencon/geometry.hpp"
#include "cencon/numeric.hpp"
#include "cencon/pair_index.hpp"

namespace cencon {

/// The q = n(n-1)/2 mutual distances of n bodies in lexicographic pair
/// order, all strictly positive.
struct DistanceVector {
  int n = 0;
  std::vector<double> r;

  DistanceVector() = default;

  DistanceVector(int n_, std::vector<double> r_) : n(n_), r(std::move(r_)) { validate(); }

  void validate() const {
    if (n < 2) throw InputError("DistanceVector: need at least 2 bodies");
    if (static_cast<int>(r.size()) != pair_count(n))
      throw InputError("DistanceVector: wrong number of entries");
    for (double v : r)
      if (!(v > 0.0)) throw InputError("DistanceVector: distances must be positive");
  }

  double operator()(int i, int j) const { return r[pair_index(i, j, n)]; }
};

inline DistanceVector mutual_distances(const Configuration& x) {
  return DistanceVector(x.n, x.mutual_distances());
}

/// Bordered symmetric matrix of squared distances, rows/cols 0..n.
struct CMMatrix {
  MatrixXd entries;
};

/// Generic builder shared with the complex-variable variety code: entry
/// (i,j) for i,j >= 1 is r_ij^2, border row/col of ones, zero diagonal.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cm_matrix_from(
    int n, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& r) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (r.size() != pair_count(n)) throw InputError("cm_matrix_from: wrong distance count");
  Mat a = Mat::Zero(n + 1, n + 1);
  for (int j = 1; j <= n; ++j) {
    a(0, j) = Scalar(1);
    a(j, 0) = Scalar(1);
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const Scalar s = r(pair_index(i - 1, j - 1, n)) * r(pair_index(i - 1, j - 1, n));
      a(i, j) = s;
      a(j, i) = s;
    }
  return a;
}

inline CMMatrix cm_matrix(const DistanceVector& r) {
  r.validate();
  VectorXd rv = Eigen::Map<const VectorXd>(r.r.data(), static_cast<int>(r.r.size()));
  return CMMatrix{cm_matrix_from<double>(r.n, rv)};
}

inline double cm_det(const DistanceVector& r) { return determinant(cm_matrix(r).entries); }

/// Signed cofactor F_ij of the Cayley-Menger matrix, 0 <= i,j <= n.
inline double cm_cofactor(const DistanceVector& r, int i, int j) {
  const MatrixXd a = cm_matrix(r).entries;
  if (i < 0 || i > r.n || j < 0 || j > r.n) throw InputError("cm_cofactor: index out of range");
  if (r.n + 1 <= 8) return cofactor_matrix(a)(i, j);
  return cofactor(a, i, j);
}

inline int cm_rank(const DistanceVector& r, RankTolerance tol = {}) {
  return numerical_rank(cm_matrix(r).entries, tol);
}

/// Configuration dimension from distances alone: rank of the
/// Cayley-Menger matrix minus two.
inline int dimension_from_distances(const DistanceVector& r, RankTolerance tol = {}) {
  const int rank = cm_rank(r, tol);
  if (rank < 2) throw NumericError("dimension_from_distances: inconsistent distance data");
  return rank - 2;
}

/// Lifts a kernel vector of the embedded matrix to a kernel vector of the
/// Cayley-Menger matrix: v -> (-sum ||x_i||^2 v_i, v_1, ..., v_n).
inline VectorXd kernel_lift(const Configuration& x, const VectorXd& v) {
  if (v.size() != x.n) throw InputError("kernel_lift: vector size mismatch");
  const MatrixXd X = embed_config(x).entries;
  if ((X * v).norm() > 1e-8 * v.norm())
    throw InputError("kernel_lift: vector is not in the kernel of the embedded matrix");
  VectorXd lifted(x.n + 1);
  double head = 0.0;
  for (int i = 0; i < x.n; ++i) head -= x.points[i].squaredNorm() * v(i);
  lifted(0) = head;
  lifted.tail(x.n) = v;
  const MatrixXd a = cm_matrix(mutual_distances(x)).entries;
  if (v.norm() > 0 && (a * lifted).norm() > 1e-8 * lifted.norm())
    throw InternalError("kernel_lift: lifted vector fails the Cayley-Menger kernel check");
  return lifted;
}

/// Membership in the determinantal sets cut out by j x j minors of the
/// Cayley-Menger matrix: in N_j iff all j x j minors vanish, i.e. rank < j.
/// Vacuously true when j exceeds the matrix order.
struct DeterminantalMembership {
  bool in_rank_set_k3 = false;  // N_{k+3}
  bool in_rank_set_k2 = false;  // N_{k+2}
};

inline DeterminantalMembership determinantal_membership(const DistanceVector& r, int k,
                                                        RankTolerance tol = {}) {
  if (k < 1 || k > r.n - 1) throw InputError("determinantal_membership: k out of range");
  const int rank = cm_rank(r, tol);
  const int order = r.n + 1;
  auto in_set = [&](int j) { return j > order || rank < j; };
  return DeterminantalMembership{in_set(k + 3), in_set(k + 2)};
}

}  // namespace cencon
