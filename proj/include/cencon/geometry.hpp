#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "cencon/errors.hpp"
#include "cencon/numeric.hpp"
#include "cencon/pair_index.hpp"

namespace cencon {

/// n labeled points in d-dimensional space. Bodies are 0-indexed in code;
/// per-pair data is stored in the canonical lexicographic order of
/// pair_index().
struct Configuration {
  int n = 0;
  int d = 0;
  std::vector<VectorXd> points;

  Configuration() = default;

  Configuration(int n_, int d_, std::vector<VectorXd> pts) : n(n_), d(d_), points(std::move(pts)) {
    validate();
  }

  void validate() const {
    if (n < 2) throw InputError("Configuration: need at least 2 bodies");
    if (d < 1) throw InputError("Configuration: ambient dimension must be >= 1");
    if (d > n) throw InputError("Configuration: ambient dimension exceeds body count");
    if (static_cast<int>(points.size()) != n)
      throw InputError("Configuration: wrong number of points");
    for (const auto& p : points)
      if (p.size() != d) throw InputError("Configuration: point with wrong dimension");
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if ((points[i] - points[j]).norm() == 0.0)
          throw InputError("Configuration: coincident bodies (zero mutual distance)");
  }

  double distance(int i, int j) const { return (points[i] - points[j]).norm(); }

  /// All q mutual distances in lexicographic pair order.
  std::vector<double> mutual_distances() const {
    std::vector<double> r;
    r.reserve(pair_count(n));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) r.push_back(distance(i, j));
    return r;
  }
};

/// n x n matrix whose column j is (1, coords of body j, zero padding).
struct ConfigMatrix {
  MatrixXd entries;
};

/// Column-wise affine embedding of the configuration into n-space.
/// Requires d <= n-1 so that each column (1, x_j, 0, ...) fits.
inline ConfigMatrix embed_config(const Configuration& x) {
  x.validate();
  if (x.d > x.n - 1)
    throw InputError("embed_config: ambient dimension must be at most n-1");
  MatrixXd m = MatrixXd::Zero(x.n, x.n);
  for (int j = 0; j < x.n; ++j) {
    m(0, j) = 1.0;
    m.block(1, j, x.d, 1) = x.points[j];
  }
  return ConfigMatrix{std::move(m)};
}

/// Configuration dimension: rank of the embedded matrix minus one.
inline int config_dimension(const Configuration& x, RankTolerance tol = {}) {
  return numerical_rank(embed_config(x).entries, tol) - 1;
}

/// Rewrites the points in k intrinsic coordinates via principal axes of
/// the centered point cloud. Valid when the affine span has dimension
/// <= k; mutual distances are preserved.
inline Configuration reduce_to_dimension(const Configuration& x, int k) {
  if (k < 1 || k > x.n - 1) throw InputError("reduce_to_dimension: bad target dimension");
  if (x.d == k) return x;
  MatrixXd pts(x.n, x.d);
  for (int i = 0; i < x.n; ++i) pts.row(i) = x.points[i].transpose();
  Eigen::RowVectorXd centroid = pts.colwise().mean();
  pts.rowwise() -= centroid;
  Eigen::JacobiSVD<MatrixXd> svd(pts, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int m = std::min<int>(k, static_cast<int>(svd.singularValues().size()));
  // residual spectrum beyond k must be numerically zero
  for (int i = m; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9 * svd.singularValues()(0))
      throw DimensionError("reduce_to_dimension: affine span exceeds target dimension");
  MatrixXd coords = MatrixXd::Zero(x.n, k);
  coords.leftCols(m) = svd.matrixU().leftCols(m) * svd.singularValues().head(m).asDiagonal();
  std::vector<VectorXd> out(x.n);
  for (int i = 0; i < x.n; ++i) out[i] = coords.row(i).transpose();
  return Configuration(x.n, k, std::move(out));
}

/// Signed minor obtained by removing the listed bodies (0-indexed,
/// strictly increasing). The sign follows the 1-indexed labeling
/// convention: (-1)^(sum of removed 1-based labels) times the determinant
/// of the remaining bodies' square embedded matrix.
inline double signed_minor(const Configuration& x, const std::vector<int>& removed) {
  int prev = -1;
  for (int idx : removed) {
    if (idx <= prev || idx < 0 || idx >= x.n)
      throw InputError("signed_minor: removed list must be sorted, in range, without repeats");
    prev = idx;
  }
  const int m = x.n - static_cast<int>(removed.size());
  if (m < 2) throw InputError("signed_minor: too many bodies removed");
  if (x.d > m - 1)
    throw InputError("signed_minor: sub-configuration matrix would not be square (reduce coordinates first)");
  MatrixXd sub = MatrixXd::Zero(m, m);
  int col = 0;
  std::size_t next = 0;
  for (int j = 0; j < x.n; ++j) {
    if (next < removed.size() && removed[next] == j) {
      ++next;
      continue;
    }
    sub(0, col) = 1.0;
    sub.block(1, col, x.d, 1) = x.points[j];
    ++col;
  }
  double sign_exp = 0;
  for (int idx : removed) sign_exp += idx + 1;  // 1-based labels
  const double det = determinant(sub);
  return (static_cast<long long>(sign_exp) % 2 == 0) ? det : -det;
}

/// Kernel vector (Delta_1, ..., Delta_n) of the embedded matrix of an
/// (n-2)-dimensional configuration, built from the order-(n-1) signed
/// minors. Satisfies sum Delta_i = 0 and sum Delta_i x_i = 0.
inline VectorXd kernel_vector(const Configuration& x, RankTolerance tol = {}) {
  const int delta = config_dimension(x, tol);
  if (delta != x.n - 2)
    throw DimensionError("kernel_vector: configuration dimension must be n-2");
  const Configuration& xr = (x.d > x.n - 2) ? reduce_to_dimension(x, x.n - 2) : x;
  VectorXd v(x.n);
  for (int i = 0; i < x.n; ++i) v(i) = signed_minor(xr, {i});
  const MatrixXd X = embed_config(x).entries;
  if ((X * v).norm() > 1e-9 * v.norm())
    throw InternalError("kernel_vector: minor vector fails the kernel residual check");
  int nonzero = 0;
  const double vmax = v.cwiseAbs().maxCoeff();
  for (int i = 0; i < x.n; ++i)
    if (std::abs(v(i)) > 1e-8 * vmax) ++nonzero;
  if (nonzero < 2) throw InternalError("kernel_vector: fewer than two nonzero entries");
  return v;
}

}  // namespace cencon
