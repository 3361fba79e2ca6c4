#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "cencon/cayley_menger.hpp"
#include "cencon/errors.hpp"
#include "cencon/geometry.hpp"
#include "cencon/numeric.hpp"
#include "cencon/pair_index.hpp"

namespace cencon {

/// Positive masses. Totals and the mass-weighted center live here.
struct MassVector {
  std::vector<double> m;

  MassVector() = default;
  explicit MassVector(std::vector<double> m_) : m(std::move(m_)) { validate(); }

  static MassVector equal(int n, double value = 1.0) {
    return MassVector(std::vector<double>(n, value));
  }

  void validate() const {
    if (m.empty()) throw InputError("MassVector: empty");
    for (double v : m)
      if (!(v > 0.0)) throw InputError("MassVector: masses must be positive");
  }

  int n() const { return static_cast<int>(m.size()); }

  double total() const {
    double t = 0;
    for (double v : m) t += v;
    return t;
  }

  VectorXd center(const Configuration& x) const {
    if (x.n != n()) throw InputError("MassVector: size mismatch with configuration");
    VectorXd c = VectorXd::Zero(x.d);
    for (int i = 0; i < x.n; ++i) c += m[i] * x.points[i];
    return c / total();
  }
};

/// Potential exponent stored exactly as the integer 2a. two_a = 0 is the
/// documented trivial case (every configuration central with lambda = M);
/// the variety/solver/bounds layers reject it.
struct Exponent {
  int two_a = -3;

  Exponent() = default;
  explicit Exponent(int t) : two_a(t) {}

  double a() const { return two_a / 2.0; }

  /// r^(2a) as an exact integer power.
  double pow2a(double r) const { return ipow(r, two_a); }
};

namespace detail {

/// Attraction term on body j: sum_{i != j} m_i (x_i - x_j) r_ij^{2a}.
inline VectorXd attraction(const Configuration& x, const MassVector& m, Exponent a, int j) {
  VectorXd g = VectorXd::Zero(x.d);
  for (int i = 0; i < x.n; ++i) {
    if (i == j) continue;
    g += m.m[i] * a.pow2a(x.distance(i, j)) * (x.points[i] - x.points[j]);
  }
  return g;
}

}  // namespace detail

/// Max-norm residual of the central-configuration equations for a given
/// lambda, normalized by the largest single term magnitude. Zero iff the
/// configuration is central with this lambda.
inline double cc_residual(const Configuration& x, const MassVector& m, Exponent a, double lambda) {
  x.validate();
  if (m.n() != x.n) throw InputError("cc_residual: mass count mismatch");
  const VectorXd c = m.center(x);
  double worst = 0.0;
  double scale = 0.0;
  for (int j = 0; j < x.n; ++j) {
    VectorXd e = detail::attraction(x, m, a, j) + lambda * (x.points[j] - c);
    worst = std::max(worst, e.norm());
    scale = std::max(scale, std::abs(lambda) * (x.points[j] - c).norm());
    for (int i = 0; i < x.n; ++i)
      if (i != j)
        scale = std::max(scale, m.m[i] * std::abs(a.pow2a(x.distance(i, j))) *
                                    (x.points[i] - x.points[j]).norm());
  }
  if (scale == 0.0) return worst == 0.0 ? 0.0 : 1.0;
  return worst / scale;
}

/// Closed-form least-squares lambda over the equations of all bodies.
inline double fit_lambda(const Configuration& x, const MassVector& m, Exponent a) {
  x.validate();
  if (m.n() != x.n) throw InputError("fit_lambda: mass count mismatch");
  if (a.two_a == 0) return m.total();  // every configuration is central with lambda = M
  const VectorXd c = m.center(x);
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j < x.n; ++j) {
    const VectorXd dj = x.points[j] - c;
    num -= detail::attraction(x, m, a, j).dot(dj);
    den += dj.squaredNorm();
  }
  if (den == 0.0) throw NumericError("fit_lambda: all bodies coincide with the center of mass");
  return num / den;
}

/// The q quantities S_ij = r_ij^{2a} - lambda/M together with the residual
/// of the equivalent mass-weighted equations sum_{i!=j} m_i S_ij (x_i-x_j).
struct SValues {
  int n = 0;
  std::vector<double> s;  // lexicographic pair order
  double eq_residual = 0.0;

  double operator()(int i, int j) const { return s[pair_index(i, j, n)]; }
};

inline SValues s_matrix(const Configuration& x, const MassVector& m, Exponent a, double lambda) {
  x.validate();
  if (m.n() != x.n) throw InputError("s_matrix: mass count mismatch");
  if (lambda == 0.0) throw InputError("s_matrix: lambda must be nonzero");
  const double r0_pow = lambda / m.total();
  SValues out;
  out.n = x.n;
  out.s.reserve(pair_count(x.n));
  for (int i = 0; i < x.n; ++i)
    for (int j = i + 1; j < x.n; ++j) out.s.push_back(a.pow2a(x.distance(i, j)) - r0_pow);
  double worst = 0.0;
  double scale = 0.0;
  for (int j = 0; j < x.n; ++j) {
    VectorXd e = VectorXd::Zero(x.d);
    for (int i = 0; i < x.n; ++i) {
      if (i == j) continue;
      const VectorXd term = m.m[i] * out(i, j) * (x.points[i] - x.points[j]);
      e += term;
      scale = std::max(scale, term.norm());
    }
    worst = std::max(worst, e.norm());
  }
  out.eq_residual = (scale == 0.0) ? 0.0 : worst / scale;
  return out;
}

namespace detail {

template <typename Visit>
void for_each_subset(int n, int k, int excluded, Visit&& visit) {
  std::vector<int> subset(k);
  // iterative enumeration of k-subsets of {0..n-1} \ {excluded}
  std::vector<int> pool;
  for (int i = 0; i < n; ++i)
    if (i != excluded) pool.push_back(i);
  if (k > static_cast<int>(pool.size())) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
    visit(subset);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == static_cast<int>(pool.size()) - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

}  // namespace detail

/// Residual of the trilinear equations for a configuration of dimension
/// n-k: max over bodies j and k-subsets avoiding j of
///   sum_l (-1)^l m_{i_l} S_{i_l j} Delta_{subset minus i_l},
/// normalized by the largest single term. k >= 2.
inline double trilinear_residual(const Configuration& x, const MassVector& m, Exponent a, int k,
                                 RankTolerance tol = {}) {
  if (k < 2 || k > x.n - 1) throw InputError("trilinear_residual: k out of range");
  if (config_dimension(x, tol) != x.n - k)
    throw DimensionError("trilinear_residual: configuration dimension must be n-k");
  const Configuration xr = (x.d > x.n - k) ? reduce_to_dimension(x, x.n - k) : x;
  const double lambda = fit_lambda(xr, m, a);
  const SValues s = s_matrix(xr, m, a, lambda);
  double worst = 0.0;
  double scale = 0.0;
  for (int j = 0; j < x.n; ++j) {
    detail::for_each_subset(x.n, k, j, [&](const std::vector<int>& subset) {
      double sum = 0.0;
      for (int l = 0; l < k; ++l) {
        std::vector<int> removed;
        removed.reserve(k - 1);
        for (int t = 0; t < k; ++t)
          if (t != l) removed.push_back(subset[t]);
        const double term = m.m[subset[l]] * s(subset[l], j) * signed_minor(xr, removed);
        sum += (l % 2 == 0) ? -term : term;  // (-1)^l with l counted from 1
        scale = std::max(scale, std::abs(term));
      }
      worst = std::max(worst, std::abs(sum));
    });
  }
  return (scale == 0.0) ? 0.0 : worst / scale;
}

/// Dziobek certificate of an (n-2)-dimensional central configuration:
/// kernel minors, w_i = Delta_i / m_i, and the factorization constant
/// kappa with S_ij = kappa w_i w_j. When S vanishes identically (regular
/// simplices; any central shape under the zero exponent) `simplex` is
/// set and kappa/w carry no information.
struct DziobekData {
  VectorXd delta;
  VectorXd w;
  double kappa = 0.0;
  double lambda = 0.0;
  double r0_pow = 0.0;          // r_0^{2a} = lambda / M
  std::optional<double> r0;     // real root, present only when lambda/M > 0
  bool simplex = false;
};

inline DziobekData dziobek_data(const Configuration& x, const MassVector& m, Exponent a,
                                double cert_tol = 1e-8, RankTolerance tol = {}) {
  x.validate();
  const double lambda = fit_lambda(x, m, a);
  const double resid = cc_residual(x, m, a, lambda);
  if (resid > cert_tol)
    throw CertificationError("dziobek_data: configuration is not central (residual " +
                             std::to_string(resid) + ")");
  const int delta_dim = config_dimension(x, tol);
  const double r0_pow = lambda / m.total();

  if (delta_dim == x.n - 1) {
    // simplex: S vanishes identically, the kappa fit is degenerate
    const SValues s = s_matrix(x, m, a, lambda);
    double smax = 0.0;
    for (double v : s.s) smax = std::max(smax, std::abs(v));
    if (smax > cert_tol * std::max(1.0, std::abs(r0_pow)))
      throw DimensionError("dziobek_data: dimension n-1 without vanishing S");
    DziobekData out;
    out.delta = VectorXd::Zero(x.n);
    out.w = VectorXd::Zero(x.n);
    out.lambda = lambda;
    out.r0_pow = r0_pow;
    if (r0_pow > 0.0 && a.two_a != 0) out.r0 = std::pow(r0_pow, 1.0 / a.two_a);
    out.simplex = true;
    return out;
  }
  if (delta_dim != x.n - 2)
    throw DimensionError("dziobek_data: configuration dimension must be n-2");

  DziobekData out;
  out.delta = kernel_vector(x, tol);
  out.w = VectorXd(x.n);
  for (int i = 0; i < x.n; ++i) out.w(i) = out.delta(i) / m.m[i];
  out.lambda = lambda;
  out.r0_pow = r0_pow;
  if (r0_pow > 0.0 && a.two_a != 0) out.r0 = std::pow(r0_pow, 1.0 / a.two_a);

  const SValues s = s_matrix(x, m, a, lambda);
  {
    // S vanishes identically only for the zero exponent at this dimension
    double smax0 = 0.0;
    for (double v : s.s) smax0 = std::max(smax0, std::abs(v));
    if (smax0 <= cert_tol * std::max(1.0, std::abs(r0_pow))) {
      out.simplex = true;
      out.w.setZero();
      out.delta.setZero();
      return out;
    }
  }
  double pmax = 0.0;
  for (int i = 0; i < x.n; ++i)
    for (int j = i + 1; j < x.n; ++j) pmax = std::max(pmax, std::abs(out.w(i) * out.w(j)));
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < x.n; ++i)
    for (int j = i + 1; j < x.n; ++j) {
      const double p = out.w(i) * out.w(j);
      if (std::abs(p) > 1e-6 * pmax) {
        num += s(i, j) * p;
        den += p * p;
      }
    }
  if (den == 0.0) throw CertificationError("dziobek_data: kappa fit is degenerate");
  out.kappa = num / den;

  double smax = 0.0;
  for (double v : s.s) smax = std::max(smax, std::abs(v));
  double dev = 0.0;
  for (int i = 0; i < x.n; ++i)
    for (int j = i + 1; j < x.n; ++j)
      dev = std::max(dev, std::abs(s(i, j) - out.kappa * out.w(i) * out.w(j)));
  if (smax == 0.0 || dev > cert_tol * smax)
    throw CertificationError("dziobek_data: S_ij = kappa w_i w_j fails the consistency check");
  if (out.kappa == 0.0) throw CertificationError("dziobek_data: kappa is zero");

  int nonzero = 0;
  const double wmax = out.w.cwiseAbs().maxCoeff();
  for (int i = 0; i < x.n; ++i)
    if (std::abs(out.w(i)) > 1e-8 * wmax) ++nonzero;
  if (nonzero < 2) throw CertificationError("dziobek_data: fewer than two nonzero w entries");
  return out;
}

/// Rank-one factorization constant of the Cayley-Menger cofactors at an
/// (n-2)-dimensional configuration: F_ij = alpha * Delta_i * Delta_j with
/// (Delta_0, Delta_1...Delta_n) the lifted geometric kernel vector.
inline double alpha_from_cofactors(const Configuration& x, const MassVector& m,
                                   RankTolerance tol = {}) {
  m.validate();
  if (config_dimension(x, tol) != x.n - 2)
    throw DimensionError("alpha_from_cofactors: configuration dimension must be n-2");
  const VectorXd kernel = kernel_vector(x, tol);
  const VectorXd lifted = kernel_lift(x, kernel);
  const MatrixXd a = cm_matrix(mutual_distances(x)).entries;
  const MatrixXd cof = cofactor_matrix(a);
  double pmax = 0.0;
  for (int i = 0; i <= x.n; ++i)
    for (int j = 0; j <= x.n; ++j) pmax = std::max(pmax, std::abs(lifted(i) * lifted(j)));
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i <= x.n; ++i)
    for (int j = 0; j <= x.n; ++j) {
      const double p = lifted(i) * lifted(j);
      if (std::abs(p) > 1e-6 * pmax) {
        num += cof(i, j) * p;
        den += p * p;
      }
    }
  if (den == 0.0) throw InternalError("alpha_from_cofactors: degenerate kernel products");
  const double alpha = num / den;
  const double fmax = cof.cwiseAbs().maxCoeff();
  double dev = 0.0;
  for (int i = 0; i <= x.n; ++i)
    for (int j = 0; j <= x.n; ++j)
      dev = std::max(dev, std::abs(cof(i, j) - alpha * lifted(i) * lifted(j)));
  if (dev > 1e-8 * fmax)
    throw InternalError("alpha_from_cofactors: cofactors are not rank-one factorable");
  if (alpha == 0.0) throw InternalError("alpha_from_cofactors: alpha is zero");
  return alpha;
}

/// Full certification report, the JSON-facing summary of this module.
struct CertificationReport {
  bool central = false;
  double lambda = 0.0;
  double residual = 0.0;
  int dimension = -1;
  std::optional<DziobekData> dziobek;
  std::optional<double> alpha;
};

inline CertificationReport certify(const Configuration& x, const MassVector& m, Exponent a,
                                   double cert_tol = 1e-8, RankTolerance tol = {}) {
  CertificationReport rep;
  rep.lambda = (a.two_a == 0) ? m.total() : fit_lambda(x, m, a);
  rep.residual = cc_residual(x, m, a, rep.lambda);
  rep.central = rep.residual <= cert_tol;
  rep.dimension = config_dimension(x, tol);
  if (rep.central && (rep.dimension == x.n - 2 || rep.dimension == x.n - 1)) {
    try {
      rep.dziobek = dziobek_data(x, m, a, cert_tol, tol);
    } catch (const Error&) {
      // leave the optional empty; certification itself still stands
    }
  }
  if (rep.dimension == x.n - 2) {
    try {
      rep.alpha = alpha_from_cofactors(x, m, tol);
    } catch (const Error&) {
    }
  }
  return rep;
}

}  // namespace cencon
