#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "cencon/cayley_menger.hpp"
#include "cencon/central_config.hpp"
#include "cencon/errors.hpp"
#include "cencon/geometry.hpp"
#include "cencon/numeric.hpp"
#include "cencon/pair_index.hpp"

namespace cencon {

/// A point (r, z, Delta_0, m) of (q+2n+1)-space. r and m are positive
/// reals at points coming from a lift; z and Delta_0 are complex, all
/// real or all pure imaginary there. `normalized` records whether the
/// source configuration was rescaled so that r_0 = 1.
struct LiftedPoint {
  int n = 0;
  int two_a = -3;
  VectorXd r;     // q entries, lexicographic pair order
  VectorXcd z;    // n entries
  Complex delta0 = 0.0;
  VectorXd m;     // n entries
  bool normalized = false;

  void validate() const {
    if (n < 2) throw InputError("LiftedPoint: need at least 2 bodies");
    if (two_a == 0) throw InputError("LiftedPoint: exponent two_a must be nonzero");
    if (r.size() != pair_count(n)) throw InputError("LiftedPoint: wrong distance count");
    if (z.size() != n || m.size() != n) throw InputError("LiftedPoint: wrong z or m size");
    for (int i = 0; i < r.size(); ++i)
      if (r(i) < 0.0 || !std::isfinite(r(i))) throw InputError("LiftedPoint: invalid distance entry");
    for (int i = 0; i < n; ++i)
      if (!(m(i) > 0.0)) throw InputError("LiftedPoint: masses must be positive");
  }

  void require_positive_distances(const char* who) const {
    if (r.minCoeff() <= 0.0)
      throw NumericError(std::string(who) + ": zero mutual distance (W1 degeneracy)");
  }

  double rpair(int i, int j) const { return r(pair_index(i, j, n)); }

  /// The companion point with z and Delta_0 negated.
  LiftedPoint mirror() const {
    LiftedPoint p = *this;
    p.z = -p.z;
    p.delta0 = -p.delta0;
    return p;
  }
};

/// Values of the q + n + 2 defining functions at a point.
struct SystemValues {
  VectorXcd g;      // q bilinear distance-z relations
  Complex f = 0.0;  // Cayley-Menger determinant
  VectorXcd gamma;  // n+1 kernel relations

  double max_norm() const {
    double v = std::abs(f);
    for (int i = 0; i < g.size(); ++i) v = std::max(v, std::abs(g(i)));
    for (int i = 0; i < gamma.size(); ++i) v = std::max(v, std::abs(gamma(i)));
    return v;
  }

  VectorXcd stacked() const {
    VectorXcd v(g.size() + 1 + gamma.size());
    v.head(g.size()) = g;
    v(g.size()) = f;
    v.tail(gamma.size()) = gamma;
    return v;
  }
};

namespace detail {

inline MatrixXcd cm_matrix_complex(int n, const VectorXcd& r) {
  return cm_matrix_from<Complex>(n, r);
}

/// g value for one pair, both exponent branches.
inline Complex g_value(int two_a, Complex rij, Complex zi, Complex zj) {
  if (two_a > 0) return ipow(rij, two_a) - 1.0 - zi * zj;
  return ipow(rij, -two_a) * (zi * zj + 1.0) - 1.0;
}

inline SystemValues eval_system(const LiftedPoint& p) {
  const int n = p.n;
  const int q = pair_count(n);
  SystemValues out;
  out.g.resize(q);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.g(pair_index(i, j, n)) = g_value(p.two_a, p.rpair(i, j), p.z(i), p.z(j));
  out.f = determinant(cm_matrix_complex(n, p.r.cast<Complex>()));
  out.gamma.resize(n + 1);
  Complex g0 = 0.0;
  for (int j = 0; j < n; ++j) g0 += p.m(j) * p.z(j);
  out.gamma(0) = g0;
  for (int l = 0; l < n; ++l) {
    Complex s = p.delta0;
    for (int j = 0; j < n; ++j) {
      if (j == l) continue;  // zero diagonal
      const double rjl = p.rpair(j, l);
      s += p.m(j) * p.z(j) * (rjl * rjl);
    }
    out.gamma(l + 1) = s;
  }
  return out;
}

/// Gradient of the Cayley-Menger determinant with respect to each pair
/// distance: dF/dR_ij = 4 R_ij F_ij via the cofactors.
inline VectorXcd grad_f(int n, const VectorXd& r) {
  const MatrixXcd a = cm_matrix_complex(n, r.cast<Complex>());
  const MatrixXcd cof = cofactor_matrix(a);
  VectorXcd g(pair_count(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      g(pair_index(i, j, n)) = 4.0 * r(pair_index(i, j, n)) * cof(i + 1, j + 1);
  return g;
}

/// Psi without the distance-positivity gate; both branches are
/// polynomial in r (the a > 0 branch via per-term cleared products).
inline VectorXcd psi_impl(const LiftedPoint& p) {
  const int n = p.n;
  const VectorXcd df = grad_f(n, p.r);
  VectorXcd psi = VectorXcd::Zero(n);
  for (int i = 0; i < n; ++i) {
    Complex s = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      Complex coef;
      if (p.two_a < 0) {
        coef = ipow(Complex(p.rpair(k, i)), -p.two_a + 1);
      } else {
        coef = 1.0;
        const int skip = pair_index(k, i, n);
        for (int idx = 0; idx < p.r.size(); ++idx)
          if (idx != skip) coef *= ipow(Complex(p.r(idx)), p.two_a - 1);
      }
      s += coef * df(pair_index(k, i, n)) * p.z(k);
    }
    psi(i) = s;
  }
  return psi;
}

}  // namespace detail

/// Evaluate the defining system of the lifted variety at P.
inline SystemValues system_residual(const LiftedPoint& p) {
  p.validate();
  return detail::eval_system(p);
}

/// The n exclusion polynomials. For a < 0,
///   Psi_i = sum_{k != i} R_ki^{-2a+1} (dF/dR_ki) Z_k;
/// for a > 0 each term instead carries the denominator-cleared product
/// prod_{(u,v) != (k,i)} R_uv^{2a-1}.
inline VectorXcd psi_values(const LiftedPoint& p) {
  p.validate();
  p.require_positive_distances("psi_values");
  return detail::psi_impl(p);
}

/// Flags for the three excluded loci.
struct WFlags {
  bool w1 = false;  // some distance vanishes
  bool w2 = false;  // cofactor locus, policy dependent
  bool w3 = false;  // all Psi vanish
};

enum class W2Policy { all_cofactors, any_cofactor };

inline WFlags w_membership(const LiftedPoint& p, W2Policy policy = W2Policy::all_cofactors,
                           double tol = 1e-8) {
  p.validate();
  WFlags flags;
  const double rmax = p.r.maxCoeff();
  flags.w1 = (rmax == 0.0) || p.r.minCoeff() <= tol * rmax;

  const MatrixXcd a = detail::cm_matrix_complex(p.n, p.r.cast<Complex>());
  const MatrixXcd cof = cofactor_matrix(a);
  const double fmax = cof.cwiseAbs().maxCoeff();
  const double fscale = std::max(fmax, std::pow(std::max(rmax, 1.0), 2.0 * (p.n - 1)));
  if (policy == W2Policy::all_cofactors) {
    flags.w2 = fmax <= tol * fscale;
  } else {
    bool any = false;
    for (int i = 0; i <= p.n && !any; ++i)
      for (int j = 0; j <= p.n && !any; ++j)
        if (std::abs(cof(i, j)) <= tol * fscale) any = true;
    flags.w2 = any;
  }

  const VectorXcd psi = detail::psi_impl(p);
  const VectorXcd df = detail::grad_f(p.n, p.r);
  double scale = 0.0;
  for (int i = 0; i < p.n; ++i) {
    double terms = 0.0;
    for (int k = 0; k < p.n; ++k) {
      if (k == i) continue;
      double coef;
      if (p.two_a < 0) {
        coef = std::abs(ipow(Complex(p.rpair(k, i)), -p.two_a + 1));
      } else {
        coef = 1.0;
        const int skip = pair_index(k, i, p.n);
        for (int idx = 0; idx < p.r.size(); ++idx)
          if (idx != skip) coef *= std::abs(ipow(Complex(p.r(idx)), p.two_a - 1));
      }
      terms += coef * std::abs(df(pair_index(k, i, p.n))) * std::abs(p.z(k));
    }
    scale = std::max(scale, terms);
  }
  flags.w3 = psi.cwiseAbs().maxCoeff() <= tol * std::max(scale, 1e-300);
  return flags;
}

/// Analytic Jacobian of (g, F, Gamma) with rows ordered (g pairs lex, F,
/// Gamma_0..Gamma_n) and columns ordered (R pairs lex, Z_1..Z_n, Delta,
/// M_1..M_n).
inline MatrixXcd jacobian(const LiftedPoint& p) {
  p.validate();
  p.require_positive_distances("jacobian");
  const int n = p.n;
  const int q = pair_count(n);
  const int rows = q + n + 2;
  const int cols = q + 2 * n + 1;
  const int zcol = q;          // first z column
  const int dcol = q + n;      // Delta column
  const int mcol = q + n + 1;  // first mass column
  MatrixXcd jac = MatrixXcd::Zero(rows, cols);

  // g rows
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int row = pair_index(i, j, n);
      const Complex rij(p.rpair(i, j));
      if (p.two_a > 0) {
        jac(row, row) = double(p.two_a) * ipow(rij, p.two_a - 1);
        jac(row, zcol + i) = -p.z(j);
        jac(row, zcol + j) = -p.z(i);
      } else {
        const int e = -p.two_a;
        jac(row, row) = double(e) * ipow(rij, e - 1) * (p.z(i) * p.z(j) + 1.0);
        jac(row, zcol + i) = ipow(rij, e) * p.z(j);
        jac(row, zcol + j) = ipow(rij, e) * p.z(i);
      }
    }

  // F row: depends on R only
  jac.row(q).head(q) = detail::grad_f(n, p.r).transpose();

  // Gamma_0 row
  const int g0 = q + 1;
  for (int j = 0; j < n; ++j) {
    jac(g0, zcol + j) = p.m(j);
    jac(g0, mcol + j) = p.z(j);
  }

  // Gamma_l rows, l = 1..n (body index l-1 in code)
  for (int l = 0; l < n; ++l) {
    const int row = q + 2 + l;
    jac(row, dcol) = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == l) continue;
      const double rjl = p.rpair(j, l);
      jac(row, zcol + j) = p.m(j) * rjl * rjl;
      jac(row, mcol + j) = p.z(j) * rjl * rjl;
      jac(row, pair_index(j, l, n)) = 2.0 * p.m(j) * p.z(j) * rjl;
    }
  }
  return jac;
}

/// Central-difference Jacobian of the same system, for verification.
/// Steps are taken along the real axis of each coordinate, which is the
/// holomorphic derivative for these polynomial maps.
inline MatrixXcd finite_difference_jacobian(const LiftedPoint& p, double step = 1e-6) {
  p.validate();
  const int n = p.n;
  const int q = pair_count(n);
  const int cols = q + 2 * n + 1;
  auto eval_shifted = [&](int col, double h) {
    LiftedPoint ps = p;
    if (col < q)
      ps.r(col) += h;
    else if (col < q + n)
      ps.z(col - q) += h;
    else if (col == q + n)
      ps.delta0 += h;
    else
      ps.m(col - q - n - 1) += h;
    return detail::eval_system(ps).stacked();
  };
  MatrixXcd jac(q + n + 2, cols);
  for (int col = 0; col < cols; ++col) {
    double base = 1.0;
    if (col < q) base = std::abs(p.r(col));
    const double h = step * std::max(base, 1.0);
    jac.col(col) = (eval_shifted(col, h) - eval_shifted(col, -h)) / (2.0 * h);
  }
  return jac;
}

/// Lift an (n-2)-dimensional central configuration to the pair of points
/// (P_x, P*_x). The configuration is rescaled so that r_0 = 1 whenever
/// lambda/M > 0; otherwise the point is returned flagged unnormalized and
/// will generally not satisfy the defining equations exactly.
inline std::pair<LiftedPoint, LiftedPoint> lift_point(const Configuration& x, const MassVector& m,
                                                      Exponent a, double cert_tol = 1e-8,
                                                      RankTolerance tol = {}) {
  if (a.two_a == 0) throw InputError("lift_point: exponent two_a must be nonzero");
  const double lambda = fit_lambda(x, m, a);
  const double r0_pow = lambda / m.total();

  Configuration xs = x;
  bool normalized = false;
  if (r0_pow > 0.0) {
    const double factor = std::pow(r0_pow, -1.0 / a.two_a);
    std::vector<VectorXd> pts(x.n);
    for (int i = 0; i < x.n; ++i) pts[i] = factor * x.points[i];
    xs = Configuration(x.n, x.d, std::move(pts));
    normalized = true;
  }

  const DziobekData dz = dziobek_data(xs, m, a, cert_tol, tol);
  if (dz.simplex) throw DimensionError("lift_point: configuration dimension must be n-2");

  const Complex sqrt_kappa = std::sqrt(Complex(dz.kappa, 0.0));  // principal branch
  LiftedPoint p;
  p.n = x.n;
  p.two_a = a.two_a;
  const auto dist = xs.mutual_distances();
  p.r = Eigen::Map<const VectorXd>(dist.data(), static_cast<int>(dist.size()));
  p.z = VectorXcd(x.n);
  for (int i = 0; i < x.n; ++i) p.z(i) = sqrt_kappa * dz.w(i);
  p.m = Eigen::Map<const VectorXd>(m.m.data(), x.n);
  p.delta0 = 0.0;
  for (int j = 0; j < x.n; ++j) p.delta0 -= xs.points[j].squaredNorm() * p.m(j) * p.z(j);
  p.normalized = normalized;

  if (normalized) {
    const double resid = system_residual(p).max_norm();
    if (resid > cert_tol)
      throw CertificationError("lift_point: lifted point misses the variety (residual " +
                               std::to_string(resid) + ")");
  }
  return {p, p.mirror()};
}

/// Deviation of the gradient identity dF/dR_ij = 4 alpha r_ij m_i z_i m_j z_j
/// at a lifted central point, relative to the gradient scale. Also
/// cross-checks the analytic gradient against central finite differences
/// of the Cayley-Menger determinant with step fd_step_rel * r_ij.
inline double grad_f_identity_check(const LiftedPoint& p, double fd_step_rel = 1e-6) {
  p.validate();
  p.require_positive_distances("grad_f_identity_check");
  const int n = p.n;
  const MatrixXcd a = detail::cm_matrix_complex(n, p.r.cast<Complex>());
  const MatrixXcd cof = cofactor_matrix(a);
  const VectorXcd df = detail::grad_f(n, p.r);

  // finite-difference audit of the analytic gradient
  const double denom = std::max(1.0, df.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int idx = pair_index(i, j, n);
      const double h = fd_step_rel * p.r(idx);
      auto f_of_r = [&](double rij) {
        VectorXcd rc = p.r.cast<Complex>();
        rc(idx) = rij;
        return determinant(detail::cm_matrix_complex(n, rc));
      };
      const Complex fd = central_difference(f_of_r, p.r(idx), h);
      if (std::abs(fd - df(idx)) > 1e-6 * denom)
        throw InternalError(
            "grad_f_identity_check: analytic gradient disagrees with finite differences");
    }

  // kernel vector of A at the lifted point and the alpha fit
  VectorXcd kern(n + 1);
  kern(0) = p.delta0;
  for (int i = 0; i < n; ++i) kern(i + 1) = p.m(i) * p.z(i);
  double pmax = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) pmax = std::max(pmax, std::abs(kern(i) * kern(j)));
  Complex num = 0.0;
  double den = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const Complex prod = kern(i) * kern(j);
      if (std::abs(prod) > 1e-6 * pmax) {
        num += cof(i, j) * std::conj(prod);
        den += std::norm(prod);
      }
    }
  if (den == 0.0) throw CertificationError("grad_f_identity_check: degenerate kernel vector");
  const Complex alpha = num / den;

  double dev = 0.0;
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int idx = pair_index(i, j, n);
      const Complex rhs = 4.0 * alpha * p.rpair(i, j) * p.m(i) * p.z(i) * p.m(j) * p.z(j);
      dev = std::max(dev, std::abs(df(idx) - rhs));
      scale = std::max(scale, std::abs(df(idx)));
    }
  return (scale == 0.0) ? dev : dev / scale;
}

/// Determinant of the distinguished (q+1) x (q+1) submatrix of J(g, F)
/// together with its closed form. If Psi of the first body vanishes at P,
/// bodies are relabeled (first body swapped with the one of largest
/// |Psi|) before building the submatrix; both returned values refer to
/// the relabeled point.
struct HDeterminant {
  Complex det = 0.0;
  Complex closed_form = 0.0;
  int pivot_body = 0;  // body placed first by the relabeling
};

namespace detail {

inline LiftedPoint relabel_swap(const LiftedPoint& p, int pivot) {
  if (pivot == 0) return p;
  LiftedPoint out = p;
  std::vector<int> perm(p.n);
  for (int i = 0; i < p.n; ++i) perm[i] = i;
  std::swap(perm[0], perm[pivot]);
  for (int i = 0; i < p.n; ++i) {
    out.z(i) = p.z(perm[i]);
    out.m(i) = p.m(perm[i]);
  }
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j)
      out.r(pair_index(i, j, p.n)) = p.rpair(perm[i], perm[j]);
  return out;
}

}  // namespace detail

inline HDeterminant h_submatrix_det(const LiftedPoint& p) {
  p.validate();
  p.require_positive_distances("h_submatrix_det");
  const int q = pair_count(p.n);
  const VectorXcd psi = detail::psi_impl(p);
  int pivot = 0;
  double best = 0.0;
  for (int i = 0; i < p.n; ++i)
    if (std::abs(psi(i)) > best) {
      best = std::abs(psi(i));
      pivot = i;
    }
  if (w_membership(p).w3)
    throw NumericError(
        "h_submatrix_det: all Psi vanish (W3 point), H is singular for every labeling");

  const LiftedPoint pr = detail::relabel_swap(p, pivot);
  const MatrixXcd jac = jacobian(pr);
  // rows: all g rows and the F row; columns: all R columns and Z_1
  MatrixXcd h(q + 1, q + 1);
  h.topLeftCorner(q + 1, q) = jac.topLeftCorner(q + 1, q);
  h.col(q) = jac.col(q).head(q + 1);

  HDeterminant out;
  out.pivot_body = pivot;
  out.det = determinant(h);
  const Complex psi1 = detail::psi_impl(pr)(0);
  if (pr.two_a < 0) {
    Complex rprod_inv = 1.0;
    for (int idx = 0; idx < pr.r.size(); ++idx) rprod_inv /= pr.r(idx);
    out.closed_form = -ipow(Complex(-pr.two_a), q - 1) * psi1 * rprod_inv;
  } else {
    out.closed_form = ipow(Complex(pr.two_a), q - 1) * psi1;
  }
  return out;
}

/// Numerical rank of the full Jacobian and the resulting local dimension
/// bound (#variables - rank).
struct JacobianRank {
  int rank = 0;
  int local_dim_upper_bound = 0;
};

inline JacobianRank jacobian_rank(const LiftedPoint& p, RankTolerance tol = {}) {
  const MatrixXcd jac = jacobian(p);
  const int rank = numerical_rank(jac, tol);
  return JacobianRank{rank, static_cast<int>(jac.cols()) - rank};
}

/// Rank of the (n+1) x (n+1) block of derivatives of the Gamma functions
/// with respect to (Delta, M_1..M_n).
inline int gamma_block_rank(const LiftedPoint& p, RankTolerance tol = {}) {
  p.validate();
  const int n = p.n;
  MatrixXcd block = MatrixXcd::Zero(n + 1, n + 1);
  for (int j = 0; j < n; ++j) block(0, j + 1) = p.z(j);
  for (int l = 0; l < n; ++l) {
    block(l + 1, 0) = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == l) continue;
      const double rjl = p.rpair(j, l);
      block(l + 1, j + 1) = p.z(j) * rjl * rjl;
    }
  }
  return numerical_rank(block, tol);
}

}  // namespace cencon
