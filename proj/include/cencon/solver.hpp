#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "cencon/cayley_menger.hpp"
#include "cencon/central_config.hpp"
#include "cencon/errors.hpp"
#include "cencon/geometry.hpp"
#include "cencon/numeric.hpp"
#include "cencon/pair_index.hpp"
#include "cencon/rng.hpp"
#include "cencon/variety.hpp"

namespace cencon {

/// Recover an n-point configuration in k dimensions from its mutual
/// distances (classical multidimensional scaling). Centered at the
/// origin, axes ordered by principal variance, each axis' sign fixed so
/// that its first significant coordinate is positive.
inline Configuration recover_configuration(const DistanceVector& r, int k) {
  r.validate();
  const int n = r.n;
  if (k < 1 || k > n - 1) throw InputError("recover_configuration: bad target dimension");
  MatrixXd d2(n, n);
  for (int i = 0; i < n; ++i) {
    d2(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double v = r(i, j) * r(i, j);
      d2(i, j) = v;
      d2(j, i) = v;
    }
  }
  const MatrixXd centering = MatrixXd::Identity(n, n) - MatrixXd::Constant(n, n, 1.0 / n);
  const MatrixXd gram = -0.5 * centering * d2 * centering;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
  const VectorXd ev = eig.eigenvalues();  // ascending
  const double emax = ev.cwiseAbs().maxCoeff();
  if (!(emax > 0.0)) throw NumericError("recover_configuration: degenerate Gram matrix");
  const double tol = 1e-9 * emax;
  // top k eigenvalues must be positive, the rest negligible
  for (int i = 0; i < n; ++i) {
    const bool kept = i >= n - k;
    if (kept && ev(i) <= tol)
      throw NumericError("recover_configuration: Gram rank below target dimension");
    if (!kept && std::abs(ev(i)) > tol)
      throw NumericError(ev(i) < 0
                             ? "recover_configuration: distances are not Euclidean-realizable"
                             : "recover_configuration: Gram rank exceeds target dimension");
  }
  MatrixXd coords(n, k);
  for (int a = 0; a < k; ++a) {
    const int src = n - 1 - a;  // descending eigenvalue order
    coords.col(a) = eig.eigenvectors().col(src) * std::sqrt(ev(src));
  }
  for (int a = 0; a < k; ++a) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(coords(i, a)) > 1e-9 * std::sqrt(emax)) {
        if (coords(i, a) < 0) coords.col(a) = -coords.col(a);
        break;
      }
    }
  }
  std::vector<VectorXd> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = coords.row(i).transpose();
  Configuration out(n, k, std::move(pts));
  const auto rr = out.mutual_distances();
  double rmax = 0.0;
  double dev = 0.0;
  for (std::size_t i = 0; i < rr.size(); ++i) {
    rmax = std::max(rmax, r.r[i]);
    dev = std::max(dev, std::abs(rr[i] - r.r[i]));
  }
  if (dev > 1e-8 * rmax)
    throw InternalError("recover_configuration: recovered distances mismatch the input");
  return out;
}

/// The unique collinear central configuration for a fixed left-to-right
/// ordering of the bodies, positions normalized to [0, 1]. ordering[s] is
/// the body placed at slot s. Solved by damped Newton on the interior
/// positions and lambda; the last body equation is dependent and dropped.
inline Configuration moulton_collinear(const MassVector& m, Exponent a,
                                       const std::vector<int>& ordering) {
  m.validate();
  const int n = m.n();
  if (n < 2) throw InputError("moulton_collinear: need at least 2 bodies");
  if (a.two_a == 0) throw InputError("moulton_collinear: exponent two_a must be nonzero");
  {
    std::vector<int> check = ordering;
    std::sort(check.begin(), check.end());
    if (static_cast<int>(ordering.size()) != n)
      throw InputError("moulton_collinear: ordering must list every body once");
    for (int i = 0; i < n; ++i)
      if (check[i] != i)
        throw InputError("moulton_collinear: ordering must be a permutation of 0..n-1");
  }
  std::vector<double> mu(n);
  for (int s = 0; s < n; ++s) mu[s] = m.m[ordering[s]];
  const double total = std::accumulate(mu.begin(), mu.end(), 0.0);

  auto phi = [&](double u) { return u * ipow(std::abs(u), a.two_a); };
  auto dphi = [&](double u) { return (a.two_a + 1) * ipow(std::abs(u), a.two_a); };

  auto slots_to_config = [&](const VectorXd& t) {
    std::vector<VectorXd> pts(n);
    for (int s = 0; s < n; ++s) {
      VectorXd p(1);
      p(0) = t(s);
      pts[ordering[s]] = p;
    }
    return Configuration(n, 1, std::move(pts));
  };

  if (n == 2) {
    VectorXd t(2);
    t << 0.0, 1.0;
    return slots_to_config(t);
  }

  auto expand = [&](const VectorXd& u) {
    VectorXd t(n);
    t(0) = 0.0;
    t(n - 1) = 1.0;
    for (int i = 0; i < n - 2; ++i) t(i + 1) = u(i);
    return t;
  };

  // residual of the on-line equations for slots 0..n-2 and its Jacobian
  // in the unknowns (t_1, ..., t_{n-2}, lambda)
  auto assemble = [&](const VectorXd& u, VectorXd& e, MatrixXd* jm) {
    const VectorXd t = expand(u);
    const double lambda = u(n - 2);
    double c = 0.0;
    for (int s = 0; s < n; ++s) c += mu[s] * t(s);
    c /= total;
    e.resize(n - 1);
    if (jm) jm->setZero(n - 1, n - 1);
    for (int s = 0; s < n - 1; ++s) {
      double es = lambda * (t(s) - c);
      for (int sp = 0; sp < n; ++sp)
        if (sp != s) es += mu[sp] * phi(t(sp) - t(s));
      e(s) = es;
      if (!jm) continue;
      for (int kslot = 1; kslot <= n - 2; ++kslot) {
        double der;
        if (kslot == s) {
          der = lambda * (1.0 - mu[s] / total);
          for (int sp = 0; sp < n; ++sp)
            if (sp != s) der -= mu[sp] * dphi(t(sp) - t(s));
        } else {
          der = mu[kslot] * dphi(t(kslot) - t(s)) - lambda * mu[kslot] / total;
        }
        (*jm)(s, kslot - 1) = der;
      }
      (*jm)(s, n - 2) = t(s) - c;
    }
  };

  auto try_solve = [&](VectorXd u) -> std::pair<bool, VectorXd> {
    VectorXd e;
    assemble(u, e, nullptr);
    double fnorm = e.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < 150; ++it) {
      MatrixXd jm;
      assemble(u, e, &jm);
      const VectorXd step = Eigen::CompleteOrthogonalDecomposition<MatrixXd>(jm).solve(-e);
      if (!step.allFinite()) return {false, u};
      double tfac = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 50; ++bt, tfac *= 0.5) {
        VectorXd ut = u + tfac * step;
        bool ordered = true;
        double prev = 0.0;
        for (int i = 0; i < n - 2; ++i) {
          if (!(ut(i) > prev && ut(i) < 1.0)) {
            ordered = false;
            break;
          }
          prev = ut(i);
        }
        if (!ordered) continue;
        VectorXd et;
        assemble(ut, et, nullptr);
        if (et.lpNorm<Eigen::Infinity>() < fnorm) {
          u = ut;
          fnorm = et.lpNorm<Eigen::Infinity>();
          accepted = true;
          break;
        }
      }
      if (!accepted) break;  // stalled; certification below decides
    }
    return {true, u};
  };

  // deterministic starts: uniform spacing plus warped fallbacks
  std::vector<VectorXd> starts;
  {
    VectorXd u(n - 1);
    for (int i = 0; i < n - 2; ++i) u(i) = double(i + 1) / (n - 1);
    u(n - 2) = fit_lambda(slots_to_config(expand(u)), m, a);
    starts.push_back(u);
    for (double warp : {0.75, 1.3, 0.55, 1.8}) {
      VectorXd uw = u;
      for (int i = 0; i < n - 2; ++i) uw(i) = std::pow(u(i), warp);
      starts.push_back(uw);
    }
  }
  for (const auto& st : starts) {
    auto [ok, u] = try_solve(st);
    if (!ok) continue;
    Configuration x = slots_to_config(expand(u));
    if (cc_residual(x, m, a, fit_lambda(x, m, a)) <= 1e-10) return x;
  }
  throw NumericError("moulton_collinear: Newton iteration failed to certify a solution");
}

/// The real square system in (r, kappa, w) whose zero set contains every
/// (n-2)-dimensional central configuration for the fixed masses, at the
/// r_0 = 1 scale. Variables are ordered (r pairs lex, kappa, w_1..w_n);
/// equations (g pairs lex, F, Omega_0, Omega_i - Omega_{i+1}).
struct XmSystem {
  int n = 0;
  int two_a = -3;
  MassVector masses;

  int q() const { return pair_count(n); }
  int num_vars() const { return q() + n + 1; }

  /// Degree table of the defining polynomials as used by the counting
  /// bound: deg F = 2n, deg g = 2a (a > 0) or -2a+2 (a < 0, cleared),
  /// deg of the Omega differences <= 3.
  int f_degree() const { return 2 * n; }
  int g_degree() const { return two_a > 0 ? two_a : -two_a + 2; }
  int omega_degree() const { return 3; }

  double rvar(const VectorXd& v, int i, int j) const { return v(pair_index(i, j, n)); }
  double kappa(const VectorXd& v) const { return v(q()); }
  double wvar(const VectorXd& v, int i) const { return v(q() + 1 + i); }

  VectorXd eval(const VectorXd& v) const {
    if (v.size() != num_vars()) throw InputError("XmSystem: wrong variable count");
    VectorXd out(num_vars());
    const double k = kappa(v);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const int idx = pair_index(i, j, n);
        const double rij = v(idx);
        const double kw = k * wvar(v, i) * wvar(v, j);
        out(idx) = (two_a > 0) ? ipow(rij, two_a) - 1.0 - kw : ipow(rij, -two_a) * (1.0 + kw) - 1.0;
      }
    out(q()) = determinant(cm_matrix_from<double>(n, VectorXd(v.head(q()))));
    double omega0 = 0.0;
    for (int kk = 0; kk < n; ++kk) omega0 += masses.m[kk] * wvar(v, kk);
    out(q() + 1) = omega0;
    auto omega = [&](int l) {
      double s = 0.0;
      for (int kk = 0; kk < n; ++kk) {
        if (kk == l) continue;
        const double rkl = rvar(v, kk, l);
        s += masses.m[kk] * wvar(v, kk) * rkl * rkl;
      }
      return s;
    };
    for (int i = 0; i + 1 < n; ++i) out(q() + 2 + i) = omega(i) - omega(i + 1);
    return out;
  }

  MatrixXd jac(const VectorXd& v) const {
    if (v.size() != num_vars()) throw InputError("XmSystem: wrong variable count");
    const int nv = num_vars();
    const int kcol = q();
    const int wcol = q() + 1;
    MatrixXd jm = MatrixXd::Zero(nv, nv);
    const double k = kappa(v);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const int idx = pair_index(i, j, n);
        const double rij = v(idx);
        const double wi = wvar(v, i);
        const double wj = wvar(v, j);
        if (two_a > 0) {
          jm(idx, idx) = two_a * ipow(rij, two_a - 1);
          jm(idx, kcol) = -wi * wj;
          jm(idx, wcol + i) = -k * wj;
          jm(idx, wcol + j) = -k * wi;
        } else {
          const int e = -two_a;
          const double re = ipow(rij, e);
          jm(idx, idx) = e * ipow(rij, e - 1) * (1.0 + k * wi * wj);
          jm(idx, kcol) = re * wi * wj;
          jm(idx, wcol + i) = re * k * wj;
          jm(idx, wcol + j) = re * k * wi;
        }
      }
    {
      const MatrixXd a = cm_matrix_from<double>(n, VectorXd(v.head(q())));
      const MatrixXd cof = cofactor_matrix(a);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const int idx = pair_index(i, j, n);
          jm(q(), idx) = 4.0 * v(idx) * cof(i + 1, j + 1);
        }
    }
    for (int kk = 0; kk < n; ++kk) jm(q() + 1, wcol + kk) = masses.m[kk];
    for (int i = 0; i + 1 < n; ++i) {
      const int row = q() + 2 + i;
      for (int l : {i, i + 1}) {
        const double sign = (l == i) ? 1.0 : -1.0;
        for (int kk = 0; kk < n; ++kk) {
          if (kk == l) continue;
          const double rkl = rvar(v, kk, l);
          jm(row, wcol + kk) += sign * masses.m[kk] * rkl * rkl;
          jm(row, pair_index(kk, l, n)) += sign * 2.0 * masses.m[kk] * wvar(v, kk) * rkl;
        }
      }
    }
    return jm;
  }
};

inline XmSystem build_xm_system(int n, const MassVector& m, Exponent a) {
  if (n < 3) throw InputError("build_xm_system: need at least 3 bodies");
  if (a.two_a == 0) throw InputError("build_xm_system: exponent two_a must be nonzero");
  if (m.n() != n) throw InputError("build_xm_system: mass count mismatch");
  return XmSystem{n, a.two_a, m};
}

enum class DampingPolicy { backtracking, full_step };

struct NewtonOptions {
  int max_iter = 100;
  double tol = 1e-11;
  DampingPolicy damping = DampingPolicy::backtracking;
};

struct NewtonResult {
  bool converged = false;
  VectorXd x;
  double residual = 0.0;
  int iterations = 0;
  std::string failure;
};

/// Damped Newton iteration on the square system. The linear step uses a
/// complete orthogonal decomposition so that rank-deficient Jacobians
/// (the system carries the exact scale symmetry
/// (kappa, w) -> (kappa/c^2, c w)) still yield a well-defined
/// minimum-norm step. Iterates that would drive a distance nonpositive
/// are damped, then rejected.
inline NewtonResult newton_solve(const XmSystem& sys, const VectorXd& seed,
                                 NewtonOptions opts = {}) {
  NewtonResult res;
  if (seed.size() != sys.num_vars()) throw InputError("newton_solve: wrong seed size");
  for (int i = 0; i < sys.q(); ++i)
    if (!(seed(i) > 0.0)) throw InputError("newton_solve: seed distances must be positive");
  VectorXd x = seed;
  VectorXd f = sys.eval(x);
  double fnorm = f.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < opts.max_iter; ++it) {
    if (fnorm <= opts.tol) break;
    const MatrixXd jm = sys.jac(x);
    const VectorXd step = Eigen::CompleteOrthogonalDecomposition<MatrixXd>(jm).solve(-f);
    if (!step.allFinite()) {
      res.failure = "singular Jacobian";
      break;
    }
    double t = 1.0;
    bool accepted = false;
    const int max_backtrack = (opts.damping == DampingPolicy::backtracking) ? 40 : 1;
    for (int bt = 0; bt < max_backtrack; ++bt, t *= 0.5) {
      VectorXd xt = x + t * step;
      bool positive = true;
      for (int i = 0; i < sys.q(); ++i)
        if (!(xt(i) > 0.0)) {
          positive = false;
          break;
        }
      if (!positive) continue;
      const VectorXd ft = sys.eval(xt);
      const double fn = ft.lpNorm<Eigen::Infinity>();
      if (fn < fnorm || opts.damping == DampingPolicy::full_step) {
        x = xt;
        f = ft;
        fnorm = fn;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.failure = "line search failed";
      break;
    }
    res.iterations = it + 1;
  }
  res.x = x;
  res.residual = fnorm;
  res.converged = fnorm <= opts.tol;
  if (!res.converged && res.failure.empty()) res.failure = "iteration limit reached";
  return res;
}

/// One accepted, certified solution of the search.
struct XmSolution {
  VectorXd r;
  double kappa = 0.0;  // canonical scale: ||w|| = 1
  VectorXd w;          // canonical sign: first significant entry positive
  double residual = 0.0;
  int cm_rank_value = 0;
  int jacobian_rank_at_lift = 0;
  std::string classification;
  Configuration points;  // recovered (n-2)-dimensional configuration
  CertificationReport cert;
};

struct SolveReport {
  std::vector<XmSolution> solutions;
  int seeds_tried = 0;
  double dedup_tolerance = 1e-6;
  std::uint64_t rng_seed = 0;
  std::string rng_name = CounterRng::name();
};

namespace detail {

/// Scale/sign canonical form of (kappa, w): ||w||=1, kappa absorbs the
/// scale, first significant w entry positive.
inline void canonicalize_kw(double& kappa, VectorXd& w) {
  const double nw = w.norm();
  if (nw == 0.0) return;
  kappa *= nw * nw;
  w /= nw;
  for (int i = 0; i < w.size(); ++i) {
    if (std::abs(w(i)) > 1e-8) {
      if (w(i) < 0) w = -w;
      break;
    }
  }
}

}  // namespace detail

/// Multistart Newton search over the square system. Seeds are drawn from
/// the counter-based generator; duplicates are folded by sorted-distance
/// multisets (this also folds relabelings of one shape) and by the
/// (kappa, w) ~ (kappa, -w) identification. Each survivor is recovered as
/// a point configuration and recertified; only certified solutions are
/// reported, in seed order.
inline SolveReport search(const XmSystem& sys, int num_seeds, std::uint64_t rng_seed,
                          NewtonOptions opts = {}) {
  if (num_seeds < 1) throw InputError("search: need at least one seed");
  SolveReport report;
  report.seeds_tried = num_seeds;
  report.rng_seed = rng_seed;
  const Exponent a{sys.two_a};
  std::vector<VectorXd> seen_sorted_r;

  for (int s = 0; s < num_seeds; ++s) {
    CounterRng rng(rng_seed, static_cast<std::uint64_t>(s));
    VectorXd seed(sys.num_vars());
    for (int i = 0; i < sys.q(); ++i) seed(i) = rng.log_uniform(0.5, 2.0);
    double kap = rng.uniform(-1.0, 1.0);
    if (std::abs(kap) < 0.05) kap = (kap >= 0 ? 0.05 : -0.05);
    seed(sys.q()) = kap;
    for (int i = 0; i < sys.n; ++i) seed(sys.q() + 1 + i) = rng.uniform(-1.0, 1.0);

    const NewtonResult nr = newton_solve(sys, seed, opts);
    if (!(nr.residual <= 1e-10)) continue;

    VectorXd r = nr.x.head(sys.q());
    if (r.minCoeff() <= 0.0) continue;
    double kappa = nr.x(sys.q());
    VectorXd w = nr.x.tail(sys.n);
    detail::canonicalize_kw(kappa, w);
    if (kappa == 0.0 || w.norm() == 0.0) continue;

    VectorXd sorted_r = r;
    std::sort(sorted_r.data(), sorted_r.data() + sorted_r.size());
    bool duplicate = false;
    for (const auto& prev : seen_sorted_r)
      if ((prev - sorted_r).lpNorm<Eigen::Infinity>() <= report.dedup_tolerance) {
        duplicate = true;
        break;
      }
    if (duplicate) continue;
    seen_sorted_r.push_back(sorted_r);

    XmSolution sol;
    sol.r = r;
    sol.kappa = kappa;
    sol.w = w;
    sol.residual = nr.residual;
    try {
      DistanceVector dv(sys.n, std::vector<double>(r.data(), r.data() + r.size()));
      sol.cm_rank_value = cm_rank(dv);
      if (sol.cm_rank_value != sys.n) continue;  // not an (n-2)-dimensional shape
      sol.points = recover_configuration(dv, sys.n - 2);
      sol.cert = certify(sol.points, sys.masses, a);
      if (!sol.cert.central || !sol.cert.dziobek || sol.cert.dziobek->simplex) continue;
      // round trip: the certified (kappa, w) must match the solver's
      double ck = sol.cert.dziobek->kappa;
      VectorXd cw = sol.cert.dziobek->w;
      detail::canonicalize_kw(ck, cw);
      const double kw_dev = std::max(std::abs(ck - kappa) / std::max(1.0, std::abs(kappa)),
                                     (cw - w).lpNorm<Eigen::Infinity>());
      if (kw_dev > 1e-6) continue;
      const auto lifted = lift_point(sol.points, sys.masses, a);
      sol.jacobian_rank_at_lift = jacobian_rank(lifted.first).rank;
      sol.classification = "certified_dziobek";
    } catch (const Error&) {
      continue;  // unrealizable or otherwise rejected branch
    }
    report.solutions.push_back(std::move(sol));
  }
  return report;
}

}  // namespace cencon
