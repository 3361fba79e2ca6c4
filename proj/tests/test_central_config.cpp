#include <catch2/catch_amalgamated.hpp>

#include "cencon/central_config.hpp"
#include "cencon/solver.hpp"
#include "oracles.hpp"

using namespace cencon;

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// equal-mass unit square reference data
const double kSquareLambda = 2.0 + 1.0 / kSqrt2;            // fitted multiplier, two_a = -3
const double kSquareKappa = (std::pow(2.0, -1.5) - 1) / 2;  // S_ij = kappa w_i w_j

}  // namespace

TEST_CASE("simplex identity: lambda = M s^{2a} certifies for all data") {
  CounterRng rng(301);
  for (int two_a : {-3, -2, -1, 1, 2, 3}) {
    const Exponent a{two_a};
    for (int rep = 0; rep < 5; ++rep) {
      const double side = rng.uniform(0.5, 2.0);
      const auto masses3 = oracle::random_masses(rng, 3);
      const auto tri = oracle::equilateral_triangle(side);
      const double lambda = masses3.total() * a.pow2a(side);
      REQUIRE(cc_residual(tri, masses3, a, lambda) < 1e-12);

      const auto masses4 = oracle::random_masses(rng, 4);
      Configuration tet = oracle::regular_simplex(4, side);
      REQUIRE(cc_residual(tet, masses4, a, masses4.total() * a.pow2a(side)) < 1e-12);
    }
  }
}

TEST_CASE("zero exponent: every configuration is central with lambda = M") {
  CounterRng rng(302);
  const auto x = oracle::random_config_in_flat(rng, 5, 3, 3);
  const auto m = oracle::random_masses(rng, 5);
  REQUIRE(cc_residual(x, m, Exponent{0}, m.total()) < 1e-14);
  REQUIRE(fit_lambda(x, m, Exponent{0}) == Catch::Approx(m.total()));
}

TEST_CASE("a perturbed triangle misfits every lambda") {
  auto tri = oracle::equilateral_triangle();
  tri.points[1](1) += 0.1;
  const Configuration x(3, 2, tri.points);
  const MassVector m({1.0, 2.0, 1.5});
  const Exponent a{-3};
  const double lambda = fit_lambda(x, m, a);
  REQUIRE(cc_residual(x, m, a, lambda) > 1e-3);
}

TEST_CASE("fit_lambda closed forms") {
  const Exponent a{-3};
  const auto tet = oracle::regular_simplex(4, 1.0);
  const MassVector m4 = MassVector::equal(4);
  REQUIRE(fit_lambda(tet, m4, a) == Catch::Approx(4.0).epsilon(1e-12));
  REQUIRE(cc_residual(tet, m4, a, 4.0) < 1e-12);

  const auto tri = oracle::equilateral_triangle(2.0);
  const MassVector m3({1.0, 2.0, 3.0});  // M = 6
  REQUIRE(fit_lambda(tri, m3, a) == Catch::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("fit_lambda on the equal-mass square") {
  REQUIRE(fit_lambda(oracle::unit_square(), MassVector::equal(4), Exponent{-3}) ==
          Catch::Approx(kSquareLambda).epsilon(1e-13));
}

TEST_CASE("cc_residual is invariant under rigid motions and tracks dilation") {
  const auto sq = oracle::unit_square();
  const MassVector m = MassVector::equal(4);
  const Exponent a{-3};
  REQUIRE(cc_residual(sq, m, a, kSquareLambda) < 1e-13);

  Eigen::Matrix2d rot;
  const double th = 0.43;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  VectorXd shift(2);
  shift << -3, 7;
  std::vector<VectorXd> pts(4);
  for (int i = 0; i < 4; ++i) pts[i] = rot * sq.points[i] + shift;
  REQUIRE(cc_residual(Configuration(4, 2, pts), m, a, kSquareLambda) < 1e-12);

  const double s = 1.7;
  const auto scaled = oracle::scaled_square(s);
  REQUIRE(cc_residual(scaled, m, a, kSquareLambda * a.pow2a(s)) < 1e-10);
}

TEST_CASE("s_matrix of the equal-mass square") {
  const auto sq = oracle::unit_square();
  const MassVector m = MassVector::equal(4);
  const Exponent a{-3};
  const SValues s = s_matrix(sq, m, a, kSquareLambda);
  // sides carry -kappa, diagonals +kappa
  REQUIRE(s(0, 1) == Catch::Approx(-kSquareKappa).epsilon(1e-12));
  REQUIRE(s(1, 2) == Catch::Approx(-kSquareKappa).epsilon(1e-12));
  REQUIRE(s(2, 3) == Catch::Approx(-kSquareKappa).epsilon(1e-12));
  REQUIRE(s(0, 3) == Catch::Approx(-kSquareKappa).epsilon(1e-12));
  REQUIRE(s(0, 2) == Catch::Approx(kSquareKappa).epsilon(1e-12));
  REQUIRE(s(1, 3) == Catch::Approx(kSquareKappa).epsilon(1e-12));
  REQUIRE(s(2, 0) == s(0, 2));  // symmetric accessor
  REQUIRE(s.eq_residual < 1e-12);
}

TEST_CASE("s_matrix vanishes on a simplex with the matching lambda") {
  const auto tri = oracle::equilateral_triangle(1.5);
  const MassVector m({2.0, 1.0, 0.5});
  const Exponent a{-3};
  const SValues s = s_matrix(tri, m, a, m.total() * a.pow2a(1.5));
  for (double v : s.s) REQUIRE(std::abs(v) < 1e-14);
  REQUIRE_THROWS_AS(s_matrix(tri, m, a, 0.0), InputError);
}

TEST_CASE("trilinear equations hold on the square, k = 2") {
  const auto sq = oracle::unit_square();
  const MassVector m = MassVector::equal(4);
  REQUIRE(trilinear_residual(sq, m, Exponent{-3}, 2) < 1e-12);
  // the single instance worked out by hand: j = body 0, subset {1, 2}
  const SValues s = s_matrix(sq, m, Exponent{-3}, kSquareLambda);
  const double term = -m.m[1] * s(1, 0) * signed_minor(sq, {2}) +
                      m.m[2] * s(2, 0) * signed_minor(sq, {1});
  REQUIRE(std::abs(term) < 1e-14);
}

TEST_CASE("trilinear equations hold on the Euler collinear configuration") {
  const MassVector m({1.0, 2.0, 3.0});
  const Exponent a{-3};
  const auto euler = moulton_collinear(m, a, {0, 1, 2});
  REQUIRE(trilinear_residual(euler, m, a, 2) < 1e-8);
}

TEST_CASE("trilinear equations with k = 3 on the certified regular pentagon") {
  const auto pent = oracle::regular_polygon(5);
  const MassVector m = MassVector::equal(5);
  const Exponent a{-3};
  const double lambda = fit_lambda(pent, m, a);
  REQUIRE(cc_residual(pent, m, a, lambda) < 1e-12);  // gate: certificate exists
  REQUIRE(config_dimension(pent) == 2);              // n-3 for five bodies
  REQUIRE(trilinear_residual(pent, m, a, 3) < 1e-8);
}

TEST_CASE("trilinear residual flags a non-central square") {
  auto sq = oracle::unit_square();
  sq.points[2](0) += 0.15;
  const Configuration x(4, 2, sq.points);
  REQUIRE(trilinear_residual(x, MassVector::equal(4), Exponent{-3}, 2) > 1e-3);
}

TEST_CASE("trilinear residual enforces the dimension hypothesis") {
  REQUIRE_THROWS_AS(trilinear_residual(oracle::regular_simplex(4), MassVector::equal(4),
                                       Exponent{-3}, 2),
                    DimensionError);
}

TEST_CASE("dziobek data of the equal-mass square") {
  const auto dz = dziobek_data(oracle::unit_square(), MassVector::equal(4), Exponent{-3});
  REQUIRE_FALSE(dz.simplex);
  VectorXd expected_w(4);
  expected_w << -1, 1, -1, 1;
  REQUIRE((dz.w - expected_w).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE(dz.kappa == Catch::Approx(kSquareKappa).epsilon(1e-10));
  REQUIRE(dz.lambda == Catch::Approx(kSquareLambda).epsilon(1e-12));
  REQUIRE(dz.r0_pow == Catch::Approx(kSquareLambda / 4.0).epsilon(1e-12));
  REQUIRE(dz.r0.has_value());
  REQUIRE(*dz.r0 == Catch::Approx(std::pow(kSquareLambda / 4.0, -1.0 / 3.0)).epsilon(1e-12));
  REQUIRE(ipow(*dz.r0, -3) == Catch::Approx(dz.r0_pow).epsilon(1e-12));
}

TEST_CASE("dziobek data of a simplex reports the vanishing-S special case") {
  const auto dz = dziobek_data(oracle::equilateral_triangle(), MassVector::equal(3), Exponent{-3});
  REQUIRE(dz.simplex);
  REQUIRE(dz.kappa == 0.0);
  REQUIRE(dz.w.norm() == 0.0);
  // the zero exponent degenerates the same way at dimension n-2
  const auto dz0 = dziobek_data(oracle::unit_square(), MassVector::equal(4), Exponent{0});
  REQUIRE(dz0.simplex);
}

TEST_CASE("dziobek data of the Euler collinear configuration") {
  const MassVector m({1.0, 2.0, 3.0});
  const Exponent a{-3};
  const auto euler = moulton_collinear(m, a, {0, 1, 2});
  const auto dz = dziobek_data(euler, m, a);
  REQUIRE_FALSE(dz.simplex);
  REQUIRE(dz.kappa != 0.0);
  const SValues s = s_matrix(euler, m, a, dz.lambda);
  double smax = 0.0;
  for (double v : s.s) smax = std::max(smax, std::abs(v));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      REQUIRE(std::abs(s(i, j) - dz.kappa * dz.w(i) * dz.w(j)) < 1e-8 * smax);
}

TEST_CASE("dziobek data rejects non-central and wrongly-dimensioned input") {
  auto sq = oracle::unit_square();
  sq.points[0](0) -= 0.2;
  REQUIRE_THROWS_AS(dziobek_data(Configuration(4, 2, sq.points), MassVector::equal(4),
                                 Exponent{-3}),
                    CertificationError);
  // central but dimension n-1 with nonvanishing S cannot arise; a plain
  // tetrahedron is central (simplex) and must take the simplex path
  REQUIRE(dziobek_data(oracle::regular_simplex(4), MassVector::equal(4), Exponent{-3}).simplex);
}

TEST_CASE("alpha factorization on the square") {
  const auto sq = oracle::unit_square();
  const double alpha = alpha_from_cofactors(sq, MassVector::equal(4));
  REQUIRE(alpha != 0.0);
  const VectorXd lifted = kernel_lift(sq, kernel_vector(sq));
  const MatrixXd cof = cofactor_matrix(cm_matrix(mutual_distances(sq)).entries);
  double fmax = cof.cwiseAbs().maxCoeff();
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j)
      REQUIRE(std::abs(cof(i, j) - alpha * lifted(i) * lifted(j)) < 1e-10 * fmax);
  // the cofactor matrix itself has numerical rank one
  REQUIRE(numerical_rank(cof) == 1);
  // diagonal signs follow alpha
  for (int i = 0; i <= 4; ++i)
    if (std::abs(lifted(i)) > 1e-12) REQUIRE(cof(i, i) * alpha >= 0.0);
}

TEST_CASE("alpha factorization on the collinear three-body case") {
  const MassVector m({1.0, 2.0, 3.0});
  const auto euler = moulton_collinear(m, Exponent{-3}, {0, 1, 2});
  const double alpha = alpha_from_cofactors(euler, m);
  const VectorXd lifted = kernel_lift(euler, kernel_vector(euler));
  const MatrixXd cof = cofactor_matrix(cm_matrix(mutual_distances(euler)).entries);
  const double fmax = cof.cwiseAbs().maxCoeff();
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j)
      REQUIRE(std::abs(cof(i, j) - alpha * lifted(i) * lifted(j)) < 1e-8 * fmax);
}

TEST_CASE("alpha requires dimension n-2") {
  REQUIRE_THROWS_AS(alpha_from_cofactors(oracle::regular_simplex(4), MassVector::equal(4)),
                    DimensionError);
}

TEST_CASE("certify assembles the full report") {
  const auto rep = certify(oracle::unit_square(), MassVector::equal(4), Exponent{-3});
  REQUIRE(rep.central);
  REQUIRE(rep.dimension == 2);
  REQUIRE(rep.residual < 1e-12);
  REQUIRE(rep.lambda == Catch::Approx(kSquareLambda));
  REQUIRE(rep.dziobek.has_value());
  REQUIRE(rep.alpha.has_value());

  auto bad = oracle::unit_square();
  bad.points[0](1) += 0.3;
  const auto rep2 = certify(Configuration(4, 2, bad.points), MassVector::equal(4), Exponent{-3});
  REQUIRE_FALSE(rep2.central);
}
