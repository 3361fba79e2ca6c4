// Certify the equal-mass square, print its Dziobek data, and lift it to
// the variety point used by the rank diagnostics.

#include <iostream>

#include "cencon/cencon.hpp"

using namespace cencon;

int main() {
  std::vector<VectorXd> pts(4, VectorXd(2));
  pts[0] << 0, 0;
  pts[1] << 1, 0;
  pts[2] << 1, 1;
  pts[3] << 0, 1;
  const Configuration square(4, 2, pts);
  const MassVector masses = MassVector::equal(4);
  const Exponent newtonian{-3};  // two_a = -3

  const CertificationReport rep = certify(square, masses, newtonian);
  std::cout << "central: " << (rep.central ? "yes" : "no") << "\n"
            << "lambda:  " << rep.lambda << "\n"
            << "kappa:   " << rep.dziobek->kappa << "\n"
            << "w:       " << rep.dziobek->w.transpose() << "\n";

  const auto [p, mirror] = lift_point(square, masses, newtonian);
  const JacobianRank jr = jacobian_rank(p);
  std::cout << "lift residual: " << system_residual(p).max_norm() << "\n"
            << "jacobian rank: " << jr.rank << " (local dimension bound " << jr.local_dim_upper_bound
            << ")\n";
  return rep.central ? 0 : 1;
}
