// Search the four-body equal-mass planar problem and compare the number
// of distinct shapes found against the exact counting bound.

#include <iostream>

#include "cencon/cencon.hpp"

using namespace cencon;

int main() {
  const int n = 4;
  const Exponent newtonian{-3};
  const XmSystem sys = build_xm_system(n, MassVector::equal(n), newtonian);
  const SolveReport rep = search(sys, 300, 2024);

  std::cout << "distinct certified shapes: " << rep.solutions.size() << "\n";
  for (const auto& sol : rep.solutions) {
    VectorXd sorted = sol.r;
    std::sort(sorted.data(), sorted.data() + sorted.size());
    std::cout << "  r = " << sorted.transpose() << "  (residual " << sol.residual << ")\n";
  }
  const BoundResult bound = thom_milnor_cc_bound(n, newtonian);
  std::cout << "counting bound: " << bound.value.to_string() << "\n";
  return 0;
}
