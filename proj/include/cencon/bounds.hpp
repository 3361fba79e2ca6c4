#pragma once

#include "cencon/bigint.hpp"
#include "cencon/central_config.hpp"
#include "cencon/errors.hpp"
#include "cencon/pair_index.hpp"

namespace cencon {

/// Exact value of beta * (2 beta - 1)^(nvars - 1).
struct BoundResult {
  long long beta = 0;
  long long nvars = 0;
  BigUint value;
};

/// Connected-component bound for a real algebraic set cut out by
/// polynomials of degree at most max_degree in nvars variables.
inline BoundResult milnor_component_bound(long long max_degree, long long nvars) {
  if (max_degree < 1 || nvars < 1)
    throw InputError("milnor_component_bound: degree and variable count must be >= 1");
  BoundResult out;
  out.beta = max_degree;
  out.nvars = nvars;
  out.value = BigUint(static_cast<std::uint64_t>(max_degree)) *
              BigUint::pow(BigUint(static_cast<std::uint64_t>(2 * max_degree - 1)),
                           static_cast<std::uint64_t>(nvars - 1));
  return out;
}

/// Counting bound for (n-2)-dimensional central configurations with a
/// generic mass vector: beta (2 beta - 1)^(q+n) with
/// beta = max(-2a+2, 2n) for a < 0 and max(2a, 2n) for a > 0.
/// Only stated for n >= 4.
inline BoundResult thom_milnor_cc_bound(int n, Exponent a) {
  if (n < 4) throw InputError("thom_milnor_cc_bound: the bound requires n >= 4");
  if (a.two_a == 0) throw InputError("thom_milnor_cc_bound: exponent two_a must be nonzero");
  const long long beta =
      (a.two_a < 0) ? std::max<long long>(-a.two_a + 2, 2 * n) : std::max<long long>(a.two_a, 2 * n);
  const long long q = pair_count(n);
  return milnor_component_bound(beta, q + n + 1);
}

}  // namespace cencon
