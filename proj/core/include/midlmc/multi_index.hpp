#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

#include "midlmc/errors.hpp"

namespace midlmc {

/// Discretization multi-index (particle level, time level).
struct MultiIndex {
  int a1 = 0;
  int a2 = 0;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

/// Geometric refinement hierarchy: P_{a1} = P0 * tau^a1, N_{a2} = N0 * tau^a2.
struct Hierarchy {
  long P0 = 5;
  long N0 = 4;
  int tau = 2;

  void validate() const {
    if (P0 < 1 || N0 < 1 || tau < 2) {
      throw ConfigError("hierarchy requires P0 >= 1, N0 >= 1, tau >= 2");
    }
  }

  long particles(int a1) const { return P0 * ipow(tau, a1); }
  long steps(int a2) const { return N0 * ipow(tau, a2); }

  static long ipow(long base, int exp) {
    long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
  }
};

} // namespace midlmc
