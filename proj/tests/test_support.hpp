#pragma once

#include <cmath>

#include "midlmc/model.hpp"
#include "midlmc/multi_index.hpp"

namespace midlmc::test {

// The oscillator study configuration used throughout the tests:
// sigma = 0.4, T = 1, x0 ~ Normal(0, variance 0.2), xi ~ Uniform(-0.2, 0.2).
inline ModelSpec paper_model() {
  return make_kuramoto(0.4, 1.0, 0.0, std::sqrt(0.2), 0.2);
}

inline Hierarchy paper_hierarchy() { return Hierarchy{5, 4, 2}; }

} // namespace midlmc::test
