#pragma once

#include <functional>
#include <span>
#include <vector>

#include "midlmc/model.hpp"
#include "midlmc/noise.hpp"

namespace midlmc {

/// One realization of the discrete empirical law: all P particle positions
/// at the N+1 grid times t_n = n * horizon / N. For sine-difference kernels
/// the per-time circular means are precomputed so conditioning code can
/// evaluate interaction means in O(1) per query.
struct EmpiricalLaw {
  long P = 0;
  long N = 0;
  double horizon = 0.0;
  std::vector<double> states; // [(N+1) * P], time-major

  std::vector<double> mean_sin; // [N+1] when built, else empty
  std::vector<double> mean_cos;

  double state(long n, long p) const { return states[n * P + p]; }
  std::span<const double> slice(long n) const {
    return {states.data() + n * P, static_cast<std::size_t>(P)};
  }
};

/// Euler-Maruyama simulation of the interacting P-particle system using the
/// first P particles of the bundle; increments are block-summed down from
/// the bundle's grid when it is finer. The kernel mean includes j == p.
/// Throws SimulationDiverged if any state leaves the finite range.
EmpiricalLaw simulate_law(const ModelSpec& model, const NoiseBundle& bundle,
                          long P, long N);

/// Plain arithmetic mean of kernel(x, y_j) over a law slice, O(P).
double interaction_mean(const std::function<double(double, double)>& kernel,
                        double x, std::span<const double> law_slice);

/// Model-cost units of one law realization: N * P^2 (unit kernel-cost
/// exponents). Accounting stays quadratic even when the sine identity makes
/// the actual sweep linear in P.
double law_model_cost(long P, long N);

} // namespace midlmc
