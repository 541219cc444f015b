#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "midlmc/allocation.hpp"
#include "midlmc/control.hpp"
#include "midlmc/index_sets.hpp"
#include "midlmc/mixed_difference.hpp"

namespace midlmc {

/// Sample sizes for the driver's own pilot stages: (Mbar1, Mbar2) for the
/// initial quantity estimate at the origin, (Mtilde1, Mtilde2) for variance
/// seeding on the {0,1,2}^2 block.
struct PilotConfig {
  long Mbar1 = 1000;
  long Mbar2 = 100;
  long Mtilde1 = 25;
  long Mtilde2 = 100;
};

struct AdaptiveOptions {
  PilotConfig pilot;
  double budget_cap = 1e12; // model-cost units; exceeding flags non-convergence
  double l_start = 2.0;
  double l_growth_factor = 1.2840254166877414; // exp(1/4) per iteration
  int max_iterations = 200;
};

struct EstimatorReport {
  double estimate = 0.0;
  double tol_r = 0.0;
  double theta = 0.0;
  double nu = 0.0;
  double rel_bias_est = 0.0;
  double rel_stat_err_est = 0.0;
  double final_L = 0.0;
  IndexSet index_set;
  Allocation allocation;
  std::map<MultiIndex, VarianceEntry> alloc_variances; // values the allocation used
  std::map<MultiIndex, MixedDiffStats> per_alpha;      // final-iteration stats
  double total_model_cost = 0.0;      // all estimation work, pilots included
  double allocation_model_cost = 0.0; // cost formula on the final allocation
  double wall_time = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;
  std::string mode;
};

/// Variance extrapolation from a measured block to deeper indices: rows with
/// a1 in {0,1} extend along a2 at rate tau^-w2 (s2 for V2), columns with a2
/// in {0,1} along a1, interior indices take the max of the two one-step
/// extrapolations. Measured values are passed through untouched; the target
/// is processed in downward-closed order so predecessors always exist.
std::map<MultiIndex, VarianceEntry> extrapolate_variances(
    const std::map<MultiIndex, VarianceEntry>& seed, const RateSet& rates,
    const IndexSet& target);

/// Adaptive multi-index driver: seeds the quantity estimate and the variance
/// block, then grows the profit level set until the boundary bias estimate
/// sum_{boundary} |mean| / |G| drops below (1-theta)*tol_r, re-allocating
/// and re-estimating every index with fresh streams each iteration.
EstimatorReport run_adaptive(const ModelSpec& model, const Hierarchy& h,
                             const ControlField* control, const Observable& obs,
                             const RateSet& rates, double tol_r, double theta,
                             double nu, const AdaptiveOptions& options,
                             std::uint64_t master_seed);

/// Multilevel baseline on the diagonal (both parameters refined together,
/// antithetic in particles, coarsened in time), same allocation machinery,
/// bias from the top level. Used for cost comparisons.
EstimatorReport run_multilevel(const ModelSpec& model, const Hierarchy& h,
                               const ControlField* control,
                               const Observable& obs, const RateSet& rates,
                               double tol_r, double theta, double nu,
                               const AdaptiveOptions& options,
                               std::uint64_t master_seed);

struct SingleLevelResult {
  double estimate = 0.0;
  double stat_err = 0.0; // sqrt(V1/M1 + V2/(M1 M2))
  MixedDiffStats stats;
};

/// Plain nested estimator at fixed (P, N) with the IS likelihood.
SingleLevelResult run_dlmc_single(const ModelSpec& model, long P, long N,
                                  long M1, long M2,
                                  const ControlField* control,
                                  const Observable& obs,
                                  std::uint64_t master_seed);

} // namespace midlmc
