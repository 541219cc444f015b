#pragma once

#include <optional>
#include <vector>

#include "midlmc/control.hpp"
#include "midlmc/decoupled.hpp"
#include "midlmc/model.hpp"
#include "midlmc/multi_index.hpp"
#include "midlmc/noise.hpp"
#include "midlmc/particle_system.hpp"

namespace midlmc {

/// What one coupled sample estimates: the second-order mixed difference
/// across one particle and one time refinement, the diagonal level
/// difference (both refined together; multilevel baseline), or the plain
/// quantity at the index (single-level baselines and variance ratios).
enum class Quantity {
  mixed_difference,
  level_difference,
  single_level,
};

/// Outer/inner moment statistics of the sampler at one multi-index:
/// mean of the coupled samples, variance of inner-conditional means (V1),
/// mean of inner-conditional variances (V2), and the model-cost units spent
/// (leading-corner accounting N * P^2 per law, N * P per path).
struct MixedDiffStats {
  MultiIndex alpha{};
  double mean = 0.0;
  double V1 = 0.0;
  double V2 = 0.0;
  long m1_used = 0;
  long m2_used = 0;
  double model_cost = 0.0;
  double wall_time = 0.0;
  bool v1_clamped = false;
  bool v2_clamped = false;
};

/// The empirical laws conditioning all corners of one coupled sample, all
/// driven by a single bundle drawn at the fine corner (P_{a1}, N_{a2}):
/// group laws reuse disjoint particle blocks, coarse-time laws re-simulate
/// with block-summed increments (never subsampled states).
struct CornerLaws {
  MultiIndex alpha{};
  long tau = 2;
  Quantity quantity = Quantity::mixed_difference;
  bool antithetic = true;
  EmpiricalLaw fine;
  std::vector<EmpiricalLaw> coarse_p;    // tau groups, or first group only
  std::optional<EmpiricalLaw> coarse_t;
  std::vector<EmpiricalLaw> coarse_pt;
};

/// Simulates every law a coupled sample at alpha needs. The bundle must be
/// drawn at exactly (P_{a1}, N_{a2}). With antithetic=false the backward
/// particle corner keeps only the first group (the plain coupling used by
/// the telescoping identity).
CornerLaws build_corner_laws(const ModelSpec& model, const Hierarchy& h,
                             MultiIndex alpha, const NoiseBundle& bundle,
                             bool antithetic,
                             Quantity quantity = Quantity::mixed_difference);

/// One coupled sample against prepared corner laws. The path noise must be
/// at n_fine == N_{a2}; coarse-time corners reuse it block-summed. Each
/// corner contributes G(terminal) * likelihood at its own grid.
double coupled_sample(const ModelSpec& model, const CornerLaws& corners,
                      const ControlField* control, const Observable& obs,
                      const PathNoise& noise);

/// Spec-level convenience: draw the bundle and one path from the two keys,
/// return one realization of the (antithetic or plain) mixed difference.
double sample_mixed_difference(const ModelSpec& model, const Hierarchy& h,
                               MultiIndex alpha, const ControlField* control,
                               const Observable& obs,
                               const StreamKey& key_outer,
                               const StreamKey& key_inner, bool antithetic);

/// G * likelihood at corner (i, j) when every corner in a level block is
/// derived from one shared fine bundle and one shared fine path by particle
/// prefixing and increment coarsening. Plain mixed differences built from
/// restrictions of the same bundle telescope exactly through these values.
double corner_value_shared(const ModelSpec& model, const Hierarchy& h, int i,
                           int j, const NoiseBundle& top_bundle,
                           const PathNoise& top_noise,
                           const ControlField* control, const Observable& obs);

/// Double-loop moment estimation at one multi-index: M1 law draws, M2 paths
/// per law. Work items are keyed by (alpha, m1[, m2]) derived from base_key,
/// so results are identical for any worker count. Outer samples run in
/// parallel; reductions are two-pass in m1 order.
MixedDiffStats estimate_stats(const ModelSpec& model, const Hierarchy& h,
                              MultiIndex alpha, const ControlField* control,
                              const Observable& obs, long M1, long M2,
                              const StreamKey& base_key, bool antithetic = true,
                              Quantity quantity = Quantity::mixed_difference);

/// V1/M1 + V2/(M1*M2): the estimator-variance contribution of one index.
double estimator_variance(const MixedDiffStats& stats);

struct VarianceRatioResult {
  double ratio = 0.0;
  bool zero_denominator = false;
  MixedDiffStats with_is;
  MixedDiffStats without_is;
};

/// Estimator-variance ratio with / without the control, sharing stream keys
/// between the two runs.
VarianceRatioResult variance_ratio(const ModelSpec& model, const Hierarchy& h,
                                   MultiIndex alpha,
                                   const ControlField& control,
                                   const Observable& obs, long M1, long M2,
                                   const StreamKey& base_key,
                                   Quantity quantity);

} // namespace midlmc
