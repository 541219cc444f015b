#include "midlmc/adaptive.hpp"

#include <chrono>
#include <cmath>

#include "midlmc/math_util.hpp"

namespace midlmc {

namespace {

// Context tags keeping every stage of a run on its own streams. The
// iteration index is folded in so each re-estimation draws fresh samples.
constexpr std::uint64_t kSaltInitialQoi = 1;
constexpr std::uint64_t kSaltVarianceSeed = 2;
constexpr std::uint64_t kSaltIteration = 16; // + iteration count

StreamKey pilot_key(std::uint64_t master_seed, std::uint64_t salt) {
  return StreamKey{master_seed, StreamRole::pilot, MultiIndex{}, 0, 0, salt};
}

double measured_variance_sum(
    const std::map<MultiIndex, MixedDiffStats>& per_alpha) {
  double s = 0.0;
  for (const auto& [a, st] : per_alpha) s += estimator_variance(st);
  return s;
}

} // namespace

std::map<MultiIndex, VarianceEntry> extrapolate_variances(
    const std::map<MultiIndex, VarianceEntry>& seed, const RateSet& rates,
    const IndexSet& target) {
  const double tau = static_cast<double>(rates.tau);
  const double tw1 = std::pow(tau, rates.w1), tw2 = std::pow(tau, rates.w2);
  const double ts1 = std::pow(tau, rates.s1), ts2 = std::pow(tau, rates.s2);

  std::map<MultiIndex, VarianceEntry> out;
  auto lookup = [&](MultiIndex a) -> const VarianceEntry& {
    const auto it = out.find(a);
    if (it == out.end()) {
      throw SolverError(
          "extrapolate_variances: missing predecessor; target set must be "
          "downward closed");
    }
    return it->second;
  };

  // members are sorted lexicographically; predecessors of (a1,a2) in the
  // recursion have smaller a1 or smaller a2, so this order suffices.
  for (const MultiIndex& a : target.members) {
    const auto seeded = seed.find(a);
    if (seeded != seed.end()) {
      out[a] = seeded->second;
      continue;
    }
    VarianceEntry v;
    if (a.a1 <= 1) {
      const auto& p1 = lookup(MultiIndex{a.a1, a.a2 - 1});
      const auto& p2 = lookup(MultiIndex{a.a1, a.a2 - 2});
      v.V1 = std::max(p1.V1 / tw2, p2.V1 / (tw2 * tw2));
      v.V2 = std::max(p1.V2 / ts2, p2.V2 / (ts2 * ts2));
    } else if (a.a2 <= 1) {
      const auto& p1 = lookup(MultiIndex{a.a1 - 1, a.a2});
      const auto& p2 = lookup(MultiIndex{a.a1 - 2, a.a2});
      v.V1 = std::max(p1.V1 / tw1, p2.V1 / (tw1 * tw1));
      v.V2 = std::max(p1.V2 / ts1, p2.V2 / (ts1 * ts1));
    } else {
      const auto& pt = lookup(MultiIndex{a.a1, a.a2 - 1});
      const auto& pp = lookup(MultiIndex{a.a1 - 1, a.a2});
      v.V1 = std::max(pt.V1 / tw2, pp.V1 / tw1);
      v.V2 = std::max(pt.V2 / ts2, pp.V2 / ts1);
    }
    out[a] = v;
  }
  return out;
}

namespace {

// Shared driver for the multi-index and multilevel estimators; the two
// differ in how the index family grows and in the coupled quantity.
struct DriverState {
  std::map<MultiIndex, MixedDiffStats> per_alpha;
  double qoi = 0.0;
  double total_cost = 0.0;
};

} // namespace

EstimatorReport run_adaptive(const ModelSpec& model, const Hierarchy& h,
                             const ControlField* control, const Observable& obs,
                             const RateSet& rates, double tol_r, double theta,
                             double nu, const AdaptiveOptions& options,
                             std::uint64_t master_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  h.validate();
  if (!(tol_r > 0.0)) throw ConfigError("run_adaptive: tol_r must be > 0");
  if (!(theta > 0.0 && theta < 1.0)) {
    throw ConfigError("run_adaptive: theta must lie in (0,1)");
  }
  const Weights weights = compute_weights(rates);
  if (!weights.admissible) {
    throw ConfigError("run_adaptive: rates violate the admissibility bounds");
  }

  EstimatorReport rep;
  rep.mode = "multi-index";
  rep.tol_r = tol_r;
  rep.theta = theta;
  rep.nu = nu;
  rep.seed = master_seed;

  DriverState st;

  // Initial quantity estimate at the origin.
  {
    const MixedDiffStats s0 = estimate_stats(
        model, h, MultiIndex{0, 0}, control, obs, options.pilot.Mbar1,
        options.pilot.Mbar2, pilot_key(master_seed, kSaltInitialQoi));
    st.qoi = s0.mean;
    st.total_cost += s0.model_cost;
  }

  // Variance seeding on the full {0,1,2}^2 block.
  std::map<MultiIndex, VarianceEntry> seed_var;
  for (int a1 = 0; a1 <= 2; ++a1) {
    for (int a2 = 0; a2 <= 2; ++a2) {
      const MixedDiffStats s = estimate_stats(
          model, h, MultiIndex{a1, a2}, control, obs, options.pilot.Mtilde1,
          options.pilot.Mtilde2, pilot_key(master_seed, kSaltVarianceSeed));
      seed_var[MultiIndex{a1, a2}] = VarianceEntry{s.V1, s.V2};
      st.total_cost += s.model_cost;
    }
  }

  if (!(options.l_growth_factor > 1.0)) {
    throw ConfigError("run_adaptive: level growth factor must exceed 1");
  }
  const double bias_target = (1.0 - theta) * tol_r;
  double L = options.l_start;
  std::size_t prev_size = 0;
  int iter = 0;
  for (int trips = 0; trips < 100000; ++trips) {
    IndexSet set = build_index_set(weights.delta_bar, weights.delta_bbar, L);
    if (set.members.size() == prev_size) {
      L *= options.l_growth_factor; // level too small to admit a new index
      continue;
    }
    prev_size = set.members.size();
    if (++iter > options.max_iterations) break;

    const auto vmap = extrapolate_variances(seed_var, rates, set);
    Allocation alloc =
        optimal_samples(vmap, h, tol_r, theta, nu, st.qoi);

    const double planned = work_model(alloc, h);
    if (st.total_cost + planned > options.budget_cap) {
      rep.converged = false;
      rep.index_set = std::move(set);
      rep.allocation = std::move(alloc);
      rep.alloc_variances = vmap;
      break;
    }

    // Re-estimate every index with this iteration's fresh streams.
    st.per_alpha.clear();
    double qoi_new = 0.0;
    for (const auto& e : alloc.entries) {
      const MixedDiffStats s = estimate_stats(
          model, h, e.alpha, control, obs, e.M1, e.M2,
          pilot_key(master_seed, kSaltIteration + static_cast<std::uint64_t>(iter)));
      st.per_alpha[e.alpha] = s;
      st.total_cost += s.model_cost;
      qoi_new += s.mean;
    }
    st.qoi = qoi_new;

    double boundary_mass = 0.0;
    for (const MultiIndex& a : boundary(set)) {
      boundary_mass += std::fabs(st.per_alpha.at(a).mean);
    }
    if (st.qoi == 0.0) {
      throw ConfigError("run_adaptive: quantity estimate hit zero");
    }
    const double eps_b = boundary_mass / std::fabs(st.qoi);

    rep.iterations = iter;
    rep.final_L = L;
    rep.index_set = std::move(set);
    rep.allocation = std::move(alloc);
    rep.alloc_variances = vmap;
    rep.rel_bias_est = eps_b;
    rep.rel_stat_err_est = confidence_constant(nu) *
                           std::sqrt(measured_variance_sum(st.per_alpha)) /
                           std::fabs(st.qoi);
    if (eps_b <= bias_target) {
      rep.converged = true;
      break;
    }
    L *= options.l_growth_factor;
  }

  rep.estimate = st.qoi;
  rep.per_alpha = std::move(st.per_alpha);
  rep.total_model_cost = st.total_cost;
  rep.allocation_model_cost = work_model(rep.allocation, h);
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

EstimatorReport run_multilevel(const ModelSpec& model, const Hierarchy& h,
                               const ControlField* control,
                               const Observable& obs,
                               const RateSet& /*rates: levels are measured
                               directly, no extrapolation on the diagonal*/,
                               double tol_r, double theta, double nu,
                               const AdaptiveOptions& options,
                               std::uint64_t master_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  h.validate();
  if (!(tol_r > 0.0)) throw ConfigError("run_multilevel: tol_r must be > 0");

  EstimatorReport rep;
  rep.mode = "multilevel";
  rep.tol_r = tol_r;
  rep.theta = theta;
  rep.nu = nu;
  rep.seed = master_seed;

  DriverState st;
  {
    const MixedDiffStats s0 = estimate_stats(
        model, h, MultiIndex{0, 0}, control, obs, options.pilot.Mbar1,
        options.pilot.Mbar2, pilot_key(master_seed, kSaltInitialQoi),
        true, Quantity::level_difference);
    st.qoi = s0.mean;
    st.total_cost += s0.model_cost;
  }

  std::map<MultiIndex, VarianceEntry> level_var;
  auto ensure_level_var = [&](int level) {
    const MultiIndex a{level, level};
    if (level_var.count(a)) return;
    const MixedDiffStats s = estimate_stats(
        model, h, a, control, obs, options.pilot.Mtilde1,
        options.pilot.Mtilde2, pilot_key(master_seed, kSaltVarianceSeed), true,
        Quantity::level_difference);
    level_var[a] = VarianceEntry{s.V1, s.V2};
    st.total_cost += s.model_cost;
  };

  const double bias_target = (1.0 - theta) * tol_r;
  for (int top = 0, iter = 1; iter <= options.max_iterations; ++iter, ++top) {
    for (int l = 0; l <= top; ++l) ensure_level_var(l);

    std::map<MultiIndex, VarianceEntry> vmap;
    for (int l = 0; l <= top; ++l) {
      vmap[MultiIndex{l, l}] = level_var.at(MultiIndex{l, l});
    }
    Allocation alloc = optimal_samples(vmap, h, tol_r, theta, nu, st.qoi);

    const double planned = work_model(alloc, h);
    if (st.total_cost + planned > options.budget_cap) {
      rep.converged = false;
      rep.allocation = std::move(alloc);
      rep.alloc_variances = vmap;
      break;
    }

    st.per_alpha.clear();
    double qoi_new = 0.0;
    for (const auto& e : alloc.entries) {
      const MixedDiffStats s = estimate_stats(
          model, h, e.alpha, control, obs, e.M1, e.M2,
          pilot_key(master_seed, kSaltIteration + static_cast<std::uint64_t>(iter)),
          true, Quantity::level_difference);
      st.per_alpha[e.alpha] = s;
      st.total_cost += s.model_cost;
      qoi_new += s.mean;
    }
    st.qoi = qoi_new;
    if (st.qoi == 0.0) {
      throw ConfigError("run_multilevel: quantity estimate hit zero");
    }

    const double eps_b =
        std::fabs(st.per_alpha.at(MultiIndex{top, top}).mean) /
        std::fabs(st.qoi);

    rep.iterations = iter;
    rep.final_L = static_cast<double>(top);
    rep.allocation = std::move(alloc);
    rep.alloc_variances = vmap;
    rep.rel_bias_est = eps_b;
    rep.rel_stat_err_est = confidence_constant(nu) *
                           std::sqrt(measured_variance_sum(st.per_alpha)) /
                           std::fabs(st.qoi);
    IndexSet diag;
    diag.level = static_cast<double>(top);
    for (int l = 0; l <= top; ++l) diag.members.push_back(MultiIndex{l, l});
    rep.index_set = std::move(diag);
    if (eps_b <= bias_target) {
      rep.converged = true;
      break;
    }
  }

  rep.estimate = st.qoi;
  rep.per_alpha = std::move(st.per_alpha);
  rep.total_model_cost = st.total_cost;
  rep.allocation_model_cost = work_model(rep.allocation, h);
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

SingleLevelResult run_dlmc_single(const ModelSpec& model, long P, long N,
                                  long M1, long M2,
                                  const ControlField* control,
                                  const Observable& obs,
                                  std::uint64_t master_seed) {
  Hierarchy fixed{P, N, 2};
  const StreamKey base{master_seed, StreamRole::pilot, MultiIndex{}, 0, 0,
                       0xD1C0};
  const MixedDiffStats s =
      estimate_stats(model, fixed, MultiIndex{0, 0}, control, obs, M1, M2,
                     base, true, Quantity::single_level);
  SingleLevelResult r;
  r.estimate = s.mean;
  r.stat_err = std::sqrt(estimator_variance(s));
  r.stats = s;
  return r;
}

} // namespace midlmc
