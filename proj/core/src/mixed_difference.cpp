#include "midlmc/mixed_difference.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "midlmc/parallel.hpp"

namespace midlmc {

namespace {

// Stream keys for the outer (law) and inner (path) loops. The caller's role
// and salt are folded into the derived salt so different contexts (pilot,
// adaptive round r, ...) never reuse a stream.
std::uint64_t context_salt(const StreamKey& base) {
  return base.salt * 16 + static_cast<std::uint64_t>(base.role);
}

StreamKey outer_key(const StreamKey& base, MultiIndex alpha, std::uint64_t m1) {
  return StreamKey{base.master_seed, StreamRole::outer_law, alpha, m1, 0,
                   context_salt(base)};
}

StreamKey inner_key(const StreamKey& base, MultiIndex alpha, std::uint64_t m1,
                    std::uint64_t m2) {
  return StreamKey{base.master_seed, StreamRole::inner_path, alpha, m1, m2,
                   context_salt(base)};
}

double observe(const Observable& obs, const PathResult& r) {
  return obs.eval(r.terminal) * r.likelihood;
}

} // namespace

CornerLaws build_corner_laws(const ModelSpec& model, const Hierarchy& h,
                             MultiIndex alpha, const NoiseBundle& bundle,
                             bool antithetic, Quantity quantity) {
  h.validate();
  if (alpha.a1 < 0 || alpha.a2 < 0) {
    throw ConfigError("build_corner_laws: alpha must be componentwise >= 0");
  }
  const long Pf = h.particles(alpha.a1);
  const long Nf = h.steps(alpha.a2);
  if (bundle.P != Pf || bundle.n_fine != Nf) {
    throw ConfigError("build_corner_laws: bundle not drawn at (P_a1, N_a2)");
  }

  CornerLaws c;
  c.alpha = alpha;
  c.tau = h.tau;
  c.quantity = quantity;
  c.antithetic = antithetic;
  c.fine = simulate_law(model, bundle, Pf, Nf);
  if (quantity == Quantity::single_level) return c;

  if (quantity == Quantity::level_difference) {
    // Diagonal coupling: the only backward corner is (a1-1, a2-1).
    if (alpha.a1 != alpha.a2) {
      throw ConfigError("build_corner_laws: level difference needs a1 == a2");
    }
    if (alpha.a1 > 0) {
      const long keep = antithetic ? h.tau : 1;
      const long Pc = h.particles(alpha.a1 - 1);
      const long Nc = h.steps(alpha.a2 - 1);
      auto groups = split_groups(bundle, h.tau);
      for (long a = 0; a < keep; ++a) {
        c.coarse_pt.push_back(simulate_law(model, groups[a], Pc, Nc));
      }
    }
    return c;
  }

  const bool diff_p = alpha.a1 > 0;
  const bool diff_t = alpha.a2 > 0;
  std::vector<NoiseBundle> groups;
  if (diff_p) {
    groups = split_groups(bundle, h.tau);
    const long keep = antithetic ? h.tau : 1;
    const long Pc = h.particles(alpha.a1 - 1);
    for (long a = 0; a < keep; ++a) {
      c.coarse_p.push_back(simulate_law(model, groups[a], Pc, Nf));
    }
  }
  if (diff_t) {
    const long Nc = h.steps(alpha.a2 - 1);
    c.coarse_t = simulate_law(model, bundle, Pf, Nc);
    if (diff_p) {
      const long keep = antithetic ? h.tau : 1;
      const long Pc = h.particles(alpha.a1 - 1);
      for (long a = 0; a < keep; ++a) {
        c.coarse_pt.push_back(simulate_law(model, groups[a], Pc, Nc));
      }
    }
  }
  return c;
}

double coupled_sample(const ModelSpec& model, const CornerLaws& corners,
                      const ControlField* control, const Observable& obs,
                      const PathNoise& noise) {
  const long Nf = corners.fine.N;
  if (noise.n_fine != Nf) {
    throw ConfigError("coupled_sample: path noise not at N_a2");
  }

  const double g_ff =
      observe(obs, simulate_decoupled(model, corners.fine, control, noise, Nf));
  if (corners.quantity == Quantity::single_level) return g_ff;

  if (corners.quantity == Quantity::level_difference) {
    double value = g_ff;
    if (!corners.coarse_pt.empty()) {
      const long Nc = corners.coarse_pt.front().N;
      const PathNoise coarse = coarsen_path_noise(noise, Nf / Nc);
      double s = 0.0;
      for (const auto& law : corners.coarse_pt) {
        s += observe(obs, simulate_decoupled(model, law, control, coarse, Nc));
      }
      value -= s / static_cast<double>(corners.coarse_pt.size());
    }
    return value;
  }

  double value = g_ff;
  if (!corners.coarse_p.empty()) {
    double s = 0.0;
    for (const auto& law : corners.coarse_p) {
      s += observe(obs, simulate_decoupled(model, law, control, noise, Nf));
    }
    value -= s / static_cast<double>(corners.coarse_p.size());
  }
  if (corners.coarse_t) {
    const long Nc = corners.coarse_t->N;
    const PathNoise coarse = coarsen_path_noise(noise, Nf / Nc);
    value -= observe(
        obs, simulate_decoupled(model, *corners.coarse_t, control, coarse, Nc));
    if (!corners.coarse_pt.empty()) {
      double s = 0.0;
      for (const auto& law : corners.coarse_pt) {
        s += observe(obs, simulate_decoupled(model, law, control, coarse, Nc));
      }
      value += s / static_cast<double>(corners.coarse_pt.size());
    }
  }
  return value;
}

double sample_mixed_difference(const ModelSpec& model, const Hierarchy& h,
                               MultiIndex alpha, const ControlField* control,
                               const Observable& obs,
                               const StreamKey& key_outer,
                               const StreamKey& key_inner, bool antithetic) {
  const NoiseBundle bundle =
      draw_bundle(key_outer, model, h.particles(alpha.a1), h.steps(alpha.a2));
  const CornerLaws corners =
      build_corner_laws(model, h, alpha, bundle, antithetic);
  const PathNoise noise =
      draw_path_noise(key_inner, model, h.steps(alpha.a2));
  return coupled_sample(model, corners, control, obs, noise);
}

double corner_value_shared(const ModelSpec& model, const Hierarchy& h, int i,
                           int j, const NoiseBundle& top_bundle,
                           const PathNoise& top_noise,
                           const ControlField* control, const Observable& obs) {
  const long P = h.particles(i);
  const long N = h.steps(j);
  const NoiseBundle restricted = restrict_bundle(top_bundle, P, N);
  const EmpiricalLaw law = simulate_law(model, restricted, P, N);
  const PathNoise noise = coarsen_path_noise(top_noise, top_noise.n_fine / N);
  return observe(obs, simulate_decoupled(model, law, control, noise, N));
}

double estimator_variance(const MixedDiffStats& s) {
  return s.V1 / static_cast<double>(s.m1_used) +
         s.V2 / (static_cast<double>(s.m1_used) *
                 static_cast<double>(s.m2_used));
}

MixedDiffStats estimate_stats(const ModelSpec& model, const Hierarchy& h,
                              MultiIndex alpha, const ControlField* control,
                              const Observable& obs, long M1, long M2,
                              const StreamKey& base_key, bool antithetic,
                              Quantity quantity) {
  if (M1 < 1 || M2 < 1) {
    throw ConfigError("estimate_stats: M1 and M2 must be >= 1");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const long Pf = h.particles(alpha.a1);
  const long Nf = h.steps(alpha.a2);

  std::vector<double> inner_mean(M1), inner_var(M1);
  parallel_for(static_cast<std::size_t>(M1), [&](std::size_t m1) {
    const NoiseBundle bundle =
        draw_bundle(outer_key(base_key, alpha, m1), model, Pf, Nf);
    const CornerLaws corners =
        build_corner_laws(model, h, alpha, bundle, antithetic, quantity);

    // Welford accumulation: inner values can cluster tightly around a
    // nonzero mean under a good control, which sum-of-squares would cancel.
    double mean = 0.0, m2acc = 0.0;
    for (long m2 = 0; m2 < M2; ++m2) {
      const PathNoise noise =
          draw_path_noise(inner_key(base_key, alpha, m1, m2), model, Nf);
      const double v = coupled_sample(model, corners, control, obs, noise);
      const double d = v - mean;
      mean += d / static_cast<double>(m2 + 1);
      m2acc += d * (v - mean);
    }
    inner_mean[m1] = mean;
    inner_var[m1] = M2 > 1 ? m2acc / static_cast<double>(M2 - 1) : 0.0;
  });

  double grand = 0.0;
  for (long i = 0; i < M1; ++i) grand += inner_mean[i];
  grand /= static_cast<double>(M1);

  double v1 = 0.0, v2 = 0.0;
  for (long i = 0; i < M1; ++i) {
    const double d = inner_mean[i] - grand;
    v1 += d * d;
    v2 += inner_var[i];
  }
  v1 = M1 > 1 ? v1 / static_cast<double>(M1 - 1) : 0.0;
  v2 /= static_cast<double>(M1);

  MixedDiffStats s;
  s.alpha = alpha;
  s.mean = grand;
  s.v1_clamped = v1 < 0.0;
  s.v2_clamped = v2 < 0.0;
  s.V1 = std::max(v1, 0.0);
  s.V2 = std::max(v2, 0.0);
  s.m1_used = M1;
  s.m2_used = M2;
  const double m1d = static_cast<double>(M1);
  const double m2d = static_cast<double>(M2);
  const double nd = static_cast<double>(Nf);
  const double pd = static_cast<double>(Pf);
  s.model_cost = m1d * nd * pd * pd + m1d * m2d * nd * pd;
  s.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return s;
}

VarianceRatioResult variance_ratio(const ModelSpec& model, const Hierarchy& h,
                                   MultiIndex alpha,
                                   const ControlField& control,
                                   const Observable& obs, long M1, long M2,
                                   const StreamKey& base_key,
                                   Quantity quantity) {
  VarianceRatioResult r;
  r.with_is = estimate_stats(model, h, alpha, &control, obs, M1, M2, base_key,
                             true, quantity);
  r.without_is = estimate_stats(model, h, alpha, nullptr, obs, M1, M2,
                                base_key, true, quantity);
  const double denom = estimator_variance(r.without_is);
  if (denom == 0.0) {
    r.zero_denominator = true;
    r.ratio = std::numeric_limits<double>::infinity();
  } else {
    r.ratio = estimator_variance(r.with_is) / denom;
  }
  return r;
}

} // namespace midlmc
