#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "midlmc/model.hpp"
#include "midlmc/multi_index.hpp"
#include "midlmc/rng.hpp"

namespace midlmc {

enum class StreamRole : std::uint64_t {
  outer_law = 1,   // omega: drivers of the interacting particle system
  inner_path = 2,  // omega tilde: drivers of one decoupled path
  pilot = 3,
  control_law = 4, // the one offline law behind the IS control
};

/// Names one random stream. Identical keys reproduce identical draws;
/// distinct keys give independent streams (independent generator states
/// seeded from a 64-bit hash of the fields). Sampling order across keys is
/// irrelevant, which is what makes parallel runs reproducible.
struct StreamKey {
  std::uint64_t master_seed = 0;
  StreamRole role = StreamRole::pilot;
  MultiIndex alpha{};
  std::uint64_t m1 = 0;
  std::uint64_t m2 = 0;
  std::uint64_t salt = 0; // adaptive round / ad-hoc namespace tag

  std::uint64_t seed() const {
    std::uint64_t h = master_seed;
    auto fold = [&h](std::uint64_t v) {
      std::uint64_t s = h ^ (v + 0x9e3779b97f4a7c15ULL);
      h = splitmix64(s);
    };
    fold(static_cast<std::uint64_t>(role));
    fold(static_cast<std::uint64_t>(alpha.a1) << 32 |
         static_cast<std::uint32_t>(alpha.a2));
    fold(m1);
    fold(m2);
    fold(salt);
    return h;
  }
};

/// All randomness behind one realization of a P-particle system at the
/// finest time grid this sample will need: per particle an initial state,
/// an optional model parameter, and n_fine Wiener increments of variance
/// horizon/n_fine. Layout is per-particle contiguous so particle-prefix
/// restriction and group splitting are pure array slicing.
struct NoiseBundle {
  long P = 0;
  long n_fine = 0;
  double horizon = 0.0;
  std::vector<double> initials;  // [P]
  std::vector<double> params;    // [P], empty when the model has no xi
  std::vector<double> wiener;    // [P * n_fine], row p contiguous

  std::span<const double> increments(long p) const {
    return {wiener.data() + p * n_fine, static_cast<std::size_t>(n_fine)};
  }
};

/// Same content for a single decoupled path.
struct PathNoise {
  long n_fine = 0;
  double horizon = 0.0;
  double initial = 0.0;
  std::optional<double> param;
  std::vector<double> wiener; // [n_fine]
};

NoiseBundle draw_bundle(const StreamKey& key, const ModelSpec& model, long P,
                        long n_fine);

PathNoise draw_path_noise(const StreamKey& key, const ModelSpec& model,
                          long n_fine);

/// Sums consecutive blocks of `factor` increments; the coarse array drives
/// the same Brownian path on a grid `factor` times coarser. Exact block
/// sums, so coarsen(coarsen(x,a),b) == coarsen(x,a*b).
std::vector<double> coarsen_increments(std::span<const double> fine,
                                       long factor);

NoiseBundle coarsen_bundle(const NoiseBundle& bundle, long factor);
PathNoise coarsen_path_noise(const PathNoise& noise, long factor);

/// Splits the P particles into tau contiguous groups of P/tau, preserving
/// order; concatenating the groups reproduces the bundle exactly.
std::vector<NoiseBundle> split_groups(const NoiseBundle& bundle, long tau);

/// First P particles, increments coarsened down to n_coarse steps. The
/// nesting workhorse: every corner of a mixed difference is a restriction
/// of the same fine bundle.
NoiseBundle restrict_bundle(const NoiseBundle& bundle, long P, long n_coarse);

} // namespace midlmc
