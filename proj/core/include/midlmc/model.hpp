#pragma once

#include <functional>
#include <optional>

#include "midlmc/errors.hpp"

namespace midlmc {

/// Structure tags that let simulation loops specialize the common cases
/// without calling through std::function per step. The generic callables
/// below stay authoritative: fast paths must agree with them.
enum class DriftKind {
  generic,
  param_plus_interaction, // b(x, k1; xi) = xi + k1
};

enum class DiffusionKind {
  generic,
  constant,
};

enum class KernelKind {
  generic,
  sine_difference, // kappa(x,y) = sin(x - y)
  zero,
};

/// One-dimensional mean-field SDE with pairwise interaction kernels:
///   dX = b(X, mean kappa1(X, .)) dt + sigma(X, mean kappa2(X, .)) dW.
/// Immutable after construction; all callables must be pure, so a spec is
/// safely shared across worker threads. Only dim == 1 is implemented.
struct ModelSpec {
  int dim = 1;
  double horizon = 1.0;

  DriftKind drift_kind = DriftKind::generic;
  std::function<double(double x, double k1, double xi)> drift;

  DiffusionKind diffusion_kind = DiffusionKind::generic;
  double constant_diffusion = 0.0;
  std::function<double(double x, double k2)> diffusion;

  KernelKind kernel1_kind = KernelKind::generic;
  std::function<double(double x, double y)> kernel1;

  KernelKind kernel2_kind = KernelKind::zero;
  std::function<double(double x, double y)> kernel2;

  /// Inverse-CDF samplers: map a (0,1) uniform to a draw. Keeping the
  /// transform explicit makes every stream reproducible bit-for-bit.
  std::function<double(double u)> init_quantile;
  std::optional<std::function<double(double u)>> param_quantile;
  double param_mean = 0.0; // used by the control PDE, which fixes xi

  void validate() const {
    if (dim < 1) throw ConfigError("ModelSpec: dim must be >= 1");
    if (!(horizon > 0.0)) throw ConfigError("ModelSpec: horizon must be > 0");
    if (!drift || !diffusion || !kernel1 || !kernel2 || !init_quantile) {
      throw ConfigError("ModelSpec: all coefficient functions must be set");
    }
  }

  void require_dim1(const char* where) const {
    if (dim != 1) {
      throw UnsupportedDimension(std::string(where) +
                                 ": only dim == 1 is implemented");
    }
  }
};

/// Scalar observable G with a flag telling the IS machinery whether G keeps
/// one sign (the near-zero-variance property needs that).
struct Observable {
  std::function<double(double)> eval;
  bool sign_constant = true;
};

/// Smoothed step 0.5*(1 + tanh(3*(x - K))): strictly increasing, (0,1).
double mollified_indicator(double x, double K);

Observable make_mollified_observable(double K);
Observable make_constant_observable(double value);

/// Coupled-oscillator model: drift xi + mean sin(x - X_j), constant
/// diffusion, x0 ~ Normal(init_mean, init_sd^2), xi ~ Uniform(+-xi_halfwidth)
/// (no xi draw at all when the halfwidth is 0).
ModelSpec make_kuramoto(double sigma, double horizon, double init_mean,
                        double init_sd, double xi_halfwidth);

/// Interaction-free variant (kappa1 == 0, xi == 0): pure diffusion around
/// the drift-free flow. Used by PDE verification setups.
ModelSpec make_zero_interaction(double sigma, double horizon, double init_mean,
                                double init_sd);

} // namespace midlmc
