#include "midlmc/decoupled.hpp"

#include <cmath>

namespace midlmc {

PathResult simulate_decoupled(const ModelSpec& model, const EmpiricalLaw& law,
                              const ControlField* control,
                              const PathNoise& noise, long N) {
  model.require_dim1("simulate_decoupled");
  if (law.N != N) {
    throw ConfigError("simulate_decoupled: law and path grids differ");
  }
  if (N < 1 || noise.n_fine % N != 0) {
    throw ConfigError("simulate_decoupled: noise n_fine not divisible by N");
  }
  const long factor = noise.n_fine / N;
  const double dt = model.horizon / static_cast<double>(N);
  const double xi = noise.param.value_or(0.0);
  const bool sine_kernel = model.kernel1_kind == KernelKind::sine_difference;
  const bool zero_k1 = model.kernel1_kind == KernelKind::zero;
  const bool zero_k2 = model.kernel2_kind == KernelKind::zero;
  const bool simple_drift = model.drift_kind == DriftKind::param_plus_interaction;
  const bool const_sigma = model.diffusion_kind == DiffusionKind::constant;
  if (sine_kernel && law.mean_sin.empty()) {
    throw ConfigError("simulate_decoupled: law lacks circular means");
  }

  double x = noise.initial;
  double loglik = 0.0;
  double energy = 0.0;

  for (long n = 0; n < N; ++n) {
    double k1 = 0.0;
    if (sine_kernel) {
      k1 = std::sin(x) * law.mean_cos[n] - std::cos(x) * law.mean_sin[n];
    } else if (!zero_k1) {
      k1 = interaction_mean(model.kernel1, x, law.slice(n));
    }
    const double k2 =
        zero_k2 ? 0.0 : interaction_mean(model.kernel2, x, law.slice(n));
    const double b = simple_drift ? xi + k1 : model.drift(x, k1, xi);
    const double sg =
        const_sigma ? model.constant_diffusion : model.diffusion(x, k2);

    double dw = 0.0;
    const double* inc = noise.wiener.data() + n * factor;
    for (long j = 0; j < factor; ++j) dw += inc[j];

    double z = 0.0;
    if (control) {
      z = control->eval(dt * static_cast<double>(n), x);
      loglik += -0.5 * dt * z * z - dw * z;
      energy += z * z * dt;
    }

    x += (b + sg * z) * dt + sg * dw;
    if (!std::isfinite(x)) {
      throw SimulationDiverged("simulate_decoupled: non-finite state", n);
    }
  }

  PathResult r;
  r.terminal = x;
  r.likelihood = control ? std::exp(loglik) : 1.0;
  r.control_energy = energy;
  if (!(std::isfinite(r.likelihood) && r.likelihood > 0.0)) {
    throw SimulationDiverged("simulate_decoupled: invalid likelihood", N);
  }
  return r;
}

} // namespace midlmc
