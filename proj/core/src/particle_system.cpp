#include "midlmc/particle_system.hpp"

#include <cmath>

namespace midlmc {

double interaction_mean(const std::function<double(double, double)>& kernel,
                        double x, std::span<const double> law_slice) {
  double s = 0.0;
  for (double y : law_slice) s += kernel(x, y);
  return s / static_cast<double>(law_slice.size());
}

double law_model_cost(long P, long N) {
  return static_cast<double>(N) * static_cast<double>(P) *
         static_cast<double>(P);
}

EmpiricalLaw simulate_law(const ModelSpec& model, const NoiseBundle& bundle,
                          long P, long N) {
  model.require_dim1("simulate_law");
  if (P < 1 || P > bundle.P) {
    throw ConfigError("simulate_law: bundle provides fewer than P particles");
  }
  if (N < 1 || bundle.n_fine % N != 0) {
    throw ConfigError("simulate_law: bundle n_fine not divisible by N");
  }
  const long factor = bundle.n_fine / N;
  const double dt = model.horizon / static_cast<double>(N);
  const bool has_xi = !bundle.params.empty();
  const bool sine_kernel = model.kernel1_kind == KernelKind::sine_difference;
  const bool zero_k1 = model.kernel1_kind == KernelKind::zero;
  const bool zero_k2 = model.kernel2_kind == KernelKind::zero;
  const bool simple_drift = model.drift_kind == DriftKind::param_plus_interaction;
  const bool const_sigma = model.diffusion_kind == DiffusionKind::constant;

  EmpiricalLaw law;
  law.P = P;
  law.N = N;
  law.horizon = model.horizon;
  law.states.resize(static_cast<std::size_t>(N + 1) * P);
  if (sine_kernel) {
    law.mean_sin.resize(N + 1);
    law.mean_cos.resize(N + 1);
  }

  std::copy(bundle.initials.begin(), bundle.initials.begin() + P,
            law.states.begin());

  std::vector<double> sins, coss, k1s, k2s;
  if (sine_kernel) {
    sins.resize(P);
    coss.resize(P);
  }
  if (!sine_kernel && !zero_k1) k1s.resize(P);
  if (!zero_k2) k2s.resize(P);

  for (long n = 0; n <= N; ++n) {
    const double* x = law.states.data() + n * P;

    double ms = 0.0, mc = 0.0;
    if (sine_kernel) {
      double ss = 0.0, sc = 0.0;
      for (long p = 0; p < P; ++p) {
        sins[p] = std::sin(x[p]);
        coss[p] = std::cos(x[p]);
        ss += sins[p];
        sc += coss[p];
      }
      ms = ss / static_cast<double>(P);
      mc = sc / static_cast<double>(P);
      law.mean_sin[n] = ms;
      law.mean_cos[n] = mc;
    }
    if (n == N) break;

    // Kernel means against the current slice (self-interaction included).
    std::span<const double> slice{x, static_cast<std::size_t>(P)};
    if (!sine_kernel && !zero_k1) {
      for (long p = 0; p < P; ++p) {
        k1s[p] = interaction_mean(model.kernel1, x[p], slice);
      }
    }
    if (!zero_k2) {
      for (long p = 0; p < P; ++p) {
        k2s[p] = interaction_mean(model.kernel2, x[p], slice);
      }
    }

    double* xn = law.states.data() + (n + 1) * P;
    double finite_probe = 0.0;
    for (long p = 0; p < P; ++p) {
      double k1 = 0.0;
      if (sine_kernel) {
        k1 = sins[p] * mc - coss[p] * ms;
      } else if (!zero_k1) {
        k1 = k1s[p];
      }
      const double xi = has_xi ? bundle.params[p] : 0.0;
      const double b = simple_drift ? xi + k1 : model.drift(x[p], k1, xi);
      const double k2 = zero_k2 ? 0.0 : k2s[p];
      const double sg =
          const_sigma ? model.constant_diffusion : model.diffusion(x[p], k2);

      double dw = 0.0;
      const double* inc = bundle.wiener.data() + p * bundle.n_fine + n * factor;
      for (long j = 0; j < factor; ++j) dw += inc[j];

      xn[p] = x[p] + b * dt + sg * dw;
      finite_probe += xn[p];
    }
    if (!std::isfinite(finite_probe)) {
      throw SimulationDiverged("simulate_law: non-finite particle state", n);
    }
  }
  return law;
}

} // namespace midlmc
