#include "midlmc/model.hpp"

#include <cmath>

#include "midlmc/math_util.hpp"

namespace midlmc {

double mollified_indicator(double x, double K) {
  return 0.5 * (1.0 + std::tanh(3.0 * (x - K)));
}

Observable make_mollified_observable(double K) {
  return Observable{[K](double x) { return mollified_indicator(x, K); }, true};
}

Observable make_constant_observable(double value) {
  return Observable{[value](double) { return value; }, true};
}

ModelSpec make_kuramoto(double sigma, double horizon, double init_mean,
                        double init_sd, double xi_halfwidth) {
  if (sigma < 0.0) throw ConfigError("make_kuramoto: sigma must be >= 0");
  if (init_sd < 0.0) throw ConfigError("make_kuramoto: init_sd must be >= 0");
  if (xi_halfwidth < 0.0) {
    throw ConfigError("make_kuramoto: xi_halfwidth must be >= 0");
  }

  ModelSpec m;
  m.dim = 1;
  m.horizon = horizon;
  m.drift_kind = DriftKind::param_plus_interaction;
  m.drift = [](double, double k1, double xi) { return xi + k1; };
  m.diffusion_kind = DiffusionKind::constant;
  m.constant_diffusion = sigma;
  m.diffusion = [sigma](double, double) { return sigma; };
  m.kernel1_kind = KernelKind::sine_difference;
  m.kernel1 = [](double x, double y) { return std::sin(x - y); };
  m.kernel2_kind = KernelKind::zero;
  m.kernel2 = [](double, double) { return 0.0; };
  m.init_quantile = [init_mean, init_sd](double u) {
    return init_sd == 0.0 ? init_mean
                          : init_mean + init_sd * normal_quantile(u);
  };
  if (xi_halfwidth > 0.0) {
    m.param_quantile = [xi_halfwidth](double u) {
      return xi_halfwidth * (2.0 * u - 1.0);
    };
  }
  m.param_mean = 0.0;
  m.validate();
  return m;
}

ModelSpec make_zero_interaction(double sigma, double horizon, double init_mean,
                                double init_sd) {
  ModelSpec m = make_kuramoto(sigma, horizon, init_mean, init_sd, 0.0);
  m.kernel1_kind = KernelKind::zero;
  m.kernel1 = [](double, double) { return 0.0; };
  return m;
}

} // namespace midlmc
