#include "midlmc/noise.hpp"

#include <cmath>

namespace midlmc {

NoiseBundle draw_bundle(const StreamKey& key, const ModelSpec& model, long P,
                        long n_fine) {
  if (P < 1 || n_fine < 1) {
    throw ConfigError("draw_bundle: P and n_fine must be >= 1");
  }
  Rng rng(key.seed());
  const bool has_param = model.param_quantile.has_value();
  const double scale = std::sqrt(model.horizon / static_cast<double>(n_fine));

  NoiseBundle b;
  b.P = P;
  b.n_fine = n_fine;
  b.horizon = model.horizon;
  b.initials.resize(P);
  if (has_param) b.params.resize(P);
  b.wiener.resize(static_cast<std::size_t>(P) * n_fine);

  for (long p = 0; p < P; ++p) {
    b.initials[p] = model.init_quantile(rng.uniform());
    if (has_param) b.params[p] = (*model.param_quantile)(rng.uniform());
    double* inc = b.wiener.data() + p * n_fine;
    for (long n = 0; n < n_fine; ++n) inc[n] = scale * rng.normal();
  }
  return b;
}

PathNoise draw_path_noise(const StreamKey& key, const ModelSpec& model,
                          long n_fine) {
  if (n_fine < 1) throw ConfigError("draw_path_noise: n_fine must be >= 1");
  Rng rng(key.seed());
  const double scale = std::sqrt(model.horizon / static_cast<double>(n_fine));

  PathNoise n;
  n.n_fine = n_fine;
  n.horizon = model.horizon;
  n.initial = model.init_quantile(rng.uniform());
  if (model.param_quantile) n.param = (*model.param_quantile)(rng.uniform());
  n.wiener.resize(n_fine);
  for (long i = 0; i < n_fine; ++i) n.wiener[i] = scale * rng.normal();
  return n;
}

std::vector<double> coarsen_increments(std::span<const double> fine,
                                       long factor) {
  if (factor < 1) throw ConfigError("coarsen_increments: factor must be >= 1");
  const long n = static_cast<long>(fine.size());
  if (n % factor != 0) {
    throw ConfigError(
        "coarsen_increments: length not divisible by coarsening factor");
  }
  std::vector<double> coarse(n / factor);
  for (long k = 0; k < n / factor; ++k) {
    double s = 0.0;
    for (long j = 0; j < factor; ++j) s += fine[k * factor + j];
    coarse[k] = s;
  }
  return coarse;
}

NoiseBundle coarsen_bundle(const NoiseBundle& bundle, long factor) {
  if (factor < 1) throw ConfigError("coarsen_bundle: factor must be >= 1");
  if (bundle.n_fine % factor != 0) {
    throw ConfigError("coarsen_bundle: n_fine not divisible by factor");
  }
  NoiseBundle c;
  c.P = bundle.P;
  c.n_fine = bundle.n_fine / factor;
  c.horizon = bundle.horizon;
  c.initials = bundle.initials;
  c.params = bundle.params;
  c.wiener.resize(static_cast<std::size_t>(c.P) * c.n_fine);
  for (long p = 0; p < bundle.P; ++p) {
    auto coarse = coarsen_increments(bundle.increments(p), factor);
    std::copy(coarse.begin(), coarse.end(), c.wiener.begin() + p * c.n_fine);
  }
  return c;
}

PathNoise coarsen_path_noise(const PathNoise& noise, long factor) {
  PathNoise c;
  c.n_fine = noise.n_fine / factor;
  c.horizon = noise.horizon;
  c.initial = noise.initial;
  c.param = noise.param;
  c.wiener = coarsen_increments(noise.wiener, factor);
  return c;
}

std::vector<NoiseBundle> split_groups(const NoiseBundle& bundle, long tau) {
  if (tau < 1) throw ConfigError("split_groups: tau must be >= 1");
  if (bundle.P % tau != 0) {
    throw ConfigError("split_groups: P not divisible by tau");
  }
  const long group_size = bundle.P / tau;
  std::vector<NoiseBundle> groups;
  groups.reserve(tau);
  for (long a = 0; a < tau; ++a) {
    NoiseBundle g;
    g.P = group_size;
    g.n_fine = bundle.n_fine;
    g.horizon = bundle.horizon;
    const long lo = a * group_size;
    g.initials.assign(bundle.initials.begin() + lo,
                      bundle.initials.begin() + lo + group_size);
    if (!bundle.params.empty()) {
      g.params.assign(bundle.params.begin() + lo,
                      bundle.params.begin() + lo + group_size);
    }
    g.wiener.assign(bundle.wiener.begin() + lo * bundle.n_fine,
                    bundle.wiener.begin() + (lo + group_size) * bundle.n_fine);
    groups.push_back(std::move(g));
  }
  return groups;
}

NoiseBundle restrict_bundle(const NoiseBundle& bundle, long P, long n_coarse) {
  if (P < 1 || P > bundle.P) {
    throw ConfigError("restrict_bundle: P outside [1, bundle.P]");
  }
  if (n_coarse < 1 || bundle.n_fine % n_coarse != 0) {
    throw ConfigError("restrict_bundle: n_coarse must divide n_fine");
  }
  const long factor = bundle.n_fine / n_coarse;
  NoiseBundle r;
  r.P = P;
  r.n_fine = n_coarse;
  r.horizon = bundle.horizon;
  r.initials.assign(bundle.initials.begin(), bundle.initials.begin() + P);
  if (!bundle.params.empty()) {
    r.params.assign(bundle.params.begin(), bundle.params.begin() + P);
  }
  r.wiener.resize(static_cast<std::size_t>(P) * n_coarse);
  for (long p = 0; p < P; ++p) {
    auto coarse = coarsen_increments(bundle.increments(p), factor);
    std::copy(coarse.begin(), coarse.end(), r.wiener.begin() + p * n_coarse);
  }
  return r;
}

} // namespace midlmc
