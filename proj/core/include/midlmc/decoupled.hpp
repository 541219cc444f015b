#pragma once

#include "midlmc/control.hpp"
#include "midlmc/model.hpp"
#include "midlmc/noise.hpp"
#include "midlmc/particle_system.hpp"

namespace midlmc {

/// Terminal state of one controlled decoupled path plus its importance
/// weight. likelihood == 1 exactly when no control is supplied.
struct PathResult {
  double terminal = 0.0;
  double likelihood = 1.0;
  double control_energy = 0.0; // sum ||zeta||^2 dt, diagnostic
};

/// Euler-Maruyama path of the decoupled SDE conditioned on one empirical
/// law at the same time grid (law.N must equal N):
///   dx = [ b(x, k1bar) + sigma(x, k2bar) * zeta(t, x) ] dt
///        + sigma(x, k2bar) dW,
/// with likelihood factor prod_n exp(-dt/2 zeta_n^2 - dW_n zeta_n), the
/// control read at the step's left endpoint. Increments finer than N are
/// block-summed on the fly.
PathResult simulate_decoupled(const ModelSpec& model, const EmpiricalLaw& law,
                              const ControlField* control,
                              const PathNoise& noise, long N);

} // namespace midlmc
