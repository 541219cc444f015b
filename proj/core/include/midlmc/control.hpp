#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "midlmc/model.hpp"
#include "midlmc/particle_system.hpp"

namespace midlmc {

/// Space-time grid for the backward PDE solve, d == 1.
struct GridSpec {
  double x_min = -8.0;
  double x_max = 8.0;
  long n_cells = 1000;  // space intervals; n_cells+1 nodes
  long n_tsteps = 1000; // time intervals; n_tsteps+1 levels

  void validate() const {
    if (!(x_min < x_max)) throw ConfigError("GridSpec: x_min must be < x_max");
    if (n_cells < 8) throw ConfigError("GridSpec: n_cells must be >= 8");
    if (n_tsteps < 1) throw ConfigError("GridSpec: n_tsteps must be >= 1");
  }

  double dx() const { return (x_max - x_min) / static_cast<double>(n_cells); }
  double node(long i) const { return x_min + dx() * static_cast<double>(i); }
};

/// Backward-equation solution v(t_k, x_i) >= floor, terminal row |G|.
struct ValueField {
  GridSpec grid;
  double horizon = 0.0;
  double floor = 1e-12;
  std::vector<double> values; // [(n_tsteps+1) * (n_cells+1)], time-major

  double at(long k, long i) const {
    return values[k * (grid.n_cells + 1) + i];
  }
};

/// Gridded IS drift control with bilinear interpolation in (t, x) and
/// constant extrapolation outside the box. Nodal values are clipped to
/// [-clip, clip], and interpolation cannot leave that interval.
struct ControlField {
  GridSpec grid;
  double horizon = 0.0;
  double clip = 10.0;
  std::vector<double> zeta; // [(n_tsteps+1) * (n_cells+1)], time-major

  double eval(double t, double x) const;
};

/// Defaults mirroring the offline-control recipe.
struct ControlSolveDefaults {
  static constexpr double kFloor = 1e-12;
  static constexpr double kClip = 10.0;
};

/// Solves the linear backward equation
///   dv/dt + b(x, k1bar(t,x)) dv/dx + 1/2 sigma^2(x, k2bar(t,x)) d2v/dx2 = 0,
///   v(T, x) = |G(x)|,
/// conditioned on one empirical-law realization (kernel means against the
/// law slice nearest in time). Implicit backward Euler in reverse time,
/// upwinded first differences, central second differences, homogeneous
/// Neumann walls. The path-specific model parameter is frozen at its mean.
/// The recursion runs on raw positive values; the stored field is floored.
ValueField solve_kbe(const ModelSpec& model, const EmpiricalLaw& law,
                     const GridSpec& grid, const Observable& observable,
                     double floor_eps = ControlSolveDefaults::kFloor);

/// zeta(t,x) = sigma(x, k2bar(t,x)) * d/dx log v(t,x), centered differences
/// inside, one-sided at the walls, clipped to [-clip, clip].
ControlField control_from_value(const ValueField& v, const ModelSpec& model,
                                const EmpiricalLaw& law, double clip);

/// Free-function spelling of ControlField::eval.
double eval_control(const ControlField& field, double t, double x);

/// Spatially and temporally constant control (testing and diagnostics).
ControlField make_constant_control(double value, double horizon);

/// Flat little-endian binary round trip: header (grid, horizon, clip) then
/// the row-major zeta table. Byte-identical for identical fields.
void save_control(const ControlField& field, std::ostream& out);
ControlField load_control(std::istream& in);
void save_control_file(const ControlField& field, const std::string& path);
ControlField load_control_file(const std::string& path);

} // namespace midlmc
