#include "midlmc/control.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>

namespace midlmc {

namespace {

constexpr char kControlMagic[8] = {'M', 'I', 'D', 'C', 'T', 'R', 'L', '1'};

// Interaction means against one law slice for every grid node, written into
// out[0..n_cells]. Sine-difference kernels use the per-slice circular means.
void kernel_means_on_grid(KernelKind kind,
                          const std::function<double(double, double)>& kernel,
                          const EmpiricalLaw& law, long law_idx,
                          const GridSpec& grid, std::vector<double>& out) {
  const long nx = grid.n_cells;
  out.resize(nx + 1);
  switch (kind) {
    case KernelKind::zero:
      std::fill(out.begin(), out.end(), 0.0);
      return;
    case KernelKind::sine_difference: {
      const double ms = law.mean_sin.at(law_idx);
      const double mc = law.mean_cos.at(law_idx);
      for (long i = 0; i <= nx; ++i) {
        const double x = grid.node(i);
        out[i] = std::sin(x) * mc - std::cos(x) * ms;
      }
      return;
    }
    case KernelKind::generic: {
      auto slice = law.slice(law_idx);
      for (long i = 0; i <= nx; ++i) {
        out[i] = interaction_mean(kernel, grid.node(i), slice);
      }
      return;
    }
  }
}

// Thomas elimination for a tridiagonal system; diagonally dominant by
// construction of the implicit scheme.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) {
      throw SolverError("solve_kbe: singular tridiagonal system");
    }
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  if (diag[n - 1] == 0.0) {
    throw SolverError("solve_kbe: singular tridiagonal system");
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
  }
}

} // namespace

ValueField solve_kbe(const ModelSpec& model, const EmpiricalLaw& law,
                     const GridSpec& grid, const Observable& observable,
                     double floor_eps) {
  model.require_dim1("solve_kbe");
  grid.validate();
  if (!(floor_eps > 0.0)) throw ConfigError("solve_kbe: floor must be > 0");
  if (!(law.N % grid.n_tsteps == 0 || grid.n_tsteps % law.N == 0)) {
    throw ConfigError(
        "solve_kbe: law N must be a multiple or divisor of n_tsteps");
  }
  if (model.kernel1_kind == KernelKind::sine_difference &&
      law.mean_sin.empty()) {
    throw ConfigError("solve_kbe: law lacks circular means for sine kernel");
  }

  const long nx = grid.n_cells;
  const long nt = grid.n_tsteps;
  const double h = grid.dx();
  const double dt = model.horizon / static_cast<double>(nt);
  const double xi = model.param_mean;

  ValueField field;
  field.grid = grid;
  field.horizon = model.horizon;
  field.floor = floor_eps;
  field.values.resize(static_cast<std::size_t>(nt + 1) * (nx + 1));

  // Working (unfloored) level; flooring only the stored copy keeps the
  // floor from acting as a source term inside the recursion.
  std::vector<double> v(nx + 1);
  for (long i = 0; i <= nx; ++i) {
    v[i] = std::fabs(observable.eval(grid.node(i)));
  }
  auto store = [&](long k) {
    double* row = field.values.data() + k * (nx + 1);
    for (long i = 0; i <= nx; ++i) row[i] = std::max(v[i], floor_eps);
  };
  store(nt);

  std::vector<double> k1bar, k2bar;
  std::vector<double> lower(nx + 1), diag(nx + 1), upper(nx + 1), rhs(nx + 1);

  for (long k = nt - 1; k >= 0; --k) {
    const double t = dt * static_cast<double>(k);
    const long law_idx =
        std::lround(t / model.horizon * static_cast<double>(law.N));

    kernel_means_on_grid(model.kernel1_kind, model.kernel1, law,
                         law_idx, grid, k1bar);
    kernel_means_on_grid(model.kernel2_kind, model.kernel2, law,
                         law_idx, grid, k2bar);

    // Implicit step of dv/ds = a dv/dx + D d2v/dx2 (s = T - t), evaluated
    // at the new time level. Upwinding keeps the system an M-matrix, so the
    // discrete solution obeys the maximum principle.
    for (long i = 0; i <= nx; ++i) {
      const double x = grid.node(i);
      const double a = model.drift(x, k1bar[i], xi);
      const double sg = model.diffusion(x, k2bar[i]);
      const double D = 0.5 * sg * sg;

      double cl = D / (h * h);
      double cu = D / (h * h);
      if (a >= 0.0) {
        cu += a / h;
      } else {
        cl += -a / h;
      }
      double cd = -(cl + cu);

      // Homogeneous Neumann walls: fold the ghost node into the diagonal.
      if (i == 0) {
        cd += cl;
        cl = 0.0;
      }
      if (i == nx) {
        cd += cu;
        cu = 0.0;
      }

      lower[i] = -dt * cl;
      diag[i] = 1.0 - dt * cd;
      upper[i] = -dt * cu;
      rhs[i] = v[i];
    }
    solve_tridiagonal(lower, diag, upper, rhs);
    v.swap(rhs);

    for (long i = 0; i <= nx; ++i) {
      if (!std::isfinite(v[i])) {
        throw SolverError("solve_kbe: non-finite value at time level " +
                          std::to_string(k));
      }
    }
    store(k);
  }
  return field;
}

ControlField control_from_value(const ValueField& vf, const ModelSpec& model,
                                const EmpiricalLaw& law, double clip) {
  if (!(clip > 0.0)) throw ConfigError("control_from_value: clip must be > 0");
  const GridSpec& grid = vf.grid;
  const long nx = grid.n_cells;
  const long nt = grid.n_tsteps;
  const double h = grid.dx();
  const double dt = vf.horizon / static_cast<double>(nt);

  ControlField field;
  field.grid = grid;
  field.horizon = vf.horizon;
  field.clip = clip;
  field.zeta.resize(vf.values.size());

  std::vector<double> logv(nx + 1), k2bar;
  for (long k = 0; k <= nt; ++k) {
    const double t = dt * static_cast<double>(k);
    const long law_idx =
        std::lround(t / vf.horizon * static_cast<double>(law.N));
    kernel_means_on_grid(model.kernel2_kind, model.kernel2, law,
                         law_idx, grid, k2bar);
    for (long i = 0; i <= nx; ++i) logv[i] = std::log(vf.at(k, i));
    double* row = field.zeta.data() + k * (nx + 1);
    for (long i = 0; i <= nx; ++i) {
      double dlog;
      if (i == 0) {
        dlog = (logv[1] - logv[0]) / h;
      } else if (i == nx) {
        dlog = (logv[nx] - logv[nx - 1]) / h;
      } else {
        dlog = (logv[i + 1] - logv[i - 1]) / (2.0 * h);
      }
      const double sg = model.diffusion(grid.node(i), k2bar[i]);
      row[i] = std::clamp(sg * dlog, -clip, clip);
    }
  }
  return field;
}

double ControlField::eval(double t, double x) const {
  const long nx = grid.n_cells;
  const long nt = grid.n_tsteps;
  const double dt = horizon / static_cast<double>(nt);
  const double h = grid.dx();

  double ts = t / dt;
  ts = std::clamp(ts, 0.0, static_cast<double>(nt));
  long k = static_cast<long>(ts);
  if (k >= nt) k = nt - 1;
  const double ft = ts - static_cast<double>(k);

  double xs = (x - grid.x_min) / h;
  xs = std::clamp(xs, 0.0, static_cast<double>(nx));
  long i = static_cast<long>(xs);
  if (i >= nx) i = nx - 1;
  const double fx = xs - static_cast<double>(i);

  const double* r0 = zeta.data() + k * (nx + 1);
  const double* r1 = r0 + (nx + 1);
  const double a = r0[i] * (1.0 - fx) + r0[i + 1] * fx;
  const double b = r1[i] * (1.0 - fx) + r1[i + 1] * fx;
  return a * (1.0 - ft) + b * ft;
}

double eval_control(const ControlField& field, double t, double x) {
  return field.eval(t, x);
}

ControlField make_constant_control(double value, double horizon) {
  ControlField field;
  field.grid = GridSpec{-1.0, 1.0, 8, 1};
  field.horizon = horizon;
  field.clip = std::max(1.0, std::fabs(value));
  field.zeta.assign(2 * 9, value);
  return field;
}

void save_control(const ControlField& field, std::ostream& out) {
  out.write(kControlMagic, sizeof(kControlMagic));
  auto put_i64 = [&out](std::int64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  auto put_f64 = [&out](double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  put_i64(field.grid.n_cells);
  put_i64(field.grid.n_tsteps);
  put_f64(field.grid.x_min);
  put_f64(field.grid.x_max);
  put_f64(field.horizon);
  put_f64(field.clip);
  out.write(reinterpret_cast<const char*>(field.zeta.data()),
            static_cast<std::streamsize>(field.zeta.size() * sizeof(double)));
}

ControlField load_control(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kControlMagic, sizeof(magic)) != 0) {
    throw ConfigError("load_control: bad header");
  }
  auto get_i64 = [&in]() {
    std::int64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
  };
  auto get_f64 = [&in]() {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
  };
  ControlField field;
  field.grid.n_cells = get_i64();
  field.grid.n_tsteps = get_i64();
  field.grid.x_min = get_f64();
  field.grid.x_max = get_f64();
  field.horizon = get_f64();
  field.clip = get_f64();
  field.grid.validate();
  field.zeta.resize(
      static_cast<std::size_t>(field.grid.n_tsteps + 1) *
      (field.grid.n_cells + 1));
  in.read(reinterpret_cast<char*>(field.zeta.data()),
          static_cast<std::streamsize>(field.zeta.size() * sizeof(double)));
  if (!in) throw ConfigError("load_control: truncated payload");
  return field;
}

void save_control_file(const ControlField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("save_control_file: cannot open " + path);
  save_control(field, out);
  if (!out) throw ConfigError("save_control_file: write failed for " + path);
}

ControlField load_control_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("load_control_file: cannot open " + path);
  return load_control(in);
}

} // namespace midlmc
