#include "midlmc/rate_fit.hpp"

#include <cmath>
#include <vector>

namespace midlmc {

namespace {

struct AxisPoints {
  // One group per frozen off-axis level; group g holds (level, log value).
  std::vector<double> level[2];
  std::vector<double> logv[2];
  long excluded = 0;
};

// Pooled common-slope fit with per-group intercepts (each group demeaned).
AxisFit fit_axis(const AxisPoints& pts) {
  AxisFit fit;
  fit.points_excluded = pts.excluded;
  double sxx = 0.0, sxy = 0.0;
  long used = 0;
  double group_mean_x[2] = {0, 0}, group_mean_y[2] = {0, 0};
  for (int g = 0; g < 2; ++g) {
    const auto& x = pts.level[g];
    const auto& y = pts.logv[g];
    if (x.empty()) continue;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    group_mean_x[g] = mx;
    group_mean_y[g] = my;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
    }
    used += static_cast<long>(x.size());
  }
  fit.points_used = used;
  if (used < 3 || sxx == 0.0) {
    throw ConfigError("fit_rates: fewer than 3 usable points on an axis");
  }
  const double slope = sxy / sxx; // already in log_tau units
  fit.rate = -slope;
  fit.intercept0 = group_mean_y[0] - slope * group_mean_x[0];
  for (int g = 0; g < 2; ++g) {
    const double ic = group_mean_y[g] - slope * group_mean_x[g];
    for (std::size_t i = 0; i < pts.level[g].size(); ++i) {
      const double r = pts.logv[g][i] - (ic + slope * pts.level[g][i]);
      fit.rss += r * r;
    }
  }
  return fit;
}

} // namespace

RateFitReport fit_rates(const std::map<MultiIndex, MixedDiffStats>& pilot,
                        int tau, int axis_hi, int axis_lo) {
  if (tau < 2) throw ConfigError("fit_rates: tau must be >= 2");
  if (axis_lo < 0 || axis_hi < axis_lo) {
    throw ConfigError("fit_rates: bad axis range");
  }
  const double log_tau = std::log(static_cast<double>(tau));

  // axis 0: vary a1 (fit b1/w1/s1); axis 1: vary a2.
  auto collect = [&](int axis, auto&& value) {
    AxisPoints pts;
    for (int frozen = 0; frozen <= 1; ++frozen) {
      for (int a = axis_lo; a <= axis_hi; ++a) {
        const MultiIndex idx = axis == 0 ? MultiIndex{a, frozen}
                                         : MultiIndex{frozen, a};
        const auto it = pilot.find(idx);
        if (it == pilot.end()) continue;
        const double v = value(it->second);
        if (!(v > 0.0) || !std::isfinite(v)) {
          ++pts.excluded;
          continue;
        }
        pts.level[frozen].push_back(static_cast<double>(a));
        pts.logv[frozen].push_back(std::log(v) / log_tau);
      }
    }
    return pts;
  };

  auto abs_mean = [](const MixedDiffStats& s) { return std::fabs(s.mean); };
  auto v1 = [](const MixedDiffStats& s) { return s.V1; };
  auto v2 = [](const MixedDiffStats& s) { return s.V2; };

  RateFitReport rep;
  rep.axis_lo = axis_lo;
  rep.axis_hi = axis_hi;
  rep.fit_b1 = fit_axis(collect(0, abs_mean));
  rep.fit_b2 = fit_axis(collect(1, abs_mean));
  rep.fit_w1 = fit_axis(collect(0, v1));
  rep.fit_w2 = fit_axis(collect(1, v1));
  rep.fit_s1 = fit_axis(collect(0, v2));
  rep.fit_s2 = fit_axis(collect(1, v2));

  rep.rates.b1 = rep.fit_b1.rate;
  rep.rates.b2 = rep.fit_b2.rate;
  rep.rates.w1 = rep.fit_w1.rate;
  rep.rates.w2 = rep.fit_w2.rate;
  rep.rates.s1 = rep.fit_s1.rate;
  rep.rates.s2 = rep.fit_s2.rate;
  rep.rates.g1 = 1.0;
  rep.rates.g2 = 1.0;
  rep.rates.tau = tau;
  rep.rates.QB = std::pow(static_cast<double>(tau), rep.fit_b1.intercept0);
  return rep;
}

} // namespace midlmc
