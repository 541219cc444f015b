#pragma once

#include <map>

#include "midlmc/index_sets.hpp"
#include "midlmc/mixed_difference.hpp"
#include "midlmc/multi_index.hpp"

namespace midlmc {

/// One log-linear axis fit: log_tau(quantity) regressed on the level, with
/// separate intercepts for the two frozen off-axis levels (0 and 1) and a
/// shared slope.
struct AxisFit {
  double rate = 0.0;       // negated slope
  double intercept0 = 0.0; // log_tau value extrapolated to level 0, off-axis 0
  double rss = 0.0;
  long points_used = 0;
  long points_excluded = 0; // nonpositive values dropped from the log fit
};

struct RateFitReport {
  RateSet rates;
  AxisFit fit_b1, fit_b2, fit_w1, fit_w2, fit_s1, fit_s2;
  int axis_lo = 1;
  int axis_hi = 4;
};

/// Least-squares slopes of log_tau |mean|, log_tau V1, log_tau V2 along each
/// axis (levels axis_lo..axis_hi, the other component held at 0 and at 1).
/// gamma rates are not fitted; they stay at the cost-model values (1, 1).
/// QB comes from the bias intercept. Throws ConfigError when fewer than 3
/// usable points remain on some axis.
RateFitReport fit_rates(const std::map<MultiIndex, MixedDiffStats>& pilot,
                        int tau, int axis_hi = 4, int axis_lo = 1);

} // namespace midlmc
