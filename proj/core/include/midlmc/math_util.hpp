#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace midlmc {

/// Quantile of the standard normal distribution (inverse CDF), Wichura's
/// AS 241 PPND16 rational approximation. Absolute error below 1e-15 on
/// p in (0,1); used both for sampling and for confidence constants, so the
/// same numbers come out on every platform.
double normal_quantile(double p);

/// (1 - nu/2)-quantile of the standard normal, e.g. nu=0.05 -> 1.959964.
double confidence_constant(double nu);

/// Least-squares line y ~= intercept + slope*x. Returns {slope, intercept}.
std::pair<double, double> fit_line(std::span<const double> x,
                                   std::span<const double> y);

/// Residual sum of squares of the fit above.
double fit_line_rss(std::span<const double> x, std::span<const double> y,
                    double slope, double intercept);

/// FNV-1a 64-bit hash of a byte string; stable across platforms/runs.
std::uint64_t fnv1a64(std::span<const char> bytes);

} // namespace midlmc
