#pragma once

#include <map>
#include <vector>

#include "midlmc/index_sets.hpp"
#include "midlmc/mixed_difference.hpp"
#include "midlmc/multi_index.hpp"

namespace midlmc {

/// Per-index sample counts solving the work-minimization problem under the
/// relative statistical-error constraint, after integer ceilings.
struct Allocation {
  struct Entry {
    MultiIndex alpha{};
    long M1 = 1;
    long M2 = 1;
    double m1_real = 0.0;     // continuous optimizer value
    double m_tilde_real = 0.0; // continuous M1*M2
  };
  std::vector<Entry> entries; // sorted by alpha
  double theta = 0.5;
  double tol_r = 0.1;
  double C_nu = 0.0;
  double qoi_estimate = 0.0;

  const Entry* find(MultiIndex a) const;
};

/// Variances per index feeding the optimizer.
struct VarianceEntry {
  double V1 = 0.0;
  double V2 = 0.0;
};

/// Continuous optimum
///   M1_a  = (Cnu/(theta tol qoi))^2 sqrt(V1_a/(N^g2 P^(1+g1))) * S,
///   M~_a  = (Cnu/(theta tol qoi))^2 sqrt(V2_a/(N^g2 P^g1)) * S,
///   S     = sum_b sqrt(V1_b N^g2 P^(1+g1)) + sqrt(V2_b N^g2 P^g1),
/// then M1 = ceil(M1_a) (at least 1) and M2 = ceil(M~_a / M1) (at least 1).
/// The ceilings only tighten the variance constraint
///   sum_a V1/M1 + V2/(M1 M2) <= (theta tol qoi / Cnu)^2.
Allocation optimal_samples(const std::map<MultiIndex, VarianceEntry>& variances,
                           const Hierarchy& h, double tol_r, double theta,
                           double nu, double qoi, double gamma1 = 1.0,
                           double gamma2 = 1.0);

/// Total model cost sum_a M1 N^g2 P^(1+g1) + M1 M2 N^g2 P^g1.
double work_model(const Allocation& alloc, const Hierarchy& h,
                  double gamma1 = 1.0, double gamma2 = 1.0);

/// Left side of the variance constraint for a given allocation.
double allocation_variance(const Allocation& alloc,
                           const std::map<MultiIndex, VarianceEntry>& variances);

} // namespace midlmc
