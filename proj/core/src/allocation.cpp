#include "midlmc/allocation.hpp"

#include <algorithm>
#include <cmath>

#include "midlmc/math_util.hpp"

namespace midlmc {

const Allocation::Entry* Allocation::find(MultiIndex a) const {
  for (const auto& e : entries) {
    if (e.alpha == a) return &e;
  }
  return nullptr;
}

Allocation optimal_samples(const std::map<MultiIndex, VarianceEntry>& variances,
                           const Hierarchy& h, double tol_r, double theta,
                           double nu, double qoi, double gamma1,
                           double gamma2) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw ConfigError("optimal_samples: theta must lie in (0,1)");
  }
  if (!(tol_r > 0.0)) throw ConfigError("optimal_samples: tol_r must be > 0");
  if (qoi == 0.0) {
    throw ConfigError(
        "optimal_samples: qoi estimate is zero, relative constraint undefined");
  }
  if (variances.empty()) {
    throw ConfigError("optimal_samples: no indices supplied");
  }
  bool any_positive = false;
  for (const auto& [a, v] : variances) {
    if (v.V1 < 0.0 || v.V2 < 0.0) {
      throw ConfigError("optimal_samples: negative variance");
    }
    any_positive = any_positive || v.V1 > 0.0 || v.V2 > 0.0;
  }

  const double cnu = confidence_constant(nu);
  const double budget = theta * tol_r * std::fabs(qoi) / cnu;
  const double lambda = 1.0 / (budget * budget); // (Cnu/(theta tol qoi))^2

  double coupling = 0.0; // sum over beta of the square-root work terms
  for (const auto& [a, v] : variances) {
    const double P = static_cast<double>(h.particles(a.a1));
    const double N = static_cast<double>(h.steps(a.a2));
    const double law_work = std::pow(N, gamma2) * std::pow(P, 1.0 + gamma1);
    const double path_work = std::pow(N, gamma2) * std::pow(P, gamma1);
    coupling += std::sqrt(v.V1 * law_work) + std::sqrt(v.V2 * path_work);
  }

  Allocation alloc;
  alloc.theta = theta;
  alloc.tol_r = tol_r;
  alloc.C_nu = cnu;
  alloc.qoi_estimate = qoi;
  for (const auto& [a, v] : variances) {
    const double P = static_cast<double>(h.particles(a.a1));
    const double N = static_cast<double>(h.steps(a.a2));
    const double law_work = std::pow(N, gamma2) * std::pow(P, 1.0 + gamma1);
    const double path_work = std::pow(N, gamma2) * std::pow(P, gamma1);

    Allocation::Entry e;
    e.alpha = a;
    e.m1_real = lambda * std::sqrt(v.V1 / law_work) * coupling;
    e.m_tilde_real = lambda * std::sqrt(v.V2 / path_work) * coupling;
    e.M1 = std::max<long>(1, static_cast<long>(std::ceil(e.m1_real)));
    e.M2 = std::max<long>(
        1, static_cast<long>(std::ceil(e.m_tilde_real /
                                       static_cast<double>(e.M1))));
    alloc.entries.push_back(e);
  }
  (void)any_positive;
  return alloc;
}

double work_model(const Allocation& alloc, const Hierarchy& h, double gamma1,
                  double gamma2) {
  double w = 0.0;
  for (const auto& e : alloc.entries) {
    const double P = static_cast<double>(h.particles(e.alpha.a1));
    const double N = static_cast<double>(h.steps(e.alpha.a2));
    const double m1 = static_cast<double>(e.M1);
    const double m2 = static_cast<double>(e.M2);
    w += m1 * std::pow(N, gamma2) * std::pow(P, 1.0 + gamma1) +
         m1 * m2 * std::pow(N, gamma2) * std::pow(P, gamma1);
  }
  return w;
}

double allocation_variance(
    const Allocation& alloc,
    const std::map<MultiIndex, VarianceEntry>& variances) {
  double s = 0.0;
  for (const auto& e : alloc.entries) {
    const auto it = variances.find(e.alpha);
    if (it == variances.end()) {
      throw ConfigError("allocation_variance: missing variance entry");
    }
    s += it->second.V1 / static_cast<double>(e.M1) +
         it->second.V2 /
             (static_cast<double>(e.M1) * static_cast<double>(e.M2));
  }
  return s;
}

} // namespace midlmc
