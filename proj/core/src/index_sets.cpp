#include "midlmc/index_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace midlmc {

namespace {

constexpr double kTieTol = 1e-9;

bool nearly_equal(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
  return std::fabs(a - b) <= kTieTol * scale;
}

double checked_ratio(double num, double den, ComplexityReport& report,
                     const char* what) {
  if (den == 0.0) {
    report.degenerate = true;
    if (report.degenerate_reason.empty()) {
      report.degenerate_reason = std::string("zero denominator in ") + what;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
  return num / den;
}

} // namespace

Weights compute_weights(const RateSet& rates) {
  const double n_bar_1 = 0.5 * (1.0 + rates.g1 - rates.w1) + rates.b1;
  const double n_bar_2 = 0.5 * (rates.g2 - rates.w2) + rates.b2;
  const double n_bbar_1 = 0.5 * (rates.g1 - rates.s1) + rates.b1;
  const double n_bbar_2 = 0.5 * (rates.g2 - rates.s2) + rates.b2;
  const double c_bar = n_bar_1 + n_bar_2;
  const double c_bbar = n_bbar_1 + n_bbar_2;
  if (c_bar == 0.0 || c_bbar == 0.0) {
    throw ConfigError("compute_weights: degenerate rates (zero normalizer)");
  }
  Weights w;
  w.delta_bar = {n_bar_1 / c_bar, n_bar_2 / c_bar};
  w.delta_bbar = {n_bbar_1 / c_bbar, n_bbar_2 / c_bbar};
  w.admissible = n_bar_1 > 0.0 && n_bar_2 > 0.0 && n_bbar_1 > 0.0 &&
                 n_bbar_2 > 0.0;
  return w;
}

bool IndexSet::contains(MultiIndex a) const {
  return std::binary_search(members.begin(), members.end(), a);
}

IndexSet build_index_set(const Vec2& delta_bar, const Vec2& delta_bbar,
                         double L) {
  for (double c : {delta_bar[0], delta_bar[1], delta_bbar[0], delta_bbar[1]}) {
    if (!(c > 0.0)) {
      throw ConfigError("build_index_set: weights must be admissible (> 0)");
    }
  }
  if (L < 2.0) {
    throw ConfigError("build_index_set: L must be >= 2 so the origin is in");
  }
  const double logL = std::log(L);
  const long max1 = static_cast<long>(
      logL / std::min(delta_bar[0], delta_bbar[0]));
  IndexSet set;
  set.level = L;
  for (long a1 = 0; a1 <= max1; ++a1) {
    bool any = false;
    for (long a2 = 0;; ++a2) {
      const double e1 = delta_bar[0] * a1 + delta_bar[1] * a2;
      const double e2 = delta_bbar[0] * a1 + delta_bbar[1] * a2;
      if (std::exp(e1) + std::exp(e2) <= L) {
        set.members.push_back(
            MultiIndex{static_cast<int>(a1), static_cast<int>(a2)});
        any = true;
      } else {
        break; // exponents increase with a2, so the row is done
      }
    }
    if (!any) break; // and with a1, so the scan is done
  }
  std::sort(set.members.begin(), set.members.end());
  return set;
}

std::vector<MultiIndex> boundary(const IndexSet& set) {
  if (set.members.empty()) {
    throw ConfigError("boundary: empty index set");
  }
  std::vector<MultiIndex> out;
  for (const MultiIndex& a : set.members) {
    const bool up1 = set.contains(MultiIndex{a.a1 + 1, a.a2});
    const bool up2 = set.contains(MultiIndex{a.a1, a.a2 + 1});
    if (!up1 || !up2) out.push_back(a);
  }
  return out;
}

double profit(MultiIndex alpha, const RateSet& rates) {
  const double lt = std::log(static_cast<double>(rates.tau));
  const double rho_dot = lt * (rates.b1 * alpha.a1 + rates.b2 * alpha.a2);
  const double gbar_dot = lt * (0.5 * (1.0 + rates.g1 - rates.w1) * alpha.a1 +
                                0.5 * (rates.g2 - rates.w2) * alpha.a2);
  const double gbbar_dot = lt * (0.5 * (rates.g1 - rates.s1) * alpha.a1 +
                                 0.5 * (rates.g2 - rates.s2) * alpha.a2);
  return std::exp(-rho_dot) / (std::exp(gbar_dot) + std::exp(gbbar_dot));
}

double empirical_profit(MultiIndex alpha, const MixedDiffStats& stats,
                        const Hierarchy& h, bool* zero_denominator) {
  const double P = static_cast<double>(h.particles(alpha.a1));
  const double N = static_cast<double>(h.steps(alpha.a2));
  const double denom =
      std::sqrt(stats.V1 * P * P * N) + std::sqrt(stats.V2 * P * N);
  if (zero_denominator) *zero_denominator = denom == 0.0;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return std::fabs(stats.mean) / denom;
}

ComplexityReport complexity_constants(const RateSet& rates) {
  const double b1 = rates.b1, b2 = rates.b2, w1 = rates.w1, w2 = rates.w2;
  const double s1 = rates.s1, s2 = rates.s2, g1 = rates.g1, g2 = rates.g2;
  const double lt = std::log(static_cast<double>(rates.tau));
  const double c_bar = (0.5 * (1.0 + g1 - w1) + b1) + (0.5 * (g2 - w2) + b2);
  const double c_bbar = (0.5 * (g1 - s1) + b1) + (0.5 * (g2 - s2) + b2);

  // Denominators shared across the ratio table.
  const double q1 = 1.0 + g1 - w1 + 2.0 * b1; // "bar" particle direction
  const double q2 = g2 - w2 + 2.0 * b2;       // "bar" time direction
  const double r1 = g1 - s1 + 2.0 * b1;       // "bbar" particle direction
  const double r2 = g2 - s2 + 2.0 * b2;       // "bbar" time direction

  ComplexityReport rep;
  rep.chi11 = c_bar * lt *
              std::max(checked_ratio(1.0 + g1 - w1, q1, rep, "chi11"),
                       checked_ratio(g2 - w2, q2, rep, "chi11"));
  rep.chi12 = c_bar * lt *
              std::max(checked_ratio(g1 - s1, q1, rep, "chi12"),
                       checked_ratio(g2 - s2, q2, rep, "chi12"));
  rep.chi21 = c_bbar * lt *
              std::max(checked_ratio(1.0 + g1 - w1, r1, rep, "chi21"),
                       checked_ratio(g2 - w2, r2, rep, "chi21"));
  rep.chi22 = c_bbar * lt *
              std::max(checked_ratio(g1 - s1, r1, rep, "chi22"),
                       checked_ratio(g2 - s2, r2, rep, "chi22"));
  rep.eta1 = c_bar * lt *
             std::min(checked_ratio(2.0 * b1, q1, rep, "eta1"),
                      checked_ratio(2.0 * b2, q2, rep, "eta1"));
  rep.eta2 = c_bbar * lt *
             std::min(checked_ratio(2.0 * b1, r1, rep, "eta2"),
                      checked_ratio(2.0 * b2, r2, rep, "eta2"));

  rep.e1 = nearly_equal((1.0 + g1 - w1) / (2.0 * b1), (g2 - w2) / (2.0 * b2))
               ? 2
               : 1;
  rep.e2 = nearly_equal((g1 - s1) / (2.0 * b1), (g2 - s2) / (2.0 * b2)) ? 2
                                                                        : 1;
  rep.aleph1 = nearly_equal(checked_ratio(g1 - s1, q1, rep, "aleph1"),
                            checked_ratio(g2 - s2, q2, rep, "aleph1"))
                   ? 2
                   : 1;
  rep.aleph2 = nearly_equal(checked_ratio(1.0 + g1 - w1, r1, rep, "aleph2"),
                            checked_ratio(g2 - w2, r2, rep, "aleph2"))
                   ? 2
                   : 1;
  {
    const bool p = nearly_equal(w1, 1.0 + g1);
    const bool t = nearly_equal(w2, g2);
    rep.d1 = p && t ? 2 : (p || t ? 1 : 0);
  }
  {
    const bool p = nearly_equal(s1, g1);
    const bool t = nearly_equal(s2, g2);
    rep.d2 = p && t ? 2 : (p || t ? 1 : 0);
  }

  if (rep.eta1 == 0.0 || rep.eta2 == 0.0) {
    rep.degenerate = true;
    if (rep.degenerate_reason.empty()) rep.degenerate_reason = "eta is zero";
  }
  if (rep.degenerate) return rep;

  const double first = std::max({0.0, rep.chi11 / rep.eta1,
                                 rep.chi12 / rep.eta1});
  const double second = std::max({0.0, rep.chi21 / rep.eta2,
                                  rep.chi22 / rep.eta2});
  rep.varsigma = std::min(first, second);

  if (rep.varsigma == 0.0) {
    rep.varrho = std::max(rep.d1, rep.d2);
  } else if (nearly_equal(rep.varsigma, rep.chi11 / rep.eta1)) {
    rep.varrho = (rep.e1 - 1) * (1.0 + rep.chi11 / rep.eta1);
  } else if (nearly_equal(rep.varsigma, rep.chi12 / rep.eta1)) {
    rep.varrho = (rep.aleph1 - 1) + (rep.e1 - 1) * rep.chi12 / rep.eta1;
  } else if (nearly_equal(rep.varsigma, rep.chi21 / rep.eta2)) {
    rep.varrho = (rep.aleph2 - 1) + (rep.e2 - 1) * rep.chi21 / rep.eta2;
  } else {
    rep.varrho = (rep.e2 - 1) * (1.0 + rep.chi22 / rep.eta2);
  }

  rep.Psi = std::min({checked_ratio(1.0 + g1, q1, rep, "Psi"),
                      checked_ratio(g2, q2, rep, "Psi"),
                      checked_ratio(1.0 + g1, r1, rep, "Psi"),
                      checked_ratio(g2, r2, rep, "Psi")});
  rep.condition_holds = rep.Psi <= 1.0 + rep.varsigma;
  rep.predicted_exponent = 2.0 + 2.0 * rep.varsigma;
  rep.predicted_log_power = 2.0 * rep.varrho;
  return rep;
}

bool check_lemma_optimality(const Vec2& rho, const Vec2& g_bar,
                            const Vec2& g_bbar, int grid_bound, double v) {
  if (grid_bound < 0 || grid_bound > 4) {
    throw ConfigError("check_lemma_optimality: grid_bound must be in [0, 4]");
  }
  const int side = grid_bound + 1;
  const int cells = side * side;

  std::vector<double> error(cells), work(cells);
  std::uint32_t level_set = 0;
  for (int a1 = 0; a1 < side; ++a1) {
    for (int a2 = 0; a2 < side; ++a2) {
      const int idx = a1 * side + a2;
      error[idx] = std::exp(-(rho[0] * a1 + rho[1] * a2));
      work[idx] = std::exp(g_bar[0] * a1 + g_bar[1] * a2) +
                  std::exp(g_bbar[0] * a1 + g_bbar[1] * a2);
      if (error[idx] / work[idx] >= v) level_set |= 1u << idx;
    }
  }

  auto totals = [&](std::uint32_t mask) {
    double w = 0.0, e = 0.0;
    for (int idx = 0; idx < cells; ++idx) {
      if (mask & (1u << idx)) {
        w += work[idx];
      } else {
        e += error[idx]; // truncation error restricted to the universe
      }
    }
    return std::pair<double, double>{w, e};
  };

  const auto [w_opt, e_opt] = totals(level_set);
  const std::uint64_t count = 1ull << cells;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    if (mask == level_set) continue;
    const auto [w, e] = totals(static_cast<std::uint32_t>(mask));
    if (w < w_opt && e <= e_opt) return false; // dominated
  }
  return true;
}

} // namespace midlmc
