#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "midlmc/mixed_difference.hpp"
#include "midlmc/multi_index.hpp"

namespace midlmc {

/// Convergence/cost rates of the coupled sampler: bias tau^{-a.b}, outer
/// variance tau^{-a.w}, inner variance tau^{-a.s}, work exponents g (gamma).
struct RateSet {
  double b1 = 1.0, b2 = 1.0;
  double w1 = 2.0, w2 = 2.0;
  double s1 = 2.0, s2 = 1.5;
  double g1 = 1.0, g2 = 1.0;
  int tau = 2;
  std::optional<double> QB; // bias constant, when fitted

  static RateSet kuramoto_defaults() { return RateSet{}; }
};

using Vec2 = std::array<double, 2>;

struct Weights {
  Vec2 delta_bar{};   // normalized (g_bar + rho)
  Vec2 delta_bbar{};  // normalized (g_bbar + rho)
  bool admissible = false;
};

/// Normalized level-set weight vectors; admissible iff all four components
/// are strictly positive (equivalently 2b1 >= max(w1-1, s1) - g1 and
/// 2b2 >= max(w2, s2) - g2 with strict inequality).
Weights compute_weights(const RateSet& rates);

/// Downward-closed profit level set at threshold L.
struct IndexSet {
  std::vector<MultiIndex> members; // sorted lexicographically (a1, a2)
  double level = 0.0;

  bool contains(MultiIndex a) const;
};

/// { alpha : exp(delta_bar . alpha) + exp(delta_bbar . alpha) <= L }.
/// Requires admissible (positive) weights and L >= 2 so the origin is in.
IndexSet build_index_set(const Vec2& delta_bar, const Vec2& delta_bbar,
                         double L);

/// Outer boundary: members whose +e1 or +e2 neighbor is outside.
std::vector<MultiIndex> boundary(const IndexSet& set);

/// Rate-based profit exp(-rho.alpha) / (exp(g_bar.alpha)+exp(g_bbar.alpha))
/// with rho = log(tau) [b1, b2], g_bar = log(tau) [(1+g1-w1)/2, (g2-w2)/2],
/// g_bbar = log(tau) [(g1-s1)/2, (g2-s2)/2].
double profit(MultiIndex alpha, const RateSet& rates);

/// Measured profit |mean| / (sqrt(V1 P^2 N) + sqrt(V2 P N)). Returns +inf
/// (and sets the flag when provided) on a zero denominator.
double empirical_profit(MultiIndex alpha, const MixedDiffStats& stats,
                        const Hierarchy& h, bool* zero_denominator = nullptr);

/// Work/bias exponent bookkeeping of the cost theorem, evaluated verbatim
/// from the rates. Ties in the piecewise constants are detected with a 1e-9
/// relative tolerance.
struct ComplexityReport {
  double chi11 = 0, chi12 = 0, chi21 = 0, chi22 = 0;
  double eta1 = 0, eta2 = 0;
  int e1 = 1, e2 = 1, aleph1 = 1, aleph2 = 1, d1 = 0, d2 = 0;
  double varsigma = 0;
  double varrho = 0;
  double Psi = 0;
  bool condition_holds = false;  // Psi <= 1 + varsigma
  double predicted_exponent = 0; // work ~ TOL^-(2 + 2 varsigma)
  double predicted_log_power = 0; // (log TOL^-1)^(2 varrho)
  bool degenerate = false;
  std::string degenerate_reason;
};

ComplexityReport complexity_constants(const RateSet& rates);

/// Exhaustive-optimality oracle on the finite universe {0..grid_bound}^2:
/// builds the profit level set I(v) from the supplied exponent vectors and
/// checks that no subset S of the universe has strictly smaller work with
/// no larger truncation error (both restricted to the universe). 2^(n^2)
/// subsets, so grid_bound <= 4.
bool check_lemma_optimality(const Vec2& rho, const Vec2& g_bar,
                            const Vec2& g_bbar, int grid_bound, double v);

} // namespace midlmc
