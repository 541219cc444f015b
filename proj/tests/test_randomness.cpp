#include <doctest.h>

#include <cmath>
#include <vector>

#include "midlmc/noise.hpp"
#include "test_support.hpp"

using namespace midlmc;

namespace {
StreamKey key_with_m1(std::uint64_t m1) {
  return StreamKey{42, StreamRole::outer_law, MultiIndex{1, 2}, m1, 0, 0};
}
} // namespace

TEST_CASE("identical keys give bit-identical bundles") {
  const ModelSpec model = test::paper_model();
  const NoiseBundle a = draw_bundle(key_with_m1(7), model, 16, 32);
  const NoiseBundle b = draw_bundle(key_with_m1(7), model, 16, 32);
  CHECK(a.wiener == b.wiener);
  CHECK(a.initials == b.initials);
  CHECK(a.params == b.params);
}

TEST_CASE("drawing fewer particles with the same key is a prefix") {
  const ModelSpec model = test::paper_model();
  const NoiseBundle big = draw_bundle(key_with_m1(3), model, 20, 16);
  const NoiseBundle small = draw_bundle(key_with_m1(3), model, 5, 16);
  for (long p = 0; p < 5; ++p) {
    CHECK(small.initials[p] == big.initials[p]);
    CHECK(small.params[p] == big.params[p]);
    for (long n = 0; n < 16; ++n) {
      CHECK(small.wiener[p * 16 + n] == big.wiener[p * 16 + n]);
    }
  }
}

TEST_CASE("streams differing in m1 are empirically uncorrelated") {
  const ModelSpec model = test::paper_model();
  const long P = 100, n = 1000; // 1e5 paired increments
  const NoiseBundle a = draw_bundle(key_with_m1(0), model, P, n);
  const NoiseBundle b = draw_bundle(key_with_m1(1), model, P, n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < a.wiener.size(); ++i) {
    sxy += a.wiener[i] * b.wiener[i];
    sxx += a.wiener[i] * a.wiener[i];
    syy += b.wiener[i] * b.wiener[i];
  }
  const double r = sxy / std::sqrt(sxx * syy);
  const double n_samples = static_cast<double>(a.wiener.size());
  CHECK(std::fabs(r) <= 4.0 / std::sqrt(n_samples));
}

TEST_CASE("increment variance matches horizon / n_fine") {
  const ModelSpec model = test::paper_model();
  const long P = 1000, n = 1000;
  const NoiseBundle b = draw_bundle(key_with_m1(11), model, P, n);
  double s = 0, ss = 0;
  for (double w : b.wiener) {
    s += w;
    ss += w * w;
  }
  const double count = static_cast<double>(b.wiener.size());
  const double mean = s / count;
  const double var = ss / count - mean * mean;
  CHECK(var == doctest::Approx(model.horizon / n).epsilon(0.01));
  CHECK(std::fabs(mean) < 4.0 * std::sqrt(model.horizon / n / count));
}

TEST_CASE("coarsening: identity, block sums, composition") {
  std::vector<double> inc{1.0, 2.0, -0.5, 4.0, 0.25, -1.0, 3.0, 0.5};
  CHECK(coarsen_increments(inc, 1) == inc);
  const auto by2 = coarsen_increments(inc, 2);
  CHECK(by2 == std::vector<double>{3.0, 3.5, -0.75, 3.5});
  const auto by4_direct = coarsen_increments(inc, 4);
  const auto by4_composed = coarsen_increments(by2, 2);
  CHECK(by4_direct == by4_composed);
  CHECK_THROWS_AS((void)coarsen_increments(inc, 3), ConfigError);
}

TEST_CASE("coarsened increments have factor-times variance") {
  const ModelSpec model = test::paper_model();
  const NoiseBundle fine = draw_bundle(key_with_m1(5), model, 500, 512);
  const NoiseBundle coarse = coarsen_bundle(fine, 4);
  auto variance = [](const std::vector<double>& xs) {
    double s = 0, ss = 0;
    for (double x : xs) {
      s += x;
      ss += x * x;
    }
    const double n = static_cast<double>(xs.size());
    return ss / n - (s / n) * (s / n);
  };
  CHECK(variance(coarse.wiener) ==
        doctest::Approx(4.0 * variance(fine.wiener)).epsilon(0.02));
}

TEST_CASE("group split partitions the bundle exactly") {
  const ModelSpec model = test::paper_model();
  const NoiseBundle b = draw_bundle(key_with_m1(9), model, 10, 8);
  const auto groups = split_groups(b, 2);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].P == 5);
  CHECK(groups[1].P == 5);
  // Group a holds particles (a-1)*P/tau .. a*P/tau - 1 in original order.
  for (long p = 0; p < 5; ++p) {
    CHECK(groups[0].initials[p] == b.initials[p]);
    CHECK(groups[1].initials[p] == b.initials[5 + p]);
  }
  std::vector<double> rejoined = groups[0].wiener;
  rejoined.insert(rejoined.end(), groups[1].wiener.begin(),
                  groups[1].wiener.end());
  CHECK(rejoined == b.wiener);

  const auto singleton = split_groups(b, 1);
  CHECK(singleton.size() == 1);
  CHECK(singleton[0].wiener == b.wiener);
  CHECK_THROWS_AS((void)split_groups(b, 3), ConfigError);
}

TEST_CASE("path noise is deterministic and respects the model") {
  const ModelSpec model = test::paper_model();
  const StreamKey k{7, StreamRole::inner_path, MultiIndex{0, 1}, 2, 5, 0};
  const PathNoise a = draw_path_noise(k, model, 8);
  const PathNoise b = draw_path_noise(k, model, 8);
  CHECK(a.wiener == b.wiener);
  CHECK(a.initial == b.initial);
  REQUIRE(a.param.has_value());
  CHECK(*a.param == *b.param);
  CHECK(std::fabs(*a.param) <= 0.2);

  const ModelSpec no_xi = make_kuramoto(0.4, 1.0, 0.0, 0.1, 0.0);
  CHECK_FALSE(draw_path_noise(k, no_xi, 8).param.has_value());
}
