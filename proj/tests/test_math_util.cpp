#include <doctest.h>

#include <cmath>
#include <vector>

#include "midlmc/math_util.hpp"

using namespace midlmc;

TEST_CASE("normal quantile reproduces reference values") {
  // Reference values accurate to 1e-9 or better.
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-10));
  CHECK(normal_quantile(0.9995) == doctest::Approx(3.290526731491926).epsilon(1e-10));
  CHECK(normal_quantile(0.84134474606854293) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(confidence_constant(0.05) == doctest::Approx(1.959964).epsilon(1e-6));
}

TEST_CASE("normal quantile is antisymmetric and monotone") {
  for (double p : {1e-9, 1e-4, 0.1, 0.3, 0.49}) {
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-12));
  }
  double prev = normal_quantile(1e-8);
  for (double p = 1e-4; p < 1.0; p += 5e-3) {
    const double q = normal_quantile(p);
    CHECK(q > prev);
    prev = q;
  }
}

TEST_CASE("line fit recovers exact linear data") {
  std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(3.5 - 2.0 * v);
  const auto [slope, intercept] = fit_line(x, y);
  CHECK(slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(intercept == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(fit_line_rss(x, y, slope, intercept) == doctest::Approx(0.0).epsilon(1e-18));
}

TEST_CASE("fnv hash is stable") {
  const char* s = "midlmc";
  const auto h1 = fnv1a64({s, 6});
  const auto h2 = fnv1a64({s, 6});
  CHECK(h1 == h2);
  CHECK(h1 != fnv1a64({s, 5}));
}
