#include "oracles.hpp"

#include <rectm/burr.hpp>
#include <rectm/error.hpp>
#include <rectm/quadrature.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace rectm;

TEST_CASE("quadrature")
{
  CHECK(integrate([](double x) { return x * x * x; }, 0.0, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 1e-10) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(integrate([](double) { return 1.0; }, 1.0, 1.0) == 0.0);
}

TEST_CASE("tail index function")
{
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double g = default_burr_gamma(i / 1000.0);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  CHECK(lo >= 0.2 - 1e-15);
  CHECK(hi <= 0.3 + 1e-15);
  CHECK(default_burr_gamma(0.25) == doctest::Approx(0.3));
  CHECK(default_burr_gamma(0.75) == doctest::Approx(0.2));
}

TEST_CASE("quantiles")
{
  const BurrOracle o;
  for (double x : { 0.0, 0.1, 0.33, 0.5, 0.9 }) {
    CHECK(o.true_quantile(0.5, x) == doctest::Approx(1.0).epsilon(1e-15));
    for (double a : { 0.1, 0.5, 0.9, 0.99, 0.999999 }) {
      const BurrLaw law = o.law(x);
      CHECK(std::abs(law.survival(o.true_quantile(a, x)) - (1.0 - a)) < 1e-12);
    }
  }
  CHECK(o.true_quantile(0.99, 0.0) == doctest::Approx(std::pow(99.0, 0.25)).epsilon(1e-14));
  CHECK(o.true_quantile(0.99, 0.0) == doctest::Approx(3.154342).epsilon(1e-6));
  CHECK_THROWS_AS(o.true_quantile(1.0, 0.5), Error);
  CHECK_THROWS_AS(BurrLaw(0.0), Error);
  CHECK_THROWS_AS(BurrLaw(-0.1), Error);
}

TEST_CASE("sampling is deterministic")
{
  const Sample a = burr_sample(1000, 42);
  const Sample b = burr_sample(1000, 42);
  const Sample c = burr_sample(1000, 43);
  CHECK(a.covariates() == b.covariates());
  CHECK(a.responses() == b.responses());
  CHECK(a.responses() != c.responses());
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));

  UniformStream u(7);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.next();
    CHECK((v > 0.0 && v < 1.0));
  }
}

TEST_CASE("empirical survival and quantile in covariate bands")
{
  const Sample s = burr_sample(100000, 2024);
  const auto& x = s.covariates().col(0);
  const auto& y = s.responses();
  int in_band = 0, above = 0;
  for (Eigen::Index i = 0; i < s.n(); ++i)
    if (std::abs(x[i] - 0.5) < 0.05) {
      ++in_band;
      above += y[i] > 1.0;
    }
  CHECK(std::abs(static_cast<double>(above) / in_band - 0.5) < 0.02);

  const Sample big = burr_sample(1000000, 77);
  std::vector<double> band;
  for (Eigen::Index i = 0; i < big.n(); ++i)
    if (std::abs(big.covariates()(i, 0) - 0.25) < 0.01)
      band.push_back(big.responses()[i]);
  std::sort(band.begin(), band.end());
  const double q = band[static_cast<std::size_t>(0.99 * (band.size() - 1))];
  CHECK(std::abs(q / std::pow(99.0, 0.3) - 1.0) < 0.05);
}

TEST_CASE("banded Kolmogorov-Smirnov through the probability integral transform")
{
  const Sample s = burr_sample(1000000, 5);
  const BurrOracle o;
  for (int band = 0; band < 10; ++band) {
    std::vector<double> u;
    for (Eigen::Index i = 0; i < s.n(); ++i) {
      const double x = s.covariates()(i, 0);
      if (x >= band / 10.0 && x < (band + 1) / 10.0) {
        const double g = o.gamma(x);
        // F(y) = 1 - 1 / (1 + y^(1/g)), written out here.
        u.push_back(1.0 - 1.0 / (1.0 + std::pow(s.responses()[i], 1.0 / g)));
      }
    }
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      d = std::max({ d, (i + 1) / n - u[i], u[i] - i / n });
    CHECK(d < 0.02);
  }
}

TEST_CASE("mean and expectile at one half")
{
  for (double g : { 0.2, 0.25, 0.3, 0.45 }) {
    const BurrLaw law(g);
    CHECK(law.mean() == doctest::Approx(std::beta(1.0 + g, 1.0 - g)).epsilon(1e-10));
    CHECK(law.expectile(0.5) == doctest::Approx(std::beta(1.0 + g, 1.0 - g)).epsilon(1e-8));
  }
  const BurrOracle o;
  CHECK(o.true_expectile(0.5, 0.3) == doctest::Approx(o.conditional_mean(0.3)).epsilon(1e-8));
}

TEST_CASE("expectile solves the population first-order condition")
{
  const BurrOracle o;
  for (double x : { 0.1, 0.5, 0.8 })
    for (double a : { 0.6, 0.9, 0.99, 0.9999 }) {
      const double g = o.gamma(x);
      const double e = o.true_expectile(a, x);
      auto surv = [&](double y) { return 1.0 / (1.0 + std::pow(y, 1.0 / g)); };
      // psi(e) = int_e^inf S(y) dy via y = e + u / (1 - u).
      const double psi = integrate(
        [&](double u) { return u >= 1.0 ? 0.0 : surv(e + u / (1.0 - u)) / ((1.0 - u) * (1.0 - u)); },
        0.0, 1.0, 1e-14, 1e-13);
      const double m = std::beta(1.0 + g, 1.0 - g);
      CHECK(std::abs(psi / (2.0 * psi + (e - m)) - (1.0 - a)) < 1e-8 * (1.0 - a) + 1e-13);
    }
}

TEST_CASE("expectile is increasing in the level")
{
  const BurrOracle o;
  double prev = 0.0;
  for (double a = 0.05; a < 1.0 - 1e-7; a = 1.0 - (1.0 - a) * 0.7) {
    const double e = o.true_expectile(a, 0.5);
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("expectile to quantile ratio limit")
{
  const BurrOracle o;
  auto rel = [&](double a, double x) {
    const double g = o.gamma(x);
    const double limit = std::pow(1.0 / g - 1.0, -g);
    return std::abs(o.true_expectile(a, x) / o.true_quantile(a, x) / limit - 1.0);
  };
  CHECK(rel(1.0 - 1e-6, 0.25) < 0.01);
  for (double x : { 0.25, 0.5, 0.75 }) {
    double prev = 1.0;
    for (double tail : { 1e-3, 1e-4, 1e-5, 1e-6, 1e-7 }) {
      const double r = rel(1.0 - tail, x);
      CHECK(r < prev);
      prev = r;
    }
  }
}

TEST_CASE("tail moment limits")
{
  const BurrOracle o;
  for (double x : { 0.25, 0.5, 0.75 }) {
    CHECK(o.true_rectm(0.0, 0.95, x) == 1.0);
    const double g = o.gamma(x);
    for (double k : { 0.5, 1.0, 2.0 }) {
      const double e = o.true_expectile(1.0 - 1e-4, x);
      const double ratio = o.true_rectm(k, 1.0 - 1e-4, x) * (1.0 - k * g) / std::pow(e, k);
      CHECK(std::abs(ratio - 1.0) < 0.02);
    }
  }
  CHECK_THROWS_AS(BurrLaw(0.3).tail_moment(4.0, 1.0), Error);
}

TEST_CASE("conditional moment ratio error at large thresholds")
{
  for (double g : { 0.2, 0.25, 0.3 }) {
    const BurrLaw law(g);
    for (double k : { 0.5, 1.0 }) {
      double prev = std::numeric_limits<double>::infinity();
      for (double t : { 1e2, 1e3, 1e4 }) {
        const double err = std::abs(law.tail_moment_ratio_error(k, t));
        CHECK(err < prev);
        prev = err;
      }
      // Leading term k g t^(-1/g) / ((1 - k g)(2 - k g)) from expanding the
      // survival function one order further.
      const double lead = k * g / ((1.0 - k * g) * (2.0 - k * g)) * std::pow(1e4, -1.0 / g);
      CHECK(law.tail_moment_ratio_error(k, 1e4) == doctest::Approx(lead).epsilon(0.01));
    }
  }
}

TEST_CASE("direct tail moment against an independent integral")
{
  const BurrLaw law(0.25);
  const double t = 3.0;
  // E[Y 1{Y > t}] = t S(t) + int_t^inf S(y) dy
  auto surv = [](double y) { return 1.0 / (1.0 + std::pow(y, 4.0)); };
  const double tail = oracle::simpson(
    [&](double u) { return u >= 1.0 ? 0.0 : surv(t + u / (1.0 - u)) / ((1.0 - u) * (1.0 - u)); }, 0.0, 1.0, 200000);
  CHECK(law.tail_moment(1.0, t) == doctest::Approx(t * surv(t) + tail).epsilon(1e-8));
  CHECK(law.excess_mean(t) == doctest::Approx(tail).epsilon(1e-8));
}
