#include <rectm/burr.hpp>
#include <rectm/error.hpp>
#include <rectm/simulation.hpp>
#include <rectm/tail_moments.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rectm;

namespace {

Sample
pareto_design(Eigen::Index n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = u(rng);
    y[i] = std::pow(1.0 - u(rng), -0.25);
  }
  return Sample::univariate(x, y);
}

double
relative_error(double a, double b)
{
  return std::abs(a - b) / std::abs(b);
}

} // namespace

TEST_CASE("closed-form pieces")
{
  CHECK(rectm_from_parts(3.0, 0.25, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(rectm_from_parts(3.0, 0.25, 0.0) == 1.0);
  CHECK(rectm_from_parts(-3.0, 0.25, 0.0) == 1.0);
  CHECK(rectm_from_parts(2.0, 0.0, 1.0) == 2.0);
  CHECK(weissman_factor(0.9, 0.99, 0.25, 1.0) == doctest::Approx(std::pow(10.0, 0.25)).epsilon(1e-14));
  CHECK(weissman_factor(0.9, 0.99, 0.25, 0.0) == 1.0);
  CHECK(weissman_factor(0.9, 0.9, 0.25, 1.0) == 1.0);

  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;
  };
  CHECK(kind_of([] { rectm_from_parts(3.0, 0.5, 2.0); }) == ErrorKind::moment_nonexistence);
  CHECK(kind_of([] { rectm_from_parts(3.0, 0.6, 2.0); }) == ErrorKind::moment_nonexistence);
  CHECK(kind_of([] { rectm_from_parts(-3.0, 0.25, 0.5); }) == ErrorKind::domain);
  CHECK_THROWS_AS(weissman_factor(0.9, 0.8, 0.25, 1.0), Error);
  CHECK_THROWS_AS(weissman_factor(0.9, 1.0, 0.25, 1.0), Error);
}

TEST_CASE("plug-in and extrapolated estimators agree at beta = alpha")
{
  const auto k = KernelSpec::biquadratic();
  const Sample s = pareto_design(1500, 3);
  const auto taus = harmonic_taus(2);
  const RectmEstimate p = rectm_plugin(s, k, 0.15, 0.9, taus, 1.0, 0.5);
  const RectmEstimate w = rectm_weissman(s, k, 0.15, 0.9, 0.9, taus, 1.0, 0.5);
  CHECK(w.value == p.value);
  CHECK(p.value > 0.0);
  CHECK_FALSE(p.extrapolated);
  CHECK(p.extrapolation_factor == 1.0);
  CHECK(p.level == 0.9);

  const RectmEstimate w99 = rectm_weissman(s, k, 0.15, 0.9, 0.99, taus, 1.0, 0.5);
  CHECK(w99.extrapolated);
  CHECK(w99.level == 0.99);
  CHECK(w99.extrapolation_factor == doctest::Approx(std::pow(10.0, w99.gamma_used)).epsilon(1e-14));
  CHECK(w99.value == doctest::Approx(p.value * w99.extrapolation_factor).epsilon(1e-14));

  CHECK(rectm_weissman(s, k, 0.15, 0.9, 0.99, taus, 0.0, 0.5).value == 1.0);
  CHECK(rectm_plugin(s, k, 0.15, 0.9, taus, 0.0, 0.5).value == 1.0);
}

TEST_CASE("extrapolated estimator is increasing in beta")
{
  const auto k = KernelSpec::biquadratic();
  const Sample s = pareto_design(1500, 8);
  const auto taus = harmonic_taus(2);
  const LocalSample local(s, k, 0.2, 0.4);
  double prev = rectm_weissman(local, 0.9, 0.9, taus, 1.0).value;
  REQUIRE(rectm_weissman(local, 0.9, 0.95, taus, 1.0).gamma_used > 0.0);
  for (double beta = 0.91; beta < 0.9999; beta += 0.005) {
    const double v = rectm_weissman(local, 0.9, beta, taus, 1.0).value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("homogeneity with an injected tail index")
{
  const auto k = KernelSpec::biquadratic();
  const Sample s = pareto_design(1000, 5);
  const auto taus = harmonic_taus(2);
  const double a = 3.5;
  const Sample scaled(s.covariates(), a * s.responses());
  for (double kk : { 0.5, 1.0, 2.0 }) {
    const double base = rectm_plugin(s, k, 0.2, 0.9, taus, kk, 0.5, 0.2).value;
    const double sc = rectm_plugin(scaled, k, 0.2, 0.9, taus, kk, 0.5, 0.2).value;
    CHECK(std::abs(sc / base - std::pow(a, kk)) < 1e-9 * std::pow(a, kk));
  }
  // gamma = 0, k = 1 reduces to the expectile itself.
  const RectmEstimate z = rectm_plugin(s, k, 0.2, 0.9, taus, 1.0, 0.5, 0.0);
  CHECK(z.value == doctest::Approx(expectile_hat(s, k, 0.2, 0.9, 0.5).value).epsilon(1e-15));
  CHECK(z.gamma_used == 0.0);
}

TEST_CASE("plug-in moment on the Burr model")
{
  const BurrOracle oracle;
  const auto k = KernelSpec::biquadratic();
  const double truth = oracle.true_rectm(1.0, 0.95, 0.5);
  std::vector<double> values;
  for (int r = 0; r < 50; ++r) {
    const Sample s = oracle.sample(2000, replication_seed(20240601, r));
    values.push_back(rectm_plugin(s, k, 0.1, 0.95, harmonic_taus(2), 1.0, 0.5).value);
  }
  CHECK(relative_error(sample_quantile(values, 0.5), truth) < 0.2);
}

TEST_CASE("extrapolation beats the direct plug-in at an extreme level")
{
  SimulationConfig cfg;
  cfg.x_grid = Eigen::VectorXd::Constant(1, 0.5);
  const ReplicationReport r = run_simulation(cfg);
  const double truth = r.cell(0.5, "rectm_weissman_J2").truth;
  CHECK(truth == doctest::Approx(BurrOracle().true_rectm(1.0, 1.0 - 1.0 / 2000, 0.5)));
  auto med_rel = [&](const char* name) {
    std::vector<double> d;
    for (double v : r.cell(0.5, name).values)
      if (std::isfinite(v))
        d.push_back(relative_error(v, truth));
    return sample_quantile(d, 0.5);
  };
  CHECK(med_rel("rectm_weissman_J2") < med_rel("rectm_plugin_J2"));
}
