#include "rectm/burr.hpp"
#include "rectm/error.hpp"
#include "rectm/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace rectm {

namespace {

constexpr double kOracleRelTol = 1e-13;

} // namespace

BurrLaw::BurrLaw(double gamma)
  : gamma_(gamma)
{
  require(std::isfinite(gamma) && gamma > 0.0, "Burr tail index must be positive");
}

double
BurrLaw::survival(double y) const
{
  if (y <= 0.0)
    return 1.0;
  return 1.0 / (1.0 + std::pow(y, 1.0 / gamma_));
}

double
BurrLaw::quantile(double alpha) const
{
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  return std::pow(alpha / (1.0 - alpha), gamma_);
}

void
BurrLaw::require_moment(double k) const
{
  require(std::isfinite(k) && k >= 0.0, "moment order must be nonnegative");
  if (!(k * gamma_ < 1.0))
    fail(ErrorKind::moment_nonexistence, "k * gamma >= 1: the tail moment does not exist");
}

double
BurrLaw::mean() const
{
  return tail_moment(1.0, 0.0);
}

double
BurrLaw::tail_moment(double k, double t) const
{
  require_moment(k);
  const double s_t = survival(t);
  if (k == 0.0)
    return s_t;
  const double kg = k * gamma_;
  const double m = 1.0 / (1.0 - kg);
  const double upper = std::pow(s_t, 1.0 - kg);
  auto integrand = [=](double v) { return m * std::pow(1.0 - std::pow(v, m), kg); };
  return integrate(integrand, 0.0, upper, 0.0, kOracleRelTol);
}

double
BurrLaw::excess_mean(double t) const
{
  require_moment(1.0);
  if (t <= 0.0)
    return mean() - t;
  const double m = 1.0 / (1.0 - gamma_);
  const double upper = std::pow(survival(t), 1.0 - gamma_);
  const double g = gamma_;
  auto integrand = [=](double v) {
    return m * (std::pow(1.0 - std::pow(v, m), g) - t * std::pow(v, m - 1.0));
  };
  return integrate(integrand, 0.0, upper, 0.0, kOracleRelTol);
}

double
BurrLaw::expectile(double alpha) const
{
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require_moment(1.0);
  const double mu = mean();
  // (2 alpha - 1) E(Y - e)^+ - (1 - alpha)(e - mu): the first-order condition
  // rearranged so no term cancels at extreme alpha; strictly decreasing in e.
  auto foc = [&](double e) { return (2.0 * alpha - 1.0) * excess_mean(e) - (1.0 - alpha) * (e - mu); };

  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * std::max(mu, quantile(alpha)));
  int expansions = 0;
  while (foc(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 200)
      fail(ErrorKind::oracle_failure, "could not bracket the Burr expectile");
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kOracleRelTol * (1.0 + std::abs(mid)) || mid == lo || mid == hi)
      return mid;
    if (foc(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  fail(ErrorKind::oracle_failure, "Burr expectile bisection did not converge");
}

double
BurrLaw::rectm(double k, double alpha) const
{
  require_moment(k);
  if (k == 0.0)
    return 1.0;
  const double e = expectile(alpha);
  return tail_moment(k, e) / survival(e);
}

double
BurrLaw::tail_moment_ratio_error(double k, double t) const
{
  require_moment(k);
  require(t > 0.0, "threshold must be positive");
  if (k == 0.0)
    return 0.0;
  const double kg = k * gamma_;
  const double m = 1.0 / (1.0 - kg);
  const double s_t = 1.0 / (1.0 + std::pow(t, 1.0 / gamma_));
  const double upper = std::pow(s_t, 1.0 - kg);
  // E[Y^k | Y > t] / t^k = m (1 + a)(1 + b) with a, b both small in the tail.
  const double a = std::expm1(kg * std::log1p(std::pow(t, -1.0 / gamma_)));
  auto integrand = [=](double v) { return std::expm1(kg * std::log1p(-std::pow(v, m))); };
  const double b = integrate(integrand, 0.0, upper, 0.0, kOracleRelTol) / upper;
  return m * (a + b + a * b);
}

double
BurrLaw::gbar(double y) const
{
  const double psi = excess_mean(y);
  return psi / (2.0 * psi + (y - mean()));
}

double
default_burr_gamma(double x)
{
  return 0.25 + std::sin(2.0 * std::numbers::pi * x) / 20.0;
}

BurrOracle::BurrOracle(GammaFn gamma_fn)
  : gamma_fn_(std::move(gamma_fn))
{
  require(static_cast<bool>(gamma_fn_), "tail-index function is empty");
}

double
BurrOracle::true_quantile(double alpha, double x) const
{
  return law(x).quantile(alpha);
}

double
BurrOracle::true_expectile(double alpha, double x) const
{
  return law(x).expectile(alpha);
}

double
BurrOracle::true_rectm(double k, double alpha, double x) const
{
  return law(x).rectm(k, alpha);
}

double
BurrOracle::conditional_mean(double x) const
{
  return law(x).mean();
}

Sample
BurrOracle::sample(Eigen::Index n, std::uint64_t seed) const
{
  require(n >= 1, "sample size must be at least 1");
  UniformStream u(seed);
  Eigen::VectorXd x(n);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = u.next();
    const double v = u.next();
    y[i] = std::pow(v / (1.0 - v), gamma(x[i]));
  }
  return Sample::univariate(x, std::move(y));
}

Sample
burr_sample(Eigen::Index n, std::uint64_t seed)
{
  return BurrOracle().sample(n, seed);
}

std::uint64_t
mix_seed(std::uint64_t seed, std::uint64_t stream)
{
  std::uint64_t z = seed + (stream + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

UniformStream::UniformStream(std::uint64_t seed)
  : engine_(seed)
{}

double
UniformStream::next()
{
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace rectm
