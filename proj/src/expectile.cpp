#include "rectm/expectile.hpp"
#include "rectm/error.hpp"
#include "rectm/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rectm {

Eigen::VectorXd
harmonic_taus(Eigen::Index J)
{
  require(J >= 1, "J must be positive");
  Eigen::VectorXd taus(J);
  for (Eigen::Index j = 0; j < J; ++j)
    taus[j] = 1.0 / static_cast<double>(j + 1);
  return taus;
}

void
validate_tail_weights(const Eigen::VectorXd& taus, double alpha)
{
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require(taus.size() >= 2, "at least two tail weights are required (J >= 2)");
  require(taus[0] == 1.0, "the first tail weight must equal 1");
  for (Eigen::Index j = 1; j < taus.size(); ++j) {
    require(taus[j] > 0.0, "tail weights must be positive");
    require(taus[j] < taus[j - 1], "tail weights must be strictly decreasing");
  }
}

Eigen::VectorXd
tail_levels(const Eigen::VectorXd& taus, double alpha)
{
  Eigen::VectorXd levels = 1.0 - taus.array() * (1.0 - alpha);
  levels[0] = alpha;
  return levels;
}

void
TailConfig::validate() const
{
  validate_tail_weights(taus, alpha);
  require(std::isfinite(h) && h > 0.0, "bandwidth must be positive");
  require(std::isfinite(k) && k >= 0.0, "moment order must be nonnegative");
}

namespace {

// Bisection on a predicate that is false at lo and true at hi; returns the
// smallest point found where it holds.
template <typename Pred>
double
bisect(Pred holds, double lo, double hi, int& iterations)
{
  iterations = 0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kExpectileTolerance * (1.0 + std::abs(mid)) || mid == lo || mid == hi)
      return hi;
    if (iterations == kMaxBisectionIterations)
      fail(ErrorKind::convergence, "expectile bisection did not converge");
    ++iterations;
    if (holds(mid))
      hi = mid;
    else
      lo = mid;
  }
}

} // namespace

ExpectileEstimate
expectile_hat(const LocalSample& local, double alpha)
{
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  if (local.empty())
    fail(ErrorKind::empty_neighborhood, "no observation within the kernel support");

  const double ymin = local.min_response();
  const double ymax = local.max_response();
  if (ymin == ymax)
    return { ymin, alpha, Eigen::VectorXd(), ymin, ymax, 0 };

  const double target = 1.0 - alpha;
  auto holds = [&](double y) { return local.gbar(y) <= target; };

  // G-bar_hat is 1/2 at the weighted mean and decreasing, so the mean splits
  // the response range into the half that holds the answer.
  const double m = local.mean();
  double lo = m;
  double hi = ymax;
  if (holds(m)) {
    lo = ymin;
    hi = m;
    if (holds(lo))
      return { lo, alpha, Eigen::VectorXd(), lo, hi, 0 };
  }

  int iterations = 0;
  const double value = bisect(holds, lo, hi, iterations);
  return { value, alpha, Eigen::VectorXd(), lo, hi, iterations };
}

ExpectileEstimate
expectile_hat(const Sample& sample,
              const KernelSpec& spec,
              double h,
              double alpha,
              const CovariatePoint& x)
{
  ExpectileEstimate est = expectile_hat(LocalSample(sample, spec, h, x), alpha);
  est.x = x.vector();
  return est;
}

double
empirical_weighted_expectile(const Eigen::VectorXd& weights,
                             const Eigen::VectorXd& responses,
                             double alpha)
{
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require(weights.size() == responses.size(), "weights and responses differ in length");
  require((weights.array() >= 0.0).all(), "weights must be nonnegative");
  require((weights.array() > 0.0).any(), "weights must not all be zero");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      lo = std::min(lo, responses[i]);
      hi = std::max(hi, responses[i]);
    }
  }
  if (lo == hi)
    return lo;

  // alpha * E_w (Y - t)^+ - (1 - alpha) * E_w (t - Y)^+ is decreasing in t.
  auto foc = [&](double t) {
    CompensatedSum<> above, below;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
      const double d = responses[i] - t;
      if (d > 0.0)
        above += weights[i] * d;
      else
        below += -weights[i] * d;
    }
    return alpha * above.value() - (1.0 - alpha) * below.value();
  };
  int iterations = 0;
  return bisect([&](double t) { return foc(t) <= 0.0; }, lo, hi, iterations);
}

double
hill_from_expectiles(const Eigen::VectorXd& expectiles, const Eigen::VectorXd& taus)
{
  require(expectiles.size() == taus.size(), "one expectile per tail weight is required");
  for (Eigen::Index j = 0; j < expectiles.size(); ++j) {
    if (!(expectiles[j] > 0.0))
      fail(ErrorKind::nonpositive_expectile,
           "tail-index estimation needs positive expectiles");
  }
  const double log_base = std::log(expectiles[0]);
  double numer = 0.0;
  double denom = 0.0;
  for (Eigen::Index j = 0; j < taus.size(); ++j) {
    numer += std::log(expectiles[j]) - log_base;
    denom += std::log(1.0 / taus[j]);
  }
  return numer / denom;
}

double
bias_reduce_gamma(double gamma_hat,
                  double mean,
                  double expectile,
                  const Eigen::VectorXd& taus)
{
  if (expectile == 0.0)
    fail(ErrorKind::domain, "bias correction divides by a zero expectile");
  double spacing = 0.0;
  double denom = 0.0;
  for (Eigen::Index j = 0; j < taus.size(); ++j) {
    spacing += std::pow(taus[j], gamma_hat) - 1.0;
    denom += std::log(1.0 / taus[j]);
  }
  return gamma_hat * (1.0 - mean * spacing / (expectile * denom));
}

TailIndexEstimate
estimate_tail_index(const LocalSample& local,
                    double alpha,
                    const Eigen::VectorXd& taus)
{
  validate_tail_weights(taus, alpha);
  const Eigen::VectorXd levels = tail_levels(taus, alpha);
  TailIndexEstimate est;
  est.density = local.density();
  est.mean = local.mean();
  est.expectiles.resize(levels.size());
  for (Eigen::Index j = 0; j < levels.size(); ++j)
    est.expectiles[j] = expectile_hat(local, levels[j]).value;
  est.gamma_hat = hill_from_expectiles(est.expectiles, taus);
  est.gamma_tilde = bias_reduce_gamma(est.gamma_hat, est.mean, est.expectile(), taus);
  return est;
}

double
gamma_hat(const Sample& sample,
          const KernelSpec& spec,
          double h,
          double alpha,
          const Eigen::VectorXd& taus,
          const CovariatePoint& x)
{
  return estimate_tail_index(LocalSample(sample, spec, h, x), alpha, taus).gamma_hat;
}

double
gamma_tilde(const Sample& sample,
            const KernelSpec& spec,
            double h,
            double alpha,
            const Eigen::VectorXd& taus,
            const CovariatePoint& x)
{
  return estimate_tail_index(LocalSample(sample, spec, h, x), alpha, taus).gamma_tilde;
}

} // namespace rectm
