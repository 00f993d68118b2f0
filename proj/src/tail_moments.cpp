#include "rectm/tail_moments.hpp"
#include "rectm/error.hpp"

#include <cmath>

namespace rectm {

double
rectm_from_parts(double expectile, double gamma, double k)
{
  require(std::isfinite(k) && k >= 0.0, "moment order must be nonnegative");
  if (k == 0.0)
    return 1.0;
  if (!(k * gamma < 1.0))
    fail(ErrorKind::moment_nonexistence, "k * gamma >= 1: the tail moment does not exist");
  if (expectile <= 0.0 && std::floor(k) != k)
    fail(ErrorKind::domain, "fractional power of a nonpositive expectile");
  return std::pow(expectile, k) / (1.0 - k * gamma);
}

double
weissman_factor(double alpha, double beta, double gamma, double k)
{
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require(beta >= alpha && beta < 1.0, "beta must lie in [alpha, 1)");
  if (k == 0.0 || beta == alpha)
    return 1.0;
  return std::pow((1.0 - alpha) / (1.0 - beta), k * gamma);
}

namespace {

RectmEstimate
plugin_from(double expectile, double gamma, double alpha, double k)
{
  return { rectm_from_parts(expectile, gamma, k), k, alpha, gamma, expectile, false, 1.0 };
}

RectmEstimate
extrapolate(RectmEstimate plugin, double alpha, double beta)
{
  require(beta > alpha && beta < 1.0, "beta must lie in (alpha, 1)");
  const double factor = weissman_factor(alpha, beta, plugin.gamma_used, plugin.k);
  plugin.value *= factor;
  plugin.level = beta;
  plugin.extrapolated = true;
  plugin.extrapolation_factor = factor;
  return plugin;
}

} // namespace

RectmEstimate
rectm_plugin(const TailIndexEstimate& tail, double alpha, double k)
{
  return plugin_from(tail.expectile(), tail.gamma_tilde, alpha, k);
}

RectmEstimate
rectm_weissman(const TailIndexEstimate& tail, double alpha, double beta, double k)
{
  if (beta == alpha)
    return rectm_plugin(tail, alpha, k);
  return extrapolate(rectm_plugin(tail, alpha, k), alpha, beta);
}

RectmEstimate
rectm_plugin(const LocalSample& local,
             double alpha,
             const Eigen::VectorXd& taus,
             double k,
             std::optional<double> gamma_override)
{
  require(std::isfinite(k) && k >= 0.0, "moment order must be nonnegative");
  if (k == 0.0)
    return { 1.0, 0.0, alpha, gamma_override.value_or(0.0), 0.0, false, 1.0 };
  if (gamma_override) {
    const double e = expectile_hat(local, alpha).value;
    return plugin_from(e, *gamma_override, alpha, k);
  }
  return rectm_plugin(estimate_tail_index(local, alpha, taus), alpha, k);
}

RectmEstimate
rectm_plugin(const Sample& sample,
             const KernelSpec& spec,
             double h,
             double alpha,
             const Eigen::VectorXd& taus,
             double k,
             const CovariatePoint& x,
             std::optional<double> gamma_override)
{
  return rectm_plugin(LocalSample(sample, spec, h, x), alpha, taus, k, gamma_override);
}

RectmEstimate
rectm_weissman(const LocalSample& local,
               double alpha,
               double beta,
               const Eigen::VectorXd& taus,
               double k,
               std::optional<double> gamma_override)
{
  require(beta >= alpha && beta < 1.0, "beta must lie in [alpha, 1)");
  RectmEstimate plugin = rectm_plugin(local, alpha, taus, k, gamma_override);
  if (beta == alpha)
    return plugin;
  return extrapolate(plugin, alpha, beta);
}

RectmEstimate
rectm_weissman(const Sample& sample,
               const KernelSpec& spec,
               double h,
               double alpha,
               double beta,
               const Eigen::VectorXd& taus,
               double k,
               const CovariatePoint& x,
               std::optional<double> gamma_override)
{
  return rectm_weissman(LocalSample(sample, spec, h, x), alpha, beta, taus, k, gamma_override);
}

} // namespace rectm
