#include "rectm/kernel_smoothing.hpp"
#include "rectm/error.hpp"
#include "rectm/summation.hpp"

#include <cmath>

namespace rectm {

namespace {

void
check_bandwidth(double h)
{
  require(std::isfinite(h) && h > 0.0, "bandwidth must be positive and finite");
}

} // namespace

Eigen::VectorXd
kernel_weights(const Sample& sample,
               const KernelSpec& spec,
               double h,
               const CovariatePoint& x)
{
  check_bandwidth(h);
  require(x.dim() == sample.p(), "evaluation point has wrong dimension");
  require(spec.dim() == sample.p(), "kernel dimension does not match sample");
  require(x.vector().allFinite(), "evaluation point is not finite");

  const double scale = std::pow(h, static_cast<double>(sample.p()));
  const auto& cov = sample.covariates();
  Eigen::VectorXd w(sample.n());
  for (Eigen::Index i = 0; i < sample.n(); ++i) {
    const double r = (x.vector().transpose() - cov.row(i)).norm() / h;
    w[i] = spec.radial(r) / scale;
  }
  return w;
}

LocalSample::LocalSample(const Sample& sample,
                         const KernelSpec& spec,
                         double h,
                         const CovariatePoint& x)
  : LocalSample(kernel_weights(sample, spec, h, x), sample.responses(), sample.n())
{}

LocalSample::LocalSample(const Eigen::VectorXd& weights,
                         const Eigen::VectorXd& responses,
                         Eigen::Index n_total)
  : n_total_(n_total)
{
  require(weights.size() == responses.size(), "weights and responses differ in length");
  require(n_total >= 1, "n must be at least 1");
  require((weights.array() >= 0.0).all() && weights.allFinite(),
          "weights must be nonnegative and finite");
  const Eigen::Index m = (weights.array() > 0.0).count();
  weights_.resize(m);
  responses_.resize(m);
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      weights_[j] = weights[i];
      responses_[j] = responses[i];
      ++j;
    }
  }
  finish();
}

void
LocalSample::finish()
{
  CompensatedSum<> w, wy;
  for (Eigen::Index i = 0; i < size(); ++i) {
    w += weights_[i];
    wy += weights_[i] * responses_[i];
  }
  total_weight_ = w.value();
  mean_ = total_weight_ > 0.0 ? wy.value() / total_weight_ : 0.0;
}

double
LocalSample::min_response() const
{
  if (empty())
    fail(ErrorKind::empty_neighborhood, "no observation within the kernel support");
  return responses_.minCoeff();
}

double
LocalSample::max_response() const
{
  if (empty())
    fail(ErrorKind::empty_neighborhood, "no observation within the kernel support");
  return responses_.maxCoeff();
}

double
LocalSample::mean() const
{
  if (empty())
    fail(ErrorKind::empty_neighborhood, "no observation within the kernel support");
  return mean_;
}

double
LocalSample::psi(int k, double y) const
{
  require(k >= 0, "moment order must be nonnegative");
  CompensatedSum<> acc;
  for (Eigen::Index i = 0; i < size(); ++i) {
    const double excess = responses_[i] - y;
    if (excess > 0.0)
      acc += weights_[i] * (k == 1 ? excess : std::pow(excess, k));
  }
  return acc.value() / static_cast<double>(n_total_);
}

double
LocalSample::gbar(double y) const
{
  const double m = mean();
  const double psi1 = psi(1, y);
  const double denom = 2.0 * psi1 + (y - m) * density();
  if (!(denom > 0.0))
    fail(ErrorKind::degenerate_point, "G-bar denominator vanishes at this threshold");
  return psi1 / denom;
}

double
density_estimate(const Sample& sample,
                 const KernelSpec& spec,
                 double h,
                 const CovariatePoint& x)
{
  const Eigen::VectorXd w = kernel_weights(sample, spec, h, x);
  return compensated_sum(w) / static_cast<double>(sample.n());
}

double
conditional_mean_estimate(const Sample& sample,
                          const KernelSpec& spec,
                          double h,
                          const CovariatePoint& x)
{
  return LocalSample(sample, spec, h, x).mean();
}

double
psi_estimate(const Sample& sample,
             const KernelSpec& spec,
             double h,
             int k,
             double y,
             const CovariatePoint& x)
{
  return LocalSample(sample, spec, h, x).psi(k, y);
}

double
gbar_estimate(const Sample& sample,
              const KernelSpec& spec,
              double h,
              double y,
              const CovariatePoint& x)
{
  return LocalSample(sample, spec, h, x).gbar(y);
}

LooSurvival
loo_survival(const Sample& sample,
             const KernelSpec& spec,
             double h,
             double y,
             const CovariatePoint& x,
             Eigen::Index exclude_index)
{
  require(exclude_index >= 0 && exclude_index < sample.n(), "excluded index out of range");
  const Eigen::VectorXd w = kernel_weights(sample, spec, h, x);
  CompensatedSum<> num, den;
  for (Eigen::Index j = 0; j < sample.n(); ++j) {
    if (j == exclude_index || w[j] <= 0.0)
      continue;
    den += w[j];
    if (sample.responses()[j] > y)
      num += w[j];
  }
  if (!(den.value() > 0.0))
    return { 0.0, true };
  return { num.value() / den.value(), false };
}

} // namespace rectm
