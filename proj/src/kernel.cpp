#include "rectm/kernel.hpp"
#include "rectm/error.hpp"

#include <cmath>
#include <numbers>

namespace rectm {

const char*
to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::invalid_argument:
      return "invalid_argument";
    case ErrorKind::empty_neighborhood:
      return "empty_neighborhood";
    case ErrorKind::degenerate_point:
      return "degenerate_point";
    case ErrorKind::nonpositive_expectile:
      return "nonpositive_expectile";
    case ErrorKind::moment_nonexistence:
      return "moment_nonexistence";
    case ErrorKind::domain:
      return "domain";
    case ErrorKind::convergence:
      return "convergence";
    case ErrorKind::selection_failure:
      return "selection_failure";
    case ErrorKind::oracle_failure:
      return "oracle_failure";
    case ErrorKind::configuration:
      return "configuration";
    case ErrorKind::data:
      return "data";
    case ErrorKind::io:
      return "io";
  }
  return "unknown";
}

Sample::Sample(Eigen::MatrixXd covariates, Eigen::VectorXd responses)
  : covariates_(std::move(covariates))
  , responses_(std::move(responses))
{
  require(responses_.size() >= 1, "sample must contain at least one observation");
  require(covariates_.cols() >= 1, "covariate dimension must be at least 1");
  require(covariates_.rows() == responses_.size(),
          "covariate rows and responses differ in length");
  require(covariates_.allFinite() && responses_.allFinite(),
          "sample contains non-finite entries");
}

Sample
Sample::univariate(const Eigen::VectorXd& x, Eigen::VectorXd y)
{
  Eigen::MatrixXd cov = x;
  return Sample(std::move(cov), std::move(y));
}

KernelSpec::KernelSpec(std::string name,
                       Eigen::Index dim,
                       Profile profile,
                       double support_radius,
                       double l2_norm_sq)
  : name_(std::move(name))
  , dim_(dim)
  , profile_(std::move(profile))
  , support_radius_(support_radius)
  , l2_norm_sq_(l2_norm_sq)
{
  require(dim_ >= 1, "kernel dimension must be at least 1");
  require(static_cast<bool>(profile_), "kernel profile is empty");
  require(std::isfinite(support_radius_) && support_radius_ > 0.0,
          "kernel support radius must be positive and finite");
  require(std::isfinite(l2_norm_sq_) && l2_norm_sq_ > 0.0,
          "kernel squared L2 norm must be positive");
}

namespace {

// Volume of the unit ball in R^p: pi^(p/2) / Gamma(p/2 + 1).
double
unit_ball_volume(double p)
{
  return std::pow(std::numbers::pi, p / 2.0) / std::tgamma(p / 2.0 + 1.0);
}

} // namespace

KernelSpec
KernelSpec::biquadratic(Eigen::Index dim)
{
  require(dim >= 1, "kernel dimension must be at least 1");
  const double p = static_cast<double>(dim);
  // int_{ball} (1 - |u|^2)^2 du = 2 pi^(p/2) / Gamma(p/2 + 3)
  const double c = std::tgamma(p / 2.0 + 3.0) / (2.0 * std::pow(std::numbers::pi, p / 2.0));
  // int_{ball} (1 - |u|^2)^4 du = 24 pi^(p/2) / Gamma(p/2 + 5)
  const double l2 = c * c * 24.0 * std::pow(std::numbers::pi, p / 2.0) /
                    std::tgamma(p / 2.0 + 5.0);
  auto profile = [c](double r) {
    const double s = 1.0 - r * r;
    return c * s * s;
  };
  return KernelSpec("biquadratic", dim, profile, 1.0, l2);
}

KernelSpec
KernelSpec::uniform(Eigen::Index dim)
{
  require(dim >= 1, "kernel dimension must be at least 1");
  const double c = 1.0 / unit_ball_volume(static_cast<double>(dim));
  return KernelSpec("uniform", dim, [c](double) { return c; }, 1.0, c);
}

KernelSpec
KernelSpec::by_name(const std::string& name, Eigen::Index dim)
{
  if (name == "biquadratic")
    return biquadratic(dim);
  if (name == "uniform")
    return uniform(dim);
  fail(ErrorKind::invalid_argument, "unknown kernel '" + name + "'");
}

double
kernel_eval(const KernelSpec& spec, const CovariatePoint& u)
{
  require(u.dim() == spec.dim(), "kernel argument has wrong dimension");
  require(u.vector().allFinite(), "kernel argument is not finite");
  return spec.radial(u.vector().norm());
}

double
kernel_l2norm_sq(const KernelSpec& spec)
{
  return spec.l2_norm_sq();
}

} // namespace rectm
