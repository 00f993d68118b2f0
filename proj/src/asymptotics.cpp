#include "rectm/asymptotics.hpp"
#include "rectm/error.hpp"
#include "rectm/expectile.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace rectm {

void
AsymptoticSpec::validate() const
{
  require(gamma > 0.0 && gamma < 0.5, "gamma must lie in (0, 1/2)");
  require(std::isfinite(k) && k >= 0.0, "moment order must be nonnegative");
  require(k * gamma < 1.0, "k * gamma must be below 1");
  validate_tail_weights(taus, 0.5);
}

namespace {

double
log_weight_sum(const Eigen::VectorXd& taus)
{
  double s = 0.0;
  for (Eigen::Index j = 0; j < taus.size(); ++j)
    s += std::log(1.0 / taus[j]);
  return s;
}

double
lambda12_at(double gamma, const Eigen::VectorXd& taus)
{
  const double J = static_cast<double>(taus.size());
  double s = 0.0;
  for (Eigen::Index j = 1; j < taus.size(); ++j)
    s += std::pow(taus[j], -gamma);
  return (s - J + 1.0) / ((1.0 - 2.0 * gamma) * log_weight_sum(taus));
}

} // namespace

double
lambda22_at(double gamma, const Eigen::VectorXd& taus)
{
  require(gamma < 0.5, "Lambda_{2,2} needs gamma < 1/2");
  require(taus.size() >= 2, "at least two tail weights are required (J >= 2)");
  const Eigen::Index J = taus.size();
  const double Jd = static_cast<double>(J);
  double inv_sum = 0.0;
  double pow_sum = 0.0;
  for (Eigen::Index j = 1; j < J; ++j) {
    inv_sum += 1.0 / taus[j];
    pow_sum += std::pow(taus[j], -gamma);
  }
  const double one_minus = 1.0 - 2.0 * gamma;
  double numer = 2.0 / one_minus *
                 ((Jd - 1.0) * (Jd - 1.0) * (1.0 - gamma) + gamma * inv_sum + (1.0 - Jd) * pow_sum);
  double cross = 0.0;
  for (Eigen::Index j = 1; j + 1 < J; ++j)
    for (Eigen::Index l = j + 1; l < J; ++l)
      cross += (std::pow(taus[l] / taus[j], -gamma) / one_minus - 1.0) / taus[j];
  numer += 2.0 * cross;
  const double lw = log_weight_sum(taus);
  return numer / (lw * lw);
}

Eigen::Matrix2d
lambda_matrix(const AsymptoticSpec& spec)
{
  spec.validate();
  const double g = spec.gamma;
  const double l12 = lambda12_at(g, spec.taus);
  Eigen::Matrix2d m;
  m << 2.0 * g / (1.0 - 2.0 * g), l12, l12, lambda22_at(g, spec.taus);
  return m;
}

Eigen::Matrix2d
v_matrix(const AsymptoticSpec& spec)
{
  const Eigen::Matrix2d lambda = lambda_matrix(spec);
  const double g = spec.gamma;
  const double k = spec.k;
  const double base = 2.0 * g / (1.0 - 2.0 * g);
  const double r = k / (1.0 - k * g);
  const double v11 = k * k * base + 2.0 * k * r * lambda(0, 1) + r * r * lambda(1, 1);
  const double v12 = k * base + r * lambda(0, 1);
  Eigen::Matrix2d v;
  v << v11, v12, v12, base;
  return v;
}

double
bias_term(const AsymptoticSpec& spec)
{
  spec.validate();
  double s = 0.0;
  for (Eigen::Index j = 0; j < spec.taus.size(); ++j)
    s += std::pow(spec.taus[j], spec.gamma) - 1.0;
  return spec.gamma * s / log_weight_sum(spec.taus);
}

double
min_eigenvalue(const Eigen::Matrix2d& m)
{
  const double mean = 0.5 * (m(0, 0) + m(1, 1));
  const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
  return mean - std::hypot(half_diff, m(0, 1));
}

double
gaussian_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double
gaussian_quantile(double p)
{
  require(p > 0.0 && p < 1.0, "normal quantile needs p in (0, 1)");
  // Acklam's rational approximation, then one Halley step on erfc.
  static constexpr std::array<double, 6> a{ -3.969683028665376e+01, 2.209460984245205e+02,
                                            -2.759285104469687e+02, 1.383577518672690e+02,
                                            -3.066479806614716e+01, 2.506628277459239e+00 };
  static constexpr std::array<double, 5> b{ -5.447609879822406e+01, 1.615858368580409e+02,
                                            -1.556989798598866e+02, 6.680131188771972e+01,
                                            -1.328068155288572e+01 };
  static constexpr std::array<double, 6> c{ -7.784894002430293e-03, -3.223964580411365e-01,
                                            -2.400758277161838e+00, -2.549732539343734e+00,
                                            4.374664141464968e+00,  2.938163982698783e+00 };
  static constexpr std::array<double, 4> d{ 7.784695709041462e-03, 3.224671290700398e-01,
                                            2.445134137142996e+00, 3.754408661907416e+00 };
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p == 0.5)
    return 0.0;
  const double e = gaussian_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

const char*
to_string(ConfidenceInterval::Status status)
{
  switch (status) {
    case ConfidenceInterval::Status::ok:
      return "ok";
    case ConfidenceInterval::Status::negative_lambda22:
      return "negative_lambda22";
    case ConfidenceInterval::Status::unbounded:
      return "unbounded";
    case ConfidenceInterval::Status::invalid_gamma:
      return "invalid_gamma";
  }
  return "unknown";
}

ConfidenceInterval
confidence_interval_from_scale(double value, double scale, double theta)
{
  require(theta > 0.0 && theta <= 1.0, "theta must lie in (0, 1]");
  require(std::isfinite(scale) && scale >= 0.0, "interval scale must be nonnegative");
  const double z = theta == 1.0 ? 0.0 : gaussian_quantile(1.0 - theta / 2.0);
  const double zs = z * scale;
  if (1.0 - zs <= 0.0)
    return { ConfidenceInterval::Status::unbounded, value / (1.0 + zs),
             std::numeric_limits<double>::infinity(), scale };
  return { ConfidenceInterval::Status::ok, value / (1.0 + zs), value / (1.0 - zs), scale };
}

ConfidenceInterval
confidence_interval(const CiInputs& in)
{
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  require(in.n >= 1.0 && in.h > 0.0 && in.p >= 1.0, "n, h and p must be positive");
  require(in.alpha > 0.0 && in.alpha < in.beta && in.beta < 1.0,
          "confidence interval needs 0 < alpha < beta < 1");
  require(in.density > 0.0, "density estimate must be positive");
  if (!(in.gamma < 0.5))
    return { ConfidenceInterval::Status::invalid_gamma, nan, nan, nan };
  if (in.lambda22 < 0.0)
    return { ConfidenceInterval::Status::negative_lambda22, nan, nan, nan };
  const double log_ratio = std::log((1.0 - in.alpha) / (1.0 - in.beta));
  const double scale = std::abs(in.k * std::sqrt(in.l2_norm_sq) * in.gamma * log_ratio *
                                std::sqrt(in.lambda22)) /
                       std::sqrt(in.n * std::pow(in.h, in.p) * (1.0 - in.alpha) * in.density);
  return confidence_interval_from_scale(in.value, scale, in.theta);
}

} // namespace rectm
