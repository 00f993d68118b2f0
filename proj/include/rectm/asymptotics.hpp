#pragma once

#include <Eigen/Core>

namespace rectm {

//! Tail index, weight sequence and moment order at which the limiting
//! bias/covariance quantities are evaluated.
struct AsymptoticSpec
{
  double gamma;
  Eigen::VectorXd taus;
  double k{ 1.0 };

  Eigen::Index J() const { return taus.size(); }
  //! gamma in (0, 1/2), k gamma < 1, taus a valid weight sequence.
  void validate() const;
};

//! Symmetric 2x2 covariance factor of (e_hat/e - 1, gamma_hat - gamma),
//! up to the scale ||K||^2 gamma^2 / g(x).
Eigen::Matrix2d
lambda_matrix(const AsymptoticSpec& spec);

//! Covariance factor of (RECTM_tilde/RECTM - 1, e_hat/e - 1).
Eigen::Matrix2d
v_matrix(const AsymptoticSpec& spec);

//! gamma sum(tau^gamma - 1) / sum log(1/tau)
double
bias_term(const AsymptoticSpec& spec);

//! Lambda_{2,2} at any gamma < 1/2. Plug-in estimates of gamma may be
//! negative, where this can go negative too; callers decide what that means.
double
lambda22_at(double gamma, const Eigen::VectorXd& taus);

//! Smallest eigenvalue of a symmetric 2x2 matrix.
double
min_eigenvalue(const Eigen::Matrix2d& m);

//! Standard normal quantile Phi^{-1}(p).
double
gaussian_quantile(double p);

//! Standard normal distribution function.
double
gaussian_cdf(double z);

struct ConfidenceInterval
{
  enum class Status
  {
    ok,
    negative_lambda22, //!< plug-in Lambda_{2,2} < 0, no interval
    unbounded,         //!< 1 - z s <= 0, upper bound is infinite
    invalid_gamma      //!< plug-in gamma >= 1/2, Lambda_{2,2} undefined
  };

  Status status;
  double lo;
  double hi;
  //! Relative half-width s before multiplication by z.
  double scale;

  bool has_interval() const { return status == Status::ok; }
};

const char*
to_string(ConfidenceInterval::Status status);

//! (value / (1 + z s), value / (1 - z s)) with z the (1 - theta/2) normal
//! quantile.
ConfidenceInterval
confidence_interval_from_scale(double value, double scale, double theta);

struct CiInputs
{
  double value;       //!< extrapolated moment estimate at beta
  double k;
  double gamma;       //!< bias-reduced tail index
  double density;     //!< g_hat(x)
  double n;
  double h;
  double p;
  double alpha;
  double beta;
  double theta;       //!< error level; 0.05 for a 95% interval
  double l2_norm_sq;  //!< ||K||_2^2
  double lambda22;    //!< plug-in Lambda_{2,2}
};

//! Pointwise Gaussian interval for the extrapolated tail moment.
ConfidenceInterval
confidence_interval(const CiInputs& in);

} // namespace rectm
