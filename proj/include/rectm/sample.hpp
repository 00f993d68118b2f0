#pragma once

#include <Eigen/Core>

namespace rectm {

//! A location in covariate space. Implicitly constructible from a scalar so
//! the common one-dimensional case reads naturally (`density_estimate(s, k,
//! h, 0.5)`).
class CovariatePoint
{
public:
  CovariatePoint(double x)
    : value_(Eigen::VectorXd::Constant(1, x))
  {}
  CovariatePoint(Eigen::VectorXd x)
    : value_(std::move(x))
  {}

  const Eigen::VectorXd& vector() const { return value_; }
  Eigen::Index dim() const { return value_.size(); }

private:
  Eigen::VectorXd value_;
};

//! Paired observations (X_i, Y_i), i = 1..n, with X_i in R^p.
//! Rows of `covariates()` are observations.
class Sample
{
public:
  Sample(Eigen::MatrixXd covariates, Eigen::VectorXd responses);

  //! One-dimensional covariate (p = 1).
  static Sample univariate(const Eigen::VectorXd& x, Eigen::VectorXd y);

  const Eigen::MatrixXd& covariates() const { return covariates_; }
  const Eigen::VectorXd& responses() const { return responses_; }
  Eigen::Index n() const { return responses_.size(); }
  Eigen::Index p() const { return covariates_.cols(); }

private:
  Eigen::MatrixXd covariates_;
  Eigen::VectorXd responses_;
};

} // namespace rectm
