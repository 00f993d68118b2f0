#pragma once

#include "rectm/kernel.hpp"

namespace rectm {

//! Kernel weights K_h(x - X_i) = K((x - X_i)/h)/h^p for every observation.
Eigen::VectorXd
kernel_weights(const Sample& sample,
               const KernelSpec& spec,
               double h,
               const CovariatePoint& x);

//! The observations with positive kernel weight at x, together with the
//! weights. All the raw kernel estimators at a fixed (h, x) are functions of
//! this local sample, so estimators evaluating many thresholds build it once.
class LocalSample
{
public:
  LocalSample(const Sample& sample,
              const KernelSpec& spec,
              double h,
              const CovariatePoint& x);

  //! Builds directly from weights (zero weights are dropped); `n_total` is
  //! the n in the 1/n normalization.
  LocalSample(const Eigen::VectorXd& weights,
              const Eigen::VectorXd& responses,
              Eigen::Index n_total);

  Eigen::Index size() const { return responses_.size(); }
  bool empty() const { return responses_.size() == 0; }
  Eigen::Index n_total() const { return n_total_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& responses() const { return responses_; }

  //! Sum of K_h(x - X_i).
  double total_weight() const { return total_weight_; }
  double min_response() const;
  double max_response() const;

  //! g_hat(x)
  double density() const { return total_weight_ / static_cast<double>(n_total_); }
  //! m_hat^(1)(x); throws empty_neighborhood.
  double mean() const;
  //! psi_hat^(k)(y|x) = n^-1 sum K_h (Y_i - y)^k 1{Y_i > y}
  double psi(int k, double y) const;
  //! G-bar_hat(y|x); throws degenerate_point when the denominator vanishes.
  double gbar(double y) const;

private:
  void finish();

  Eigen::VectorXd weights_;
  Eigen::VectorXd responses_;
  Eigen::Index n_total_{ 0 };
  double total_weight_{ 0.0 };
  double mean_{ 0.0 };
};

double
density_estimate(const Sample& sample,
                 const KernelSpec& spec,
                 double h,
                 const CovariatePoint& x);

double
conditional_mean_estimate(const Sample& sample,
                          const KernelSpec& spec,
                          double h,
                          const CovariatePoint& x);

double
psi_estimate(const Sample& sample,
             const KernelSpec& spec,
             double h,
             int k,
             double y,
             const CovariatePoint& x);

double
gbar_estimate(const Sample& sample,
              const KernelSpec& spec,
              double h,
              double y,
              const CovariatePoint& x);

struct LooSurvival
{
  double value;
  //! No observation other than the excluded one carries weight at x; value
  //! is then 0 by convention.
  bool empty_neighborhood;
};

//! Leave-one-out kernel survival estimate
//! sum_{j != i} K_h(x - X_j) 1{Y_j > y} / sum_{j != i} K_h(x - X_j).
LooSurvival
loo_survival(const Sample& sample,
             const KernelSpec& spec,
             double h,
             double y,
             const CovariatePoint& x,
             Eigen::Index exclude_index);

} // namespace rectm
