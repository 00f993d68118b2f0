#pragma once

#include "rectm/expectile.hpp"

#include <optional>

namespace rectm {

struct RectmEstimate
{
  double value;
  double k;
  //! alpha for the plug-in estimator, beta when extrapolated.
  double level;
  double gamma_used;
  double expectile_used;
  bool extrapolated;
  double extrapolation_factor;
};

//! e^k / (1 - k gamma); exactly 1 when k = 0.
double
rectm_from_parts(double expectile, double gamma, double k);

//! ((1 - alpha) / (1 - beta))^(k gamma)
double
weissman_factor(double alpha, double beta, double gamma, double k);

//! Plug-in moment at level alpha. `gamma_override`, when given, replaces the
//! bias-reduced tail index computed from the data.
RectmEstimate
rectm_plugin(const LocalSample& local,
             double alpha,
             const Eigen::VectorXd& taus,
             double k,
             std::optional<double> gamma_override = std::nullopt);

RectmEstimate
rectm_plugin(const Sample& sample,
             const KernelSpec& spec,
             double h,
             double alpha,
             const Eigen::VectorXd& taus,
             double k,
             const CovariatePoint& x,
             std::optional<double> gamma_override = std::nullopt);

//! Plug-in moment at alpha carried to beta by the Weissman factor.
RectmEstimate
rectm_weissman(const LocalSample& local,
               double alpha,
               double beta,
               const Eigen::VectorXd& taus,
               double k,
               std::optional<double> gamma_override = std::nullopt);

RectmEstimate
rectm_weissman(const Sample& sample,
               const KernelSpec& spec,
               double h,
               double alpha,
               double beta,
               const Eigen::VectorXd& taus,
               double k,
               const CovariatePoint& x,
               std::optional<double> gamma_override = std::nullopt);

//! Same as above, reusing a tail-index estimate already computed at alpha.
RectmEstimate
rectm_weissman(const TailIndexEstimate& tail,
               double alpha,
               double beta,
               double k);

RectmEstimate
rectm_plugin(const TailIndexEstimate& tail, double alpha, double k);

} // namespace rectm
