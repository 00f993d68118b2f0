#pragma once

#include "rectm/kernel_smoothing.hpp"

namespace rectm {

//! Tail weights 1 = tau_1 > tau_2 > ... > tau_J > 0 used by the Hill-type
//! estimator; the harmonic choice is tau_j = 1/j.
Eigen::VectorXd
harmonic_taus(Eigen::Index J);

//! Throws invalid_argument unless taus is a valid weight sequence (J >= 2,
//! tau_1 = 1, strictly decreasing, positive) and alpha in (0, 1).
void
validate_tail_weights(const Eigen::VectorXd& taus, double alpha);

//! Levels 1 - tau_j (1 - alpha) at which the Hill-type estimator looks.
Eigen::VectorXd
tail_levels(const Eigen::VectorXd& taus, double alpha);

struct TailConfig
{
  double alpha{ 0.95 };
  Eigen::VectorXd taus{ harmonic_taus(2) };
  double h{ 0.1 };
  double k{ 1.0 };

  Eigen::Index J() const { return taus.size(); }
  void validate() const;
};

struct ExpectileEstimate
{
  double value;
  double alpha;
  Eigen::VectorXd x;
  //! Bracket the bisection started from.
  double bracket_lo;
  double bracket_hi;
  int iterations;
};

//! Relative width at which the expectile bisection stops:
//! hi - lo <= kExpectileTolerance * (1 + |midpoint|).
inline constexpr double kExpectileTolerance = 1e-13;
inline constexpr int kMaxBisectionIterations = 200;

//! Generalized inverse inf{y : G-bar_hat(y|x) <= 1 - alpha} on an already
//! built local sample.
ExpectileEstimate
expectile_hat(const LocalSample& local, double alpha);

ExpectileEstimate
expectile_hat(const Sample& sample,
              const KernelSpec& spec,
              double h,
              double alpha,
              const CovariatePoint& x);

//! Minimizer of sum_i w_i eta_alpha(Y_i - theta), found from the first-order
//! condition alpha sum w (Y - theta)^+ = (1 - alpha) sum w (theta - Y)^+.
double
empirical_weighted_expectile(const Eigen::VectorXd& weights,
                             const Eigen::VectorXd& responses,
                             double alpha);

//! Hill-type log-spacing estimator from expectiles already evaluated at
//! `tail_levels(taus, alpha)`; `expectiles[0]` is the one at level alpha.
double
hill_from_expectiles(const Eigen::VectorXd& expectiles, const Eigen::VectorXd& taus);

//! gamma_hat * (1 - m sum(tau^gamma_hat - 1) / (e sum log(1/tau))).
double
bias_reduce_gamma(double gamma_hat,
                  double mean,
                  double expectile,
                  const Eigen::VectorXd& taus);

//! Everything the tail-index estimators compute at one covariate point.
struct TailIndexEstimate
{
  double density;
  double mean;
  Eigen::VectorXd expectiles; //!< at tail_levels(taus, alpha)
  double gamma_hat;
  double gamma_tilde;

  double expectile() const { return expectiles[0]; }
};

TailIndexEstimate
estimate_tail_index(const LocalSample& local,
                    double alpha,
                    const Eigen::VectorXd& taus);

double
gamma_hat(const Sample& sample,
          const KernelSpec& spec,
          double h,
          double alpha,
          const Eigen::VectorXd& taus,
          const CovariatePoint& x);

double
gamma_tilde(const Sample& sample,
            const KernelSpec& spec,
            double h,
            double alpha,
            const Eigen::VectorXd& taus,
            const CovariatePoint& x);

} // namespace rectm
