#pragma once

#include "rectm/sample.hpp"

#include <cstdint>
#include <functional>
#include <random>

namespace rectm {

//! Burr law with survival (1 + y^(1/gamma))^-1 on y > 0. Tail integrals are
//! computed by adaptive quadrature on the probability scale s = 1 - F(y),
//! after the substitution s = v^m that removes the (1 - F)^(-k gamma)
//! endpoint singularity.
class BurrLaw
{
public:
  explicit BurrLaw(double gamma);

  double gamma() const { return gamma_; }
  double survival(double y) const;
  //! q(alpha) = (alpha / (1 - alpha))^gamma
  double quantile(double alpha) const;
  //! E[Y] = B(1 + gamma, 1 - gamma); requires gamma < 1.
  double mean() const;
  //! E[Y^k 1{Y > t}], k gamma < 1.
  double tail_moment(double k, double t) const;
  //! E[(Y - t)^+], gamma < 1.
  double excess_mean(double t) const;
  //! Root of alpha E[(Y - e)^+] = (1 - alpha) E[(e - Y)^+].
  double expectile(double alpha) const;
  //! E[Y^k | Y > e(alpha)]
  double rectm(double k, double alpha) const;
  //! E[Y^k | Y > t] / t^k - 1/(1 - k gamma), computed without cancellation.
  double tail_moment_ratio_error(double k, double t) const;
  //! G-bar(y) = psi1 / (2 psi1 + (y - m) g) with g = 1 (population version).
  double gbar(double y) const;

private:
  void require_moment(double k) const;

  double gamma_;
};

//! Covariate-dependent tail index x -> 1/4 + sin(2 pi x)/20.
double
default_burr_gamma(double x);

//! Ground truth for the simulation model: X ~ U[0, 1],
//! Y | X = x ~ Burr(gamma(x)).
class BurrOracle
{
public:
  using GammaFn = std::function<double(double)>;

  explicit BurrOracle(GammaFn gamma_fn = default_burr_gamma);

  double gamma(double x) const { return gamma_fn_(x); }
  BurrLaw law(double x) const { return BurrLaw(gamma(x)); }

  double true_quantile(double alpha, double x) const;
  double true_expectile(double alpha, double x) const;
  double true_rectm(double k, double alpha, double x) const;
  double conditional_mean(double x) const;

  //! n i.i.d. pairs drawn by inverse transform; bit-identical for equal
  //! (n, seed).
  Sample sample(Eigen::Index n, std::uint64_t seed) const;

private:
  GammaFn gamma_fn_;
};

Sample
burr_sample(Eigen::Index n, std::uint64_t seed);

//! splitmix64 finalizer; used to derive independent sub-seeds.
std::uint64_t
mix_seed(std::uint64_t seed, std::uint64_t stream);

//! Deterministic uniform(0, 1) stream (53-bit mantissa from mt19937_64).
class UniformStream
{
public:
  explicit UniformStream(std::uint64_t seed);
  //! Draw in the open interval (0, 1).
  double next();

private:
  std::mt19937_64 engine_;
};

} // namespace rectm
