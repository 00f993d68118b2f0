#pragma once

#include "rectm/sample.hpp"

#include <functional>
#include <string>

namespace rectm {

//! Radially symmetric kernel K(u) = profile(||u||) on R^p, Euclidean norm.
//! The profile must vanish for radii beyond `support_radius()` and K must
//! integrate to one over R^p.
class KernelSpec
{
public:
  using Profile = std::function<double(double radius)>;

  KernelSpec(std::string name,
             Eigen::Index dim,
             Profile profile,
             double support_radius,
             double l2_norm_sq);

  //! K(u) = c_p (1 - ||u||^2)^2 on the unit ball; c_1 = 15/16.
  static KernelSpec biquadratic(Eigen::Index dim = 1);
  //! Normalized indicator of the unit ball; 1/2 on [-1, 1] when p = 1.
  static KernelSpec uniform(Eigen::Index dim = 1);
  //! Looks up a built-in kernel by name ("biquadratic", "uniform").
  static KernelSpec by_name(const std::string& name, Eigen::Index dim = 1);

  const std::string& name() const { return name_; }
  Eigen::Index dim() const { return dim_; }
  double support_radius() const { return support_radius_; }
  double l2_norm_sq() const { return l2_norm_sq_; }

  //! Profile evaluated at a nonnegative radius.
  double radial(double radius) const
  {
    return radius > support_radius_ ? 0.0 : profile_(radius);
  }

private:
  std::string name_;
  Eigen::Index dim_;
  Profile profile_;
  double support_radius_;
  double l2_norm_sq_;
};

double
kernel_eval(const KernelSpec& spec, const CovariatePoint& u);

double
kernel_l2norm_sq(const KernelSpec& spec);

} // namespace rectm
