#pragma once

#include <cmath>

namespace rectm {

//! Neumaier's variant of Kahan summation.
template <typename Scalar = double>
class CompensatedSum
{
public:
  CompensatedSum& operator+=(Scalar value)
  {
    const Scalar t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value))
      carry_ += (sum_ - t) + value;
    else
      carry_ += (value - t) + sum_;
    sum_ = t;
    return *this;
  }

  Scalar value() const { return sum_ + carry_; }

private:
  Scalar sum_{ 0 };
  Scalar carry_{ 0 };
};

template <typename Range>
double
compensated_sum(const Range& values)
{
  CompensatedSum<double> acc;
  for (double v : values)
    acc += v;
  return acc.value();
}

} // namespace rectm
