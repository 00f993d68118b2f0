#pragma once

#include "rectm/error.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <queue>

namespace rectm {

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kronrod_nodes{
  0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
  0.207784955007898467600689403773245, 0.000000000000000000000000000000000
};
inline constexpr std::array<double, 8> kronrod_weights{
  0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
  0.204432940075298892414161999234649, 0.209482141084727828012999174891714
};
inline constexpr std::array<double, 4> gauss_weights{
  0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
  0.381830050505118944950369775488975, 0.417959183673469387755102040816327
};

struct Panel
{
  double kronrod;
  double error;
};

template <typename F>
Panel
gauss_kronrod_15(F& f, double a, double b)
{
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kronrod_weights[7];
  double gauss = fc * gauss_weights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kronrod_nodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kronrod_weights[j] * sum;
    if (j % 2 == 1)
      gauss += gauss_weights[j / 2] * sum;
  }
  return { kronrod * half, std::abs((kronrod - gauss) * half) };
}

} // namespace detail

//! Globally adaptive Gauss-Kronrod integral of f over [a, b]: the panel
//! with the largest error estimate is bisected until the summed error is
//! below max(abs_tol, rel_tol * |integral|).
template <typename F>
double
integrate(F f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-12, int max_panels = 4000)
{
  if (a == b)
    return 0.0;
  struct Item
  {
    double lo;
    double hi;
    detail::Panel panel;
    bool operator<(const Item& other) const { return panel.error < other.panel.error; }
  };
  std::priority_queue<Item> heap;
  const detail::Panel whole = detail::gauss_kronrod_15(f, a, b);
  heap.push({ a, b, whole });
  double total = whole.kronrod;
  double error = whole.error;
  for (int panels = 1;; ++panels) {
    if (error <= std::max(abs_tol, rel_tol * std::abs(total)))
      break;
    if (panels >= max_panels)
      fail(ErrorKind::oracle_failure, "adaptive quadrature did not reach its tolerance");
    const Item worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      // Panel cannot be split further in floating point; accept it.
      error -= worst.panel.error;
      continue;
    }
    const detail::Panel left = detail::gauss_kronrod_15(f, worst.lo, mid);
    const detail::Panel right = detail::gauss_kronrod_15(f, mid, worst.hi);
    total += left.kronrod + right.kronrod - worst.panel.kronrod;
    error += left.error + right.error - worst.panel.error;
    heap.push({ worst.lo, mid, left });
    heap.push({ mid, worst.hi, right });
  }
  // Re-sum from the panels to shed the drift of incremental updates.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().panel.kronrod;
    heap.pop();
  }
  return sum;
}

} // namespace rectm
