#include "rectm/selection.hpp"
#include "rectm/error.hpp"
#include "rectm/expectile.hpp"
#include "rectm/summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace rectm {

Eigen::VectorXd
regular_grid(double lo, double hi, Eigen::Index count)
{
  require(count >= 1, "grid needs at least one point");
  if (count == 1)
    return Eigen::VectorXd::Constant(1, lo);
  Eigen::VectorXd g(count);
  for (Eigen::Index i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

namespace {

void
require_increasing(const Eigen::VectorXd& v, const char* what)
{
  require(v.size() >= 1, std::string(what) + " grid is empty");
  for (Eigen::Index i = 1; i < v.size(); ++i)
    require(v[i] > v[i - 1], std::string(what) + " grid must be strictly increasing");
}

// Rows ordered by response, then covariates; a labelling-free order.
std::vector<Eigen::Index>
canonical_order(const Sample& sample)
{
  std::vector<Eigen::Index> order(static_cast<std::size_t>(sample.n()));
  std::iota(order.begin(), order.end(), Eigen::Index{ 0 });
  const auto& y = sample.responses();
  const auto& x = sample.covariates();
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (y[a] != y[b])
      return y[a] < y[b];
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      if (x(a, c) != x(b, c))
        return x(a, c) < x(b, c);
    return false;
  });
  return order;
}

} // namespace

void
SelectionGrid::validate() const
{
  require_increasing(h_values, "bandwidth");
  require(h_values[0] > 0.0, "bandwidths must be positive");
  require_increasing(alpha_values, "alpha");
  require(alpha_values[0] > 0.0 && alpha_values[alpha_values.size() - 1] < 1.0,
          "alpha grid must lie in (0, 1)");
}

ScoreRow
cv_bandwidth_score(const Sample& sample, const KernelSpec& spec, double h)
{
  require(sample.n() >= 2, "cross-validation needs at least two observations");
  require(std::isfinite(h) && h > 0.0, "bandwidth must be positive");
  require(spec.dim() == sample.p(), "kernel dimension does not match sample");

  const Eigen::Index n = sample.n();
  const std::vector<Eigen::Index> order = canonical_order(sample);
  Eigen::MatrixXd x(n, sample.p());
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    x.row(r) = sample.covariates().row(order[static_cast<std::size_t>(r)]);
    y[r] = sample.responses()[order[static_cast<std::size_t>(r)]];
  }
  const double scale = std::pow(h, static_cast<double>(sample.p()));

  CompensatedSum<> total;
  std::size_t empty = 0;
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    CompensatedSum<> denom;
    for (Eigen::Index l = 0; l < n; ++l) {
      if (l == i) {
        w[l] = 0.0;
        continue;
      }
      const double r = (x.row(i) - x.row(l)).norm() / h;
      w[l] = r > spec.support_radius() ? 0.0 : spec.radial(r) / scale;
      denom += w[l];
    }
    const double d = denom.value();
    const bool has_neighbors = d > 0.0;
    if (!has_neighbors)
      ++empty;

    // Walk responses from the top; `above` holds the weight strictly above
    // the current tie group.
    CompensatedSum<> row;
    CompensatedSum<> above;
    Eigen::Index hi = n;
    while (hi > 0) {
      Eigen::Index lo = hi - 1;
      while (lo > 0 && y[lo - 1] == y[hi - 1])
        --lo;
      const double fbar = has_neighbors ? above.value() / d : 0.0;
      const double indicator = y[i] >= y[lo] ? 1.0 : 0.0;
      const double diff = indicator - fbar;
      row += static_cast<double>(hi - lo) * diff * diff;
      for (Eigen::Index l = lo; l < hi; ++l)
        above += w[l];
      hi = lo;
    }
    total += row.value();
  }
  return { h, total.value(), empty };
}

SelectionResult
cv_bandwidth(const Sample& sample, const KernelSpec& spec, const SelectionGrid& grid)
{
  grid.validate();
  SelectionResult result{ std::numeric_limits<double>::quiet_NaN(), {} };
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index g = 0; g < grid.h_values.size(); ++g) {
    const ScoreRow row = cv_bandwidth_score(sample, spec, grid.h_values[g]);
    result.table.push_back(row);
    if (std::isfinite(row.score) && row.score < best) {
      best = row.score;
      result.selected = row.value;
    }
  }
  if (!std::isfinite(best))
    fail(ErrorKind::selection_failure, "no bandwidth produced a finite score");
  return result;
}

Eigen::MatrixXd
default_probe_points(const Sample& sample)
{
  require(sample.p() == 1, "default probe points are defined for one covariate only");
  const double lo = sample.covariates().col(0).minCoeff();
  const double hi = sample.covariates().col(0).maxCoeff();
  Eigen::MatrixXd probes(9, 1);
  for (int t = 1; t <= 9; ++t)
    probes(t - 1, 0) = lo + (hi - lo) * t / 10.0;
  return probes;
}

namespace {

ScoreRow
alpha_score(const std::vector<LocalSample>& locals,
            const std::vector<bool>& usable,
            double alpha)
{
  static const Eigen::VectorXd taus2 = harmonic_taus(2);
  static const Eigen::VectorXd taus3 = harmonic_taus(3);
  CompensatedSum<> score;
  std::size_t failed = 0;
  for (std::size_t t = 0; t < locals.size(); ++t) {
    if (!usable[t]) {
      ++failed;
      continue;
    }
    try {
      const double g2 = estimate_tail_index(locals[t], alpha, taus2).gamma_tilde;
      const double g3 = estimate_tail_index(locals[t], alpha, taus3).gamma_tilde;
      if (!std::isfinite(g2) || !std::isfinite(g3)) {
        ++failed;
        continue;
      }
      score += (g2 - g3) * (g2 - g3);
    } catch (const Error&) {
      ++failed;
    }
  }
  const double value = failed == locals.size() ? std::numeric_limits<double>::quiet_NaN()
                                               : score.value();
  return { alpha, value, failed };
}

void
build_locals(const Sample& sample,
             const KernelSpec& spec,
             double h,
             const Eigen::MatrixXd& probes,
             std::vector<LocalSample>& locals,
             std::vector<bool>& usable)
{
  require(probes.rows() >= 1, "at least one probe point is required");
  require(probes.cols() == sample.p(), "probe points have wrong dimension");
  for (Eigen::Index t = 0; t < probes.rows(); ++t) {
    locals.emplace_back(sample, spec, h, CovariatePoint(Eigen::VectorXd(probes.row(t).transpose())));
    usable.push_back(!locals.back().empty());
  }
}

} // namespace

ScoreRow
cv_alpha_score(const Sample& sample,
               const KernelSpec& spec,
               double h,
               double alpha,
               const Eigen::MatrixXd& probes)
{
  std::vector<LocalSample> locals;
  std::vector<bool> usable;
  build_locals(sample, spec, h, probes, locals, usable);
  return alpha_score(locals, usable, alpha);
}

SelectionResult
cv_alpha(const Sample& sample, const KernelSpec& spec, double h, const SelectionGrid& grid)
{
  grid.validate();
  const Eigen::MatrixXd probes =
    grid.probe_points.size() > 0 ? grid.probe_points : default_probe_points(sample);
  std::vector<LocalSample> locals;
  std::vector<bool> usable;
  build_locals(sample, spec, h, probes, locals, usable);

  SelectionResult result{ std::numeric_limits<double>::quiet_NaN(), {} };
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < grid.alpha_values.size(); ++a) {
    const ScoreRow row = alpha_score(locals, usable, grid.alpha_values[a]);
    result.table.push_back(row);
    if (std::isfinite(row.score) && row.score < best) {
      best = row.score;
      result.selected = row.value;
    }
  }
  if (!std::isfinite(best))
    fail(ErrorKind::selection_failure, "every probe point failed at every alpha");
  return result;
}

std::string
score_table_csv(const std::vector<ScoreRow>& table, const std::string& value_name)
{
  std::string out = value_name + ",score,diagnostics\n";
  char buf[128];
  for (const ScoreRow& row : table) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu\n", row.value, row.score, row.diagnostics);
    out += buf;
  }
  return out;
}

} // namespace rectm
