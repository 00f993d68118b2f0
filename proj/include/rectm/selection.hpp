#pragma once

#include "rectm/kernel.hpp"

#include <string>
#include <vector>

namespace rectm {

//! `count` equally spaced points from lo to hi inclusive.
Eigen::VectorXd
regular_grid(double lo, double hi, Eigen::Index count);

struct SelectionGrid
{
  Eigen::VectorXd h_values{ regular_grid(0.05, 0.5, 20) };
  Eigen::VectorXd alpha_values{ regular_grid(0.9, 0.96, 20) };
  //! Probe points for the alpha criterion, one per row. Empty means nine
  //! equally spaced interior points of the covariate range (p = 1 only).
  Eigen::MatrixXd probe_points;

  void validate() const;
};

struct ScoreRow
{
  double value;
  double score;
  //! Empty leave-one-out neighborhoods for h; failed probe points for alpha.
  std::size_t diagnostics;
};

struct SelectionResult
{
  double selected;
  std::vector<ScoreRow> table;
};

//! Cross-validation score
//! sum_i sum_j (1{Y_i >= Y_j} - Fbar_{-i}(Y_j | X_i))^2 at one bandwidth.
//! Computed in a canonical observation order so the result does not depend
//! on how the rows of the sample are labelled.
ScoreRow
cv_bandwidth_score(const Sample& sample, const KernelSpec& spec, double h);

//! Bandwidth minimizing the cross-validation score; ties go to the smaller h.
SelectionResult
cv_bandwidth(const Sample& sample, const KernelSpec& spec, const SelectionGrid& grid);

//! Default probe points: nine equally spaced interior points of the range.
Eigen::MatrixXd
default_probe_points(const Sample& sample);

//! sum_t (gamma_tilde^(J=2)(x_t) - gamma_tilde^(J=3)(x_t))^2 at one alpha;
//! probe points where estimation fails are skipped and counted.
ScoreRow
cv_alpha_score(const Sample& sample,
               const KernelSpec& spec,
               double h,
               double alpha,
               const Eigen::MatrixXd& probes);

//! Level minimizing the J=2 / J=3 discrepancy; ties go to the smaller alpha.
SelectionResult
cv_alpha(const Sample& sample, const KernelSpec& spec, double h, const SelectionGrid& grid);

//! CSV with columns grid value, score, diagnostics count.
std::string
score_table_csv(const std::vector<ScoreRow>& table, const std::string& value_name);

} // namespace rectm
