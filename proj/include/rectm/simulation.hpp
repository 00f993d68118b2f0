#pragma once

#include "rectm/selection.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rectm {

struct SimulationConfig
{
  Eigen::Index n{ 2000 };
  Eigen::Index replications{ 50 };
  //! Evaluation points; defaults to 0.05, 0.10, ..., 1.
  Eigen::VectorXd x_grid{ regular_grid(0.05, 1.0, 20) };
  //! Unset: selected per replication by cross-validation.
  std::optional<double> h{ 0.1 };
  std::optional<double> alpha{ 0.95 };
  //! Unset: 1 - 1/n.
  std::optional<double> beta;
  std::vector<Eigen::Index> J_values{ 2 };
  double k{ 1.0 };
  std::uint64_t seed{ 20240601 };
  std::string kernel{ "biquadratic" };
  SelectionGrid selection;

  double resolved_beta() const;
  void validate() const;
};

struct CellSummary
{
  std::size_t count;
  double median;
  double q1;
  double q3;
  //! Most extreme values within 1.5 IQR of the quartiles.
  double whisker_lo;
  double whisker_hi;
  double mean_abs_error;
};

//! Linear-interpolation sample quantile (R type 7) of finite values.
double
sample_quantile(std::vector<double> values, double prob);

CellSummary
summarize(const std::vector<double>& values, double truth);

struct ReplicationCell
{
  double x;
  std::string estimator;
  double truth;
  //! One entry per replication; NaN where the estimator failed.
  std::vector<double> values;
  //! "ok" or the error kind, per replication.
  std::vector<std::string> status;
  std::size_t failures{ 0 };
  CellSummary summary{};
};

struct ReplicationReport
{
  SimulationConfig config;
  //! Bandwidth and level used in each replication.
  std::vector<double> h_used;
  std::vector<double> alpha_used;
  std::vector<ReplicationCell> cells;

  const ReplicationCell& cell(double x, const std::string& estimator) const;
};

//! Sub-seed for replication r; depends only on (seed, r), so results do not
//! depend on the order in which replications run.
std::uint64_t
replication_seed(std::uint64_t seed, std::uint64_t replication);

//! Monte-Carlo study on the Burr model: for each replication draw a sample,
//! optionally select (h, alpha), and evaluate gamma_hat, gamma_tilde, the
//! plug-in moment at beta and the extrapolated moment at beta on the grid.
ReplicationReport
run_simulation(const SimulationConfig& config);

std::string
report_csv(const ReplicationReport& report);

std::string
report_json(const ReplicationReport& report);

//! Writes simulation.csv and simulation_summary.json under `directory`.
void
export_report(const ReplicationReport& report, const std::filesystem::path& directory);

//! 17-significant-digit rendering used by every CSV writer; "nan" for NaN.
std::string
format_double(double value);

void
write_text_file(const std::filesystem::path& path, const std::string& contents);

} // namespace rectm
