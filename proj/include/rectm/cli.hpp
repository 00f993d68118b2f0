#pragma once

#include "rectm/sample.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rectm::cli {

enum ExitCode : int
{
  exit_ok = 0,
  exit_internal = 1,
  exit_config = 2,
  exit_data = 3
};

struct IngestOptions
{
  std::string x_col{ "x" };
  std::string y_col{ "y" };
  char delimiter{ ',' };
  //! Replace the covariate by its natural logarithm before filtering.
  bool log_x{ false };
  //! Keep rows whose (transformed) covariate lies in [lo, hi].
  std::optional<std::pair<double, double>> x_range;
};

struct IngestReport
{
  std::size_t rows_read{ 0 };
  std::size_t rows_kept{ 0 };
  //! Rows rejected as unparseable or invalid for the transform.
  std::size_t rows_dropped{ 0 };
  //! Valid rows outside the covariate range.
  std::size_t rows_filtered{ 0 };
  std::vector<std::string> reasons;
};

struct IngestResult
{
  Sample sample;
  IngestReport report;
};

//! Reads a delimited text file with a header row into a one-covariate sample.
IngestResult
ingest_csv(const std::filesystem::path& path, const IngestOptions& options);

struct RunConfig
{
  std::string command;
  std::string input;
  std::string dgp;
  IngestOptions ingest;
  Eigen::Index n{ 2000 };
  Eigen::Index replications{ 50 };
  std::string kernel{ "biquadratic" };
  //! Unset: cross-validated.
  std::optional<double> h;
  std::optional<double> alpha;
  //! Unset: 1 - 1/n.
  std::optional<double> beta;
  std::vector<Eigen::Index> J{ 2 };
  double k{ 1.0 };
  double theta{ 0.05 };
  std::vector<double> grid;
  Eigen::VectorXd h_grid;
  Eigen::VectorXd alpha_grid;
  std::uint64_t seed{ 20240601 };
  std::filesystem::path out{ "rectm_out" };

  //! Throws a configuration error describing the first invalid setting.
  void validate() const;
};

//! Runs one command; returns the process exit code. Progress and errors go
//! to `log`.
int
run(const RunConfig& config, std::ostream& log);

//! Parses flags (and an optional --config file; flags win) and runs.
int
main(int argc, char** argv);

//! "lo:hi:step" or a comma-separated list.
std::vector<double>
parse_grid(const std::string& text);

} // namespace rectm::cli
