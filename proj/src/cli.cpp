#include "rectm/cli.hpp"
#include "rectm/asymptotics.hpp"
#include "rectm/burr.hpp"
#include "rectm/error.hpp"
#include "rectm/simulation.hpp"
#include "rectm/tail_moments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rectm::cli {

namespace {

constexpr const char* kEstimateSchema = "# schema: rectm.estimate.csv/1";
constexpr const char* kSelectSchema = "rectm.select/1";

[[noreturn]] void
config_error(const std::string& what)
{
  fail(ErrorKind::configuration, what);
}

std::string
trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"')
    out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string>
split(const std::string& line, char delimiter)
{
  std::vector<std::string> fields;
  std::string_view rest(line);
  while (true) {
    const auto pos = rest.find(delimiter);
    fields.push_back(trim(rest.substr(0, pos)));
    if (pos == std::string_view::npos)
      break;
    rest.remove_prefix(pos + 1);
  }
  return fields;
}

std::optional<double>
parse_number(const std::string& text)
{
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    return std::nullopt;
  return v;
}

double
parse_or_throw(const std::string& text, const std::string& what)
{
  const auto v = parse_number(trim(text));
  if (!v)
    config_error("cannot parse " + what + " '" + text + "'");
  return *v;
}

std::optional<double>
parse_auto(const std::string& text, const std::string& what)
{
  if (text.empty() || text == "auto" || text == "cv")
    return std::nullopt;
  return parse_or_throw(text, what);
}

std::pair<double, double>
parse_range(const std::string& text)
{
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    config_error("range must look like lo:hi, got '" + text + "'");
  const double lo = parse_or_throw(text.substr(0, colon), "range bound");
  const double hi = parse_or_throw(text.substr(colon + 1), "range bound");
  if (!(lo <= hi))
    config_error("range lower bound exceeds upper bound");
  return { lo, hi };
}

// "lo:hi:count" for the selection grids.
Eigen::VectorXd
parse_count_grid(const std::string& text)
{
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 3)
    config_error("selection grid must look like lo:hi:count, got '" + text + "'");
  const double lo = parse_or_throw(parts[0], "grid bound");
  const double hi = parse_or_throw(parts[1], "grid bound");
  const double count = parse_or_throw(parts[2], "grid size");
  if (count < 1 || count != std::floor(count))
    config_error("grid size must be a positive integer");
  return regular_grid(lo, hi, static_cast<Eigen::Index>(count));
}

} // namespace

std::vector<double>
parse_grid(const std::string& text)
{
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3)
      config_error("grid must look like lo:hi:step, got '" + text + "'");
    const double lo = parse_or_throw(parts[0], "grid bound");
    const double hi = parse_or_throw(parts[1], "grid bound");
    const double step = parse_or_throw(parts[2], "grid step");
    if (!(step > 0.0) || !(hi >= lo))
      config_error("grid needs lo <= hi and a positive step");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i)
      grid.push_back(lo + static_cast<double>(i) * step);
    return grid;
  }
  for (const std::string& field : split(text, ','))
    if (!field.empty())
      grid.push_back(parse_or_throw(field, "grid point"));
  if (grid.empty())
    config_error("grid is empty");
  return grid;
}

IngestResult
ingest_csv(const std::filesystem::path& path, const IngestOptions& options)
{
  std::ifstream in(path);
  if (!in)
    config_error("cannot open input file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line))
    config_error("input file '" + path.string() + "' has no header row");
  const std::vector<std::string> header = split(line, options.delimiter);
  auto column = [&](const std::string& name) {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == name)
        return c;
    config_error("column '" + name + "' not found in '" + path.string() + "'");
  };
  const std::size_t xc = column(options.x_col);
  const std::size_t yc = column(options.y_col);

  IngestReport report;
  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    ++report.rows_read;
    auto reject = [&](const std::string& why) {
      ++report.rows_dropped;
      report.reasons.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    const std::vector<std::string> fields = split(line, options.delimiter);
    if (fields.size() != header.size()) {
      reject("expected " + std::to_string(header.size()) + " fields, found " +
             std::to_string(fields.size()));
      continue;
    }
    const auto x = parse_number(fields[xc]);
    const auto y = parse_number(fields[yc]);
    if (!x) {
      reject("covariate '" + fields[xc] + "' is not a finite number");
      continue;
    }
    if (!y) {
      reject("response '" + fields[yc] + "' is not a finite number");
      continue;
    }
    double xv = *x;
    if (options.log_x) {
      if (!(xv > 0.0)) {
        reject("covariate must be positive for the log transform");
        continue;
      }
      xv = std::log(xv);
    }
    if (options.x_range && (xv < options.x_range->first || xv > options.x_range->second)) {
      ++report.rows_filtered;
      continue;
    }
    xs.push_back(xv);
    ys.push_back(*y);
  }
  report.rows_kept = xs.size();
  if (xs.empty())
    fail(ErrorKind::data, "no rows retained from '" + path.string() + "'");
  const auto n = static_cast<Eigen::Index>(xs.size());
  return { Sample::univariate(Eigen::Map<const Eigen::VectorXd>(xs.data(), n),
                              Eigen::Map<const Eigen::VectorXd>(ys.data(), n)),
           std::move(report) };
}

void
RunConfig::validate() const
{
  static const std::vector<std::string> commands{ "estimate", "select", "simulate", "ci" };
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    config_error("command must be one of estimate, select, simulate, ci");
  if (command == "simulate") {
    if (!input.empty())
      config_error("simulate draws from the Burr model; --input is not accepted");
    if (!dgp.empty() && dgp != "burr")
      config_error("unknown data-generating process '" + dgp + "'");
  } else {
    if (input.empty() == dgp.empty())
      config_error("exactly one data source is required: --input or --dgp");
    if (!dgp.empty() && dgp != "burr")
      config_error("unknown data-generating process '" + dgp + "'");
  }
  if (n < 2)
    config_error("--n must be at least 2");
  if (replications < 1)
    config_error("--replications must be positive");
  if (h && !(*h > 0.0))
    config_error("--h must be positive");
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0))
    config_error("--alpha must lie in (0, 1)");
  if (beta && !(*beta > 0.0 && *beta < 1.0))
    config_error("--beta must lie in (0, 1)");
  if (beta && alpha && !(*beta > *alpha))
    config_error("--beta must exceed --alpha");
  if (J.empty())
    config_error("--J needs at least one value");
  for (Eigen::Index j : J)
    if (j < 2)
      config_error("--J values must be at least 2");
  if (command != "simulate" && J.size() != 1)
    config_error("--J takes a single value for " + command);
  if (!(std::isfinite(k) && k >= 0.0))
    config_error("--k must be nonnegative");
  if (!(theta > 0.0 && theta < 1.0))
    config_error("--theta must lie in (0, 1)");
  try {
    KernelSpec::by_name(kernel, 1);
  } catch (const Error& e) {
    config_error(e.what());
  }
}

namespace {

struct LoadedData
{
  Sample sample;
  std::string source;
};

LoadedData
load_data(const RunConfig& cfg, std::ostream& log)
{
  if (!cfg.dgp.empty()) {
    return { BurrOracle().sample(cfg.n, cfg.seed),
             "dgp=burr;n=" + std::to_string(cfg.n) + ";seed=" + std::to_string(cfg.seed) };
  }
  IngestResult r = ingest_csv(cfg.input, cfg.ingest);
  log << "read " << r.report.rows_read << " rows: kept " << r.report.rows_kept << ", dropped "
      << r.report.rows_dropped << ", out of range " << r.report.rows_filtered << "\n";
  for (const std::string& reason : r.report.reasons)
    log << "  dropped " << reason << "\n";
  return { std::move(r.sample), "input=" + std::filesystem::path(cfg.input).filename().string() };
}

SelectionGrid
selection_grid(const RunConfig& cfg)
{
  SelectionGrid grid;
  if (cfg.h_grid.size() > 0)
    grid.h_values = cfg.h_grid;
  if (cfg.alpha_grid.size() > 0)
    grid.alpha_values = cfg.alpha_grid;
  try {
    grid.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
  return grid;
}

std::vector<double>
evaluation_grid(const RunConfig& cfg, const Sample& sample)
{
  if (!cfg.grid.empty())
    return cfg.grid;
  Eigen::VectorXd g = cfg.dgp.empty()
                        ? regular_grid(sample.covariates().minCoeff(), sample.covariates().maxCoeff(), 20)
                        : regular_grid(0.05, 1.0, 20);
  return { g.data(), g.data() + g.size() };
}

void
ensure_out_dir(const std::filesystem::path& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    config_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

int
run_select(const RunConfig& cfg, std::ostream& log)
{
  const LoadedData data = load_data(cfg, log);
  const KernelSpec spec = KernelSpec::by_name(cfg.kernel, 1);
  const SelectionGrid grid = selection_grid(cfg);
  ensure_out_dir(cfg.out);

  std::optional<SelectionResult> hsel;
  double h = 0.0;
  if (cfg.h) {
    h = *cfg.h;
  } else {
    hsel = cv_bandwidth(data.sample, spec, grid);
    h = hsel->selected;
  }
  const SelectionResult asel = cv_alpha(data.sample, spec, h, grid);

  if (hsel)
    write_text_file(cfg.out / "select_h.csv",
                    "# schema: rectm.select.h.csv/1\n" + score_table_csv(hsel->table, "h"));
  write_text_file(cfg.out / "select_alpha.csv",
                  "# schema: rectm.select.alpha.csv/1\n" + score_table_csv(asel.table, "alpha"));

  nlohmann::ordered_json doc;
  doc["schema"] = kSelectSchema;
  doc["source"] = data.source;
  doc["n"] = data.sample.n();
  doc["kernel"] = cfg.kernel;
  doc["h"] = h;
  doc["h_selected_by"] = hsel ? "cv" : "fixed";
  doc["alpha"] = asel.selected;
  write_text_file(cfg.out / "select.json", doc.dump(2) + "\n");
  log << "h = " << format_double(h) << ", alpha = " << format_double(asel.selected) << "\n";
  return exit_ok;
}

int
run_estimate(const RunConfig& cfg, std::ostream& log, bool with_ci)
{
  const LoadedData data = load_data(cfg, log);
  const Sample& sample = data.sample;
  const KernelSpec spec = KernelSpec::by_name(cfg.kernel, 1);
  const SelectionGrid grid = selection_grid(cfg);
  ensure_out_dir(cfg.out);

  const double h = cfg.h ? *cfg.h : cv_bandwidth(sample, spec, grid).selected;
  const double alpha = cfg.alpha ? *cfg.alpha : cv_alpha(sample, spec, h, grid).selected;
  const double beta = cfg.beta.value_or(1.0 - 1.0 / static_cast<double>(sample.n()));
  if (!(beta > alpha))
    config_error("beta (" + format_double(beta) + ") must exceed alpha (" + format_double(alpha) + ")");
  const Eigen::VectorXd taus = harmonic_taus(cfg.J.front());

  std::ostringstream out;
  out << kEstimateSchema << "\n";
  out << "# " << data.source << ";n_used=" << sample.n() << ";kernel=" << cfg.kernel
      << ";h=" << format_double(h) << ";h_mode=" << (cfg.h ? "fixed" : "cv")
      << ";alpha=" << format_double(alpha) << ";alpha_mode=" << (cfg.alpha ? "fixed" : "cv")
      << ";beta=" << format_double(beta) << ";J=" << cfg.J.front() << ";k=" << format_double(cfg.k);
  if (with_ci)
    out << ";theta=" << format_double(cfg.theta);
  out << "\n";
  out << "x,status,density,mean,expectile,gamma_hat,gamma_tilde,rectm_alpha,rectm_weissman";
  if (with_ci)
    out << ",lambda22,ci_lo,ci_hi,ci_status";
  out << "\n";

  std::size_t flagged = 0;
  for (double x : evaluation_grid(cfg, sample)) {
    std::string status = "ok";
    std::vector<double> cols(7, std::numeric_limits<double>::quiet_NaN());
    std::string ci_status = "not_computed";
    double l22 = std::numeric_limits<double>::quiet_NaN();
    double lo = l22;
    double hi = l22;
    try {
      const LocalSample local(sample, spec, h, x);
      const TailIndexEstimate tail = estimate_tail_index(local, alpha, taus);
      cols[0] = tail.density;
      cols[1] = tail.mean;
      cols[2] = tail.expectile();
      cols[3] = tail.gamma_hat;
      cols[4] = tail.gamma_tilde;
      cols[5] = rectm_plugin(tail, alpha, cfg.k).value;
      const RectmEstimate weissman = rectm_weissman(tail, alpha, beta, cfg.k);
      cols[6] = weissman.value;
      if (with_ci) {
        ConfidenceInterval ci{ ConfidenceInterval::Status::invalid_gamma, lo, hi, lo };
        if (tail.gamma_tilde < 0.5) {
          l22 = lambda22_at(tail.gamma_tilde, taus);
          ci = confidence_interval({ weissman.value, cfg.k, tail.gamma_tilde, tail.density,
                                     static_cast<double>(sample.n()), h, 1.0, alpha, beta,
                                     cfg.theta, spec.l2_norm_sq(), l22 });
        }
        ci_status = to_string(ci.status);
        lo = ci.lo;
        hi = ci.hi;
      }
    } catch (const Error& e) {
      status = to_string(e.kind());
      ++flagged;
    }
    out << format_double(x) << "," << status;
    for (double v : cols)
      out << "," << format_double(v);
    if (with_ci)
      out << "," << format_double(l22) << "," << format_double(lo) << "," << format_double(hi)
          << "," << ci_status;
    out << "\n";
  }
  const std::string file = with_ci ? "ci.csv" : "estimate.csv";
  write_text_file(cfg.out / file, out.str());
  log << "wrote " << (cfg.out / file).string() << " (h = " << format_double(h)
      << ", alpha = " << format_double(alpha) << ", flagged rows = " << flagged << ")\n";
  return exit_ok;
}

int
run_simulate(const RunConfig& cfg, std::ostream& log)
{
  SimulationConfig sim;
  sim.n = cfg.n;
  sim.replications = cfg.replications;
  if (!cfg.grid.empty())
    sim.x_grid = Eigen::Map<const Eigen::VectorXd>(cfg.grid.data(), static_cast<Eigen::Index>(cfg.grid.size()));
  sim.h = cfg.h;
  sim.alpha = cfg.alpha;
  sim.beta = cfg.beta;
  sim.J_values = cfg.J;
  sim.k = cfg.k;
  sim.seed = cfg.seed;
  sim.kernel = cfg.kernel;
  sim.selection = selection_grid(cfg);
  try {
    sim.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
  const ReplicationReport report = run_simulation(sim);
  export_report(report, cfg.out);
  log << "wrote " << (cfg.out / "simulation.csv").string() << " and "
      << (cfg.out / "simulation_summary.json").string() << "\n";
  return exit_ok;
}

} // namespace

int
run(const RunConfig& config, std::ostream& log)
{
  try {
    config.validate();
    if (config.command == "select")
      return run_select(config, log);
    if (config.command == "simulate")
      return run_simulate(config, log);
    return run_estimate(config, log, config.command == "ci");
  } catch (const Error& e) {
    log << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::configuration:
      case ErrorKind::invalid_argument:
      case ErrorKind::io:
        return exit_config;
      default:
        return exit_data;
    }
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << "\n";
    return exit_internal;
  }
}

int
main(int argc, char** argv)
{
  CLI::App app{ "Expectile-based conditional tail moment estimation" };
  app.set_help_flag("--help", "print this help message and exit");
  app.set_config("--config", "", "TOML/INI configuration file; command-line flags take precedence");

  RunConfig cfg;
  std::string h_text = "auto";
  std::string alpha_text = "auto";
  std::string beta_text;
  std::string J_text = "2";
  std::string grid_text;
  std::string x_range_text;
  std::string h_grid_text;
  std::string alpha_grid_text;
  std::string delimiter = ",";
  std::string out_text = cfg.out.string();

  app.add_option("--command", cfg.command, "estimate | select | simulate | ci")->required();
  app.add_option("--input", cfg.input, "delimited input file with a header row");
  app.add_option("--dgp", cfg.dgp, "simulated data source instead of --input (burr)");
  app.add_option("--x-col", cfg.ingest.x_col, "covariate column name");
  app.add_option("--y-col", cfg.ingest.y_col, "response column name");
  app.add_option("--delimiter", delimiter, "field delimiter (single character)");
  app.add_flag("--log-x", cfg.ingest.log_x, "use log of the covariate");
  app.add_option("--x-range", x_range_text, "keep rows with covariate in lo:hi (after transform)");
  app.add_option("--kernel", cfg.kernel, "biquadratic | uniform");
  app.add_option("--h", h_text, "bandwidth, or auto for cross-validation");
  app.add_option("--alpha", alpha_text, "intermediate level, or auto for cross-validation");
  app.add_option("--beta", beta_text, "extrapolation level (default 1 - 1/n)");
  app.add_option("--k", cfg.k, "moment order");
  app.add_option("--J", J_text, "number of harmonic tail weights (comma list for simulate)");
  app.add_option("--theta", cfg.theta, "confidence interval error level");
  app.add_option("--grid", grid_text, "evaluation points: lo:hi:step or comma list");
  app.add_option("--h-grid", h_grid_text, "bandwidth candidates lo:hi:count");
  app.add_option("--alpha-grid", alpha_grid_text, "level candidates lo:hi:count");
  app.add_option("--n", cfg.n, "sample size for --dgp and simulate");
  app.add_option("--replications", cfg.replications, "Monte-Carlo replications for simulate");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--out", out_text, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (delimiter.size() != 1)
      config_error("--delimiter must be a single character");
    cfg.ingest.delimiter = delimiter.front();
    if (!x_range_text.empty())
      cfg.ingest.x_range = parse_range(x_range_text);
    const bool simulate = cfg.command == "simulate";
    // Simulation defaults to the fixed desk-scale setting; elsewhere auto
    // means cross-validation.
    if (simulate && h_text == "auto" && app.count("--h") == 0)
      h_text = "0.1";
    if (simulate && alpha_text == "auto" && app.count("--alpha") == 0)
      alpha_text = "0.95";
    cfg.h = parse_auto(h_text, "--h");
    cfg.alpha = parse_auto(alpha_text, "--alpha");
    if (!beta_text.empty())
      cfg.beta = parse_or_throw(beta_text, "--beta");
    cfg.J.clear();
    for (const std::string& field : split(J_text, ','))
      cfg.J.push_back(static_cast<Eigen::Index>(parse_or_throw(field, "--J")));
    if (!grid_text.empty())
      cfg.grid = parse_grid(grid_text);
    if (!h_grid_text.empty())
      cfg.h_grid = parse_count_grid(h_grid_text);
    if (!alpha_grid_text.empty())
      cfg.alpha_grid = parse_count_grid(alpha_grid_text);
    cfg.out = out_text;
  } catch (const Error& e) {
    std::cerr << "error (configuration): " << e.what() << "\n";
    return exit_config;
  }
  return run(cfg, std::cerr);
}

} // namespace rectm::cli
