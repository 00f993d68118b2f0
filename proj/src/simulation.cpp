#include "rectm/simulation.hpp"
#include "rectm/burr.hpp"
#include "rectm/error.hpp"
#include "rectm/tail_moments.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace rectm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kCsvSchema = "# schema: rectm.simulation.csv/1";
constexpr const char* kJsonSchema = "rectm.simulation.summary/1";

} // namespace

double
SimulationConfig::resolved_beta() const
{
  return beta.value_or(1.0 - 1.0 / static_cast<double>(n));
}

void
SimulationConfig::validate() const
{
  require(n >= 2, "simulation sample size must be at least 2");
  require(replications >= 1, "at least one replication is required");
  require(!J_values.empty(), "at least one J is required");
  for (Eigen::Index J : J_values)
    require(J >= 2, "J must be at least 2");
  require(std::isfinite(k) && k >= 0.0, "moment order must be nonnegative");
  if (h)
    require(*h > 0.0, "bandwidth must be positive");
  if (alpha)
    require(*alpha > 0.0 && *alpha < 1.0, "alpha must lie in (0, 1)");
  const double b = resolved_beta();
  require(b > 0.0 && b < 1.0, "beta must lie in (0, 1)");
  if (alpha)
    require(b > *alpha, "beta must exceed alpha");
  else
    require(b > selection.alpha_values.maxCoeff(), "beta must exceed every candidate alpha");
  selection.validate();
  KernelSpec::by_name(kernel, 1);
}

double
sample_quantile(std::vector<double> values, double prob)
{
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty())
    return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = prob * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

CellSummary
summarize(const std::vector<double>& values, double truth)
{
  std::vector<double> finite;
  for (double v : values)
    if (std::isfinite(v))
      finite.push_back(v);
  CellSummary s{ finite.size(), kNaN, kNaN, kNaN, kNaN, kNaN, kNaN };
  if (finite.empty())
    return s;
  s.median = sample_quantile(finite, 0.5);
  s.q1 = sample_quantile(finite, 0.25);
  s.q3 = sample_quantile(finite, 0.75);
  const double iqr = s.q3 - s.q1;
  const double fence_lo = s.q1 - 1.5 * iqr;
  const double fence_hi = s.q3 + 1.5 * iqr;
  s.whisker_lo = s.q1;
  s.whisker_hi = s.q3;
  double abs_err = 0.0;
  for (double v : finite) {
    if (v >= fence_lo)
      s.whisker_lo = std::min(s.whisker_lo, v);
    if (v <= fence_hi)
      s.whisker_hi = std::max(s.whisker_hi, v);
    abs_err += std::abs(v - truth);
  }
  s.mean_abs_error = abs_err / static_cast<double>(finite.size());
  return s;
}

const ReplicationCell&
ReplicationReport::cell(double x, const std::string& estimator) const
{
  for (const ReplicationCell& c : cells)
    if (c.estimator == estimator && std::abs(c.x - x) < 1e-12)
      return c;
  fail(ErrorKind::invalid_argument, "no cell for estimator '" + estimator + "' at this x");
}

std::uint64_t
replication_seed(std::uint64_t seed, std::uint64_t replication)
{
  return mix_seed(seed, replication);
}

namespace {

struct Slot
{
  double value{ kNaN };
  std::string status;
};

template <typename F>
Slot
attempt(F&& f)
{
  try {
    const double v = f();
    if (!std::isfinite(v))
      return { kNaN, "non_finite" };
    return { v, "ok" };
  } catch (const Error& e) {
    return { kNaN, to_string(e.kind()) };
  }
}

std::string
estimator_name(const char* base, Eigen::Index J)
{
  return std::string(base) + "_J" + std::to_string(J);
}

} // namespace

ReplicationReport
run_simulation(const SimulationConfig& config)
{
  config.validate();
  const BurrOracle oracle;
  const KernelSpec spec = KernelSpec::by_name(config.kernel, 1);
  const double beta = config.resolved_beta();
  const auto N = static_cast<std::size_t>(config.replications);

  ReplicationReport report;
  report.config = config;
  report.h_used.assign(N, kNaN);
  report.alpha_used.assign(N, kNaN);

  // Cell layout: x-major, then J, then the four estimators.
  static constexpr const char* kBases[] = { "gamma_hat", "gamma_tilde", "rectm_plugin",
                                            "rectm_weissman" };
  for (Eigen::Index i = 0; i < config.x_grid.size(); ++i) {
    const double x = config.x_grid[i];
    const double gamma_true = oracle.gamma(x);
    double rectm_true = kNaN;
    try {
      rectm_true = oracle.true_rectm(config.k, beta, x);
    } catch (const Error&) {
    }
    for (Eigen::Index J : config.J_values) {
      for (int b = 0; b < 4; ++b) {
        ReplicationCell c;
        c.x = x;
        c.estimator = estimator_name(kBases[b], J);
        c.truth = b < 2 ? gamma_true : rectm_true;
        c.values.assign(N, kNaN);
        c.status.assign(N, "");
        report.cells.push_back(std::move(c));
      }
    }
  }

  const std::size_t per_x = 4 * config.J_values.size();
  for (std::size_t r = 0; r < N; ++r) {
    const Sample sample = oracle.sample(config.n, replication_seed(config.seed, r));
    double h = kNaN;
    double alpha = kNaN;
    std::string selection_error;
    try {
      h = config.h ? *config.h : cv_bandwidth(sample, spec, config.selection).selected;
      alpha = config.alpha ? *config.alpha : cv_alpha(sample, spec, h, config.selection).selected;
    } catch (const Error& e) {
      selection_error = to_string(e.kind());
    }
    report.h_used[r] = h;
    report.alpha_used[r] = alpha;

    for (Eigen::Index i = 0; i < config.x_grid.size(); ++i) {
      const std::size_t base = static_cast<std::size_t>(i) * per_x;
      if (!selection_error.empty()) {
        for (std::size_t c = 0; c < per_x; ++c)
          report.cells[base + c].status[r] = selection_error;
        continue;
      }
      const LocalSample local(sample, spec, h, config.x_grid[i]);
      for (std::size_t j = 0; j < config.J_values.size(); ++j) {
        const Eigen::VectorXd taus = harmonic_taus(config.J_values[j]);
        std::optional<TailIndexEstimate> tail;
        std::string tail_error;
        try {
          tail = estimate_tail_index(local, alpha, taus);
        } catch (const Error& e) {
          tail_error = to_string(e.kind());
        }
        Slot slots[4];
        if (tail) {
          slots[0] = attempt([&] { return tail->gamma_hat; });
          slots[1] = attempt([&] { return tail->gamma_tilde; });
          slots[3] = attempt([&] { return rectm_weissman(*tail, alpha, beta, config.k).value; });
        } else {
          slots[0] = slots[1] = slots[3] = { kNaN, tail_error };
        }
        slots[2] = attempt([&] { return rectm_plugin(local, beta, taus, config.k).value; });
        for (int b = 0; b < 4; ++b) {
          ReplicationCell& c = report.cells[base + 4 * j + static_cast<std::size_t>(b)];
          c.values[r] = slots[b].value;
          c.status[r] = slots[b].status;
        }
      }
    }
  }

  for (ReplicationCell& c : report.cells) {
    c.failures = static_cast<std::size_t>(
      std::count_if(c.status.begin(), c.status.end(), [](const std::string& s) { return s != "ok"; }));
    c.summary = summarize(c.values, c.truth);
  }
  return report;
}

std::string
format_double(double value)
{
  if (std::isnan(value))
    return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string
report_csv(const ReplicationReport& report)
{
  std::string out = kCsvSchema;
  out += "\nx,estimator,replication,value,status\n";
  for (const ReplicationCell& c : report.cells) {
    for (std::size_t r = 0; r < c.values.size(); ++r) {
      out += format_double(c.x) + "," + c.estimator + "," + std::to_string(r) + "," +
             format_double(c.values[r]) + "," + c.status[r] + "\n";
    }
  }
  return out;
}

namespace {

nlohmann::ordered_json
number_or_null(double v)
{
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

} // namespace

std::string
report_json(const ReplicationReport& report)
{
  using json = nlohmann::ordered_json;
  const SimulationConfig& cfg = report.config;
  json meta;
  meta["n"] = cfg.n;
  meta["replications"] = cfg.replications;
  meta["h"] = cfg.h ? json(*cfg.h) : json("cv");
  meta["alpha"] = cfg.alpha ? json(*cfg.alpha) : json("cv");
  meta["beta"] = cfg.resolved_beta();
  meta["J"] = cfg.J_values;
  meta["k"] = cfg.k;
  meta["seed"] = cfg.seed;
  meta["kernel"] = cfg.kernel;
  meta["seed_rule"] = "splitmix64(seed + (r + 1) * 0x9e3779b97f4a7c15)";

  json used = json::array();
  for (std::size_t r = 0; r < report.h_used.size(); ++r)
    used.push_back({ { "replication", r },
                     { "h", number_or_null(report.h_used[r]) },
                     { "alpha", number_or_null(report.alpha_used[r]) } });

  json cells = json::array();
  for (const ReplicationCell& c : report.cells) {
    const CellSummary& s = c.summary;
    cells.push_back({ { "x", c.x },
                      { "estimator", c.estimator },
                      { "truth", number_or_null(c.truth) },
                      { "count", s.count },
                      { "failures", c.failures },
                      { "median", number_or_null(s.median) },
                      { "q1", number_or_null(s.q1) },
                      { "q3", number_or_null(s.q3) },
                      { "whisker_lo", number_or_null(s.whisker_lo) },
                      { "whisker_hi", number_or_null(s.whisker_hi) },
                      { "mean_abs_error", number_or_null(s.mean_abs_error) } });
  }
  json doc;
  doc["schema"] = kJsonSchema;
  doc["metadata"] = std::move(meta);
  doc["selection"] = std::move(used);
  doc["cells"] = std::move(cells);
  return doc.dump(2) + "\n";
}

void
write_text_file(const std::filesystem::path& path, const std::string& contents)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    fail(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out)
    fail(ErrorKind::io, "failed writing '" + path.string() + "'");
}

void
export_report(const ReplicationReport& report, const std::filesystem::path& directory)
{
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec)
    fail(ErrorKind::io, "cannot create '" + directory.string() + "': " + ec.message());
  write_text_file(directory / "simulation.csv", report_csv(report));
  write_text_file(directory / "simulation_summary.json", report_json(report));
}

} // namespace rectm
