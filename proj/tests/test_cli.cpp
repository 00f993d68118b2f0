#include <rectm/cli.hpp>
#include <rectm/error.hpp>

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace rectm;
namespace fs = std::filesystem;

namespace {

fs::path
scratch_dir(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / ("rectm_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void
write(const fs::path& p, const std::string& text)
{
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string
slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int column(const std::string& name) const
  {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name)
        return static_cast<int>(i);
    return -1;
  }
};

Table
read_table(const fs::path& p)
{
  std::ifstream in(p);
  std::string line;
  Table t;
  auto fields = [](const std::string& l) {
    std::vector<std::string> out;
    std::stringstream ss(l);
    std::string f;
    while (std::getline(ss, f, ','))
      out.push_back(f);
    return out;
  };
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0)
      continue;
    if (t.header.empty())
      t.header = fields(line);
    else
      t.rows.push_back(fields(line));
  }
  return t;
}

int
run_tool(const std::string& args)
{
  const std::string cmd = std::string(RECTM_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

cli::RunConfig
burr_estimate(const fs::path& out)
{
  cli::RunConfig cfg;
  cfg.command = "estimate";
  cfg.dgp = "burr";
  cfg.h = 0.1;
  cfg.alpha = 0.95;
  cfg.grid = cli::parse_grid("0.05:1:0.05");
  cfg.out = out;
  return cfg;
}

} // namespace

TEST_CASE("grid parsing")
{
  const auto g = cli::parse_grid("0.05:1:0.05");
  REQUIRE(g.size() == 20);
  CHECK(g.front() == 0.05);
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK(cli::parse_grid("0.1, 0.5,0.9") == std::vector<double>{ 0.1, 0.5, 0.9 });
  CHECK_THROWS_AS(cli::parse_grid("1:0:0.1"), Error);
  CHECK_THROWS_AS(cli::parse_grid("a,b"), Error);
  CHECK_THROWS_AS(cli::parse_grid("0:1"), Error);
}

TEST_CASE("ingestion")
{
  const fs::path dir = scratch_dir("ingest");
  write(dir / "ok.csv", "x,y\n0.1,1.5\n0.2,2.5\n0.3,3.5\n");
  const auto ok = cli::ingest_csv(dir / "ok.csv", {});
  CHECK(ok.sample.n() == 3);
  CHECK(ok.report.rows_dropped == 0);
  CHECK(ok.sample.responses()[2] == 3.5);

  write(dir / "bad.csv", "id;y;x\n1;2.0;0.5\n2;oops;0.6\n3;4.0;0.7\n");
  cli::IngestOptions semi;
  semi.delimiter = ';';
  const auto bad = cli::ingest_csv(dir / "bad.csv", semi);
  CHECK(bad.sample.n() == 2);
  CHECK(bad.report.rows_dropped == 1);
  CHECK(bad.report.reasons.size() == 1);

  // BMI-like covariate, log transform and a range filter, recounted here.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> bmi(14.0, 55.0);
  std::string text = "bmi,charges\n";
  int expected = 0;
  for (int i = 0; i < 500; ++i) {
    char buf[64];
    const double b = bmi(rng);
    std::snprintf(buf, sizeof buf, "%.6f", b);
    const double parsed = std::strtod(buf, nullptr);
    expected += std::log(parsed) >= 2.9 && std::log(parsed) <= 3.9;
    text += std::string(buf) + "," + std::to_string(1000 + i) + "\n";
  }
  write(dir / "bmi.csv", text);
  cli::IngestOptions opt;
  opt.x_col = "bmi";
  opt.y_col = "charges";
  opt.log_x = true;
  opt.x_range = { 2.9, 3.9 };
  const auto f = cli::ingest_csv(dir / "bmi.csv", opt);
  CHECK(f.sample.n() == expected);
  CHECK(f.report.rows_filtered == static_cast<std::size_t>(500 - expected));

  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;
  };
  CHECK(kind_of([&] { cli::ingest_csv(dir / "missing.csv", {}); }) == ErrorKind::configuration);
  cli::IngestOptions wrong;
  wrong.y_col = "charges";
  CHECK(kind_of([&] { cli::ingest_csv(dir / "ok.csv", wrong); }) == ErrorKind::configuration);
  cli::IngestOptions narrow = opt;
  narrow.x_range = { 10.0, 11.0 };
  CHECK(kind_of([&] { cli::ingest_csv(dir / "bmi.csv", narrow); }) == ErrorKind::data);
  fs::remove_all(dir);
}

TEST_CASE("estimate on the Burr model")
{
  const fs::path dir = scratch_dir("estimate");
  std::ostringstream log;
  REQUIRE(cli::run(burr_estimate(dir), log) == cli::exit_ok);
  const std::string first = slurp(dir / "estimate.csv");
  CHECK(first.rfind("# schema: rectm.estimate.csv/1\n", 0) == 0);
  const Table t = read_table(dir / "estimate.csv");
  REQUIRE(t.rows.size() == 20);
  const int gt = t.column("gamma_tilde");
  REQUIRE(gt >= 0);
  int finite = 0;
  for (const auto& r : t.rows)
    finite += std::isfinite(std::strtod(r[gt].c_str(), nullptr));
  CHECK(finite >= 18);

  REQUIRE(cli::run(burr_estimate(dir), log) == cli::exit_ok);
  CHECK(slurp(dir / "estimate.csv") == first);

  cli::RunConfig zero = burr_estimate(dir);
  zero.k = 0.0;
  REQUIRE(cli::run(zero, log) == cli::exit_ok);
  const Table z = read_table(dir / "estimate.csv");
  const int w = z.column("rectm_weissman");
  const int st = z.column("status");
  for (const auto& r : z.rows)
    if (r[st] == "ok")
      CHECK(r[w] == "1");
  fs::remove_all(dir);
}

TEST_CASE("ci rows with a negative Lambda_22 are flagged")
{
  const fs::path dir = scratch_dir("ci");
  // Two covariate regions: a Pareto-type tail on [0, 1], and on [2, 3] a
  // response mixing a large negative atom with moderate positive values, so
  // the bias correction drives the tail index below zero.
  std::string text = "x,y\n";
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    text += std::to_string(x) + "," + std::to_string(std::pow(u(rng), -0.25)) + "\n";
  }
  for (int i = 0; i < 1000; ++i) {
    const double x = 2.0 + u(rng);
    const double y = i % 10 == 0 ? -5000.0 : 1.0 + 99.0 * u(rng);
    text += std::to_string(x) + "," + std::to_string(y) + "\n";
  }
  write(dir / "mixed.csv", text);
  cli::RunConfig cfg;
  cfg.command = "ci";
  cfg.input = (dir / "mixed.csv").string();
  cfg.h = 0.3;
  cfg.alpha = 0.95;
  cfg.grid = { 0.5, 2.5 };
  cfg.out = dir / "out";
  std::ostringstream log;
  REQUIRE(cli::run(cfg, log) == cli::exit_ok);
  const Table t = read_table(dir / "out" / "ci.csv");
  REQUIRE(t.rows.size() == 2);
  const int cs = t.column("ci_status");
  const int l22 = t.column("lambda22");
  const int gt = t.column("gamma_tilde");
  CHECK(t.rows[0][cs] == "ok");
  CHECK(std::strtod(t.rows[1][gt].c_str(), nullptr) < 0.0);
  CHECK(std::strtod(t.rows[1][l22].c_str(), nullptr) < 0.0);
  CHECK(t.rows[1][cs] == "negative_lambda22");
  CHECK(t.rows[1][t.column("ci_lo")] == "nan");
  fs::remove_all(dir);
}

TEST_CASE("exit codes")
{
  const fs::path dir = scratch_dir("exit");
  std::ostringstream log;
  cli::RunConfig both = burr_estimate(dir);
  both.input = "whatever.csv";
  CHECK(cli::run(both, log) == cli::exit_config);

  cli::RunConfig bad_alpha = burr_estimate(dir);
  bad_alpha.alpha = 1.5;
  CHECK(cli::run(bad_alpha, log) == cli::exit_config);

  write(dir / "d.csv", "x,y\n1,2\n2,3\n");
  cli::RunConfig empty;
  empty.command = "estimate";
  empty.input = (dir / "d.csv").string();
  empty.ingest.x_range = { 10.0, 20.0 };
  empty.out = dir;
  CHECK(cli::run(empty, log) == cli::exit_data);
  fs::remove_all(dir);
}

TEST_CASE("command-line tool")
{
  const fs::path dir = scratch_dir("tool");
  const std::string out = " --out " + (dir / "o").string();
  CHECK(run_tool("--command estimate --dgp burr --n 500 --h 0.2 --alpha 0.9 --grid 0.25,0.5" + out) == 0);
  CHECK(fs::exists(dir / "o" / "estimate.csv"));
  CHECK(run_tool("--command estimate" + out) == 2);
  CHECK(run_tool("--command nonsense --dgp burr" + out) == 2);
  CHECK(run_tool("--command estimate --dgp burr --h -1" + out) == 2);
  CHECK(run_tool("--command estimate --input " + (dir / "none.csv").string() + out) == 2);
  write(dir / "d.csv", "x,y\n1,2\n2,3\n");
  CHECK(run_tool("--command estimate --input " + (dir / "d.csv").string() + " --x-range 5:6" + out) == 3);

  // Configuration file with a flag override.
  write(dir / "run.toml",
        "command = \"simulate\"\nn = 300\nreplications = 2\ngrid = \"0.25,0.75\"\nh = \"0.3\"\nalpha = \"0.9\"\nseed = 5\n");
  CHECK(run_tool("--config " + (dir / "run.toml").string() + " --seed 6" + out) == 0);
  const std::string a = slurp(dir / "o" / "simulation_summary.json");
  CHECK(a.find("\"seed\": 6") != std::string::npos);
  CHECK(a.find("\"n\": 300") != std::string::npos);
  CHECK(run_tool("--config " + (dir / "run.toml").string() + " --seed 6" + out) == 0);
  CHECK(slurp(dir / "o" / "simulation_summary.json") == a);

  CHECK(run_tool("--command select --dgp burr --n 400 --h-grid 0.1:0.4:4 --alpha-grid 0.9:0.95:3" + out) == 0);
  CHECK(fs::exists(dir / "o" / "select.json"));
  CHECK(fs::exists(dir / "o" / "select_h.csv"));
  CHECK(fs::exists(dir / "o" / "select_alpha.csv"));
  fs::remove_all(dir);
}
