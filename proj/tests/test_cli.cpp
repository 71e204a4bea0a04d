#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "circfilt/cli.hpp"
#include "circfilt/config.hpp"
#include "circfilt/errors.hpp"
#include "doctest.h"

using namespace circfilt;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "circfilt");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("circfilt_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t data_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t rows = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("simulate writes T/dt + 1 rows with the resolved config on top") {
  TempDir dir;
  const auto r = cli({"simulate", "--kappa-phi", "1", "--kappa-u", "10", "--T", "10", "--dt", "0.01", "--seed", "7",
                      "--out", dir / "traj.csv"});
  REQUIRE(r.code == kExitOk);
  const auto text = slurp(dir / "traj.csv");
  CHECK(data_rows(text) == 1001);
  CHECK(text.rfind("# circfilt simulate\n", 0) == 0);
  CHECK(text.find("# experiment.seed = 7\n") != std::string::npos);
  CHECK(text.find("# model.kappa_u = 10\n") != std::string::npos);
  CHECK(text.find("\nt,phi,dU,z\n") != std::string::npos);
}

TEST_CASE("precedence: flag over config file over default") {
  TempDir dir;
  write(dir / "run.cfg", "[model]\nkappa_u = 20\n; comment\n[experiment]\nseed = 3\n");
  auto kappa_u_in = [&](const std::vector<std::string>& extra) {
    std::vector<std::string> args{"simulate", "--T", "0.1", "--out", dir / "t.csv"};
    args.insert(args.end(), extra.begin(), extra.end());
    REQUIRE(cli(args).code == kExitOk);
    const auto text = slurp(dir / "t.csv");
    const auto pos = text.find("# model.kappa_u = ");
    return text.substr(pos + 18, text.find('\n', pos) - pos - 18);
  };
  CHECK(kappa_u_in({}) == "10");
  CHECK(kappa_u_in({"--config", dir / "run.cfg"}) == "20");
  CHECK(kappa_u_in({"--config", dir / "run.cfg", "--kappa-u", "30"}) == "30");
  CHECK(kappa_u_in({"--config", dir / "run.cfg", "--set", "model.kappa_u=40"}) == "40");
}

TEST_CASE("config errors name the location") {
  TempDir dir;
  write(dir / "bad_key.cfg", "[model]\nkapa_u = 3\n");
  auto r = cli({"mc", "--config", dir / "bad_key.cfg"});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("model.kapa_u") != std::string::npos);
  CHECK(r.err.find("model.kappa_u") != std::string::npos);  // listed among the valid keys

  write(dir / "bad_syntax.cfg", "[model]\nkappa_u = 3\nthis line has no equals sign\n");
  r = cli({"mc", "--config", dir / "bad_syntax.cfg"});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("bad_syntax.cfg:3") != std::string::npos);

  write(dir / "bad_value.cfg", "[experiment]\nruns = many\n");
  r = cli({"mc", "--config", dir / "bad_value.cfg"});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("experiment.runs") != std::string::npos);

  r = cli({"mc", "--set", "nope.key=1"});
  CHECK(r.code == kExitConfig);
}

TEST_CASE("usage and I/O exit codes") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"mc", "--kappa-u", "abc"}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"filter", "--trajectory", "/nonexistent/traj.csv"}).code == kExitIo);
  CHECK(cli({"simulate", "--T", "0.1", "--out", "/proc/circfilt/forbidden.csv"}).code == kExitIo);
}

TEST_CASE("filter reads the model from the trajectory header") {
  TempDir dir;
  REQUIRE(cli({"simulate", "--kappa-u", "1", "--kappa-z", "10", "--T", "2", "--out", dir / "traj.csv"}).code == kExitOk);
  auto r = cli({"filter", "--trajectory", dir / "traj.csv", "--filter", "circkf", "--out", dir / "trace.csv"});
  REQUIRE(r.code == kExitOk);
  const auto text = slurp(dir / "trace.csv");
  CHECK(text.find("# model.kappa_z = 10\n") != std::string::npos);
  CHECK(text.find("\nt,phi,mu,r\n") != std::string::npos);
  CHECK(data_rows(text) == 201);

  REQUIRE(cli({"simulate", "--model", "linear", "--T", "1", "--out", dir / "lin.csv"}).code == kExitOk);
  r = cli({"filter", "--trajectory", dir / "lin.csv", "--filter", "gkbf", "--out", dir / "lin_trace.csv"});
  REQUIRE(r.code == kExitOk);
  CHECK(slurp(dir / "lin_trace.csv").find("\nt,x,mu,sigma2\n") != std::string::npos);

  r = cli({"filter", "--trajectory", dir / "lin.csv", "--filter", "circkf"});
  CHECK(r.code == kExitConfig);
}

TEST_CASE("mc, sweep and timing write their files") {
  TempDir dir;
  write(dir / "fig.cfg",
        "[model]\nkappa_phi = 1\nkappa_u = 10\n[filters]\nlist = vm_increment, gauss_adf, pf(100)\n"
        "[experiment]\nruns = 20\nT = 1\nrecord_stride = 10\n[output]\ntraces = 2\n");
  auto r = cli({"mc", "--config", dir / "fig.cfg", "--out-dir", dir / "mc"});
  REQUIRE(r.code == kExitOk);
  const auto summary = slurp(dir / "mc/summary.csv");
  CHECK(summary.rfind("# circfilt mc\n", 0) == 0);
  CHECK(summary.find("\nt,filter,r_mean,r_hat,n_runs\n") != std::string::npos);
  CHECK(data_rows(summary) == 11 * 3);
  CHECK(fs::exists(dir / "mc/traces/run_0.csv"));
  CHECK(fs::exists(dir / "mc/traces/run_1.csv"));
  CHECK_FALSE(fs::exists(dir / "mc/traces/run_2.csv"));
  CHECK(slurp(dir / "mc/summary.svg").find("<svg") != std::string::npos);
  CHECK(slurp(dir / "mc/timing.csv").find("pf(100),") != std::string::npos);

  r = cli({"sweep", "--config", dir / "fig.cfg", "--parameter", "kappa_u", "--values", "1,10", "--out-dir",
           dir / "sw"});
  REQUIRE(r.code == kExitOk);
  const auto sw = slurp(dir / "sw/sweep.csv");
  CHECK(sw.find("\nparameter,value,filter,r_mean,r_hat,n_runs\n") != std::string::npos);
  CHECK(data_rows(sw) == 6);

  r = cli({"timing", "--filters", "circkf,pf(200)", "--kappa-z", "10", "--T", "1", "--repeats", "3", "--out-dir",
           dir / "tm"});
  REQUIRE(r.code == kExitOk);
  const auto timing = slurp(dir / "tm/timing.csv");
  CHECK(timing.find("# pf/circkf median ratio = ") != std::string::npos);
  CHECK(data_rows(timing) == 2);
}

TEST_CASE("selftest passes") {
  const auto r = cli({"selftest"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("PASS  conjugacy grid") != std::string::npos);
}

TEST_CASE("Settings") {
  auto s = Settings::defaults();
  CHECK(s.get("model.kind") == "circular");
  CHECK_FALSE(s.get_optional_double("model.kappa_z"));
  s.merge_header({"circfilt simulate", "model.kappa_z = 5", "not.a.key = 1", "free text"});
  CHECK(*s.get_optional_double("model.kappa_z") == 5.0);
  s.set("filters.list", " circkf , pf(10),gvm ");
  CHECK(s.get_list("filters.list") == std::vector<std::string>{"circkf", "pf(10)", "gvm"});
  s.set("filters.gvm_order", "3");
  const auto c = s.experiment();
  CHECK(c.filters.at(2).order == 3);
  CHECK(c.filters.at(1).particles == 10);
  CHECK_THROWS_AS(s.set("model.unknown", "1"), ConfigError);
  s.set("model.increments", "maybe");
  CHECK_THROWS_AS((void)s.get_bool("model.increments"), ConfigError);
  std::istringstream orphan("kappa_u = 3\n");
  CHECK_THROWS_AS(s.merge_ini(orphan, "orphan"), ConfigError);
  CHECK(format_number(0.1) == "0.1");
}
