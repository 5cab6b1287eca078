// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli.hpp"
#include "wba/io.hpp"

using namespace wba;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int spawn(const std::string& args) {
  const std::string cmd = std::string(WBA_CLI_BIN) + " " + args;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

void spit(const fs::path& p, const std::string& body) {
  write_text_file(p.string(), body);
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("cli_scratch") / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
};

}  // namespace

TEST_CASE("weight mini-language") {
  auto d = cli::parse_weight("bump");
  CHECK(d.kind == WeightKind::BumpPQ);
  CHECK(d.p == 1.0);
  CHECK(d.q == 1.0);
  auto b = cli::parse_weight("bump:p=2,q=0.5");
  CHECK(b.p == 2.0);
  CHECK(b.q == 0.5);
  CHECK(cli::parse_weight("bump:q=3").q == 3.0);
  CHECK(cli::parse_weight("dexp").kind == WeightKind::DoubleExp);
  CHECK(cli::parse_weight("sin2").kind == WeightKind::SineSquared);
  CHECK(cli::parse_weight("uniform").kind == WeightKind::Uniform);
  CHECK_THROWS_AS(cli::parse_weight("tri"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_weight("dexp:p=1"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_weight("bump:r=1"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_weight("bump:p"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_weight("bump:p=abc"), std::invalid_argument);
}

TEST_CASE("weight lists and column tags") {
  auto list = cli::parse_weight_list("bump:p=1,q=2; dexp ;sin2");
  REQUIRE(list.size() == 3);
  CHECK(cli::weight_tag(list[0]) == "bump_p1_q2");
  CHECK(cli::weight_tag(list[1]) == "dexp");
  CHECK(cli::weight_tag(list[2]) == "sin2");
  CHECK(cli::weight_tag(cli::parse_weight("bump:p=0.5,q=0.5")) ==
        "bump_p0.5_q0.5");
  CHECK(cli::weight_tag(cli::parse_weight("uniform")) == "uniform");
  CHECK(cli::weight_tag(make_custom_weight([](double x) { return x; })) ==
        "custom");
  CHECK_THROWS_AS(cli::parse_weight_list(""), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_weight_list(";"), std::invalid_argument);
}

TEST_CASE("grid mini-language") {
  CHECK(cli::parse_grid("8:64:log") ==
        std::vector<std::int64_t>{8, 16, 32, 64});
  // dyadic doubling stops at the last power-of-two step inside the range
  CHECK(cli::parse_grid("8:100:log") ==
        std::vector<std::int64_t>{8, 16, 32, 64});
  CHECK(cli::parse_grid("10:10:log") == std::vector<std::int64_t>{10});
  auto lin = cli::parse_grid("1:17:lin");
  REQUIRE(lin.size() == 17);
  for (int i = 0; i < 17; ++i) CHECK(lin[i] == i + 1);
  auto lg = cli::parse_grid("4:64:log:4");
  REQUIRE(lg.size() == 4);
  CHECK(lg.front() == 4);
  CHECK(lg.back() == 64);
  for (std::size_t i = 1; i < lg.size(); ++i) CHECK(lg[i] > lg[i - 1]);
  // duplicates collapse
  auto dup = cli::parse_grid("4:5:lin:8");
  for (std::size_t i = 1; i < dup.size(); ++i) CHECK(dup[i] > dup[i - 1]);
  CHECK_THROWS_AS(cli::parse_grid("8:64"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_grid("64:8:log"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_grid("0:8:lin"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_grid("2:8:geo"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_grid("2:8:log:1"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_grid("a:8:log"), std::invalid_argument);
}

TEST_CASE("precision names") {
  CHECK(cli::parse_precision("standard") == Precision::Standard);
  CHECK(cli::parse_precision("extended") == Precision::Extended);
  CHECK_THROWS_AS(cli::parse_precision("double"), std::invalid_argument);
}

TEST_CASE("double lists") {
  CHECK(cli::parse_double_list("0.5") == std::vector<double>{0.5});
  CHECK(cli::parse_double_list("1,-2,3e-4") ==
        std::vector<double>{1.0, -2.0, 3e-4});
  CHECK_THROWS_AS(cli::parse_double_list("1,x"), std::invalid_argument);
}

TEST_CASE("signal mini-language covers the closed forms") {
  auto c = cli::parse_signal("const:2.5");
  CHECK(c.has_reference);
  CHECK(c.reference == std::vector<double>{2.5});
  double v = 0.0;
  c.signal->sample(3, &v);
  CHECK(v == 2.5);

  auto p = cli::parse_signal("periodic:1,2,3");
  CHECK(p.reference == std::vector<double>{2.0});
  CHECK(p.signal->kind() == SignalKind::PeriodicTable);

  auto f = cli::parse_signal("fig5");
  CHECK(f.has_reference);
  CHECK(f.has_rotation);
  CHECK(f.reference == std::vector<double>{0.0});
  CHECK(f.rho.components == std::vector<double>{1.0 / (2.0 * M_PI)});

  CHECK_THROWS_AS(cli::parse_signal(""), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_signal("mystery:1"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_signal("fig5:x"), std::invalid_argument);
}

TEST_CASE("orbit signals load a trig polynomial from disk") {
  TempDir dir("orbit");
  const fs::path poly_path = dir.path / "poly.json";
  spit(poly_path, trig_poly_json(make_sin_cos_observable()));

  auto s = cli::parse_signal("orbit:" + poly_path.string() +
                             ",rho=0.25,theta0=0.125");
  CHECK(s.has_rotation);
  CHECK(s.theta0 == std::vector<double>{0.125});
  double v = 1.0;
  s.signal->sample(0, &v);
  // sin(pi/4) + cos(5 pi/4) = 0
  CHECK(std::fabs(v) < 1e-15);

  CHECK_THROWS_AS(cli::parse_signal("orbit:" + poly_path.string()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      cli::parse_signal("orbit:" + poly_path.string() + ",rho=0.1,0.2"),
      std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_signal("orbit:nope.json,rho=0.5"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      cli::parse_signal("orbit:" + poly_path.string() + ",rho=0.5,rho=0.6"),
      std::invalid_argument);
}

TEST_CASE("csv and flow signals") {
  TempDir dir("csv");
  const fs::path csv_path = dir.path / "data.csv";
  spit(csv_path, "x,y\n1,2\n3,4\n5,6\n");
  auto s = cli::parse_signal("csv:" + csv_path.string() + ",dim=2");
  CHECK(s.signal->value_dim() == 2);
  CHECK(s.signal->max_len() == 3);
  CHECK_FALSE(s.has_reference);
  CHECK_THROWS_AS(cli::parse_signal("csv:missing.csv"), std::invalid_argument);

  auto fl = cli::parse_signal("flow:cos2pi,h=0.5");
  CHECK(fl.signal->kind() == SignalKind::FlowSampler);
  double v = 0.0;
  fl.signal->sample(0, &v);
  CHECK(v == 1.0);
  CHECK_THROWS_AS(cli::parse_signal("flow:sin2pi"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_signal("flow:cos2pi,h=0"), std::invalid_argument);
}

TEST_CASE("config text becomes injected arguments") {
  auto args = cli::load_config_args(
      "# comment\n"
      "N=100\n"
      "\n"
      "signal=const:7\n"
      "subcommand=average\n"
      "config=elsewhere.json\n"
      "empty=\n");
  CHECK(args == std::vector<std::string>{"--N=100", "--signal=const:7"});

  auto from_json = cli::load_config_args(
      R"({"N": 100, "json": true, "weight": "dexp", "h": 0.5})");
  CHECK(from_json == std::vector<std::string>{"--N=100", "--h=0.5",
                                              "--json=true", "--weight=dexp"});

  CHECK_THROWS_AS(cli::load_config_args("{\"unterminated\": "),
                  std::invalid_argument);
  CHECK_THROWS_AS(cli::load_config_args(R"({"a": [1,2]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(cli::load_config_args("novalue\n"), std::invalid_argument);
}

TEST_CASE("config arguments land right after the subcommand") {
  TempDir dir("cfg");
  const fs::path cfg = dir.path / "run.cfg";
  spit(cfg, "N=100\nsignal=const:7\n");
  const std::string cfg_flag = "--config=" + cfg.string();
  const char* argv[] = {"wba", "average", cfg_flag.c_str(), "--N", "50"};
  auto args = cli::preprocess_args(5, argv);
  // the --config token itself stays; the subcommand swallows it later
  REQUIRE(args.size() == 7);
  CHECK(args[0] == "wba");
  CHECK(args[1] == "average");
  CHECK(args[2] == "--N=100");
  CHECK(args[3] == "--signal=const:7");
  CHECK(args[4] == cfg_flag);
  CHECK(args[5] == "--N");
  CHECK(args[6] == "50");

  // the two-token spelling --config <path> works the same way
  const std::string cfg_str = cfg.string();
  const char* argv2[] = {"wba", "average", "--config", cfg_str.c_str()};
  auto args2 = cli::preprocess_args(4, argv2);
  REQUIRE(args2.size() == 6);
  CHECK(args2[2] == "--N=100");
  CHECK(args2[3] == "--signal=const:7");
  CHECK(args2[4] == "--config");

  const char* argv3[] = {"wba", "average", "--config", "missing.cfg"};
  CHECK_THROWS_AS(cli::preprocess_args(4, argv3), std::invalid_argument);

  const char* argv4[] = {"wba", "average"};
  auto args4 = cli::preprocess_args(2, argv4);
  CHECK(args4 == std::vector<std::string>{"wba", "average"});
}

TEST_CASE("binary: help and usage errors") {
  CHECK(spawn("--help > /dev/null 2>&1") == 0);
  CHECK(spawn("average --help > /dev/null 2>&1") == 0);
  CHECK(spawn("> /dev/null 2>&1") == 2);
  CHECK(spawn("bogus > /dev/null 2>&1") == 2);
  CHECK(spawn("average --nope > /dev/null 2>&1") == 2);
  CHECK(spawn("average --signal const:5 > /dev/null 2>&1") == 2);
  CHECK(spawn("average --signal const:5 --weight tri --N 10 > /dev/null 2>&1") ==
        2);
  CHECK(spawn("scan --rho 0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5 --kmax 30 "
              "> /dev/null 2>&1") == 2);
}

TEST_CASE("binary: averaging run with outputs") {
  TempDir dir("avg");
  const std::string out = (dir.path / "run").string();
  const int rc = spawn("average --signal const:5 --N 1000 --out " + out +
                       " > " + out + ".stdout 2>/dev/null");
  CHECK(rc == 0);
  CHECK(slurp(out + ".stdout").empty());  // quiet without --json

  const json vj = json::parse(slurp(fs::path(out) / "value.json"));
  CHECK(vj.at("n") == 1000);
  REQUIRE(vj.at("value").is_array());
  CHECK(std::fabs(vj.at("value")[0].get<double>() - 5.0) < 1e-12);
  CHECK(fs::exists(fs::path(out) / "manifest.json"));

  const int rc2 = spawn("average --signal const:5 --N 1000 --json --out " +
                        out + " > " + out + ".stdout 2>/dev/null");
  CHECK(rc2 == 0);
  const json summary = json::parse(slurp(out + ".stdout"));
  CHECK(summary.at("command") == "average");
  CHECK(summary.at("n") == 1000);
}

TEST_CASE("binary: manifests rerun to byte-identical outputs") {
  TempDir dir("rerun");
  const std::string a = (dir.path / "a").string();
  const std::string b = (dir.path / "b").string();
  CHECK(spawn("converge --signal fig5 --weight \"bump:p=1,q=1;sin2\" "
              "--grid 8:512:log --out " +
              a + " > /dev/null 2>&1") == 0);
  CHECK(spawn("converge --config " + a + "/manifest.json --out " + b +
              " > /dev/null 2>&1") == 0);
  for (const char* name : {"errors.csv", "fits.json", "manifest.json"}) {
    CAPTURE(name);
    CHECK(slurp(fs::path(a) / name) == slurp(fs::path(b) / name));
  }
}

TEST_CASE("binary: explicit flags override the config file") {
  TempDir dir("override");
  const fs::path cfg = dir.path / "run.cfg";
  spit(cfg, "signal=const:7\nN=100\n");
  const std::string out = (dir.path / "out").string();
  CHECK(spawn("average --config " + cfg.string() + " --N 50 --out " + out +
              " > /dev/null 2>&1") == 0);
  const json vj = json::parse(slurp(fs::path(out) / "value.json"));
  CHECK(vj.at("n") == 50);
  CHECK(std::fabs(vj.at("value")[0].get<double>() - 7.0) < 1e-12);
  // the manifest echoes the effective configuration, not the file's
  const json mj = json::parse(slurp(fs::path(out) / "manifest.json"));
  CHECK(mj.at("N") == "50");
  CHECK(mj.at("subcommand") == "average");
  CHECK(mj.count("config") == 0);
  CHECK(mj.count("out") == 0);
}

TEST_CASE("binary: data shorter than the requested range is a usage error") {
  TempDir dir("short");
  const fs::path csv = dir.path / "five.csv";
  spit(csv, "1\n2\n3\n4\n5\n");
  CHECK(spawn("average --signal csv:" + csv.string() +
              " --N 100 > /dev/null 2>&1") == 2);
}

TEST_CASE("binary: remaining subcommands produce their outputs") {
  TempDir dir("smoke");
  const std::string scan_out = (dir.path / "scan").string();
  CHECK(spawn("scan --rho 0.6180339887498949 --kmax 100 --out " + scan_out +
              " > /dev/null 2>&1") == 0);
  const json sj = json::parse(slurp(fs::path(scan_out) / "scan.json"));
  CHECK(sj.at("resonant_flag") == false);
  const json cf = json::parse(slurp(fs::path(scan_out) / "cf.json"));
  CHECK(cf.at("components")[0].at("quotients")[0] == 1);

  const std::string clt_out = (dir.path / "clt").string();
  CHECK(spawn("clt --dist rademacher --N 8 --trials 1000 --seed 3 --out " +
              clt_out + " > /dev/null 2>&1") == 0);
  const std::string clt = slurp(fs::path(clt_out) / "clt.csv");
  CHECK(clt.rfind("N,distance,dkw_bound,trials,seed\n8,", 0) == 0);

  const std::string per_out = (dir.path / "periodic").string();
  CHECK(spawn("periodic --signal periodic:1,-1 --grid 8:64:log --out " +
              per_out + " > /dev/null 2>&1") == 0);
  CHECK(fs::exists(fs::path(per_out) / "interp.json"));
  CHECK(fs::exists(fs::path(per_out) / "fit.json"));

  const std::string fr_out = (dir.path / "fourier").string();
  CHECK(spawn("fourier --signal fig5 --N 2048 --order 2 --out " + fr_out +
              " > /dev/null 2>&1") == 0);
  const json fj = json::parse(slurp(fs::path(fr_out) / "fourier.json"));
  CHECK(fj.at("n") == 2048);
  CHECK(fj.at("modes").get<int>() > 0);
}

TEST_CASE("binary: flushed-out weights are a numeric failure") {
  // exponents this extreme flush the whole profile to zero, which the engine
  // reports as a numeric failure rather than a usage error
  CHECK(spawn("average --signal const:5 --weight bump:p=30,q=30 --N 100 "
              "> /dev/null 2>&1") == 3);
}
