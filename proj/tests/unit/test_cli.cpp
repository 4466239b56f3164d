#include <algorithm>
#include <cmath>
#include <tuple>
#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "kirchhoff/cli_report.hpp"
#include "kirchhoff/error.hpp"

using namespace kirchhoff;

namespace {

int run(std::initializer_list<const char*> args, std::string& out, std::string& err) {
  std::vector<const char*> argv{"kirchhoff"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream o, e;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  err = e.str();
  return code;
}

}  // namespace

TEST_CASE("range parsing") {
  const auto lin = cli::parse_range("1:3:3");
  CHECK(lin.points() == std::vector<double>{1.0, 2.0, 3.0});
  const auto geo = cli::parse_range("0.1:10:3:log");
  const auto pts = geo.points();
  REQUIRE(pts.size() == 3);
  CHECK(pts[1] == doctest::Approx(1.0));
  CHECK(cli::parse_range("2:2:1").points() == std::vector<double>{2.0});
  for (const char* bad : {"", "1:2", "0:1:3", "3:1:2", "1:2:0", "1:2:3:cubic", "a:b:c", "1:2:3:log:x"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(cli::parse_range(bad), Error);
  }
}

TEST_CASE("usage errors exit with 64") {
  std::string out, err;
  CHECK(run({}, out, err) == cli::kExitUsage);
  CHECK(run({"frobnicate"}, out, err) == cli::kExitUsage);
  CHECK(run({"solve", "--a", "-1"}, out, err) == cli::kExitUsage);
  CHECK(run({"solve", "--p", "5"}, out, err) == cli::kExitUsage);
  CHECK(run({"solve", "--b", "0"}, out, err) == cli::kExitUsage);
  CHECK(run({"solve", "--n", "3"}, out, err) == cli::kExitUsage);
  CHECK(run({"spectrum", "--k-max", "1"}, out, err) == cli::kExitUsage);
  CHECK(run({"sweep", "--a-range", "1:0:2"}, out, err) == cli::kExitUsage);
  CHECK(run({"--help"}, out, err) == cli::kExitOk);
}

TEST_CASE("solve prints a parseable report") {
  std::string out, err;
  REQUIRE(run({"solve", "--n", "2000"}, out, err) == cli::kExitOk);
  const auto doc = nlohmann::json::parse(out);
  CHECK(doc.at("c").get<double>() > 1.0);
  CHECK(doc.at("residual").get<double>() < 1e-4);
}

TEST_CASE("verify json") {
  std::string out, err;
  const int code = run({"verify", "--json"}, out, err);
  const auto doc = nlohmann::json::parse(out);
  CHECK(code == cli::kExitOk);
  CHECK(doc.at("overall").get<std::string>() == "pass");
  CHECK(doc.at("checks").size() > 10);
  for (const auto& c : doc.at("checks")) CHECK(c.at("pass").get<bool>());
}

TEST_CASE("verify fails on a coarse grid") {
  std::string out, err;
  CHECK(run({"verify", "--n", "32"}, out, err) == cli::kExitFailed);
  CHECK(out.find("FAIL") != std::string::npos);
}

TEST_CASE("sweep rows are sorted and monotone") {
  cli::RunConfig cfg;
  cfg.command = cli::Command::Sweep;
  cfg.a_range = cli::parse_range("0.5:2:3");
  cfg.b_range = cli::parse_range("0.1:10:3:log");
  cfg.n = 1500;
  cfg.k_max = 2;
  const auto rows = cli::sweep(cfg, 2);
  REQUIRE(rows.size() == 9);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& x = rows[i - 1];
    const auto& y = rows[i];
    CHECK(std::tie(x.a, x.b, x.p) < std::tie(y.a, y.b, y.p));
    if (x.a == y.a) {
      CHECK(y.c > x.c);
      CHECK(y.kappa_closed > x.kappa_closed);
    }
  }
  for (std::size_t i = 0; i + 3 < rows.size(); ++i) CHECK(rows[i + 3].kappa_closed < rows[i].kappa_closed);
  for (const auto& r : rows) CHECK(r.verdict == "nondegenerate");

  const auto serial = cli::sweep(cfg, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(serial[i].c == doctest::Approx(rows[i].c).epsilon(1e-12));

  const std::string csv = cli::sweep_csv(rows);
  CHECK(csv.rfind("a,b,p,sqrt_c,c,m,kappa_closed,verdict\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("sweep cache matches fresh solves") {
  cli::RunConfig cfg;
  cfg.a_range = cli::parse_range("1:2:2");
  cfg.b_range = cli::parse_range("1:1:1");
  cfg.p_range = cli::parse_range("2:3:2");
  cfg.n = 1500;
  cfg.k_max = 2;
  const auto rows = cli::sweep(cfg, 1);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    cli::RunConfig one = cfg;
    one.a_range.reset();
    one.b_range.reset();
    one.p_range.reset();
    one.params = {row.a, row.b, row.p};
    std::ostringstream o, e;
    REQUIRE(cli::run_solve(one, o, e) == cli::kExitOk);
    const auto doc = nlohmann::json::parse(o.str());
    CHECK(std::abs(doc.at("c").get<double>() - row.c) <= 1e-12 * row.c);
  }
}

TEST_CASE("worker count honours the environment") {
  setenv("KIRCHHOFF_THREADS", "3", 1);
  CHECK(cli::worker_count() == 3);
  unsetenv("KIRCHHOFF_THREADS");
  CHECK(cli::worker_count() >= 1);
}
