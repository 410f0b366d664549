#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"

using namespace fracmv;
using namespace fracmv::cli;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(FRACMV_TEST_CACHE_DIR) / "cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(FRACMV_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config text parsing") {
  RunConfig c;
  apply_config_text(c,
                    "# kernel\n"
                    "n = 2\n"
                    "s=0.25\n"
                    "tol.mvp.constant=1e-3\n"
                    "fields=constant, ball_poisson\n"
                    "domain=ball:0.5,0,2\n"
                    "seed=7\n");
  REQUIRE(c.n);
  CHECK(*c.n == 2);
  CHECK(c.params().a() == doctest::Approx(0.5));
  CHECK(c.tol("mvp.constant") == 1e-3);
  CHECK(c.tol("ext.unit") == 1e-8);
  CHECK(c.fields == std::vector<std::string>{"constant", "ball_poisson"});
  CHECK(c.seed == 7);
  const Domain d = c.make_domain();
  CHECK(d.kind() == DomainKind::ball);
  CHECK(d.distance_to_boundary(Point(0.5, 0.0)) == doctest::Approx(2.0));
}

TEST_CASE("config errors") {
  RunConfig c;
  CHECK_THROWS_AS(apply_config_text(c, "colour=blue\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "n=3\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "just text\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "tol.nope=1\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "a=zero\n"), ConfigError);
  RunConfig both;
  apply_config_text(both, "n=1\na=0\ns=0.5\n");
  CHECK_THROWS_AS(both.params(), ConfigError);
  RunConfig bad;
  apply_config_text(bad, "n=1\ns=1.5\n");
  CHECK_THROWS_AS(bad.params(), ConfigError);
  CHECK_THROWS_AS(apply_config_file(c, "/nonexistent/run.cfg"), IoError);
  CHECK_THROWS_AS(parse_domain("interval:1", 1), ConfigError);
  CHECK_THROWS_AS(parse_domain("torus", 2), ConfigError);
}

TEST_CASE("default table path") {
  RunConfig c;
  apply_config_text(c, "n=1\ns=0.75\nout=res\n");
  CHECK(c.resolved_table_path() == "res/kernel_n1_a-0.5.tbl");
}

TEST_CASE("guarded maps exceptions to exit codes") {
  std::ostringstream err;
  CHECK(guarded([] { return 0; }, err) == kPass);
  CHECK(guarded([]() -> int { throw ConfigError("x"); }, err) == kInvalidArguments);
  CHECK(guarded([]() -> int { throw RejectedField("x"); }, err) == kInvalidArguments);
  CHECK(guarded([]() -> int { throw MismatchError("x"); }, err) == kMismatch);
  CHECK(guarded([]() -> int { throw IoError("x"); }, err) == kIoError);
  CHECK(guarded([]() -> int { throw ToleranceNotMet("x", 1.0, 0.1); }, err) == kToleranceFailure);
}

TEST_CASE("kernel build, verify and exit codes") {
  const fs::path dir = scratch("build");
  const fs::path log = dir / "log.txt";
  const std::string out = " --out " + dir.string();
  REQUIRE(run("kernel build --n 1 --s 0.5" + out, log) == 0);
  const fs::path table = dir / "kernel_n1_a0.tbl";
  REQUIRE(fs::exists(table));
  const std::string first = slurp(table);
  CHECK(first.rfind("n=1\na=0\n", 0) == 0);

  // bit-reproducible rebuild
  REQUIRE(run("kernel build --n 1 --a 0" + out, log) == 0);
  CHECK(slurp(table) == first);

  CHECK(run("kernel verify --n 1 --s 0.5" + out, log) == 0);
  const std::string csv = slurp(dir / "verify.csv");
  CHECK(csv.rfind("property,description,measured,threshold,passed,detail\n", 0) == 0);
  CHECK(csv.find(",false,") == std::string::npos);

  CHECK(run("kernel build --n 1 --s 1.2" + out, log) == 2);
  CHECK(run("kernel build --n 1 --s 0.5 --a 0" + out, log) == 2);
  CHECK(run("kernel build --s 0.5" + out, log) == 2);
  CHECK(run("mvp --n 1 --s 0.5 --bogus", log) == 2);
  CHECK(run("mvp --n 1 --s 0.5 --tol nope=1" + out, log) == 2);
  CHECK(run("kernel verify --n 1 --a 0.3 --table " + table.string() + out, log) == 3);
  CHECK(run("kernel verify --n 2 --table " + table.string() + out, log) == 3);
  CHECK(run("kernel verify --n 1 --a 0 --table " + (dir / "missing.tbl").string() + out, log) == 4);
  std::ofstream(dir / "garbage.tbl") << "not a table\n";
  CHECK(run("kernel verify --table " + (dir / "garbage.tbl").string() + out, log) == 4);
  CHECK(run("mvp --config " + (dir / "missing.cfg").string(), log) == 4);
}

TEST_CASE("mvp is deterministic and honours config overrides") {
  const fs::path dir = scratch("mvp");
  const fs::path log = dir / "log.txt";
  std::ofstream(dir / "run.cfg") << "n=1\na=0.9\nfields=constant,ball_poisson\nseed=3\nout="
                                 << dir.string() << "\n";
  const std::string cfg = " --config " + (dir / "run.cfg").string();
  // --s replaces the a from the file
  REQUIRE(run("kernel build --s 0.5" + cfg, log) == 0);
  REQUIRE(run("mvp --s 0.5" + cfg, log) == 0);
  const std::string first = slurp(dir / "mvp.csv");
  CHECK(first.rfind("field_id,x,r,lambda,p,value,kind\n", 0) == 0);
  CHECK(first.find("ball_poisson#3") != std::string::npos);
  REQUIRE(run("mvp --s 0.5" + cfg, log) == 0);
  CHECK(slurp(dir / "mvp.csv") == first);

  // an impossible tolerance is a tolerance failure
  CHECK(run("mvp --s 0.5 --tol mvp.sharmonic=1e-15" + cfg, log) == 1);
  // affine data is outside the growth class for s <= 1/2
  CHECK(run("mvp --s 0.5 --fields affine" + cfg, log) == 2);
  CHECK(run("mvp --s 0.5 --fields unicorn" + cfg, log) == 2);
}

TEST_CASE("extension and regularity reports") {
  const fs::path dir = scratch("ext");
  const fs::path log = dir / "log.txt";
  const std::string common = " --n 1 --s 0.5 --out " + dir.string();
  REQUIRE(run("kernel build" + common, log) == 0);
  CHECK(run("extension --fields constant,riesz" + common, log) == 0);
  CHECK(slurp(dir / "extension.csv").find("ext_spread") != std::string::npos);
  CHECK(run("regularity" + common, log) == 0);
  const std::string reg = slurp(dir / "regularity.csv");
  CHECK(reg.find("lemma33_ratio") != std::string::npos);
  CHECK(reg.find("lemma32_ratio") != std::string::npos);
}
