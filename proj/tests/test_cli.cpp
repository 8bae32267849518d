#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "mmdim/config.hpp"
#include "mmdim/error.hpp"
#include "mmdim/experiments.hpp"
#include "mmdim/parallel.hpp"

using namespace mmdim;

namespace {

ExperimentOutput run(const std::string& text) { return run_experiment(Config::parse(text, "test.cfg")); }

std::string error_of(const std::string& text) {
  try {
    (void)Config::parse(text, "test.cfg");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = Config::parse("# comment\nexperiment = mdim\n[ladder]\neps = 0.5, 0.25 # trailing\nn = 1,2\n", "a.cfg");
  CHECK(cfg.get_string("experiment", "") == "mdim");
  CHECK(cfg.get_doubles("ladder.eps", {}) == std::vector<double>{0.5, 0.25});
  CHECK(cfg.get_sizes("ladder.n", {}) == std::vector<std::size_t>{1, 2});
  CHECK(cfg.get_size("preset.grid", 7) == 7);
  CHECK(cfg.resolved().at("preset.grid") == "7");

  CHECK(error_of("experiment mdim\n").find("test.cfg:1:") != std::string::npos);
  CHECK(error_of("a = 1\na = 2\n").find("test.cfg:2:") != std::string::npos);

  const auto bad = Config::parse("experiment = mdim\n\npreset.grid = lots\n", "b.cfg");
  try {
    (void)bad.get_size("preset.grid", 1);
    FAIL("expected a config error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("preset.grid") != std::string::npos);
    CHECK(msg.find("b.cfg:3:") != std::string::npos);
  }
}

TEST_CASE("experiment exit codes") {
  SUBCASE("verify on the identity preset") {
    const auto out = run("experiment = verify\npreset = identity\npreset.grid = 32\n");
    CHECK(out.exit_code == kExitOk);
    CHECK(nlohmann::json::parse(out.json)["diagnostics"]["status"] == "pass");
  }
  SUBCASE("increasing eps ladder") {
    const auto out = run("experiment = mdim\npreset = identity\nladder.eps = 0.1, 0.2, 0.05\n");
    CHECK(out.exit_code == kExitConfig);
    CHECK(out.message.find("ladder.eps") != std::string::npos);
  }
  SUBCASE("unknown key") {
    const auto out = run("experiment = mdim\npreset = identity\nladder.epsilon = 0.1\n");
    CHECK(out.exit_code == kExitConfig);
    CHECK(out.message.find("ladder.epsilon") != std::string::npos);
  }
  SUBCASE("unknown experiment and preset") {
    CHECK(run("experiment = plot\n").exit_code == kExitConfig);
    CHECK(run("experiment = mdim\npreset = torus\n").exit_code == kExitConfig);
  }
  SUBCASE("budget overrun is incomplete") {
    const auto out = run(
        "experiment = mdim\npreset = circle-expanding\npreset.grid = 64\nladder.n = 1, 2, 3, 4, 5, 6\n"
        "budget.exact_words = 2\nbudget.mc_samples = 8\nbudget.max_evaluations = 3\n");
    CHECK(out.exit_code == kExitIncomplete);
  }
}

TEST_CASE("mdim on the interval shift") {
  const auto out = run(
      "experiment = mdim\npreset = interval-shift\npreset.depth = 6\nladder.eps = 0.25, 0.125, 0.0625\n"
      "ladder.n = 1, 2\n");
  REQUIRE(out.exit_code == kExitOk);
  const auto j = nlohmann::json::parse(out.json);
  CHECK(j["experiment"] == "mdim");
  CHECK(j["preset"] == "interval-shift");
  CHECK(std::fabs(j["results"]["slope"].get<double>() - 1.0) <= 0.1);
  CHECK(j.contains("ladders"));
  CHECK(j.contains("seed"));
  CHECK(out.csv.rfind("epsilon,n,kind,count_mean,count_stderr,entropy,exponent", 0) == 0);
}

TEST_CASE("outputs do not depend on the thread count") {
  const std::string text = "experiment = localent\npreset = circle-expanding\npreset.grid = 64\nlocal.points = 0, 5\n";
  set_thread_count(1);
  const auto one = run(text);
  set_thread_count(3);
  const auto three = run(text);
  set_thread_count(1);
  CHECK(one.exit_code == three.exit_code);
  CHECK(one.json == three.json);
  CHECK(one.csv == three.csv);
}
