#include <doctest.h>

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "jmnoise/region.hpp"

#ifndef JMNOISE_CLI_PATH
#error "JMNOISE_CLI_PATH must be defined by the build"
#endif

namespace {

struct CommandResult {
  int exit_code;
  std::string stdout_text;
};

CommandResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static std::atomic<int> counter{0};
  const std::string out_path = "/tmp/jmn_cli_" + std::to_string(getpid()) + "_" +
                               std::to_string(counter.fetch_add(1)) + ".out";
  const std::string command = env_prefix + std::string(JMNOISE_CLI_PATH) + " " +
                              args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(command.c_str());
  std::ifstream in(out_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::remove(out_path.c_str());
  return {WEXITSTATUS(status), buffer.str()};
}

}  // namespace

TEST_CASE("boundary command emits the t=0 endpoint") {
  const CommandResult result = run_cli("boundary --dim 2 --samples 100 --out -");
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.rfind("t,eta,p\n", 0) == 0);
  CHECK(result.stdout_text.find("0,1,0.5\n") != std::string::npos);
}

TEST_CASE("boundary command rejects d = 1 with exit 1") {
  CHECK(run_cli("boundary --dim 1 --out -").exit_code == 1);
}

TEST_CASE("boundary command reports unwritable paths with exit 2") {
  CHECK(run_cli("boundary --dim 2 --out /nonexistent-dir/x.csv").exit_code == 2);
}

TEST_CASE("boundary json parses back") {
  const CommandResult result = run_cli("boundary --dim 3 --samples 101 --format json --out -");
  CHECK(result.exit_code == 0);
  const jmnoise::BoundaryCurve curve = jmnoise::curve_from_json(result.stdout_text);
  CHECK(curve.d == 3);
  CHECK(curve.samples.size() >= 101);
  // A row near t = 0.6 must sit near (eta, p) = (0.48, 0.6).
  bool found = false;
  for (const auto& s : curve.samples) {
    if (std::abs(s.t - 0.6) < 0.006) {
      found = true;
      CHECK(s.eta == doctest::Approx(0.48).epsilon(0.05));
      CHECK(s.p == doctest::Approx(0.6).epsilon(0.02));
    }
  }
  CHECK(found);
}

TEST_CASE("membership exit codes") {
  CHECK(run_cli("membership --dim 2 --eta 0.8 --p 0.6").exit_code == 0);
  CHECK(run_cli("membership --dim 2 --eta 0.9 --p 0.6").exit_code == 3);
  CHECK(run_cli("membership --dim 5 --eta 0 --p 1").exit_code == 0);
  CHECK(run_cli("membership --dim 2 --eta 1.5 --p 0.5").exit_code == 1);
}

TEST_CASE("compare inequality rows") {
  const CommandResult result = run_cli("compare --dim 3 --points 10 --out -");
  CHECK(result.exit_code == 0);
  std::istringstream lines(result.stdout_text);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "p,eta_max,povm_bound,ratio");
  bool saw_half = false;
  while (std::getline(lines, line)) {
    double p = 0, bound_pvm = 0, bound_povm = 0;
    std::sscanf(line.c_str(), "%lf,%lf,%lf", &p, &bound_pvm, &bound_povm);
    CHECK(bound_povm <= bound_pvm + 1e-15);
    if (std::abs(p - 0.5) < 1e-12) {
      saw_half = true;
      CHECK(bound_povm == doctest::Approx(0.125).epsilon(1e-12));
    }
  }
  CHECK(saw_half);
}

TEST_CASE("simulate outputs the documented JSON schema") {
  const CommandResult result =
      run_cli("simulate --dim 2 --t 0.75 --shots 20000 --seed 5");
  CHECK(result.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(result.stdout_text);
  CHECK(doc.at("d") == 2);
  CHECK(doc.at("t") == 0.75);
  CHECK(doc.at("shots") == 20000);
  CHECK(doc.at("counts").contains("0"));
  CHECK(doc.at("counts").contains("ø"));
  CHECK(doc.contains("chi2"));
  CHECK(doc.contains("pvalue"));
  const double no_click = doc.at("counts").at("ø").get<double>() / 20000.0;
  CHECK(std::abs(no_click - 0.5) < 0.02);
}

TEST_CASE("simulate with t = 0 never misses") {
  const CommandResult result = run_cli("simulate --dim 3 --t 0 --shots 5000 --seed 2");
  CHECK(result.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(result.stdout_text);
  CHECK(doc.at("counts").at("ø") == 0);
}

TEST_CASE("outputs are byte-identical across runs with a fixed seed") {
  const std::string args = "simulate --dim 3 --t 0.6 --shots 30000 --seed 9 --threads 2";
  const CommandResult first = run_cli(args);
  const CommandResult second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.stdout_text == second.stdout_text);

  // The JM_THREADS env fallback must not change the bytes either.
  const CommandResult env_run =
      run_cli("simulate --dim 3 --t 0.6 --shots 30000 --seed 9 --threads 0",
              "JM_THREADS=1 ");
  CHECK(env_run.stdout_text == first.stdout_text);

  const CommandResult boundary_a = run_cli("boundary --dim 5 --samples 40 --out -");
  const CommandResult boundary_b = run_cli("boundary --dim 5 --samples 40 --out -");
  CHECK(boundary_a.stdout_text == boundary_b.stdout_text);
}

TEST_CASE("verify closedform suite passes through the CLI") {
  const CommandResult result = run_cli("verify --dim 2 --suite closedform");
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.find("[PASS]") != std::string::npos);
  CHECK(result.stdout_text.find("[FAIL]") == std::string::npos);
}
