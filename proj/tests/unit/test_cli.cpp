#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
// Drives the installed command line binary end to end over the committed
// data files and pins its documented outputs and exit codes.

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(SIGBELL_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.out.append(buffer.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string data(const std::string& name) { return std::string(SIGBELL_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("schmidt-bound golden output") {
  const RunResult r = run_cli("schmidt-bound -d 3 -n 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "{\n  \"bound\": 2.0,\n  \"d\": 3,\n  \"n\": 3\n}\n");
}

TEST_CASE("witness-adjust") {
  const RunResult r = run_cli("witness-adjust --lhs-bound 1.0 --mA 3 --gamma 0.3333333333333333 --mode paper");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["adjusted_bound"].get<double>() == doctest::Approx(2.0));

  const RunResult tight = run_cli("witness-adjust --lhs-bound 1.5 --mA 2 --gamma 0.5");
  CHECK(json::parse(tight.out)["adjusted_bound"].get<double>() == doctest::Approx(1.5));

  CHECK(run_cli("witness-adjust --lhs-bound 1 --mA 2 --gamma 0.1").exit_code == 2);
}

TEST_CASE("ns-check reports the post-selection signalling") {
  const RunResult r = run_cli("ns-check " + data("behavior_postselected_1_05.json"));
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK_FALSE(j["compliant"].get<bool>());
  CHECK(j["max_deviation"].get<double>() == doctest::Approx(0.21081444).epsilon(1e-6));
  CHECK(j["worst_entry"]["setting"].get<int>() == 1);
}

TEST_CASE("visibility exit codes separate local from nonlocal") {
  const RunResult uniform = run_cli("visibility " + data("behavior_uniform.json") +
                                    " --budget zero");
  CHECK(uniform.exit_code == 0);
  CHECK(json::parse(uniform.out)["v"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));

  const RunResult nonlocal = run_cli("visibility " + data("behavior_ideal_chsh.json") +
                                     " --budget zero");
  CHECK(nonlocal.exit_code == 4);
  CHECK(json::parse(nonlocal.out)["v"].get<double>() ==
        doctest::Approx(0.7071067811).epsilon(1e-8));

  const RunResult explained = run_cli("visibility " + data("behavior_postselected_1_05.json") +
                                      " --budget data");
  CHECK(explained.exit_code == 4);  // v ~ 0.97: still nonlocal under its own budget
  CHECK(json::parse(explained.out)["v"].get<double>() ==
        doctest::Approx(0.9728320411).epsilon(1e-6));
}

TEST_CASE("budget then chsh-bound pipeline") {
  namespace fs = std::filesystem;
  const fs::path tmp = fs::temp_directory_path() / "sigbell_cli_budget.json";
  const RunResult budget = run_cli("budget " + data("behavior_postselected_1_05.json") +
                                   " -o " + tmp.string());
  CHECK(budget.exit_code == 0);
  const RunResult bound = run_cli("chsh-bound --budget " + tmp.string());
  CHECK(bound.exit_code == 0);
  // 2 + 4 * alpha(1, 0.5): only the second-setting marginals move.
  CHECK(json::parse(bound.out)["bound"].get<double>() ==
        doctest::Approx(2.0 + 4.0 * 0.21081444).epsilon(1e-6));
  fs::remove(tmp);
}

TEST_CASE("bell-bound on the uniform budget") {
  const RunResult r = run_cli("bell-bound --coeffs " + data("coefficients_chsh.json") +
                              " --lhv 2 --budget " + data("budget_uniform005.json"));
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["total"].get<double>() == doctest::Approx(2.4));
  CHECK_FALSE(j["vacuous"].get<bool>());
}

TEST_CASE("inequality extraction certifies the ideal point") {
  const RunResult r = run_cli("inequality " + data("behavior_ideal_chsh.json") +
                              " --budget zero");
  CHECK(r.exit_code == 4);
  const json j = json::parse(r.out);
  CHECK(j.contains("c"));
  CHECK(j.contains("bound"));
  CHECK(j["budget_ref"] == "zero");
}

TEST_CASE("ingest-counts") {
  const RunResult r = run_cli("ingest-counts " + data("counts_detector.json"));
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["behavior"]["mA"].get<int>() == 2);
  const double p00 = j["behavior"]["p"][0][0][0][0].get<double>();
  CHECK(p00 == doctest::Approx(0.4).epsilon(1e-9));  // 400 of 1000 coincidences
  CHECK(j["etaA"].size() == 2);
  CHECK(j["etaA"][0][0].get<double>() > 0.5);
}

TEST_CASE("steering pipeline commands") {
  const RunResult guess = run_cli("guess " + data("assemblage_qutrit_k03.json"));
  CHECK(guess.exit_code == 0);
  CHECK(json::parse(guess.out)["Pg"].get<double>() == doctest::Approx(0.65).epsilon(1e-6));

  const RunResult member = run_cli("steer " + data("assemblage_qutrit_k03.json") +
                                   " --measure membership --gamma 1.0");
  CHECK(member.exit_code == 0);
  CHECK(json::parse(member.out)["feasible"].get<bool>());

  const RunResult wn = run_cli("steer " + data("assemblage_qutrit_k03.json") +
                               " --measure whitenoise");
  CHECK(wn.exit_code == 4);
  CHECK(json::parse(wn.out)["SR_whitenoise"].get<double>() ==
        doctest::Approx(0.2542).epsilon(1e-3));

  const RunResult eval = run_cli("witness-eval " + data("assemblage_qutrit_k03.json") + " " +
                                 data("witness_mub3.json"));
  CHECK(eval.exit_code == 4);
  const json j = json::parse(eval.out);
  CHECK(j["certified_sn"].get<int>() == 3);
  CHECK(j["adjusted_certified_sn"].is_null());
  CHECK(j["value"].get<double>() == doctest::Approx(1.9694335).epsilon(1e-6));
}

TEST_CASE("postselect sim and scan") {
  const RunResult sim = run_cli("postselect sim --eta0 0.8 --eta1 0.8 --strategy quantum");
  CHECK(sim.exit_code == 0);
  const json j = json::parse(sim.out);
  CHECK(j["chsh"].get<double>() == doctest::Approx(2.8284271247).epsilon(1e-9));
  CHECK(j["alpha"].get<double>() == doctest::Approx(0.0));
  CHECK(j["normalization"][0][0].get<double>() == doctest::Approx(0.64));

  const RunResult scan =
      run_cli("postselect scan --grid 3 --min 0.6 --max 1.0 --strategy local --budget data");
  CHECK(scan.exit_code == 0);
  CHECK(scan.out.rfind("eta0,eta1,chsh,visibility,max_signalling,status\n", 0) == 0);
  CHECK(std::count(scan.out.begin(), scan.out.end(), '\n') == 10);
  CHECK(scan.out.find(",1,") != std::string::npos);  // visibility column stays at one

  const RunResult identical =
      run_cli("postselect scan --grid 3 --min 0.6 --max 1.0 --strategy local --budget data");
  CHECK(identical.out == scan.out);  // deterministic output
}

TEST_CASE("malformed inputs exit with code 2") {
  CHECK(run_cli("ns-check /nonexistent.json").exit_code == 2);
  CHECK(run_cli("schmidt-bound -d 3 -n 9").exit_code == 2);
  CHECK(run_cli("nonsense-subcommand").exit_code == 2);
}
