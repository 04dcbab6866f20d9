// Command line front end: reproducible analyses over the library's file
// formats, one JSON (or CSV) document per invocation.
//
// Exit codes: 0 success, 2 malformed input, 3 solver failure,
// 4 nonclassicality certified (intentional, for shell pipelines).

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sigbell/bell_correction.hpp"
#include "sigbell/discrimination.hpp"
#include "sigbell/json_io.hpp"
#include "sigbell/postselect.hpp"
#include "sigbell/qlinalg.hpp"
#include "sigbell/scenario.hpp"
#include "sigbell/slhs.hpp"
#include "sigbell/slhv.hpp"
#include "sigbell/solver/conic.hpp"
#include "sigbell/witness.hpp"

namespace {

using nlohmann::json;
using namespace sigbell;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCertified = 4;
constexpr int kPrecision = 12;
constexpr double kCertifyTol = 1e-6;

double round_digits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", kPrecision, v);
  return std::strtod(buf, nullptr);
}

json round_tree(const json& j) {
  if (j.is_number_float()) return round_digits(j.get<double>());
  if (j.is_array()) {
    json out = json::array();
    for (const auto& item : j) out.push_back(round_tree(item));
    return out;
  }
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [key, value] : j.items()) out[key] = round_tree(value);
    return out;
  }
  return j;
}

struct Output {
  std::string path;  // empty -> stdout

  void emit_json(const json& j) const {
    const std::string text = round_tree(j).dump(2) + "\n";
    if (path.empty())
      std::cout << text;
    else
      io::write_file(path, text);
  }
  void emit_raw(const std::string& text) const {
    if (path.empty())
      std::cout << text;
    else
      io::write_file(path, text);
  }
};

SignallingBudget budget_from_mode(const std::string& mode, const Behavior& behavior) {
  if (mode == "zero") return SignallingBudget::zero(behavior.scenario());
  if (mode == "data") return estimate_budgets(behavior, 0.0);
  SignallingBudget budget = io::budget_from_json(io::read_file(mode));
  if (budget.scenario != behavior.scenario())
    throw DimensionMismatch("budget file scenario does not match the behavior");
  return budget;
}

json matrix_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (Eigen::Index j2 = 0; j2 < m.cols(); ++j2) {
      rrow.push_back(m(i, j2).real());
      irow.push_back(m(i, j2).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell and steering analysis under bounded signalling"};
  app.require_subcommand(1);
  app.fallthrough();  // global options remain valid after a subcommand name

  double tol_override = -1.0;
  int max_iter_override = -1;
  app.add_option("--tol", tol_override,
                 "Override both solver tolerances (feasibility and gap)");
  app.add_option("--max-iter", max_iter_override, "Override the solver iteration cap");
  auto resolve_settings = [&] {
    solver::Settings s = solver::Settings::from_env();
    if (tol_override > 0.0) {
      s.feas_tol = tol_override;
      s.gap_tol = tol_override;
    }
    if (max_iter_override > 0) s.max_iter = max_iter_override;
    return s;
  };

  Output output;
  app.add_option("-o,--output", output.path, "Write the result here instead of stdout");

  int exit_code = kExitOk;

  // ns-check -----------------------------------------------------------
  auto* ns_check = app.add_subcommand("ns-check", "No-signalling diagnostics of a behavior");
  std::string ns_behavior_path;
  double ns_tol = 1e-6;
  ns_check->add_option("behavior", ns_behavior_path, "Behavior JSON file")->required();
  ns_check->add_option("--tol", ns_tol, "Compliance tolerance");
  ns_check->callback([&] {
    const Behavior b = io::behavior_from_json(io::read_file(ns_behavior_path));
    const NoSignallingReport r = check_no_signalling(b, ns_tol);
    output.emit_json(json{{"max_deviation", r.max_deviation},
                          {"compliant", r.compliant},
                          {"worst_entry",
                           {{"party", std::string(1, r.worst.party)},
                            {"outcome", r.worst.outcome},
                            {"setting", r.worst.setting},
                            {"pair", {r.worst.other_first, r.worst.other_second}}}}});
  });

  // budget --------------------------------------------------------------
  auto* budget_cmd = app.add_subcommand("budget", "Estimate signalling budgets from data");
  std::string budget_behavior_path;
  double budget_slack = 0.0;
  budget_cmd->add_option("behavior", budget_behavior_path, "Behavior JSON file")->required();
  budget_cmd->add_option("--slack", budget_slack, "Uniform additive slack");
  budget_cmd->callback([&] {
    const Behavior b = io::behavior_from_json(io::read_file(budget_behavior_path));
    output.emit_raw(io::budget_to_json(estimate_budgets(b, budget_slack), kPrecision) + "\n");
  });

  // visibility ----------------------------------------------------------
  auto* vis_cmd = app.add_subcommand("visibility", "Distance to the bounded-signalling polytope");
  std::string vis_behavior_path, vis_budget_mode = "data";
  vis_cmd->add_option("behavior", vis_behavior_path, "Behavior JSON file")->required();
  vis_cmd->add_option("--budget", vis_budget_mode, "data, zero, or a budget file");
  vis_cmd->callback([&] {
    const Behavior b = io::behavior_from_json(io::read_file(vis_behavior_path));
    const SignallingBudget budget = budget_from_mode(vis_budget_mode, b);
    const slhv::VisibilityResult r = slhv::visibility(b, budget, resolve_settings());
    json weights = json::array();
    for (const auto& [index, weight] : r.weights)
      weights.push_back(json{{"strategy", index}, {"weight", weight}});
    output.emit_json(json{{"v", r.v},
                          {"status", solver::to_string(r.status)},
                          {"feas_tol", r.feas_tol},
                          {"gap_tol", r.gap_tol},
                          {"support", weights.size()},
                          {"weights", weights}});
    if (r.v < 1.0 - kCertifyTol) exit_code = kExitCertified;
  });

  // inequality ----------------------------------------------------------
  auto* ineq_cmd = app.add_subcommand("inequality", "Extract a tailored Bell-type inequality");
  std::string ineq_behavior_path, ineq_budget_mode = "data";
  ineq_cmd->add_option("behavior", ineq_behavior_path, "Behavior JSON file")->required();
  ineq_cmd->add_option("--budget", ineq_budget_mode, "data, zero, or a budget file");
  ineq_cmd->callback([&] {
    const Behavior b = io::behavior_from_json(io::read_file(ineq_behavior_path));
    const SignallingBudget budget = budget_from_mode(ineq_budget_mode, b);
    const auto r = slhv::dual_visibility(b, budget, resolve_settings());
    output.emit_raw(io::inequality_to_json(r.inequality, ineq_budget_mode, kPrecision) + "\n");
    if (r.objective < 1.0 - kCertifyTol) exit_code = kExitCertified;
  });

  // chsh-bound ----------------------------------------------------------
  auto* chsh_cmd = app.add_subcommand("chsh-bound", "Signalling-corrected CHSH bound");
  std::string chsh_budget_path;
  chsh_cmd->add_option("--budget", chsh_budget_path, "Budget JSON file")->required();
  chsh_cmd->callback([&] {
    const SignallingBudget budget = io::budget_from_json(io::read_file(chsh_budget_path));
    output.emit_json(json{{"bound", corrected_chsh_bound(budget)}});
  });

  // bell-bound ----------------------------------------------------------
  auto* bell_cmd =
      app.add_subcommand("bell-bound", "Corrected full-correlation Bell bound");
  std::string bell_coeffs_path, bell_budget_path;
  double bell_lhv = 0.0;
  bell_cmd->add_option("--coeffs", bell_coeffs_path, "Coefficient JSON file")->required();
  bell_cmd->add_option("--lhv", bell_lhv, "Standard LHV bound")->required();
  bell_cmd->add_option("--budget", bell_budget_path, "Budget JSON file")->required();
  bell_cmd->callback([&] {
    const auto [dims, coeffs] = io::coefficients_from_json(io::read_file(bell_coeffs_path));
    const SignallingBudget budget = io::budget_from_json(io::read_file(bell_budget_path));
    if (dims.first != budget.scenario.mA || dims.second != budget.scenario.mB)
      throw DimensionMismatch("coefficient table does not match the budget scenario");
    const CorrectedBound r = corrected_full_correlation_bound(coeffs, bell_lhv, budget);
    output.emit_json(json{{"base", r.base},
                          {"correction", r.correction},
                          {"total", r.total},
                          {"vacuous", r.vacuous},
                          {"algebraic_max", r.algebraic_max},
                          {"y_tuple", r.y_tuple},
                          {"x_tuple", r.x_tuple}});
  });

  // ingest-counts -------------------------------------------------------
  auto* ingest_cmd = app.add_subcommand("ingest-counts", "Post-selected behavior from counts");
  std::string counts_path;
  ingest_cmd->add_option("counts", counts_path, "Counts JSON file")->required();
  ingest_cmd->callback([&] {
    const CountsTable counts = io::counts_from_json(io::read_file(counts_path));
    const IngestResult r = behavior_from_counts(counts);
    const Scenario& s = r.behavior.scenario();
    json eta_a = json::array(), eta_b = json::array();
    for (int a = 0; a < s.nA; ++a) {
      json row = json::array();
      for (int x = 0; x < s.mA; ++x) row.push_back(r.eta_a[a * s.mA + x]);
      eta_a.push_back(std::move(row));
    }
    for (int b = 0; b < s.nB; ++b) {
      json row = json::array();
      for (int y = 0; y < s.mB; ++y) row.push_back(r.eta_b[b * s.mB + y]);
      eta_b.push_back(std::move(row));
    }
    output.emit_json(json{{"behavior", json::parse(io::behavior_to_json(r.behavior))},
                          {"etaA", eta_a},
                          {"etaB", eta_b},
                          {"max_efficiency_spread", r.max_efficiency_spread}});
  });

  // guess ----------------------------------------------------------------
  auto* guess_cmd = app.add_subcommand("guess", "Setting-guessing probability of an assemblage");
  std::string guess_assemblage_path;
  guess_cmd->add_option("assemblage", guess_assemblage_path, "Assemblage JSON file")->required();
  guess_cmd->callback([&] {
    const Assemblage a = io::assemblage_from_json(io::read_file(guess_assemblage_path));
    const GuessingResult r = guessing_probability(a.reduced_states(), resolve_settings());
    output.emit_json(json{{"Pg", r.pg},
                          {"gap", r.gap},
                          {"mA", a.mA},
                          {"status", solver::to_string(r.status)}});
  });

  // steer ----------------------------------------------------------------
  auto* steer_cmd = app.add_subcommand("steer", "Hidden-state analysis with bounded signalling");
  std::string steer_assemblage_path, steer_gamma = "auto", steer_measure = "membership";
  steer_cmd->add_option("assemblage", steer_assemblage_path, "Assemblage JSON file")->required();
  steer_cmd->add_option("--gamma", steer_gamma, "auto or a value in [1/mA, 1]");
  steer_cmd
      ->add_option("--measure", steer_measure, "membership, robustness, or whitenoise")
      ->check(CLI::IsMember({"membership", "robustness", "whitenoise"}));
  steer_cmd->callback([&] {
    const Assemblage a = io::assemblage_from_json(io::read_file(steer_assemblage_path));
    const double gamma = steer_gamma == "auto" ? gamma_from_assemblage(a, resolve_settings())
                                               : std::stod(steer_gamma);
    json result{{"gamma", gamma}, {"measure", steer_measure}};
    bool certified = false;
    if (steer_measure == "membership") {
      const auto cert = slhs::slhs_membership(a, gamma, resolve_settings());
      result["feasible"] = cert.feasible;
      result["gamma_min"] = cert.gamma_min;
      result["witness_margin"] = cert.witness_margin;
      result["status"] = solver::to_string(cert.status);
      if (!cert.feasible) {
        certified = true;
        json witness = json::array();
        for (const auto& op : cert.witness) witness.push_back(matrix_json(op));
        result["witness"] = std::move(witness);
      }
    } else {
      const auto r = steer_measure == "robustness"
                         ? slhs::slhs_robustness(a, gamma, resolve_settings())
                         : slhs::slhs_white_noise_robustness(a, gamma, resolve_settings());
      result[steer_measure == "robustness" ? "SR" : "SR_whitenoise"] = r.value;
      result["status"] = solver::to_string(r.status);
      certified = r.value > kCertifyTol;
    }
    output.emit_json(result);
    if (certified) exit_code = kExitCertified;
  });

  // report ---------------------------------------------------------------
  auto* report_cmd = app.add_subcommand("report", "Guessing probability and both robustness values");
  std::string report_assemblage_path;
  report_cmd->add_option("assemblage", report_assemblage_path, "Assemblage JSON file")
      ->required();
  report_cmd->callback([&] {
    const Assemblage a = io::assemblage_from_json(io::read_file(report_assemblage_path));
    const slhs::SteeringReport r = slhs::table1_pipeline(a, resolve_settings());
    output.emit_json(json{{"Pg", r.pg},
                          {"SR", r.sr},
                          {"SR_whitenoise", r.sr_whitenoise},
                          {"gamma", r.gamma},
                          {"status", solver::to_string(r.status)}});
    if (r.sr > kCertifyTol) exit_code = kExitCertified;
  });

  // witness-adjust --------------------------------------------------------
  auto* adjust_cmd = app.add_subcommand("witness-adjust", "Signalling-adjust a steering bound");
  double adj_lhs = 0.0, adj_gamma = 0.0;
  int adj_ma = 0;
  std::string adj_mode = "tight";
  adjust_cmd->add_option("--lhs-bound", adj_lhs, "Unadjusted bound")->required();
  adjust_cmd->add_option("--mA", adj_ma, "Number of untrusted settings")->required();
  adjust_cmd->add_option("--gamma", adj_gamma, "Signalling parameter")->required();
  adjust_cmd->add_option("--mode", adj_mode, "tight or paper")
      ->check(CLI::IsMember({"tight", "paper"}));
  adjust_cmd->callback([&] {
    const AdjustMode mode = adj_mode == "paper" ? AdjustMode::Paper : AdjustMode::Tight;
    output.emit_json(json{{"adjusted_bound", adjusted_bound(adj_lhs, adj_ma, adj_gamma, mode)},
                          {"mode", adj_mode}});
  });

  // schmidt-bound ----------------------------------------------------------
  auto* schmidt_cmd = app.add_subcommand("schmidt-bound", "Schmidt-number witness bound");
  int sb_d = 0, sb_n = 0;
  schmidt_cmd->add_option("-d", sb_d, "Local dimension")->required();
  schmidt_cmd->add_option("-n", sb_n, "Schmidt number")->required();
  schmidt_cmd->callback([&] {
    output.emit_json(json{{"d", sb_d}, {"n", sb_n}, {"bound", schmidt_bound(sb_d, sb_n)}});
  });

  // witness-eval -------------------------------------------------------------
  auto* weval_cmd = app.add_subcommand("witness-eval", "Evaluate a steering witness");
  std::string weval_assemblage_path, weval_witness_path, weval_mode = "tight";
  weval_cmd->add_option("assemblage", weval_assemblage_path, "Assemblage JSON file")->required();
  weval_cmd->add_option("witness", weval_witness_path, "Witness JSON file")->required();
  weval_cmd->add_option("--mode", weval_mode, "tight or paper")
      ->check(CLI::IsMember({"tight", "paper"}));
  weval_cmd->callback([&] {
    const Assemblage a = io::assemblage_from_json(io::read_file(weval_assemblage_path));
    const SteeringWitness w = io::witness_from_json(io::read_file(weval_witness_path));
    json result{{"value", evaluate_witness(a, w)}, {"L_LHS", w.lhs_bound}};
    if (!w.schmidt_bounds.empty()) {
      const AdjustMode mode = weval_mode == "paper" ? AdjustMode::Paper : AdjustMode::Tight;
      const CertificationReport r = certification_report(a, w, mode, resolve_settings());
      result["gamma"] = r.gamma;
      result["mode"] = weval_mode;
      result["certified_sn"] = r.certified_sn ? json(*r.certified_sn) : json(nullptr);
      result["adjusted_certified_sn"] =
          r.adjusted_certified_sn ? json(*r.adjusted_certified_sn) : json(nullptr);
      if (r.certified_sn.value_or(1) > 1) exit_code = kExitCertified;
    } else if (result["value"].get<double>() > w.lhs_bound + kCertifyTol) {
      exit_code = kExitCertified;
    }
    output.emit_json(result);
  });

  // postselect -----------------------------------------------------------
  auto* post_cmd = app.add_subcommand("postselect", "Inefficient-detector simulations");
  post_cmd->require_subcommand(1);

  auto* sim_cmd = post_cmd->add_subcommand("sim", "Post-selected behavior at one grid point");
  double sim_eta0 = 1.0, sim_eta1 = 1.0;
  std::string sim_strategy = "quantum";
  sim_cmd->add_option("--eta0", sim_eta0, "Efficiency of outcome 0")->required();
  sim_cmd->add_option("--eta1", sim_eta1, "Efficiency of outcome 1")->required();
  sim_cmd->add_option("--strategy", sim_strategy, "quantum or local")
      ->check(CLI::IsMember({"quantum", "local"}));
  sim_cmd->callback([&] {
    const auto variant = sim_strategy == "quantum" ? postselect::Variant::Quantum
                                                   : postselect::Variant::Local;
    const Behavior ideal = standard_behavior(variant == postselect::Variant::Quantum
                                                 ? StandardBehavior::IdealQuantumChsh
                                                 : StandardBehavior::LocalCorr);
    const auto r = postselect::postselect_table(
        ideal, postselect::DetectorModel::outcome_only(sim_eta0, sim_eta1));
    json norm = json::array();
    for (int x = 0; x < 2; ++x)
      norm.push_back(json::array({r.normalization[x * 2], r.normalization[x * 2 + 1]}));
    output.emit_json(json{{"eta0", sim_eta0},
                          {"eta1", sim_eta1},
                          {"strategy", sim_strategy},
                          {"behavior", json::parse(io::behavior_to_json(r.behavior))},
                          {"budget", json::parse(io::budget_to_json(r.budgets))},
                          {"normalization", norm},
                          {"chsh", bell_value(r.behavior, chsh_coefficients())},
                          {"alpha", postselect::alpha_postselected(sim_eta0, sim_eta1, variant)}});
  });

  auto* scan_cmd = post_cmd->add_subcommand("scan", "Visibility heat-map table over a grid");
  postselect::GridSpec grid;
  std::string scan_strategy = "quantum", scan_budget = "data";
  int scan_jobs = 1;
  scan_cmd->add_option("--grid", grid.points, "Points per axis");
  scan_cmd->add_option("--min", grid.min, "Smallest efficiency");
  scan_cmd->add_option("--max", grid.max, "Largest efficiency");
  scan_cmd->add_option("--strategy", scan_strategy, "quantum or local")
      ->check(CLI::IsMember({"quantum", "local"}));
  scan_cmd->add_option("--budget", scan_budget, "data or zero")
      ->check(CLI::IsMember({"data", "zero"}));
  scan_cmd->add_option("--jobs", scan_jobs, "Grid points evaluated concurrently");
  scan_cmd->callback([&] {
    const auto rows = postselect::scan_grid(
        scan_strategy == "quantum" ? postselect::Variant::Quantum : postselect::Variant::Local,
        grid,
        scan_budget == "data" ? postselect::BudgetMode::Data : postselect::BudgetMode::Zero,
        scan_jobs, resolve_settings());
    output.emit_raw(postselect::scan_csv(rows));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return exit_code;
}
