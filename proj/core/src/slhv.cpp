#include "sigbell/slhv.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

namespace sigbell::slhv {

namespace {

struct BudgetRow {
  bool alice = true;
  int outcome = 0;
  int setting = 0;  // x for alpha rows, y for beta rows
  int first = 0;    // y < y' (alpha) or x < x' (beta)
  int second = 0;
  double rhs = 0.0;
};

std::vector<BudgetRow> budget_rows(const SignallingBudget& budget) {
  const Scenario& s = budget.scenario;
  std::vector<BudgetRow> rows;
  for (int a = 0; a < s.nA; ++a)
    for (int x = 0; x < s.mA; ++x)
      for (int y = 0; y < s.mB; ++y)
        for (int yp = y + 1; yp < s.mB; ++yp)
          rows.push_back({true, a, x, y, yp, budget.alpha_at(a, x, y, yp)});
  for (int b = 0; b < s.nB; ++b)
    for (int y = 0; y < s.mB; ++y)
      for (int x = 0; x < s.mA; ++x)
        for (int xp = x + 1; xp < s.mA; ++xp)
          rows.push_back({false, b, y, x, xp, budget.beta_at(b, y, x, xp)});
  return rows;
}

int strategy_cost(const DeterministicStrategy& strat, const BudgetRow& row, const Scenario& s) {
  if (row.alice) {
    const int first = strat.a_of(row.setting, row.first, s.mB) == row.outcome ? 1 : 0;
    const int second = strat.a_of(row.setting, row.second, s.mB) == row.outcome ? 1 : 0;
    return std::abs(first - second);
  }
  const int first = strat.b_of(row.first, row.setting, s.mB) == row.outcome ? 1 : 0;
  const int second = strat.b_of(row.second, row.setting, s.mB) == row.outcome ? 1 : 0;
  return std::abs(first - second);
}

}  // namespace

StrategySet enumerate_strategies(const Scenario& scenario, std::uint64_t cap) {
  const auto size = scenario.strategy_space_size();
  if (!size || *size > cap)
    throw TooLarge("strategy space has " +
                   (size ? std::to_string(*size) : std::string("more than 2^64")) +
                   " elements, cap is " + std::to_string(cap));
  const int pairs = scenario.cells();
  const std::uint64_t count_a = [&] {
    std::uint64_t c = 1;
    for (int i = 0; i < pairs; ++i) c *= scenario.nA;
    return c;
  }();
  const std::uint64_t count_b = *size / count_a;

  StrategySet set;
  set.scenario = scenario;
  set.strategies.reserve(*size);

  const std::size_t alpha_len =
      static_cast<std::size_t>(scenario.nA) * scenario.mA * scenario.mB * scenario.mB;
  const std::size_t beta_len =
      static_cast<std::size_t>(scenario.nB) * scenario.mB * scenario.mA * scenario.mA;
  const SignallingBudget layout = SignallingBudget::zero(scenario);

  std::unordered_set<std::string> seen;
  seen.reserve(*size);

  for (std::uint64_t ib = 0; ib < count_b; ++ib) {
    std::vector<std::uint8_t> d_b(pairs);
    std::uint64_t rb = ib;
    for (int k = 0; k < pairs; ++k) {
      d_b[k] = static_cast<std::uint8_t>(rb % scenario.nB);
      rb /= scenario.nB;
    }
    for (std::uint64_t ia = 0; ia < count_a; ++ia) {
      DeterministicStrategy strat;
      strat.d_b = d_b;
      strat.d_a.resize(pairs);
      std::uint64_t ra = ia;
      for (int k = 0; k < pairs; ++k) {
        strat.d_a[k] = static_cast<std::uint8_t>(ra % scenario.nA);
        ra /= scenario.nA;
      }

      strat.alpha_cost.assign(alpha_len, 0);
      for (int a = 0; a < scenario.nA; ++a)
        for (int x = 0; x < scenario.mA; ++x)
          for (int y = 0; y < scenario.mB; ++y)
            for (int yp = 0; yp < scenario.mB; ++yp) {
              const int c1 = strat.a_of(x, y, scenario.mB) == a ? 1 : 0;
              const int c2 = strat.a_of(x, yp, scenario.mB) == a ? 1 : 0;
              strat.alpha_cost[layout.alpha_index(a, x, y, yp)] =
                  static_cast<std::uint8_t>(std::abs(c1 - c2));
            }
      strat.beta_cost.assign(beta_len, 0);
      for (int b = 0; b < scenario.nB; ++b)
        for (int y = 0; y < scenario.mB; ++y)
          for (int x = 0; x < scenario.mA; ++x)
            for (int xp = 0; xp < scenario.mA; ++xp) {
              const int c1 = strat.b_of(x, y, scenario.mB) == b ? 1 : 0;
              const int c2 = strat.b_of(xp, y, scenario.mB) == b ? 1 : 0;
              strat.beta_cost[layout.beta_index(b, y, x, xp)] =
                  static_cast<std::uint8_t>(std::abs(c1 - c2));
            }

      // Distinct responses always induce distinct behavior columns, so this
      // only drops genuinely repeated columns.
      std::string key(strat.d_a.begin(), strat.d_a.end());
      key.append(strat.d_b.begin(), strat.d_b.end());
      if (seen.insert(std::move(key)).second) set.strategies.push_back(std::move(strat));
    }
  }
  return set;
}

namespace {

// Shared LP skeleton for the visibility programs. Rows are laid out as:
//   eq: one row per (x,y,a,b) except (a,b) = (nA-1, nB-1), then sum(q) = 1
//   le: the budget rows, then v <= 1.
struct VisibilityLp {
  solver::ConicProblem problem;
  std::vector<solver::Var> q;
  solver::Var v;
  std::vector<BudgetRow> rows;
  int kept_rows = 0;
};

VisibilityLp build_visibility_lp(const StrategySet& set, const Behavior& behavior,
                                 const SignallingBudget& budget) {
  const Scenario& s = set.scenario;
  if (behavior.scenario() != s) throw DimensionMismatch("behavior does not match the scenario");
  if (budget.scenario != s) throw DimensionMismatch("budget does not match the scenario");
  budget.validate();

  VisibilityLp lp;
  lp.rows = budget_rows(budget);
  const std::size_t n = set.strategies.size();
  lp.q = lp.problem.add_nonneg(static_cast<int>(n));
  lp.v = lp.problem.add_nonneg();

  const double uniform = 1.0 / (static_cast<double>(s.nA) * s.nB);

  // Reproduction rows; the last outcome pair of each cell is implied by the
  // cell normalizations and sum(q) = 1.
  for (int x = 0; x < s.mA; ++x)
    for (int y = 0; y < s.mB; ++y)
      for (int a = 0; a < s.nA; ++a)
        for (int b = 0; b < s.nB; ++b) {
          if (a == s.nA - 1 && b == s.nB - 1) continue;
          solver::ScalarExpr expr;
          for (std::size_t l = 0; l < n; ++l) {
            const auto& strat = set.strategies[l];
            if (strat.a_of(x, y, s.mB) == a && strat.b_of(x, y, s.mB) == b)
              expr.add(lp.q[l], 1.0);
          }
          expr.add(lp.v, -(behavior(x, y, a, b) - uniform));
          lp.problem.add_eq(expr, uniform);
          ++lp.kept_rows;
        }
  {
    solver::ScalarExpr norm;
    for (std::size_t l = 0; l < n; ++l) norm.add(lp.q[l], 1.0);
    lp.problem.add_eq(norm, 1.0);
  }
  for (const auto& row : lp.rows) {
    solver::ScalarExpr expr;
    const Scenario& sc = s;
    for (std::size_t l = 0; l < n; ++l) {
      const int cost = strategy_cost(set.strategies[l], row, sc);
      if (cost != 0) expr.add(lp.q[l], static_cast<double>(cost));
    }
    lp.problem.add_le(expr, row.rhs);
  }
  {
    solver::ScalarExpr cap;
    cap.add(lp.v, 1.0);
    lp.problem.add_le(cap, 1.0);
  }
  lp.problem.set_objective(solver::Sense::Maximize, solver::ScalarExpr(lp.v));
  return lp;
}

}  // namespace

VisibilityResult visibility(const StrategySet& set, const Behavior& behavior,
                            const SignallingBudget& budget, const solver::Settings& settings) {
  VisibilityLp lp = build_visibility_lp(set, behavior, budget);
  const solver::Report report = lp.problem.solve(settings);

  VisibilityResult result;
  result.status = report.status;
  result.feas_tol = report.feas_tol;
  result.gap_tol = report.gap_tol;
  result.max_residual = report.max_residual;
  if (report.status != solver::Status::Optimal)
    throw SolverFailure("visibility LP: " + solver::to_string(report.status) +
                        " (residual " + std::to_string(report.max_residual) + ")");
  result.v = std::clamp(report.scalars[lp.v.id], 0.0, 1.0);
  for (std::size_t l = 0; l < lp.q.size(); ++l) {
    const double w = report.scalars[lp.q[l].id];
    if (w > 1e-12) result.weights.emplace_back(l, w);
  }
  return result;
}

VisibilityResult visibility(const Behavior& behavior, const SignallingBudget& budget,
                            const solver::Settings& settings) {
  return visibility(enumerate_strategies(behavior.scenario()), behavior, budget, settings);
}

double SignallingBellInequality::evaluate(const Behavior& behavior) const {
  if (behavior.scenario() != scenario) throw DimensionMismatch("behavior/inequality scenario");
  double total = 0.0;
  for (int a = 0; a < scenario.nA; ++a)
    for (int b = 0; b < scenario.nB; ++b)
      for (int x = 0; x < scenario.mA; ++x)
        for (int y = 0; y < scenario.mB; ++y)
          total += c[c_index(a, b, x, y)] * behavior(x, y, a, b);
  return total;
}

double SignallingBellInequality::bound_for(const SignallingBudget& budget) const {
  if (budget.scenario != scenario) throw DimensionMismatch("budget/inequality scenario");
  double total = mu;
  for (std::size_t i = 0; i < d.size(); ++i) total -= d[i] * budget.alpha[i];
  for (std::size_t i = 0; i < e.size(); ++i) total -= e[i] * budget.beta[i];
  return total;
}

DualVisibilityResult dual_visibility(const StrategySet& set, const Behavior& behavior,
                                     const SignallingBudget& budget,
                                     const solver::Settings& settings) {
  VisibilityLp lp = build_visibility_lp(set, behavior, budget);
  const solver::Report report = lp.problem.solve(settings);
  if (report.status != solver::Status::Optimal)
    throw SolverFailure("visibility LP dual: " + solver::to_string(report.status));

  const Scenario& s = set.scenario;
  DualVisibilityResult result;
  result.status = report.status;

  SignallingBellInequality& ineq = result.inequality;
  ineq.scenario = s;
  ineq.c.assign(static_cast<std::size_t>(s.nA) * s.nB * s.mA * s.mB, 0.0);
  ineq.d.assign(budget.alpha.size(), 0.0);
  ineq.e.assign(budget.beta.size(), 0.0);

  // Reproduction-row multipliers become the inequality coefficients; the
  // dropped outcome pair of each cell keeps coefficient zero.
  int row = 0;
  for (int x = 0; x < s.mA; ++x)
    for (int y = 0; y < s.mB; ++y)
      for (int a = 0; a < s.nA; ++a)
        for (int b = 0; b < s.nB; ++b) {
          if (a == s.nA - 1 && b == s.nB - 1) continue;
          ineq.c[ineq.c_index(a, b, x, y)] = report.eq_duals[row];
          ++row;
        }
  ineq.mu = -report.eq_duals[row];  // multiplier of sum(q) = 1

  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const BudgetRow& br = lp.rows[r];
    const double dual = std::max(report.le_duals[r], 0.0);
    if (br.alice)
      ineq.d[budget.alpha_index(br.outcome, br.setting, br.first, br.second)] = dual;
    else
      ineq.e[budget.beta_index(br.outcome, br.setting, br.first, br.second)] = dual;
  }
  ineq.bound = ineq.bound_for(budget);

  // Strong duality: the dual objective equals the primal visibility.
  double objective = 0.0;
  const double uniform = 1.0 / (static_cast<double>(s.nA) * s.nB);
  for (int i = 0; i < lp.kept_rows; ++i) objective += report.eq_duals[i] * uniform;
  objective += report.eq_duals[lp.kept_rows];  // normalization row, rhs 1
  for (std::size_t r = 0; r < lp.rows.size(); ++r)
    objective += report.le_duals[r] * lp.rows[r].rhs;
  objective += report.le_duals[lp.rows.size()];  // v <= 1 row
  result.objective = objective;
  return result;
}

DualVisibilityResult dual_visibility(const Behavior& behavior, const SignallingBudget& budget,
                                     const solver::Settings& settings) {
  return dual_visibility(enumerate_strategies(behavior.scenario()), behavior, budget, settings);
}

Behavior sample_slhv(const StrategySet& set, const SignallingBudget& budget, std::uint64_t seed,
                     const solver::Settings& settings) {
  const Scenario& s = set.scenario;
  if (budget.scenario != s) throw DimensionMismatch("budget does not match the scenario");
  budget.validate();

  solver::ConicProblem problem;
  const std::size_t n = set.strategies.size();
  std::vector<solver::Var> q = problem.add_nonneg(static_cast<int>(n));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  solver::ScalarExpr objective;
  for (std::size_t l = 0; l < n; ++l) objective.add(q[l], unit(rng));

  solver::ScalarExpr norm;
  for (std::size_t l = 0; l < n; ++l) norm.add(q[l], 1.0);
  problem.add_eq(norm, 1.0);
  for (const auto& row : budget_rows(budget)) {
    solver::ScalarExpr expr;
    for (std::size_t l = 0; l < n; ++l) {
      const int cost = strategy_cost(set.strategies[l], row, s);
      if (cost != 0) expr.add(q[l], static_cast<double>(cost));
    }
    problem.add_le(expr, row.rhs);
  }
  problem.set_objective(solver::Sense::Maximize, objective);

  const solver::Report report = problem.solve(settings);
  if (report.status != solver::Status::Optimal)
    throw SolverFailure("strategy sampling LP: " + solver::to_string(report.status));

  std::vector<double> p(static_cast<std::size_t>(s.cells()) * s.outcome_pairs(), 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    const double w = report.scalars[q[l].id];
    if (w <= 0.0) continue;
    const auto& strat = set.strategies[l];
    for (int x = 0; x < s.mA; ++x)
      for (int y = 0; y < s.mB; ++y) {
        const int a = strat.a_of(x, y, s.mB);
        const int b = strat.b_of(x, y, s.mB);
        p[((static_cast<std::size_t>(x) * s.mB + y) * s.nA + a) * s.nB + b] += w;
      }
  }
  return Behavior(s, std::move(p));
}

Behavior sample_slhv(const Scenario& scenario, const SignallingBudget& budget,
                     std::uint64_t seed, const solver::Settings& settings) {
  return sample_slhv(enumerate_strategies(scenario), budget, seed, settings);
}

}  // namespace sigbell::slhv
