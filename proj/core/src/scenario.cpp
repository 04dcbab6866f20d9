#include "sigbell/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sigbell {

namespace {

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base)
      return std::nullopt;
    result *= base;
  }
  return result;
}

}  // namespace

Scenario::Scenario(int m_a, int m_b, int n_a, int n_b) : mA(m_a), mB(m_b), nA(n_a), nB(n_b) {
  if (mA < 1 || mB < 1 || nA < 1 || nB < 1)
    throw InvalidScenario("scenario requires at least one setting and one outcome per party");
  if (!strategy_space_size())
    throw InvalidScenario("scenario strategy space exceeds 64-bit range");
}

std::optional<std::uint64_t> Scenario::strategy_space_size() const {
  const std::uint64_t pairs = static_cast<std::uint64_t>(mA) * static_cast<std::uint64_t>(mB);
  auto a = checked_pow(static_cast<std::uint64_t>(nA), pairs);
  auto b = checked_pow(static_cast<std::uint64_t>(nB), pairs);
  if (!a || !b) return std::nullopt;
  if (*a != 0 && *b > std::numeric_limits<std::uint64_t>::max() / *a) return std::nullopt;
  return *a * *b;
}

Behavior::Behavior(Scenario scenario, std::vector<double> p)
    : scenario_(scenario), p_(std::move(p)) {
  const std::size_t expected = static_cast<std::size_t>(scenario_.cells()) *
                               static_cast<std::size_t>(scenario_.outcome_pairs());
  if (p_.size() != expected)
    throw InvalidBehavior("behavior table has " + std::to_string(p_.size()) +
                          " entries, expected " + std::to_string(expected));
  for (int x = 0; x < scenario_.mA; ++x) {
    for (int y = 0; y < scenario_.mB; ++y) {
      double sum = 0.0;
      for (int a = 0; a < scenario_.nA; ++a) {
        for (int b = 0; b < scenario_.nB; ++b) {
          double& v = p_[index(x, y, a, b)];
          if (v < -kNegativeClamp)
            throw InvalidBehavior("negative probability " + std::to_string(v) + " in cell (" +
                                  std::to_string(x) + "," + std::to_string(y) + ")");
          if (v < 0.0) v = 0.0;
          if (v > 1.0 + kNormalizationTol)
            throw InvalidBehavior("probability above one in cell (" + std::to_string(x) + "," +
                                  std::to_string(y) + ")");
          sum += v;
        }
      }
      if (std::abs(sum - 1.0) > kNormalizationTol)
        throw InvalidBehavior("cell (" + std::to_string(x) + "," + std::to_string(y) +
                              ") sums to " + std::to_string(sum));
      for (int a = 0; a < scenario_.nA; ++a)
        for (int b = 0; b < scenario_.nB; ++b) p_[index(x, y, a, b)] /= sum;
    }
  }
}

double Behavior::marginal_a(int a, int x, int y) const {
  double s = 0.0;
  for (int b = 0; b < scenario_.nB; ++b) s += (*this)(x, y, a, b);
  return s;
}

double Behavior::marginal_b(int b, int x, int y) const {
  double s = 0.0;
  for (int a = 0; a < scenario_.nA; ++a) s += (*this)(x, y, a, b);
  return s;
}

double SignallingBudget::max_entry() const {
  double m = 0.0;
  for (double v : alpha) m = std::max(m, v);
  for (double v : beta) m = std::max(m, v);
  return m;
}

bool SignallingBudget::entrywise_leq(const SignallingBudget& other, double tol) const {
  if (scenario != other.scenario) throw DimensionMismatch("budget scenarios differ");
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] > other.alpha[i] + tol) return false;
  for (std::size_t i = 0; i < beta.size(); ++i)
    if (beta[i] > other.beta[i] + tol) return false;
  return true;
}

SignallingBudget SignallingBudget::zero(const Scenario& s) {
  SignallingBudget budget;
  budget.scenario = s;
  budget.alpha.assign(static_cast<std::size_t>(s.nA) * s.mA * s.mB * s.mB, 0.0);
  budget.beta.assign(static_cast<std::size_t>(s.nB) * s.mB * s.mA * s.mA, 0.0);
  return budget;
}

SignallingBudget SignallingBudget::uniform(const Scenario& s, double value) {
  SignallingBudget budget = zero(s);
  for (int a = 0; a < s.nA; ++a)
    for (int x = 0; x < s.mA; ++x)
      for (int y = 0; y < s.mB; ++y)
        for (int yp = 0; yp < s.mB; ++yp)
          if (y != yp) budget.alpha[budget.alpha_index(a, x, y, yp)] = value;
  for (int b = 0; b < s.nB; ++b)
    for (int y = 0; y < s.mB; ++y)
      for (int x = 0; x < s.mA; ++x)
        for (int xp = 0; xp < s.mA; ++xp)
          if (x != xp) budget.beta[budget.beta_index(b, y, x, xp)] = value;
  return budget;
}

void SignallingBudget::validate() const {
  const Scenario& s = scenario;
  const std::size_t na = static_cast<std::size_t>(s.nA) * s.mA * s.mB * s.mB;
  const std::size_t nb = static_cast<std::size_t>(s.nB) * s.mB * s.mA * s.mA;
  if (alpha.size() != na || beta.size() != nb)
    throw InvalidBudget("budget table size does not match the scenario");
  for (double v : alpha)
    if (v < 0.0 || v > 1.0) throw InvalidBudget("alpha entry outside [0,1]");
  for (double v : beta)
    if (v < 0.0 || v > 1.0) throw InvalidBudget("beta entry outside [0,1]");
  for (int a = 0; a < s.nA; ++a)
    for (int x = 0; x < s.mA; ++x)
      for (int y = 0; y < s.mB; ++y) {
        if (alpha_at(a, x, y, y) != 0.0) throw InvalidBudget("alpha diagonal entry is nonzero");
        for (int yp = 0; yp < s.mB; ++yp)
          if (alpha_at(a, x, y, yp) != alpha_at(a, x, yp, y))
            throw InvalidBudget("alpha is not symmetric in the setting pair");
      }
  for (int b = 0; b < s.nB; ++b)
    for (int y = 0; y < s.mB; ++y)
      for (int x = 0; x < s.mA; ++x) {
        if (beta_at(b, y, x, x) != 0.0) throw InvalidBudget("beta diagonal entry is nonzero");
        for (int xp = 0; xp < s.mA; ++xp)
          if (beta_at(b, y, x, xp) != beta_at(b, y, xp, x))
            throw InvalidBudget("beta is not symmetric in the setting pair");
      }
}

CountsTable::CountsTable(Scenario scenario, std::vector<std::int64_t> counts)
    : scenario_(scenario), counts_(std::move(counts)) {
  const std::size_t expected = static_cast<std::size_t>(scenario_.cells()) *
                               (scenario_.nA + 1) * (scenario_.nB + 1);
  if (counts_.size() != expected)
    throw InvalidArgs("counts table has " + std::to_string(counts_.size()) +
                      " entries, expected " + std::to_string(expected));
  for (std::int64_t c : counts_)
    if (c < 0) throw InvalidArgs("counts must be nonnegative");
}

NoSignallingReport check_no_signalling(const Behavior& behavior, double tol) {
  const Scenario& s = behavior.scenario();
  NoSignallingReport report;
  for (int a = 0; a < s.nA; ++a)
    for (int x = 0; x < s.mA; ++x)
      for (int y = 0; y < s.mB; ++y)
        for (int yp = y + 1; yp < s.mB; ++yp) {
          const double dev =
              std::abs(behavior.marginal_a(a, x, y) - behavior.marginal_a(a, x, yp));
          if (dev > report.max_deviation) {
            report.max_deviation = dev;
            report.worst = {'A', a, x, y, yp};
          }
        }
  for (int b = 0; b < s.nB; ++b)
    for (int y = 0; y < s.mB; ++y)
      for (int x = 0; x < s.mA; ++x)
        for (int xp = x + 1; xp < s.mA; ++xp) {
          const double dev =
              std::abs(behavior.marginal_b(b, x, y) - behavior.marginal_b(b, xp, y));
          if (dev > report.max_deviation) {
            report.max_deviation = dev;
            report.worst = {'B', b, y, x, xp};
          }
        }
  report.compliant = report.max_deviation <= tol;
  return report;
}

SignallingBudget estimate_budgets(const Behavior& behavior, double slack) {
  if (slack < 0.0) throw InvalidArgs("budget slack must be nonnegative");
  const Scenario& s = behavior.scenario();
  SignallingBudget budget = SignallingBudget::zero(s);
  for (int a = 0; a < s.nA; ++a)
    for (int x = 0; x < s.mA; ++x)
      for (int y = 0; y < s.mB; ++y)
        for (int yp = 0; yp < s.mB; ++yp) {
          if (y == yp) continue;
          const double dev =
              std::abs(behavior.marginal_a(a, x, y) - behavior.marginal_a(a, x, yp));
          budget.alpha[budget.alpha_index(a, x, y, yp)] = std::clamp(dev + slack, 0.0, 1.0);
        }
  for (int b = 0; b < s.nB; ++b)
    for (int y = 0; y < s.mB; ++y)
      for (int x = 0; x < s.mA; ++x)
        for (int xp = 0; xp < s.mA; ++xp) {
          if (x == xp) continue;
          const double dev =
              std::abs(behavior.marginal_b(b, x, y) - behavior.marginal_b(b, xp, y));
          budget.beta[budget.beta_index(b, y, x, xp)] = std::clamp(dev + slack, 0.0, 1.0);
        }
  return budget;
}

IngestResult behavior_from_counts(const CountsTable& counts) {
  const Scenario& s = counts.scenario();
  const int noA = counts.no_click_a();
  const int noB = counts.no_click_b();

  std::vector<double> p(static_cast<std::size_t>(s.cells()) * s.outcome_pairs(), 0.0);
  // Per-cell efficiency estimates; averaged over the remote setting below.
  std::vector<double> eta_a_cell(static_cast<std::size_t>(s.nA) * s.mA * s.mB, 0.0);
  std::vector<double> eta_b_cell(static_cast<std::size_t>(s.nB) * s.mB * s.mA, 0.0);

  for (int x = 0; x < s.mA; ++x) {
    for (int y = 0; y < s.mB; ++y) {
      std::int64_t clicked = 0;
      for (int a = 0; a < s.nA; ++a)
        for (int b = 0; b < s.nB; ++b) clicked += counts(x, y, a, b);
      if (clicked < 1)
        throw EmptyCell("cell (" + std::to_string(x) + "," + std::to_string(y) +
                        ") has no successful joint event");
      std::size_t base = 0;
      for (int a = 0; a < s.nA; ++a)
        for (int b = 0; b < s.nB; ++b) {
          base = ((static_cast<std::size_t>(x) * s.mB + y) * s.nA + a) * s.nB + b;
          p[base] = static_cast<double>(counts(x, y, a, b)) / static_cast<double>(clicked);
        }

      // Alice's outcome tallies marginalised over Bob's full alphabet.
      std::int64_t no_click_row = 0;
      for (int bt = 0; bt <= noB; ++bt) no_click_row += counts(x, y, noA, bt);
      for (int a = 0; a < s.nA; ++a) {
        std::int64_t clicks = 0;
        for (int bt = 0; bt <= noB; ++bt) clicks += counts(x, y, a, bt);
        const std::int64_t total = clicks + no_click_row;
        eta_a_cell[(static_cast<std::size_t>(a) * s.mA + x) * s.mB + y] =
            total > 0 ? static_cast<double>(clicks) / static_cast<double>(total) : 1.0;
      }
      std::int64_t no_click_col = 0;
      for (int at = 0; at <= noA; ++at) no_click_col += counts(x, y, at, noB);
      for (int b = 0; b < s.nB; ++b) {
        std::int64_t clicks = 0;
        for (int at = 0; at <= noA; ++at) clicks += counts(x, y, at, b);
        const std::int64_t total = clicks + no_click_col;
        eta_b_cell[(static_cast<std::size_t>(b) * s.mB + y) * s.mA + x] =
            total > 0 ? static_cast<double>(clicks) / static_cast<double>(total) : 1.0;
      }
    }
  }

  IngestResult result{Behavior(s, std::move(p)), {}, {}, 0.0};
  result.eta_a.assign(static_cast<std::size_t>(s.nA) * s.mA, 0.0);
  result.eta_b.assign(static_cast<std::size_t>(s.nB) * s.mB, 0.0);
  for (int a = 0; a < s.nA; ++a)
    for (int x = 0; x < s.mA; ++x) {
      double lo = 1.0, hi = 0.0, sum = 0.0;
      for (int y = 0; y < s.mB; ++y) {
        const double e = eta_a_cell[(static_cast<std::size_t>(a) * s.mA + x) * s.mB + y];
        lo = std::min(lo, e);
        hi = std::max(hi, e);
        sum += e;
      }
      result.eta_a[static_cast<std::size_t>(a) * s.mA + x] = sum / s.mB;
      result.max_efficiency_spread = std::max(result.max_efficiency_spread, hi - lo);
    }
  for (int b = 0; b < s.nB; ++b)
    for (int y = 0; y < s.mB; ++y) {
      double lo = 1.0, hi = 0.0, sum = 0.0;
      for (int x = 0; x < s.mA; ++x) {
        const double e = eta_b_cell[(static_cast<std::size_t>(b) * s.mB + y) * s.mA + x];
        lo = std::min(lo, e);
        hi = std::max(hi, e);
        sum += e;
      }
      result.eta_b[static_cast<std::size_t>(b) * s.mB + y] = sum / s.mA;
      result.max_efficiency_spread = std::max(result.max_efficiency_spread, hi - lo);
    }
  return result;
}

std::vector<double> correlators(const Behavior& behavior) {
  const Scenario& s = behavior.scenario();
  if (s.nA != 2 || s.nB != 2)
    throw NotDichotomic("correlators require two outcomes per party");
  std::vector<double> e(static_cast<std::size_t>(s.mA) * s.mB, 0.0);
  for (int x = 0; x < s.mA; ++x)
    for (int y = 0; y < s.mB; ++y) {
      double v = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) v += ((a + b) % 2 == 0 ? 1.0 : -1.0) * behavior(x, y, a, b);
      e[static_cast<std::size_t>(x) * s.mB + y] = v;
    }
  return e;
}

double bell_value(const Behavior& behavior, const std::vector<double>& coefficients) {
  const Scenario& s = behavior.scenario();
  if (coefficients.size() != static_cast<std::size_t>(s.mA) * s.mB)
    throw DimensionMismatch("coefficient table must be mA x mB");
  const std::vector<double> e = correlators(behavior);
  double w = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) w += coefficients[i] * e[i];
  return w;
}

}  // namespace sigbell
