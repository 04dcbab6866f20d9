#pragma once

#include <string>

#include "sigbell/qlinalg.hpp"
#include "sigbell/scenario.hpp"
#include "sigbell/slhv.hpp"
#include "sigbell/witness.hpp"

namespace sigbell::io {

/// precision < 0 keeps full round-trip precision; otherwise numbers are
/// rounded to that many significant digits before serialization.
inline constexpr int kFullPrecision = -1;

std::string behavior_to_json(const Behavior& behavior, int precision = kFullPrecision);
Behavior behavior_from_json(const std::string& text);

std::string counts_to_json(const CountsTable& counts);
CountsTable counts_from_json(const std::string& text);

std::string budget_to_json(const SignallingBudget& budget, int precision = kFullPrecision);
SignallingBudget budget_from_json(const std::string& text);

std::string inequality_to_json(const slhv::SignallingBellInequality& inequality,
                               const std::string& budget_ref = "",
                               int precision = kFullPrecision);
slhv::SignallingBellInequality inequality_from_json(const std::string& text);

std::string assemblage_to_json(const Assemblage& assemblage, int precision = kFullPrecision);
Assemblage assemblage_from_json(const std::string& text);

std::string witness_to_json(const SteeringWitness& witness, int precision = kFullPrecision);
SteeringWitness witness_from_json(const std::string& text);

/// Full-correlation coefficient table {"mA":..,"mB":..,"c":[[..]]}.
std::string coefficients_to_json(int m_a, int m_b, const std::vector<double>& c,
                                 int precision = kFullPrecision);
std::pair<std::pair<int, int>, std::vector<double>> coefficients_from_json(
    const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace sigbell::io
