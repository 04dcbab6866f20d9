#include "sigbell/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sigbell::io {

using nlohmann::json;

namespace {

double rounded(double v, int precision) {
  if (precision < 0) return v;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return std::strtod(buf, nullptr);
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + name + "': " + e.what());
  }
}

json matrix_to_json(const Matrix& m, int precision) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json re_row = json::array(), im_row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(rounded(m(i, j).real(), precision));
      im_row.push_back(rounded(m(i, j).imag(), precision));
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const json& j, int dim) {
  const auto re = field<std::vector<std::vector<double>>>(j, "re");
  const auto im = field<std::vector<std::vector<double>>>(j, "im");
  if (static_cast<int>(re.size()) != dim || static_cast<int>(im.size()) != dim)
    throw ParseError("matrix row count mismatch");
  Matrix out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(re[i].size()) != dim || static_cast<int>(im[i].size()) != dim)
      throw ParseError("matrix column count mismatch");
    for (int j2 = 0; j2 < dim; ++j2) out(i, j2) = std::complex<double>(re[i][j2], im[i][j2]);
  }
  return out;
}

Scenario scenario_from_header(const json& j) {
  return Scenario(field<int>(j, "mA"), field<int>(j, "mB"), field<int>(j, "nA"),
                  field<int>(j, "nB"));
}

}  // namespace

std::string behavior_to_json(const Behavior& behavior, int precision) {
  const Scenario& s = behavior.scenario();
  json p = json::array();
  for (int x = 0; x < s.mA; ++x) {
    json px = json::array();
    for (int y = 0; y < s.mB; ++y) {
      json pxy = json::array();
      for (int a = 0; a < s.nA; ++a) {
        json pa = json::array();
        for (int b = 0; b < s.nB; ++b) pa.push_back(rounded(behavior(x, y, a, b), precision));
        pxy.push_back(std::move(pa));
      }
      px.push_back(std::move(pxy));
    }
    p.push_back(std::move(px));
  }
  json j{{"mA", s.mA}, {"mB", s.mB}, {"nA", s.nA}, {"nB", s.nB}, {"p", std::move(p)}};
  return j.dump(2);
}

Behavior behavior_from_json(const std::string& text) {
  const json j = parse(text);
  const Scenario s = scenario_from_header(j);
  const auto p = field<std::vector<std::vector<std::vector<std::vector<double>>>>>(j, "p");
  if (static_cast<int>(p.size()) != s.mA) throw ParseError("behavior table x dimension");
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(s.cells()) * s.outcome_pairs());
  for (int x = 0; x < s.mA; ++x) {
    if (static_cast<int>(p[x].size()) != s.mB) throw ParseError("behavior table y dimension");
    for (int y = 0; y < s.mB; ++y) {
      if (static_cast<int>(p[x][y].size()) != s.nA) throw ParseError("behavior table a dimension");
      for (int a = 0; a < s.nA; ++a) {
        if (static_cast<int>(p[x][y][a].size()) != s.nB)
          throw ParseError("behavior table b dimension");
        for (int b = 0; b < s.nB; ++b) flat.push_back(p[x][y][a][b]);
      }
    }
  }
  return Behavior(s, std::move(flat));
}

std::string counts_to_json(const CountsTable& counts) {
  const Scenario& s = counts.scenario();
  json table = json::array();
  for (int x = 0; x < s.mA; ++x) {
    json row = json::array();
    for (int y = 0; y < s.mB; ++y) {
      json cell = json::object();
      for (int at = 0; at <= s.nA; ++at) {
        json inner = json::object();
        for (int bt = 0; bt <= s.nB; ++bt) {
          const std::int64_t c = counts(x, y, at, bt);
          if (c == 0) continue;
          inner[bt == s.nB ? "null" : std::to_string(bt)] = c;
        }
        if (!inner.empty()) cell[at == s.nA ? "null" : std::to_string(at)] = std::move(inner);
      }
      row.push_back(std::move(cell));
    }
    table.push_back(std::move(row));
  }
  json j{{"mA", s.mA}, {"mB", s.mB}, {"nA", s.nA}, {"nB", s.nB}, {"counts", std::move(table)}};
  return j.dump(2);
}

CountsTable counts_from_json(const std::string& text) {
  const json j = parse(text);
  const Scenario s = scenario_from_header(j);
  if (!j.contains("counts")) throw ParseError("missing field 'counts'");
  const json& table = j.at("counts");
  if (!table.is_array() || static_cast<int>(table.size()) != s.mA)
    throw ParseError("counts table x dimension");

  std::vector<std::int64_t> flat(
      static_cast<std::size_t>(s.cells()) * (s.nA + 1) * (s.nB + 1), 0);
  auto outcome_index = [](const std::string& key, int n) -> int {
    if (key == "null") return n;
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(key, &pos);
    } catch (const std::exception&) {
      throw ParseError("bad outcome key '" + key + "'");
    }
    if (pos != key.size() || v < 0 || v >= n) throw ParseError("bad outcome key '" + key + "'");
    return v;
  };
  for (int x = 0; x < s.mA; ++x) {
    const json& row = table.at(x);
    if (!row.is_array() || static_cast<int>(row.size()) != s.mB)
      throw ParseError("counts table y dimension");
    for (int y = 0; y < s.mB; ++y) {
      for (const auto& [akey, inner] : row.at(y).items()) {
        const int at = outcome_index(akey, s.nA);
        for (const auto& [bkey, value] : inner.items()) {
          const int bt = outcome_index(bkey, s.nB);
          flat[((static_cast<std::size_t>(x) * s.mB + y) * (s.nA + 1) + at) * (s.nB + 1) + bt] =
              value.get<std::int64_t>();
        }
      }
    }
  }
  return CountsTable(s, std::move(flat));
}

namespace {

json nested4(const std::vector<double>& flat, int d0, int d1, int d2, int d3, int precision) {
  json out = json::array();
  std::size_t idx = 0;
  for (int i = 0; i < d0; ++i) {
    json a = json::array();
    for (int j = 0; j < d1; ++j) {
      json b = json::array();
      for (int k = 0; k < d2; ++k) {
        json c = json::array();
        for (int l = 0; l < d3; ++l) c.push_back(rounded(flat[idx++], precision));
        b.push_back(std::move(c));
      }
      a.push_back(std::move(b));
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<double> flat4(const json& j, const char* name, int& d0, int& d1, int& d2, int& d3) {
  const auto table = field<std::vector<std::vector<std::vector<std::vector<double>>>>>(j, name);
  d0 = static_cast<int>(table.size());
  if (d0 == 0) throw ParseError(std::string(name) + " is empty");
  d1 = static_cast<int>(table[0].size());
  d2 = d1 > 0 ? static_cast<int>(table[0][0].size()) : 0;
  d3 = d2 > 0 ? static_cast<int>(table[0][0][0].size()) : 0;
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(d0) * d1 * d2 * d3);
  for (const auto& a : table) {
    if (static_cast<int>(a.size()) != d1) throw ParseError("ragged table");
    for (const auto& b : a) {
      if (static_cast<int>(b.size()) != d2) throw ParseError("ragged table");
      for (const auto& c : b) {
        if (static_cast<int>(c.size()) != d3) throw ParseError("ragged table");
        for (double v : c) flat.push_back(v);
      }
    }
  }
  return flat;
}

}  // namespace

std::string budget_to_json(const SignallingBudget& budget, int precision) {
  const Scenario& s = budget.scenario;
  json j{{"alpha", nested4(budget.alpha, s.nA, s.mA, s.mB, s.mB, precision)},
         {"beta", nested4(budget.beta, s.nB, s.mB, s.mA, s.mA, precision)}};
  return j.dump(2);
}

SignallingBudget budget_from_json(const std::string& text) {
  const json j = parse(text);
  int n_a, m_a, m_b, m_b2, n_b, m_b3, m_a2, m_a3;
  SignallingBudget budget;
  budget.alpha = flat4(j, "alpha", n_a, m_a, m_b, m_b2);
  budget.beta = flat4(j, "beta", n_b, m_b3, m_a2, m_a3);
  if (m_b != m_b2 || m_a2 != m_a3 || m_a != m_a2 || m_b != m_b3)
    throw ParseError("budget table dimensions disagree");
  budget.scenario = Scenario(m_a, m_b, n_a, n_b);
  budget.validate();
  return budget;
}

std::string inequality_to_json(const slhv::SignallingBellInequality& inequality,
                               const std::string& budget_ref, int precision) {
  const Scenario& s = inequality.scenario;
  json j{{"c", nested4(inequality.c, s.nA, s.nB, s.mA, s.mB, precision)},
         {"mu", rounded(inequality.mu, precision)},
         {"d", nested4(inequality.d, s.nA, s.mA, s.mB, s.mB, precision)},
         {"e", nested4(inequality.e, s.nB, s.mB, s.mA, s.mA, precision)},
         {"bound", rounded(inequality.bound, precision)}};
  if (!budget_ref.empty()) j["budget_ref"] = budget_ref;
  return j.dump(2);
}

slhv::SignallingBellInequality inequality_from_json(const std::string& text) {
  const json j = parse(text);
  slhv::SignallingBellInequality ineq;
  int n_a, n_b, m_a, m_b, tmp0, tmp1, tmp2, tmp3;
  ineq.c = flat4(j, "c", n_a, n_b, m_a, m_b);
  ineq.d = flat4(j, "d", tmp0, tmp1, tmp2, tmp3);
  if (tmp0 != n_a || tmp1 != m_a || tmp2 != m_b || tmp3 != m_b)
    throw ParseError("inequality d table dimensions disagree with c");
  ineq.e = flat4(j, "e", tmp0, tmp1, tmp2, tmp3);
  if (tmp0 != n_b || tmp1 != m_b || tmp2 != m_a || tmp3 != m_a)
    throw ParseError("inequality e table dimensions disagree with c");
  ineq.scenario = Scenario(m_a, m_b, n_a, n_b);
  ineq.mu = field<double>(j, "mu");
  ineq.bound = field<double>(j, "bound");
  return ineq;
}

std::string assemblage_to_json(const Assemblage& assemblage, int precision) {
  json sigma = json::array();
  for (int x = 0; x < assemblage.mA; ++x) {
    json row = json::array();
    for (int a = 0; a < assemblage.nA; ++a)
      row.push_back(matrix_to_json(assemblage.at(a, x), precision));
    sigma.push_back(std::move(row));
  }
  json j{{"mA", assemblage.mA},
         {"nA", assemblage.nA},
         {"dim", assemblage.dim},
         {"sigma", std::move(sigma)}};
  return j.dump(2);
}

Assemblage assemblage_from_json(const std::string& text) {
  const json j = parse(text);
  Assemblage out;
  out.mA = field<int>(j, "mA");
  out.nA = field<int>(j, "nA");
  out.dim = field<int>(j, "dim");
  if (!j.contains("sigma")) throw ParseError("missing field 'sigma'");
  const json& sigma = j.at("sigma");
  if (!sigma.is_array() || static_cast<int>(sigma.size()) != out.mA)
    throw ParseError("sigma x dimension");
  out.sigma.resize(static_cast<std::size_t>(out.mA) * out.nA);
  for (int x = 0; x < out.mA; ++x) {
    const json& row = sigma.at(x);
    if (!row.is_array() || static_cast<int>(row.size()) != out.nA)
      throw ParseError("sigma a dimension");
    for (int a = 0; a < out.nA; ++a) out.at(a, x) = matrix_from_json(row.at(a), out.dim);
  }
  out.validate();
  return out;
}

std::string witness_to_json(const SteeringWitness& witness, int precision) {
  json ops = json::array();
  for (int x = 0; x < witness.mA; ++x) {
    json row = json::array();
    for (int a = 0; a < witness.nA; ++a)
      row.push_back(matrix_to_json(witness.at(a, x), precision));
    ops.push_back(std::move(row));
  }
  json bounds = json::array();
  for (double b : witness.schmidt_bounds) bounds.push_back(rounded(b, precision));
  json j{{"mA", witness.mA},
         {"nA", witness.nA},
         {"dim", witness.dim},
         {"operators", std::move(ops)},
         {"L_LHS", rounded(witness.lhs_bound, precision)},
         {"schmidt_bounds", std::move(bounds)}};
  return j.dump(2);
}

SteeringWitness witness_from_json(const std::string& text) {
  const json j = parse(text);
  SteeringWitness out;
  out.mA = field<int>(j, "mA");
  out.nA = field<int>(j, "nA");
  out.dim = field<int>(j, "dim");
  out.lhs_bound = field<double>(j, "L_LHS");
  if (j.contains("schmidt_bounds"))
    out.schmidt_bounds = j.at("schmidt_bounds").get<std::vector<double>>();
  if (!j.contains("operators")) throw ParseError("missing field 'operators'");
  const json& ops = j.at("operators");
  if (!ops.is_array() || static_cast<int>(ops.size()) != out.mA)
    throw ParseError("operators x dimension");
  out.operators.resize(static_cast<std::size_t>(out.mA) * out.nA);
  for (int x = 0; x < out.mA; ++x) {
    const json& row = ops.at(x);
    if (!row.is_array() || static_cast<int>(row.size()) != out.nA)
      throw ParseError("operators a dimension");
    for (int a = 0; a < out.nA; ++a)
      out.operators[static_cast<std::size_t>(x) * out.nA + a] =
          matrix_from_json(row.at(a), out.dim);
  }
  out.validate();
  return out;
}

std::string coefficients_to_json(int m_a, int m_b, const std::vector<double>& c,
                                 int precision) {
  if (c.size() != static_cast<std::size_t>(m_a) * m_b)
    throw DimensionMismatch("coefficient table size");
  json rows = json::array();
  std::size_t idx = 0;
  for (int x = 0; x < m_a; ++x) {
    json row = json::array();
    for (int y = 0; y < m_b; ++y) row.push_back(rounded(c[idx++], precision));
    rows.push_back(std::move(row));
  }
  json j{{"mA", m_a}, {"mB", m_b}, {"c", std::move(rows)}};
  return j.dump(2);
}

std::pair<std::pair<int, int>, std::vector<double>> coefficients_from_json(
    const std::string& text) {
  const json j = parse(text);
  const auto rows = field<std::vector<std::vector<double>>>(j, "c");
  const int m_a = static_cast<int>(rows.size());
  if (m_a == 0) throw ParseError("empty coefficient table");
  const int m_b = static_cast<int>(rows[0].size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m_a) * m_b);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != m_b) throw ParseError("ragged coefficient table");
    for (double v : row) flat.push_back(v);
  }
  return {{m_a, m_b}, std::move(flat)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgs("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgs("cannot open '" + path + "' for writing");
  out << contents;
}

}  // namespace sigbell::io
