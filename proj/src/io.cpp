#include "instrumental/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace instrumental {

namespace {

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>()), 10));
  if (j.is_number()) return rationalize(j.get<double>());
  throw std::invalid_argument("expected a rational, got " + j.dump());
}

Json rational_to_json(const Rational& r) { return to_fraction_string(r); }

Json vector_to_json(const RationalVector& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(rational_to_json(r));
  return out;
}

RationalVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of rationals");
  RationalVector out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw std::invalid_argument(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::size_t parse_dim_line(const std::string& line) {
  static const std::regex dim_re(R"(DIM\s*=\s*(\d+))", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(line, m, dim_re)) throw std::invalid_argument("malformed DIM line: " + line);
  return std::stoul(m[1].str());
}

}  // namespace

// ---------------------------------------------------------------------------
// JSON

Json to_json(const Scenario& s) {
  Json j{{"kind", to_string(s.kind())}, {"nX", s.nx()}, {"nA", s.na()}, {"nB", s.nb()}};
  if (s.kind() != ScenarioKind::Instrumental) j["nY"] = s.ny();
  if (s.kind() == ScenarioKind::FInstrumental) j["wiring"] = s.wiring_table();
  return j;
}

Scenario scenario_from_json(const Json& j) {
  const ScenarioKind kind = parse_scenario_kind(field(j, "kind").get<std::string>());
  const int nx = field(j, "nX").get<int>();
  const int na = field(j, "nA").get<int>();
  const int nb = field(j, "nB").get<int>();
  switch (kind) {
    case ScenarioKind::Bell: return Scenario::bell(nx, field(j, "nY").get<int>(), na, nb);
    case ScenarioKind::Instrumental: return Scenario::instrumental(nx, na, nb);
    case ScenarioKind::FInstrumental:
      return Scenario::f_instrumental(nx, field(j, "nY").get<int>(), na, nb,
                                      field(j, "wiring").get<std::vector<std::vector<int>>>());
  }
  throw std::logic_error("unhandled scenario kind");
}

Json to_json(const Correlation& p) { return {{"scenario", to_json(p.scenario)}, {"entries", vector_to_json(p.entries)}}; }

Correlation correlation_from_json(const Json& j) {
  return Correlation(scenario_from_json(field(j, "scenario")), vector_from_json(field(j, "entries")));
}

Json to_json(const NumericCorrelation& p) { return {{"scenario", to_json(p.scenario)}, {"entries", p.entries}}; }

NumericCorrelation numeric_correlation_from_json(const Json& j) {
  std::vector<double> entries;
  for (const auto& e : field(j, "entries")) entries.push_back(e.is_string() ? parse_rational(e.get<std::string>()).get_d() : e.get<double>());
  return NumericCorrelation(scenario_from_json(field(j, "scenario")), std::move(entries));
}

Json to_json(const DeterministicStrategy& d) { return {{"alpha", d.alpha}, {"beta", d.beta}}; }

DeterministicStrategy strategy_from_json(const Json& j) {
  return {field(j, "alpha").get<std::vector<int>>(), field(j, "beta").get<std::vector<int>>()};
}

Json to_json(const LinearExpression& e) {
  return {{"scenario", to_json(e.scenario)},
          {"coeffs", vector_to_json(e.coeffs)},
          {"constant", rational_to_json(e.constant)},
          {"label", e.label}};
}

LinearExpression expression_from_json(const Json& j) {
  return LinearExpression(scenario_from_json(field(j, "scenario")), vector_from_json(field(j, "coeffs")),
                          j.contains("constant") ? rational_from_json(j.at("constant")) : Rational(0),
                          j.value("label", std::string()));
}

Json to_json(const QuantumStrategy& q) {
  Json j;
  if (q.state.is_phi_plus()) {
    j["state"] = "phi_plus";
  } else {
    Json entries = Json::array();
    const auto& m = q.state.matrix();
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
    j["state"] = entries;
  }
  auto obs = [](const std::vector<Observable2>& v) {
    Json out = Json::array();
    for (const auto& o : v) out.push_back({o.vx, o.vz});
    return out;
  };
  j["alice"] = obs(q.alice);
  j["bob"] = obs(q.bob);
  return j;
}

QuantumStrategy quantum_strategy_from_json(const Json& j) {
  QuantumStrategy q;
  const Json& state = field(j, "state");
  if (state.is_string()) {
    const auto name = state.get<std::string>();
    if (name == "phi_plus") q.state = TwoQubitState::phi_plus();
    else if (name == "maximally_mixed") q.state = TwoQubitState::maximally_mixed();
    else throw std::invalid_argument("unknown named state '" + name + "'");
  } else {
    if (!state.is_array() || state.size() != 16) throw std::invalid_argument("state needs 16 entries");
    Eigen::Matrix4cd m;
    for (int k = 0; k < 16; ++k) {
      const Json& e = state[static_cast<std::size_t>(k)];
      m(k / 4, k % 4) = e.is_array() ? std::complex<double>(e.at(0).get<double>(), e.at(1).get<double>())
                                     : std::complex<double>(e.get<double>(), 0.0);
    }
    q.state = TwoQubitState::from_matrix(m);
  }
  auto obs = [](const Json& v) {
    std::vector<Observable2> out;
    for (const auto& o : v) {
      Observable2 ob{o.at(0).get<double>(), o.at(1).get<double>()};
      ob.check();
      out.push_back(ob);
    }
    return out;
  };
  q.alice = obs(field(j, "alice"));
  q.bob = obs(field(j, "bob"));
  return q;
}

Json to_json(const LinearInequality& i) { return {{"coeffs", vector_to_json(i.coeffs)}, {"bound", rational_to_json(i.bound)}}; }

LinearInequality inequality_from_json(const Json& j) {
  return {vector_from_json(field(j, "coeffs")), rational_from_json(field(j, "bound"))};
}

Json to_json(const HPolytope& h) {
  Json ineqs = Json::array(), eqs = Json::array();
  for (const auto& i : h.inequalities) ineqs.push_back(to_json(i));
  for (const auto& e : h.equalities) eqs.push_back({{"coeffs", vector_to_json(e.coeffs)}, {"rhs", rational_to_json(e.rhs)}});
  return {{"dim", h.dim}, {"inequalities", ineqs}, {"equalities", eqs}};
}

HPolytope hpolytope_from_json(const Json& j) {
  HPolytope h;
  h.dim = field(j, "dim").get<std::size_t>();
  for (const auto& i : j.value("inequalities", Json::array())) {
    h.inequalities.push_back(inequality_from_json(i));
    if (h.inequalities.back().coeffs.size() != h.dim) throw ShapeError("inequality dimension mismatch");
  }
  for (const auto& e : j.value("equalities", Json::array())) {
    h.equalities.push_back({vector_from_json(field(e, "coeffs")), rational_from_json(field(e, "rhs"))});
    if (h.equalities.back().coeffs.size() != h.dim) throw ShapeError("equality dimension mismatch");
  }
  return h;
}

Json to_json(const VPolytope& v) {
  Json verts = Json::array();
  for (const auto& p : v.vertices) verts.push_back(vector_to_json(p));
  return {{"dim", v.dim}, {"vertices", verts}};
}

VPolytope vpolytope_from_json(const Json& j) {
  std::vector<RationalVector> points;
  for (const auto& p : field(j, "vertices")) points.push_back(vector_from_json(p));
  VPolytope v = VPolytope::from_points(std::move(points));
  const std::size_t dim = field(j, "dim").get<std::size_t>();
  if (!v.vertices.empty() && v.dim != dim) throw ShapeError("vertex dimension does not match DIM");
  v.dim = dim;
  return v;
}

Json to_json(const MembershipCertificate& c) {
  Json j{{"verdict", c.inside() ? "inside" : "outside"}};
  if (!c.weights.empty()) j["weights"] = vector_to_json(c.weights);
  if (!c.witness.empty()) j["witness"] = vector_to_json(c.witness);
  if (c.separator) j["separator"] = to_json(*c.separator);
  return j;
}

Json to_json(const SymbolicValue& v) { return {{"exact", v.to_string()}, {"approx", v.approx()}}; }

Json to_json(const VerifiedBounds& b) {
  Json j{{"label", b.closed_form.label},
         {"classical", {{"closed_form", rational_to_json(b.closed_form.classical)}, {"computed", rational_to_json(b.classical)}}},
         {"quantum", {{"closed_form", to_json(b.closed_form.quantum)}, {"computed", b.quantum}, {"tolerance", b.quantum_tolerance}}},
         {"gpt", {{"closed_form", rational_to_json(b.closed_form.gpt)}, {"computed", rational_to_json(b.gpt)}}},
         {"verified", b.ok()},
         {"mismatches", b.mismatches}};
  if (b.closed_form.quantum_literature) j["quantum"]["literature"] = to_json(*b.closed_form.quantum_literature);
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return Json::parse(in);
}

// ---------------------------------------------------------------------------
// PORTA

void write_poi(std::ostream& os, const VPolytope& v) {
  os << "DIM = " << v.dim << "\n\nCONV_SECTION\n";
  for (const auto& p : v.vertices) {
    for (std::size_t j = 0; j < p.size(); ++j) os << (j ? " " : "") << to_string(p[j]);
    os << "\n";
  }
  os << "END\n";
}

VPolytope read_poi(std::istream& is) {
  std::string line;
  std::optional<std::size_t> dim;
  bool in_conv = false;
  std::vector<RationalVector> points;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const std::string key = upper(line);
    if (key.rfind("DIM", 0) == 0) {
      dim = parse_dim_line(line);
    } else if (key == "CONV_SECTION") {
      in_conv = true;
    } else if (key == "END") {
      break;
    } else if (in_conv) {
      // Optional "(  k)" line labels.
      if (line.front() == '(') line = trim(line.substr(line.find(')') + 1));
      std::istringstream tokens(line);
      RationalVector p;
      std::string tok;
      while (tokens >> tok) p.push_back(parse_rational(tok));
      points.push_back(std::move(p));
    } else {
      throw std::invalid_argument("unsupported .poi line: " + line);
    }
  }
  if (!dim) throw std::invalid_argument(".poi file has no DIM line");
  for (const auto& p : points) {
    if (p.size() != *dim) throw ShapeError("vertex with " + std::to_string(p.size()) + " entries in DIM " + std::to_string(*dim));
  }
  VPolytope v = VPolytope::from_points(std::move(points));
  v.dim = *dim;
  return v;
}

void write_ieq(std::ostream& os, const HPolytope& h) {
  os << "DIM = " << h.dim << "\n\nINEQUALITIES_SECTION\n";
  std::size_t k = 0;
  auto label = [&] {
    std::ostringstream l;
    l << "(" << std::setw(3) << ++k << ") ";
    return l.str();
  };
  for (const auto& e : h.equalities) {
    std::string row = format_inequality({e.coeffs, e.rhs});
    row.replace(row.rfind("<="), 2, "==");
    os << label() << row << "\n";
  }
  for (const auto& i : h.inequalities) os << label() << format_inequality(i) << "\n";
  os << "END\n";
}

HPolytope read_ieq(std::istream& is) {
  static const std::regex term_re(R"(([+-])\s*(\d+(?:/\d+)?)?\s*x(\d+))");
  static const std::regex rel_re(R"(^(.*?)(<=|>=|==|=<|=>|=)\s*([+-]?\s*\d+(?:/\d+)?)\s*$)");
  std::string line;
  std::optional<std::size_t> dim;
  bool in_section = false;
  HPolytope h;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const std::string key = upper(line);
    if (key.rfind("DIM", 0) == 0) {
      dim = parse_dim_line(line);
      h.dim = *dim;
    } else if (key == "INEQUALITIES_SECTION") {
      if (!dim) throw std::invalid_argument(".ieq section before DIM");
      in_section = true;
    } else if (key == "END") {
      break;
    } else if (in_section) {
      if (line.front() == '(') line = trim(line.substr(line.find(')') + 1));
      std::smatch m;
      if (!std::regex_match(line, m, rel_re)) throw std::invalid_argument("malformed .ieq row: " + line);
      std::string lhs = trim(m[1].str());
      if (!lhs.empty() && lhs.front() != '+' && lhs.front() != '-') lhs = "+" + lhs;
      RationalVector coeffs(*dim);
      std::string rest = lhs;
      for (std::sregex_iterator it(lhs.begin(), lhs.end(), term_re), end; it != end; ++it) {
        const auto& t = *it;
        Rational c = t[2].matched ? parse_rational(t[2].str()) : Rational(1);
        if (t[1].str() == "-") c = -c;
        const std::size_t idx = std::stoul(t[3].str());
        if (idx < 1 || idx > *dim) throw ShapeError("variable x" + t[3].str() + " outside DIM");
        coeffs[idx - 1] += c;
        rest.replace(rest.find(t[0].str()), t[0].length(), std::string(t[0].length(), ' '));
      }
      if (!trim(rest).empty() && trim(rest) != "+0" && trim(rest) != "+ 0" && trim(rest) != "0") {
        throw std::invalid_argument("unparsed terms in .ieq row: " + line);
      }
      std::string rhs_text = m[3].str();
      rhs_text.erase(std::remove(rhs_text.begin(), rhs_text.end(), ' '), rhs_text.end());
      const Rational rhs = parse_rational(rhs_text);
      const std::string rel = m[2].str();
      if (rel == "==" || rel == "=") {
        h.equalities.push_back({std::move(coeffs), rhs});
      } else if (rel == "<=" || rel == "=<") {
        h.inequalities.push_back({std::move(coeffs), rhs});
      } else {
        for (auto& c : coeffs) c = -c;
        h.inequalities.push_back({std::move(coeffs), -rhs});
      }
    } else {
      throw std::invalid_argument("unsupported .ieq line: " + line);
    }
  }
  if (!dim) throw std::invalid_argument(".ieq file has no DIM line");
  return h;
}

std::vector<std::string> coordinate_names(const Scenario& s) {
  const bool wide = std::max({s.nx(), s.ny(), s.na(), s.nb()}) > 10;
  const char* sep = wide ? "," : "";
  std::vector<std::string> names(s.dimension());
  for (int x = 0; x < s.nx(); ++x)
    for (int a = 0; a < s.na(); ++a)
      for (int b = 0; b < s.nb(); ++b) {
        if (s.is_bell()) {
          for (int y = 0; y < s.ny(); ++y) {
            names[s.index(x, y, a, b)] = "p(" + std::to_string(a) + sep + std::to_string(b) + "|" + std::to_string(x) +
                                         sep + std::to_string(y) + ")";
          }
        } else {
          names[s.index(x, a, b)] = "p(" + std::to_string(a) + sep + std::to_string(b) + "|" + std::to_string(x) + ")";
        }
      }
  return names;
}

// ---------------------------------------------------------------------------
// Bounds tables

std::string bounds_csv_header() {
  return "label,classical,quantum_exact,quantum_approx,gpt,classical_computed,quantum_computed,gpt_computed,verified";
}

std::string bounds_csv_row(const VerifiedBounds& b) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << b.closed_form.label << ',' << to_string(b.closed_form.classical) << ",\"" << b.closed_form.quantum.to_string()
     << "\"," << b.closed_form.quantum.approx() << ',' << to_string(b.closed_form.gpt) << ',' << to_string(b.classical)
     << ',' << b.quantum << ',' << to_string(b.gpt) << ',' << (b.ok() ? "true" : "false");
  return os.str();
}

std::string bounds_table(const VerifiedBounds& b) {
  std::ostringstream os;
  os << std::setprecision(12);
  auto row = [&](const std::string& name, const std::string& closed, const std::string& computed,
                 const std::string& status) {
    os << "  " << std::left << std::setw(10) << name << std::setw(28) << closed << std::setw(20) << computed << status
       << "\n";
  };
  auto status = [](bool ok) { return std::string(ok ? "ok" : "MISMATCH"); };
  std::ostringstream q;
  q << std::setprecision(12) << b.quantum;
  const bool q_ok = std::abs(b.quantum - b.closed_form.quantum.approx()) <= b.quantum_tolerance;
  os << b.closed_form.label << "\n";
  row("", "closed form", "computed", "check");
  row("Classical", to_string(b.closed_form.classical), to_string(b.classical), status(b.classical == b.closed_form.classical));
  row("Quantum", b.closed_form.quantum.to_string(), q.str(), status(q_ok));
  row("GPT", to_string(b.closed_form.gpt), to_string(b.gpt), status(b.gpt == b.closed_form.gpt));
  if (b.closed_form.quantum_literature) {
    os << "  note: the literature prints the quantum value as " << b.closed_form.quantum_literature->to_string() << " = "
       << b.closed_form.quantum_literature->approx() << "; the lifting identity gives the value above\n";
  }
  return os.str();
}

}  // namespace instrumental
