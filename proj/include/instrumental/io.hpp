#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "instrumental/inequalities.hpp"
#include "instrumental/polytope.hpp"
#include "instrumental/quantum.hpp"
#include "instrumental/scenario.hpp"

namespace instrumental {

using Json = nlohmann::json;

// Scenario: {"kind", "nX", "nY", "nA", "nB", "wiring"?}
Json to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

// Correlation: {"scenario": ..., "entries": ["p/q", ...]}. Numbers are accepted
// on input; non-integral ones go through continued-fraction rounding.
Json to_json(const Correlation& p);
Correlation correlation_from_json(const Json& j);
Json to_json(const NumericCorrelation& p);
NumericCorrelation numeric_correlation_from_json(const Json& j);

// {"alpha": [...], "beta": [...]}
Json to_json(const DeterministicStrategy& d);
DeterministicStrategy strategy_from_json(const Json& j);

// {"scenario": ..., "coeffs": [...], "constant": "p/q", "label": ...}
Json to_json(const LinearExpression& e);
LinearExpression expression_from_json(const Json& j);

// {"state": "phi_plus" | 16 entries (number or [re, im]), "alice": [[vx, vz], ...], "bob": [...]}
Json to_json(const QuantumStrategy& q);
QuantumStrategy quantum_strategy_from_json(const Json& j);

Json to_json(const LinearInequality& i);
LinearInequality inequality_from_json(const Json& j);
Json to_json(const HPolytope& h);
HPolytope hpolytope_from_json(const Json& j);
Json to_json(const VPolytope& v);
VPolytope vpolytope_from_json(const Json& j);

Json to_json(const MembershipCertificate& c);
Json to_json(const SymbolicValue& v);
Json to_json(const VerifiedBounds& b);

Json read_json_file(const std::string& path);

// PORTA subset: DIM, CONV_SECTION (.poi), INEQUALITIES_SECTION (.ieq), END.
void write_poi(std::ostream& os, const VPolytope& v);
VPolytope read_poi(std::istream& is);
/// Equalities are written first with "==".
void write_ieq(std::ostream& os, const HPolytope& h);
/// Accepts "<=", ">=" and "==" rows; ">=" rows are negated.
HPolytope read_ieq(std::istream& is);

/// "p(ab|x)" or "p(ab|xy)" per coordinate; comma-separated digits once any
/// cardinality exceeds 10.
std::vector<std::string> coordinate_names(const Scenario& s);

std::string bounds_csv_header();
std::string bounds_csv_row(const VerifiedBounds& b);
/// Three-row Classical / Quantum / GPT display with the computed checks.
std::string bounds_table(const VerifiedBounds& b);

}  // namespace instrumental
