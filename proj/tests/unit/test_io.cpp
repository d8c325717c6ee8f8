#include <gtest/gtest.h>

#include <sstream>

#include "instrumental/io.hpp"

using namespace instrumental;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    else if (c == ',' && !quoted) out.emplace_back();
    else out.back() += c;
  }
  return out;
}

}  // namespace

TEST(Json, ScenarioRoundTrip) {
  for (const auto& s : {Scenario::bell(3, 2, 2, 2), Scenario::instrumental(2, 3, 3), Scenario::chained(4)}) {
    EXPECT_EQ(scenario_from_json(Json::parse(to_json(s).dump())), s);
  }
  EXPECT_THROW(scenario_from_json(Json::parse(R"({"kind": "bell", "nX": 2})")), std::exception);
}

TEST(Json, CorrelationRoundTripAndNumbers) {
  const Correlation pr = pr_box();
  const Json j = to_json(pr);
  EXPECT_EQ(j["entries"][0], "1/2");
  EXPECT_EQ(correlation_from_json(Json::parse(j.dump())).entries, pr.entries);
  Json numeric = j;
  for (auto& e : numeric["entries"]) e = e == "1/2" ? Json(0.5) : Json(0);
  EXPECT_EQ(correlation_from_json(numeric).entries, pr.entries);
  Json short_entries = j;
  short_entries["entries"].erase(0);
  EXPECT_THROW(correlation_from_json(short_entries), ShapeError);
}

TEST(Json, ExpressionRoundTrip) {
  const LinearExpression e = catalog(ExpressionSpec::tilted(fraction(3, 2)));
  const LinearExpression back = expression_from_json(Json::parse(to_json(e).dump()));
  EXPECT_EQ(back.scenario, e.scenario);
  EXPECT_EQ(back.coeffs, e.coeffs);
  EXPECT_EQ(back.constant, e.constant);
  EXPECT_EQ(back.label, e.label);
}

TEST(Json, StrategyRoundTrips) {
  const DeterministicStrategy d{{0, 1, 1}, {1, 0}};
  EXPECT_EQ(strategy_from_json(to_json(d)), d);
  const QuantumStrategy q = bonet_strategy();
  const QuantumStrategy back = quantum_strategy_from_json(Json::parse(to_json(q).dump()));
  ASSERT_EQ(back.alice.size(), 3u);
  EXPECT_TRUE(back.state.is_phi_plus());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(back.alice[i].vx, q.alice[i].vx);
  const QuantumStrategy dense =
      quantum_strategy_from_json(Json::parse(R"({"state": [0.25,0,0,0, 0,0.25,0,0, 0,0,0.25,0, 0,0,0,0.25],
                                                  "alice": [[0, 1]], "bob": [[1, 0]]})"));
  EXPECT_FALSE(dense.state.is_phi_plus());
  EXPECT_THROW(quantum_strategy_from_json(Json::parse(R"({"state": "phi_plus", "alice": [[1, 1]], "bob": [[1, 0]]})")),
               std::invalid_argument);
}

TEST(Json, PolytopeRoundTrip) {
  const VPolytope v = classical_polytope(Scenario::instrumental(2, 2, 2));
  EXPECT_EQ(vpolytope_from_json(to_json(v)).vertices, v.vertices);
  const HPolytope h = facet_enumeration(v);
  const HPolytope back = hpolytope_from_json(Json::parse(to_json(h).dump()));
  EXPECT_EQ(back.inequalities, h.inequalities);
  EXPECT_EQ(back.equalities, h.equalities);
}

TEST(Json, CertificateAndBounds) {
  const VPolytope v = classical_polytope(Scenario::instrumental(2, 2, 2));
  RationalVector q(8);
  q[0] = 1;
  q[4] = 1;
  const Json c = to_json(membership(q, v));
  EXPECT_EQ(c["verdict"], "inside");
  const Json b = to_json(verify_bounds(ExpressionSpec::bonet()));
  EXPECT_EQ(b["gpt"]["computed"], "5/2");
  EXPECT_EQ(b["verified"], true);
}

TEST(Porta, PoiRoundTrip) {
  const VPolytope v = classical_polytope(Scenario::instrumental(3, 2, 2));
  std::stringstream ss;
  write_poi(ss, v);
  EXPECT_NE(ss.str().find("CONV_SECTION"), std::string::npos);
  EXPECT_EQ(read_poi(ss).vertices, v.vertices);
}

TEST(Porta, IeqRoundTrip) {
  const HPolytope h = facet_enumeration(classical_polytope(Scenario::instrumental(3, 2, 2)));
  std::stringstream ss;
  write_ieq(ss, h);
  const HPolytope back = read_ieq(ss);
  EXPECT_EQ(back.dim, h.dim);
  EXPECT_EQ(back.inequalities, h.inequalities);
  EXPECT_EQ(back.equalities, h.equalities);
}

TEST(Porta, ParsesHandWrittenRows) {
  std::istringstream in(
      "DIM = 3\n"
      "INEQUALITIES_SECTION\n"
      "(  1) x1 + x2 + x3 == 1\n"
      "(  2) +x1 >= 0\n"
      "  -2x2 +1/2x3 <= 3/4\n"
      "END\n");
  const HPolytope h = read_ieq(in);
  ASSERT_EQ(h.dim, 3u);
  ASSERT_EQ(h.equalities.size(), 1u);
  EXPECT_EQ(h.equalities[0].coeffs, (RationalVector{1, 1, 1}));
  ASSERT_EQ(h.inequalities.size(), 2u);
  EXPECT_EQ(h.inequalities[0], (LinearInequality{{-1, 0, 0}, 0}));
  EXPECT_EQ(h.inequalities[1], (LinearInequality{{0, -2, fraction(1, 2)}, fraction(3, 4)}));
}

TEST(Porta, RejectsMalformed) {
  std::istringstream bad_dim("INEQUALITIES_SECTION\n+x1 <= 1\nEND\n");
  EXPECT_THROW(read_ieq(bad_dim), std::exception);
  std::istringstream bad_var("DIM = 2\nINEQUALITIES_SECTION\n+x3 <= 1\nEND\n");
  EXPECT_THROW(read_ieq(bad_var), std::exception);
}

TEST(Names, Coordinates) {
  const auto n = coordinate_names(Scenario::instrumental(2, 2, 2));
  EXPECT_EQ(n.front(), "p(00|0)");
  EXPECT_EQ(n.back(), "p(11|1)");
  EXPECT_EQ(coordinate_names(Scenario::bell(2, 2, 2, 2))[5], "p(01|01)");
}

TEST(Csv, HeaderAndRowsAlign) {
  const auto header = split_csv(bounds_csv_header());
  for (const auto& spec : {ExpressionSpec::bonet(), ExpressionSpec::chained(3)}) {
    const auto row = split_csv(bounds_csv_row(verify_bounds(spec)));
    EXPECT_EQ(row.size(), header.size());
    EXPECT_EQ(row.back(), "true");
  }
  const auto row = split_csv(bounds_csv_row(verify_bounds(ExpressionSpec::bonet())));
  EXPECT_EQ(row[0], "bonet");
  EXPECT_EQ(row[2], "3/2 + 1/2*sqrt(2)");
}

TEST(Table, ShowsLiteratureNoteForTilted) {
  const std::string t = bounds_table(verify_bounds(ExpressionSpec::tilted(2)));
  EXPECT_NE(t.find("Quantum"), std::string::npos);
  EXPECT_NE(t.find("literature"), std::string::npos);
}
