// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "instrumental/inequalities.hpp"
#include "instrumental/quantum.hpp"
#include "instrumental/sampling.hpp"

using namespace instrumental;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& what) {
  if (!condition) throw Failure(what);
}

std::string str(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

std::map<OrbitTag, std::size_t> tag_counts(const Scenario& s, const HPolytope& h) {
  std::map<OrbitTag, std::size_t> counts;
  for (const auto& o : facet_orbit_classify(h.inequalities, SymmetryGroup::instrumental(s))) counts[o.tag] += o.members.size();
  return counts;
}

HPolytope gpt_projection(const Scenario& s) {
  const Scenario bell = s.parent_bell();
  return normalize(fourier_motzkin_project(no_signalling_polytope(bell), postselection_coordinates(bell, s)));
}

Rational classical_max(const LinearExpression& e) {
  return maximize_linear(e.coeffs, e.constant, classical_polytope(e.scenario)).value;
}

Rational gpt_max(const LinearExpression& e) {
  const LinearExpression l = lift_to_bell(e);
  return maximize_linear(l.coeffs, l.constant, no_signalling_polytope(l.scenario), false).value;
}

// Random point of the product of per-input probability simplices.
Correlation random_simplex_point(const Scenario& s, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> w(0, 9);
  RationalVector e(s.dimension());
  const std::size_t block = s.block_size();
  for (std::size_t k = 0; k < s.block_count(); ++k) {
    long total = 0;
    std::vector<long> raw(block);
    while (total == 0) {
      total = 0;
      for (auto& r : raw) total += (r = w(rng) * w(rng));
    }
    for (std::size_t i = 0; i < block; ++i) e[k * block + i] = fraction(raw[i], total);
  }
  return Correlation(s, e);
}

void criterion1() {
  const Scenario s = Scenario::instrumental(2, 2, 2);
  const HPolytope classical = facet_enumeration(classical_polytope(s));
  const HPolytope gpt = gpt_projection(s);
  require(classical.inequalities == gpt.inequalities && classical.equalities == gpt.equalities,
          "classical hull and projected no-signalling polytope differ");
  require(equivalent(classical, gpt), "polytopes are not mutually implied");
  const EqualityReducer reducer(classical.equalities, s.dimension());
  std::vector<LinearInequality> pearl;
  for (const auto& e : pearl_expressions(s)) pearl.push_back(canonicalize(reducer.normal_form(e.at_most(1))));
  std::sort(pearl.begin(), pearl.end(), lexicographic_less);
  std::vector<LinearInequality> other;
  for (const auto& f : classical.inequalities) {
    const bool positivity = std::count_if(f.coeffs.begin(), f.coeffs.end(), [](const Rational& c) { return c != 0; }) == 1 &&
                            f.bound == 0;
    if (!positivity) other.push_back(f);
  }
  require(other == pearl, std::to_string(other.size()) + " non-positivity facets, expected the 4 Pearl inequalities");
  require(pearl.size() == 4, "Pearl catalog size");
}

void criterion2() {
  const Scenario s = Scenario::instrumental(3, 2, 2);
  const auto classical = tag_counts(s, facet_enumeration(classical_polytope(s)));
  require(classical.count(OrbitTag::Unknown) == 0, "classical facets contain an unknown orbit");
  require(classical.count(OrbitTag::Positivity) && classical.count(OrbitTag::Pearl) && classical.count(OrbitTag::Bonet),
          "classical facets miss one of positivity / Pearl / Bonet");
  const auto gpt = tag_counts(s, gpt_projection(s));
  require(gpt.size() == 2 && gpt.count(OrbitTag::Positivity) && gpt.count(OrbitTag::Pearl),
          "projected no-signalling facets are not exactly positivity and Pearl");
  std::cout << "    classical: " << classical.at(OrbitTag::Positivity) << " positivity, " << classical.at(OrbitTag::Pearl)
            << " Pearl, " << classical.at(OrbitTag::Bonet) << " Bonet; projected no-signalling: "
            << gpt.at(OrbitTag::Positivity) << " positivity, " << gpt.at(OrbitTag::Pearl) << " Pearl\n";
}

void criterion3() {
  for (int n : {3, 4}) {
    const Scenario s = Scenario::instrumental(2, n, n);
    const HPolytope h = facet_enumeration(classical_polytope(s));
    const auto counts = tag_counts(s, h);
    require(counts.size() == 2 && counts.count(OrbitTag::Positivity) && counts.count(OrbitTag::Pearl),
            "nA = nB = " + std::to_string(n) + " has facets beyond positivity and Pearl");
    require(counts.at(OrbitTag::Pearl) == pearl_expressions(s).size(), "Pearl facet count differs from the catalog");
    std::cout << "    nA = nB = " << n << ": " << h.inequalities.size() << " facets (" << counts.at(OrbitTag::Positivity)
              << " positivity, " << counts.at(OrbitTag::Pearl) << " Pearl)\n";
  }
}

void criterion4() {
  const NumericCorrelation q = postselect(born_table(bonet_strategy()), Scenario::instrumental(3, 2, 2));
  const double v = catalog(ExpressionSpec::bonet()).evaluate(q);
  require(std::abs(v - (3 + std::sqrt(2.0)) / 2) < 1e-9, "bonet quantum value " + str(v));
}

void criterion5() {
  const GptBoxResult r = gpt_box_search(catalog(ExpressionSpec::bonet()));
  require(r.value == fraction(5, 2), "GPT maximum " + to_string(r.value));
  for (const auto& e : pearl_expressions(r.box.scenario)) require(e.evaluate(r.box) <= 1, "maximizer violates " + e.label);
}

void criterion6() {
  std::mt19937_64 rng(20240601);
  const std::vector<ExpressionSpec> specs{ExpressionSpec::bonet(),     ExpressionSpec::tilted(1),
                                          ExpressionSpec::tilted(2),   ExpressionSpec::tilted(5),
                                          ExpressionSpec::chained(2),  ExpressionSpec::chained(3),
                                          ExpressionSpec::chained(4)};
  for (const auto& spec : specs) {
    const Scenario bell = expression_scenario(spec).parent_bell();
    for (int t = 0; t < 500; ++t) {
      const Rational r = identity_check(spec, sample_nosignalling(bell, rng));
      require(r == 0, spec.label() + " residual " + to_string(r));
    }
  }
}

void criterion7() {
  const Scenario s = Scenario::instrumental(3, 2, 2);
  const LinearExpression bonet = catalog(ExpressionSpec::bonet());
  const double q = bonet.evaluate(postselect(dummy_input_extension(born_table(chsh_strategy())), s));
  require(std::abs(q - (3 + std::sqrt(2.0)) / 2) < 1e-9, "quantum CHSH extension gives " + str(q));
  const Rational g = bonet.evaluate(postselect(dummy_input_extension(pr_box()), s));
  require(g == fraction(5, 2), "PR extension gives " + to_string(g));
}

void criterion8() {
  const Scenario s = Scenario::instrumental(2, 2, 2);
  const Correlation q = postselect(pr_box(), s);
  const MembershipCertificate m = membership(q.entries, classical_polytope(s));
  require(m.inside(), "post-selected PR box reported outside");
  RationalVector lambda_model(s.dimension());
  for (int lam = 0; lam < 2; ++lam)
    for (int x = 0; x < 2; ++x) {
      const int a = (lam + x) % 2;
      const int b = (lam * a) % 2;
      lambda_model[s.index(x, a, b)] += fraction(1, 2);
    }
  require(lambda_model == q.entries, "lambda strategies do not reproduce the table");
}

void criterion9() {
  for (const char* text : {"1", "3/2", "2", "3", "5", "10"}) {
    const Rational alpha = parse_rational(text);
    const double al = alpha.get_d();
    const TiltedResult r = tilted_search(alpha);
    require(std::abs(r.value - 2 * std::sqrt(al * al + 1)) < 1e-6, "see-saw value " + str(r.value) + " for alpha " + text);
    const LinearExpression e = catalog(ExpressionSpec::tilted(alpha));
    require(classical_max(e) == 1 + alpha, "classical max for alpha " + std::string(text));
    require(gpt_max(e) == fraction(3, 2) + alpha, "GPT max for alpha " + std::string(text));
    const double derived = (2 + al + std::sqrt(al * al + 1)) / 2;
    require(std::abs(r.instrumental_value - derived) < 1e-6,
            "quantum instrumental value " + str(r.instrumental_value) + " for alpha " + text);
    const BoundsTriple b = bounds(ExpressionSpec::tilted(alpha));
    std::cout << "    alpha " << text << ": quantum " << b.quantum.to_string() << " = " << str(r.instrumental_value)
              << " (literature form " << b.quantum_literature->to_string() << " = " << str(b.quantum_literature->approx())
              << ")\n";
  }
}

void criterion10() {
  for (int n = 2; n <= 6; ++n) {
    const LinearExpression e = catalog(ExpressionSpec::chained(n));
    require(classical_max(e) == n, "classical max for N = " + std::to_string(n));
    require(gpt_max(e) == fraction(2 * n + 1, 2), "GPT max for N = " + std::to_string(n));
    const double q = e.evaluate(induced_instrumental_table(chained_strategy(n), e.scenario, 1));
    const double expected = n * (0.5 + 0.5 * std::cos(M_PI / (2 * n))) + 0.5;
    require(std::abs(q - expected) < 1e-9, "quantum value " + str(q) + " for N = " + std::to_string(n));
  }
}

void criterion11() {
  std::mt19937_64 rng(7);
  // No-signalling of Born tables.
  std::vector<QuantumStrategy> strategies{chsh_strategy(), bonet_strategy()};
  for (int n = 2; n <= 6; ++n) strategies.push_back(chained_strategy(n));
  std::uniform_real_distribution<double> angle(0, 2 * M_PI), unit(0, 1);
  for (int t = 0; t < 50; ++t) {
    QuantumStrategy q;
    q.alice = {Observable2::from_angle(angle(rng)), Observable2::from_angle(angle(rng)), Observable2::from_angle(angle(rng))};
    q.bob = {Observable2::from_angle(angle(rng)), Observable2::from_angle(angle(rng))};
    q.state = TwoQubitState::phi_plus().mix(unit(rng), TwoQubitState::product(Eigen::Vector2cd(unit(rng), unit(rng)),
                                                                              Eigen::Vector2cd(unit(rng), unit(rng))));
    strategies.push_back(q);
  }
  for (const auto& q : strategies) require(validate(born_table(q), 1e-12).ok(), "Born table is signalling");

  // Affinity of post-selection and commutation of lifting.
  const std::vector<ExpressionSpec> specs{ExpressionSpec::bonet(), ExpressionSpec::tilted(3), ExpressionSpec::chained(3)};
  for (const auto& spec : specs) {
    const LinearExpression e = catalog(spec);
    const LinearExpression l = lift_to_bell(e);
    for (int t = 0; t < 100; ++t) {
      const Correlation p = sample_nosignalling(l.scenario, rng), r = sample_nosignalling(l.scenario, rng);
      const Rational w = fraction(t + 1, 102);
      require(postselect(mix({p, r}, {w, 1 - w}), e.scenario).entries ==
                  mix({postselect(p, e.scenario), postselect(r, e.scenario)}, {w, 1 - w}).entries,
              "post-selection is not affine");
      require(l.evaluate(p) == e.evaluate(postselect(p, e.scenario)), "lift does not commute with evaluation");
    }
  }

  // Membership against facets.
  for (const auto& s : {Scenario::instrumental(2, 2, 2), Scenario::instrumental(3, 2, 2), Scenario::instrumental(2, 3, 3)}) {
    const VPolytope v = classical_polytope(s);
    const HPolytope h = facet_enumeration(v);
    std::size_t inside = 0;
    for (int t = 0; t < 100; ++t) {
      const Correlation q = t % 2 ? random_simplex_point(s, rng) : sample_classical(s, rng);
      const MembershipCertificate m = membership(q.entries, v);
      require(m.inside() == h.contains(q.entries), "membership disagrees with facets on " + s.describe());
      if (m.inside()) {
        ++inside;
        RationalVector sum(v.dim);
        for (std::size_t i = 0; i < v.vertices.size(); ++i)
          for (std::size_t j = 0; j < v.dim; ++j) sum[j] += m.weights[i] * v.vertices[i][j];
        require(sum == q.entries, "membership weights do not reproduce the point");
      } else {
        require(m.separator && !m.separator->satisfied_by(q.entries) && implies(h, *m.separator),
                "separator is not a valid cut");
      }
    }
    std::cout << "    " << s.describe() << ": " << inside << "/100 inside\n";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria{
      {"binary instrumental: classical hull equals projected no-signalling polytope, 4 Pearl facets", criterion1},
      {"three inputs: classical facets are positivity, Pearl and Bonet; no-signalling only positivity and Pearl",
       criterion2},
      {"nA = nB in {3, 4}: classical facets are positivity and Pearl", criterion3},
      {"Bonet quantum value (3+sqrt2)/2", criterion4},
      {"GPT box search reaches 5/2 and satisfies Pearl", criterion5},
      {"lifting identities vanish on 500 no-signalling samples", criterion6},
      {"CHSH chain through the dummy-input extension", criterion7},
      {"post-selected PR box has a classical model", criterion8},
      {"tilted bounds", criterion9},
      {"chained bounds for N = 2..6", criterion10},
      {"property suite", criterion11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      criteria[i].second();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " (" << std::fixed << std::setprecision(2) << secs << std::defaultfloat
              << " s)";
    if (!ok) std::cout << ": " << detail;
    std::cout << std::endl;
    failures += !ok;
  }
  return failures == 0 ? 0 : 1;
}
