#include "instrumental/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "instrumental/linear_program.hpp"

namespace instrumental {

namespace {

struct InequalityLess {
  bool operator()(const LinearInequality& a, const LinearInequality& b) const { return lexicographic_less(a, b); }
};

/// Normalization equalities, one per block.
std::vector<LinearEquality> block_equalities(const Scenario& s) {
  std::vector<LinearEquality> eqs;
  const std::size_t size = s.block_size();
  for (std::size_t k = 0; k < s.block_count(); ++k) {
    RationalVector c(s.dimension());
    for (std::size_t j = 0; j < size; ++j) c[k * size + j] = 1;
    eqs.push_back({std::move(c), Rational(1)});
  }
  return eqs;
}

void require_binary(const Scenario& s, const char* what) {
  if (s.na() != 2 || s.nb() != 2) throw ShapeError(std::string(what) + " needs binary outputs");
}

}  // namespace

// ---------------------------------------------------------------------------
// Expressions

LinearExpression::LinearExpression(Scenario s, RationalVector c, Rational k, std::string name)
    : scenario(std::move(s)), coeffs(std::move(c)), constant(std::move(k)), label(std::move(name)) {
  if (coeffs.size() != scenario.dimension()) {
    throw ShapeError("expression has " + std::to_string(coeffs.size()) + " coefficients, scenario " +
                     scenario.describe() + " needs " + std::to_string(scenario.dimension()));
  }
}

LinearExpression::LinearExpression(Scenario s)
    : LinearExpression(s, RationalVector(s.dimension()), Rational(0)) {}

Rational LinearExpression::evaluate(const Correlation& p) const {
  if (!(p.scenario == scenario)) throw ShapeError("expression and correlation live on different scenarios");
  return dot(coeffs, p.entries) + constant;
}

double LinearExpression::evaluate(const NumericCorrelation& p) const {
  if (!(p.scenario == scenario)) throw ShapeError("expression and correlation live on different scenarios");
  double sum = constant.get_d();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (sgn(coeffs[i]) != 0) sum += coeffs[i].get_d() * p.entries[i];
  }
  return sum;
}

LinearInequality LinearExpression::at_most(const Rational& bound) const {
  return LinearInequality{coeffs, bound - constant};
}

void ExpressionSpec::check() const {
  switch (kind) {
    case ExpressionKind::Tilted:
    case ExpressionKind::TiltedChsh:
      if (alpha < 1) throw std::invalid_argument("alpha must be at least 1, got " + instrumental::to_string(alpha));
      break;
    case ExpressionKind::Chained:
    case ExpressionKind::ChainedBell:
      if (n < 2) throw std::invalid_argument("N must be at least 2, got " + std::to_string(n));
      break;
    default:
      break;
  }
}

bool ExpressionSpec::instrumental() const {
  return kind == ExpressionKind::Bonet || kind == ExpressionKind::Tilted || kind == ExpressionKind::Chained;
}

std::string ExpressionSpec::label() const {
  switch (kind) {
    case ExpressionKind::Tilted:
    case ExpressionKind::TiltedChsh:
      return to_string(kind) + "(" + instrumental::to_string(alpha) + ")";
    case ExpressionKind::Chained:
    case ExpressionKind::ChainedBell:
      return to_string(kind) + "(" + std::to_string(n) + ")";
    default:
      return to_string(kind);
  }
}

std::string to_string(ExpressionKind kind) {
  switch (kind) {
    case ExpressionKind::Bonet: return "bonet";
    case ExpressionKind::Tilted: return "tilted";
    case ExpressionKind::Chained: return "chained";
    case ExpressionKind::Chsh: return "chsh";
    case ExpressionKind::TiltedChsh: return "tilted_chsh";
    case ExpressionKind::ChainedBell: return "chained_bell";
  }
  return "?";
}

ExpressionKind parse_expression_kind(const std::string& text) {
  for (auto k : {ExpressionKind::Bonet, ExpressionKind::Tilted, ExpressionKind::Chained, ExpressionKind::Chsh,
                 ExpressionKind::TiltedChsh, ExpressionKind::ChainedBell}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown expression kind '" + text + "'");
}

Scenario expression_scenario(const ExpressionSpec& spec) {
  spec.check();
  switch (spec.kind) {
    case ExpressionKind::Bonet:
    case ExpressionKind::Tilted: return Scenario::instrumental(3, 2, 2);
    case ExpressionKind::Chained: return Scenario::chained(spec.n);
    case ExpressionKind::Chsh:
    case ExpressionKind::TiltedChsh: return Scenario::bell(2, 2, 2, 2);
    case ExpressionKind::ChainedBell: return Scenario::bell(spec.n, spec.n, 2, 2);
  }
  throw std::logic_error("unhandled expression kind");
}

LinearExpression correlator(const Scenario& bell, int x, int y) {
  if (!bell.is_bell()) throw ShapeError("correlators need a Bell scenario");
  require_binary(bell, "correlator");
  LinearExpression e(bell);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) e.coeffs[bell.index(x, y, a, b)] = (a + b) % 2 == 0 ? 1 : -1;
  }
  e.label = "<A" + std::to_string(x) + "B" + std::to_string(y) + ">";
  return e;
}

namespace {

void add_scaled(LinearExpression& into, const LinearExpression& e, const Rational& w) {
  for (std::size_t i = 0; i < into.coeffs.size(); ++i) {
    if (sgn(e.coeffs[i]) != 0) into.coeffs[i] += w * e.coeffs[i];
  }
  into.constant += w * e.constant;
}

}  // namespace

LinearExpression catalog(const ExpressionSpec& spec) {
  const Scenario s = expression_scenario(spec);
  LinearExpression e(s);
  e.label = spec.label();
  auto p = [&](int x, int a, int b) -> Rational& { return e.coeffs[s.index(x, a, b)]; };
  switch (spec.kind) {
    case ExpressionKind::Bonet:
    case ExpressionKind::Tilted: {
      // At alpha = 1 the marginal terms vanish and this is the bonet expression.
      const Rational& al = spec.alpha;
      const Rational half_gap = (1 - al) / 2;
      for (int x = 0; x < 2; ++x) {
        for (int b = 0; b < 2; ++b) p(x, 0, b) += half_gap;
      }
      p(0, 0, 0) += al;
      p(0, 1, 1) += 1;
      p(1, 0, 0) += al;
      p(1, 1, 0) += 1;
      p(2, 0, 1) += al;
      break;
    }
    case ExpressionKind::Chained: {
      const int n = spec.n;
      for (int j = 1; j < n; ++j) {
        p(j, 0, 0) += 1;
        p(j, 1, 1) += 1;
      }
      p(0, 0, 0) += 1;
      p(0, 1, 0) += 1;
      p(n, 1, 1) += 1;
      break;
    }
    case ExpressionKind::Chsh:
    case ExpressionKind::TiltedChsh: {
      const Rational& al = spec.alpha;
      add_scaled(e, correlator(s, 0, 0), al);
      add_scaled(e, correlator(s, 0, 1), Rational(1));
      add_scaled(e, correlator(s, 1, 0), al);
      add_scaled(e, correlator(s, 1, 1), Rational(-1));
      break;
    }
    case ExpressionKind::ChainedBell: {
      const int n = spec.n;
      for (int j = 0; j < n; ++j) add_scaled(e, correlator(s, j, j), Rational(1));
      for (int j = 1; j < n; ++j) add_scaled(e, correlator(s, j, j - 1), Rational(1));
      add_scaled(e, correlator(s, 0, n - 1), Rational(-1));
      break;
    }
  }
  return e;
}

std::vector<LinearExpression> pearl_expressions(const Scenario& s) {
  if (s.is_bell()) throw ShapeError("Pearl expressions live on instrumental scenarios");
  std::vector<LinearExpression> out;
  const int nx = s.nx(), na = s.na(), nb = s.nb();
  std::vector<int> choice(static_cast<std::size_t>(nb), 0);
  for (int a = 0; a < na; ++a) {
    std::fill(choice.begin(), choice.end(), 0);
    while (true) {
      const bool constant = std::all_of(choice.begin(), choice.end(), [&](int v) { return v == choice[0]; });
      if (!constant) {
        LinearExpression e(s);
        std::ostringstream label;
        label << "pearl(a=" << a << ";x_b=";
        for (int b = 0; b < nb; ++b) {
          e.coeffs[s.index(choice[static_cast<std::size_t>(b)], a, b)] += 1;
          label << (b ? "," : "") << choice[static_cast<std::size_t>(b)];
        }
        label << ")";
        e.label = label.str();
        out.push_back(std::move(e));
      }
      int pos = nb - 1;
      while (pos >= 0 && choice[static_cast<std::size_t>(pos)] == nx - 1) choice[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
      ++choice[static_cast<std::size_t>(pos)];
    }
  }
  return out;
}

LinearExpression lift_to_bell(const LinearExpression& e) {
  const Scenario& s = e.scenario;
  if (s.is_bell()) throw ShapeError("lifting needs an instrumental expression");
  const Scenario bell = s.parent_bell();
  LinearExpression out(bell);
  out.constant = e.constant;
  out.label = e.label.empty() ? std::string() : "lift[" + e.label + "]";
  for (int x = 0; x < s.nx(); ++x) {
    for (int a = 0; a < s.na(); ++a) {
      for (int b = 0; b < s.nb(); ++b) out.coeffs[bell.index(x, s.wiring(a, x), a, b)] = e.coeffs[s.index(x, a, b)];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bounds

SymbolicValue SymbolicValue::exact(Rational r) {
  SymbolicValue v;
  v.rational = std::move(r);
  return v;
}

SymbolicValue SymbolicValue::with_sqrt(Rational r, Rational c, const Rational& q) {
  if (sgn(q) < 0) throw std::domain_error("square root of a negative number");
  // sqrt(p/d) = sqrt(p d) / d
  Integer m = q.get_num() * q.get_den();
  c /= q.get_den();
  Integer square = 1;
  for (Integer f = 2; f * f <= m; ++f) {
    while (m % (f * f) == 0) {
      m /= f * f;
      square *= f;
    }
  }
  c *= square;
  SymbolicValue v;
  v.rational = std::move(r);
  if (m == 1 || sgn(c) == 0) {
    v.rational += (m == 1 ? c : Rational(0));
    return v;
  }
  v.coefficient = std::move(c);
  v.irrational = Irrational::Sqrt;
  v.radicand = m;
  return v;
}

SymbolicValue SymbolicValue::with_cos(Rational r, Rational c, int n) {
  if (n < 1) throw std::invalid_argument("cos(pi/2n) needs n >= 1");
  SymbolicValue v;
  v.rational = std::move(r);
  if (n == 1) return v;  // cos(pi/2) = 0
  v.coefficient = std::move(c);
  v.irrational = Irrational::CosPiOver2N;
  v.n = n;
  return v;
}

double SymbolicValue::approx() const {
  double out = rational.get_d();
  switch (irrational) {
    case Irrational::None: break;
    case Irrational::Sqrt: out += coefficient.get_d() * std::sqrt(radicand.get_d()); break;
    case Irrational::CosPiOver2N: out += coefficient.get_d() * std::cos(std::numbers::pi / (2.0 * n)); break;
  }
  return out;
}

std::string SymbolicValue::to_string() const {
  if (irrational == Irrational::None || sgn(coefficient) == 0) return instrumental::to_string(rational);
  std::ostringstream os;
  if (sgn(rational) != 0) os << instrumental::to_string(rational) << (sgn(coefficient) > 0 ? " + " : " - ");
  else if (sgn(coefficient) < 0) os << "-";
  const Rational mag = abs(coefficient);
  if (mag != 1) os << instrumental::to_string(mag) << "*";
  if (irrational == Irrational::Sqrt) {
    os << "sqrt(" << radicand.get_str() << ")";
  } else {
    os << "cos(pi/" << 2 * n << ")";
  }
  return os.str();
}

BoundsTriple bounds(const ExpressionSpec& spec) {
  spec.check();
  BoundsTriple t;
  t.label = spec.label();
  const Rational& al = spec.alpha;
  const int n = spec.n;
  switch (spec.kind) {
    case ExpressionKind::Bonet:
      t.classical = 2;
      t.quantum = SymbolicValue::with_sqrt(Rational(3, 2), Rational(1, 2), Rational(2));
      t.gpt = Rational(5, 2);
      break;
    case ExpressionKind::Tilted:
      // (1/4) 2 sqrt(alpha^2+1) + 1 + alpha/2 from the lifting identity.
      t.classical = 1 + al;
      t.quantum = SymbolicValue::with_sqrt((2 + al) / 2, Rational(1, 2), al * al + 1);
      t.gpt = Rational(3, 2) + al;
      t.quantum_literature = SymbolicValue::with_sqrt((1 + al) / 2, Rational(1, 2), al * al + 1);
      break;
    case ExpressionKind::Chained:
      t.classical = n;
      t.quantum = SymbolicValue::with_cos(fraction(n + 1, 2), fraction(n, 2), n);
      t.gpt = fraction(2 * n + 1, 2);
      break;
    case ExpressionKind::Chsh:
      t.classical = 2;
      t.quantum = SymbolicValue::with_sqrt(Rational(0), Rational(2), Rational(2));
      t.gpt = 4;
      break;
    case ExpressionKind::TiltedChsh:
      t.classical = 2 * al;
      t.quantum = SymbolicValue::with_sqrt(Rational(0), Rational(2), al * al + 1);
      t.gpt = 2 * (1 + al);
      break;
    case ExpressionKind::ChainedBell:
      t.classical = 2 * n - 2;
      t.quantum = SymbolicValue::with_cos(Rational(0), Rational(2 * n), n);
      t.gpt = 2 * n;
      break;
  }
  return t;
}

LinearExpression lifting_identity_rhs(const ExpressionSpec& spec) {
  spec.check();
  if (!spec.instrumental()) throw std::invalid_argument("no lifting identity for " + spec.label());
  const Scenario bell = expression_scenario(spec).parent_bell();
  LinearExpression e(bell);
  e.label = "identity rhs " + spec.label();
  const Rational quarter(1, 4);
  if (spec.kind == ExpressionKind::Chained) {
    const int n = spec.n;
    for (int j = 0; j < n; ++j) add_scaled(e, correlator(bell, j, j), quarter);
    for (int j = 1; j < n; ++j) add_scaled(e, correlator(bell, j, j - 1), quarter);
    add_scaled(e, correlator(bell, 0, n - 1), -quarter);
    e.coeffs[bell.index(n, n - 1, 0, 1)] -= 1;
    e.constant += fraction(n + 1, 2);
  } else {
    const Rational& al = spec.alpha;
    add_scaled(e, correlator(bell, 0, 0), quarter * al);
    add_scaled(e, correlator(bell, 0, 1), quarter);
    add_scaled(e, correlator(bell, 1, 0), quarter * al);
    add_scaled(e, correlator(bell, 1, 1), -quarter);
    e.coeffs[bell.index(2, 0, 1, 1)] -= al;
    e.constant += 1 + al / 2;
  }
  return e;
}

Rational identity_check(const ExpressionSpec& spec, const Correlation& p) {
  const LinearExpression lifted = lift_to_bell(catalog(spec));
  if (!(p.scenario == lifted.scenario)) {
    throw ShapeError("identity for " + spec.label() + " needs a correlation over " + lifted.scenario.describe());
  }
  const ValidationReport report = validate(p);
  if (!report.ok()) {
    throw SignallingError("lifting identity holds only for normalized no-signalling input");
  }
  return lifted.evaluate(p) - lifting_identity_rhs(spec).evaluate(p);
}

// ---------------------------------------------------------------------------
// Symmetry

Permutation compose(const Permutation& outer, const Permutation& inner) {
  Permutation out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

SymmetryGroup SymmetryGroup::instrumental(const Scenario& s) {
  if (s.kind() != ScenarioKind::Instrumental) throw ShapeError("instrumental symmetry needs an instrumental scenario");
  const int nx = s.nx(), na = s.na(), nb = s.nb();
  std::vector<Permutation> gens;
  auto make = [&](auto&& map) {
    Permutation g(s.dimension());
    for (int x = 0; x < nx; ++x) {
      for (int a = 0; a < na; ++a) {
        for (int b = 0; b < nb; ++b) {
          auto [x2, a2, b2] = map(x, a, b);
          g[s.index(x, a, b)] = s.index(x2, a2, b2);
        }
      }
    }
    gens.push_back(std::move(g));
  };
  auto swap_adjacent = [](int v, int k) { return v == k ? k + 1 : (v == k + 1 ? k : v); };
  for (int k = 0; k + 1 < nx; ++k) {
    make([&](int x, int a, int b) { return std::tuple{swap_adjacent(x, k), a, b}; });
  }
  for (int k = 0; k + 1 < na; ++k) {
    make([&](int x, int a, int b) { return std::tuple{x, swap_adjacent(a, k), b}; });
  }
  for (int a0 = 0; a0 < na; ++a0) {
    for (int k = 0; k + 1 < nb; ++k) {
      make([&](int x, int a, int b) { return std::tuple{x, a, a == a0 ? swap_adjacent(b, k) : b}; });
    }
  }
  return SymmetryGroup(s, std::move(gens));
}

SymmetryGroup SymmetryGroup::bell(const Scenario& s) {
  if (!s.is_bell()) throw ShapeError("Bell symmetry needs a Bell scenario");
  const int nx = s.nx(), ny = s.ny(), na = s.na(), nb = s.nb();
  std::vector<Permutation> gens;
  auto make = [&](auto&& map) {
    Permutation g(s.dimension());
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y)
        for (int a = 0; a < na; ++a)
          for (int b = 0; b < nb; ++b) {
            auto [x2, y2, a2, b2] = map(x, y, a, b);
            g[s.index(x, y, a, b)] = s.index(x2, y2, a2, b2);
          }
    gens.push_back(std::move(g));
  };
  auto sw = [](int v, int k) { return v == k ? k + 1 : (v == k + 1 ? k : v); };
  for (int k = 0; k + 1 < nx; ++k) make([&](int x, int y, int a, int b) { return std::tuple{sw(x, k), y, a, b}; });
  for (int k = 0; k + 1 < ny; ++k) make([&](int x, int y, int a, int b) { return std::tuple{x, sw(y, k), a, b}; });
  for (int x0 = 0; x0 < nx; ++x0)
    for (int k = 0; k + 1 < na; ++k)
      make([&](int x, int y, int a, int b) { return std::tuple{x, y, x == x0 ? sw(a, k) : a, b}; });
  for (int y0 = 0; y0 < ny; ++y0)
    for (int k = 0; k + 1 < nb; ++k)
      make([&](int x, int y, int a, int b) { return std::tuple{x, y, a, y == y0 ? sw(b, k) : b}; });
  if (nx == ny && na == nb) make([](int x, int y, int a, int b) { return std::tuple{y, x, b, a}; });
  return SymmetryGroup(s, std::move(gens));
}

LinearInequality SymmetryGroup::apply(const Permutation& g, const LinearInequality& ineq) const {
  if (ineq.coeffs.size() != g.size()) throw ShapeError("inequality dimension does not match the group");
  LinearInequality out{RationalVector(g.size()), ineq.bound};
  for (std::size_t i = 0; i < g.size(); ++i) out.coeffs[g[i]] = ineq.coeffs[i];
  return out;
}

namespace {

/// BFS over the group action, recording the element reaching each member.
std::map<LinearInequality, Permutation, InequalityLess> explore(const LinearInequality& start, const SymmetryGroup& g,
                                                                std::size_t limit,
                                                                const LinearInequality* stop = nullptr) {
  const EqualityReducer reducer(block_equalities(g.scenario()), g.scenario().dimension());
  Permutation identity(g.scenario().dimension());
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  std::map<LinearInequality, Permutation, InequalityLess> seen;
  std::deque<LinearInequality> queue;
  LinearInequality first = reducer.normal_form(start);
  seen.emplace(first, identity);
  queue.push_back(first);
  while (!queue.empty()) {
    LinearInequality cur = std::move(queue.front());
    queue.pop_front();
    if (stop && cur == *stop) break;
    const Permutation path = seen.at(cur);
    for (const auto& gen : g.generators()) {
      LinearInequality next = reducer.normal_form(g.apply(gen, cur));
      if (seen.count(next)) continue;
      if (seen.size() >= limit) throw CapacityError("orbit exceeds " + std::to_string(limit) + " members");
      seen.emplace(next, compose(gen, path));
      queue.push_back(std::move(next));
    }
  }
  return seen;
}

}  // namespace

std::vector<LinearInequality> orbit(const LinearInequality& ineq, const SymmetryGroup& g, std::size_t limit) {
  std::vector<LinearInequality> out;
  for (auto& [member, path] : explore(ineq, g, limit)) out.push_back(member);
  return out;
}

std::optional<Permutation> find_relabelling(const LinearInequality& from, const LinearInequality& to,
                                            const SymmetryGroup& g, std::size_t limit) {
  const EqualityReducer reducer(block_equalities(g.scenario()), g.scenario().dimension());
  const LinearInequality target = reducer.normal_form(to);
  auto seen = explore(from, g, limit, &target);
  auto it = seen.find(target);
  if (it == seen.end()) return std::nullopt;
  return it->second;
}

std::string to_string(OrbitTag tag) {
  switch (tag) {
    case OrbitTag::Positivity: return "positivity";
    case OrbitTag::Pearl: return "pearl";
    case OrbitTag::Bonet: return "bonet";
    case OrbitTag::Unknown: return "unknown";
  }
  return "?";
}

std::optional<LinearInequality> bonet_facet(const Scenario& s) {
  if (s.kind() != ScenarioKind::Instrumental || s.nx() < 3 || s.na() != 2 || s.nb() != 2) return std::nullopt;
  const LinearExpression b = catalog(ExpressionSpec::bonet());
  LinearInequality ineq{RationalVector(s.dimension()), Rational(2)};
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 2; ++a)
      for (int bb = 0; bb < 2; ++bb) ineq.coeffs[s.index(x, a, bb)] = b.coeffs[b.scenario.index(x, a, bb)];
  return EqualityReducer(block_equalities(s), s.dimension()).normal_form(ineq);
}

std::vector<FacetOrbit> facet_orbit_classify(const std::vector<LinearInequality>& facets, const SymmetryGroup& g) {
  const Scenario& s = g.scenario();
  const EqualityReducer reducer(block_equalities(s), s.dimension());
  std::map<LinearInequality, std::size_t, InequalityLess> index;
  std::vector<LinearInequality> forms;
  for (std::size_t i = 0; i < facets.size(); ++i) {
    forms.push_back(reducer.normal_form(facets[i]));
    index.emplace(forms.back(), i);
  }
  std::vector<std::size_t> parent(facets.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < forms.size(); ++i) {
    for (const auto& gen : g.generators()) {
      auto it = index.find(reducer.normal_form(g.apply(gen, forms[i])));
      if (it == index.end()) continue;
      std::size_t a = find(i), b = find(it->second);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  std::set<LinearInequality, InequalityLess> pearl_forms;
  if (!s.is_bell()) {
    for (const auto& e : pearl_expressions(s)) pearl_forms.insert(reducer.normal_form(e.at_most(Rational(1))));
  }
  const auto bonet = bonet_facet(s);
  auto is_positivity = [](const LinearInequality& f) {
    std::size_t nonzero = 0;
    bool neg_unit = false;
    for (const auto& c : f.coeffs) {
      if (sgn(c) != 0) {
        ++nonzero;
        neg_unit = c == -1;
      }
    }
    return nonzero == 1 && neg_unit && sgn(f.bound) == 0;
  };

  std::map<std::size_t, FacetOrbit> by_root;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    FacetOrbit& o = by_root[find(i)];
    if (o.members.empty() || lexicographic_less(forms[i], o.representative)) o.representative = forms[i];
    o.members.push_back(i);
    OrbitTag tag = OrbitTag::Unknown;
    if (is_positivity(forms[i])) tag = OrbitTag::Positivity;
    else if (pearl_forms.count(forms[i])) tag = OrbitTag::Pearl;
    else if (bonet && forms[i] == *bonet) tag = OrbitTag::Bonet;
    if (tag != OrbitTag::Unknown) o.tag = tag;
  }
  // Orbits whose tagged member is absent from the list are matched by
  // exploring from the representative.
  for (auto& [root, o] : by_root) {
    if (o.tag != OrbitTag::Unknown) continue;
    for (const auto& member : orbit(o.representative, g)) {
      if (is_positivity(member)) o.tag = OrbitTag::Positivity;
      else if (pearl_forms.count(member)) o.tag = OrbitTag::Pearl;
      else if (bonet && member == *bonet) o.tag = OrbitTag::Bonet;
      if (o.tag != OrbitTag::Unknown) break;
    }
  }
  std::vector<FacetOrbit> out;
  for (auto& [root, o] : by_root) out.push_back(std::move(o));
  std::sort(out.begin(), out.end(),
            [](const FacetOrbit& a, const FacetOrbit& b) { return lexicographic_less(a.representative, b.representative); });
  return out;
}

LinearExpression to_instrumental_frame(const LinearExpression& e) {
  const Scenario& s = e.scenario;
  if (s.kind() == ScenarioKind::Instrumental) return e;
  if (s.kind() != ScenarioKind::FInstrumental || s.ny() != s.na()) {
    throw ShapeError("expression is not over a relabelled instrumental scenario");
  }
  for (int x = 0; x < s.nx(); ++x) {
    std::vector<bool> hit(static_cast<std::size_t>(s.na()), false);
    for (int a = 0; a < s.na(); ++a) hit[static_cast<std::size_t>(s.wiring(a, x))] = true;
    if (!std::all_of(hit.begin(), hit.end(), [](bool h) { return h; })) {
      throw ShapeError("wiring does not permute Alice's outputs for input " + std::to_string(x));
    }
  }
  const Scenario target = Scenario::instrumental(s.nx(), s.na(), s.nb());
  LinearExpression out(target);
  out.constant = e.constant;
  out.label = e.label;
  for (int x = 0; x < s.nx(); ++x)
    for (int a = 0; a < s.na(); ++a)
      for (int b = 0; b < s.nb(); ++b) out.coeffs[target.index(x, s.wiring(a, x), b)] = e.coeffs[s.index(x, a, b)];
  return out;
}

// ---------------------------------------------------------------------------
// Extension membership

std::string to_string(Theory theory) { return theory == Theory::Classical ? "classical" : "nosignalling"; }

Theory parse_theory(const std::string& text) {
  if (text == "classical") return Theory::Classical;
  if (text == "nosignalling" || text == "no-signalling" || text == "gpt") return Theory::NoSignalling;
  throw std::invalid_argument("unknown theory '" + text + "' (classical | nosignalling)");
}

VPolytope postselected_classical_vertices(const Scenario& s) {
  if (s.is_bell()) throw ShapeError("post-selection needs an instrumental scenario");
  const Scenario bell = s.parent_bell();
  const auto coords = postselection_coordinates(bell, s);
  std::vector<RationalVector> points;
  for (const auto& c : deterministic_correlations(bell)) {
    RationalVector v;
    v.reserve(coords.size());
    for (std::size_t i : coords) v.push_back(c.entries[i]);
    points.push_back(std::move(v));
  }
  return VPolytope::from_points(std::move(points));
}

MembershipCertificate extension_membership(const Correlation& p, Theory theory) {
  const Scenario& s = p.scenario;
  if (s.is_bell()) throw ShapeError("extension membership needs an instrumental correlation");
  if (theory == Theory::Classical) return membership(p.entries, postselected_classical_vertices(s));

  const Scenario bell = s.parent_bell();
  const auto coords = postselection_coordinates(bell, s);
  const HPolytope ns = no_signalling_polytope(bell);
  LinearProgram lp(bell.dimension());
  lp.set_all_nonnegative();
  for (const auto& e : ns.equalities) lp.add_eq(e.coeffs, e.rhs);
  const std::size_t first_pin = lp.eq_rows.size();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    RationalVector row(bell.dimension());
    row[coords[i]] = 1;
    lp.add_eq(std::move(row), p.entries[i]);
  }
  LpResult res = solve(lp);
  MembershipCertificate cert;
  if (res.status == LpStatus::Optimal) {
    cert.verdict = MembershipCertificate::Verdict::Inside;
    cert.witness = res.x;
    return cert;
  }
  // Farkas ray y: y·A >= 0, y·rhs < 0. Every extendable q then satisfies
  // -y_pin · q <= y_ns · rhs_ns, which p violates.
  cert.verdict = MembershipCertificate::Verdict::Outside;
  LinearInequality sep{RationalVector(coords.size()), Rational(0)};
  for (std::size_t k = 0; k < first_pin; ++k) sep.bound += res.eq_duals[k] * lp.eq_rhs[k];
  for (std::size_t i = 0; i < coords.size(); ++i) sep.coeffs[i] = -res.eq_duals[first_pin + i];
  const EqualityReducer reducer(block_equalities(s), s.dimension());
  LinearInequality nf = reducer.normal_form(sep);
  cert.separator = std::move(nf);
  return cert;
}

}  // namespace instrumental
