#include "instrumental/scenario.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace instrumental {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Bell:
      return "bell";
    case ScenarioKind::Instrumental:
      return "instrumental";
    case ScenarioKind::FInstrumental:
      return "finstrumental";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& text) {
  if (text == "bell" || text == "Bell") return ScenarioKind::Bell;
  if (text == "instrumental" || text == "Instrumental") return ScenarioKind::Instrumental;
  if (text == "finstrumental" || text == "FInstrumental" || text == "f-instrumental") return ScenarioKind::FInstrumental;
  throw std::invalid_argument("unknown scenario kind '" + text + "'");
}

Scenario::Scenario(ScenarioKind kind, int nx, int ny, int na, int nb, std::vector<std::vector<int>> wiring)
    : kind_(kind), nx_(nx), ny_(ny), na_(na), nb_(nb), wiring_(std::move(wiring)) {
  if (nx_ < 1 || ny_ < 1) throw std::invalid_argument("input cardinalities must be at least 1");
  if (na_ < 2 || nb_ < 2) throw std::invalid_argument("output cardinalities must be at least 2");
  if (kind_ != ScenarioKind::Bell) {
    if (wiring_.size() != static_cast<std::size_t>(na_)) throw std::invalid_argument("wiring table needs one row per output a");
    for (const auto& row : wiring_) {
      if (row.size() != static_cast<std::size_t>(nx_)) throw std::invalid_argument("wiring table needs one entry per input x");
      for (int y : row) {
        if (y < 0 || y >= ny_) throw std::invalid_argument("wiring entry outside [0, nY)");
      }
    }
  }
}

Scenario Scenario::bell(int nx, int ny, int na, int nb) { return Scenario(ScenarioKind::Bell, nx, ny, na, nb, {}); }

Scenario Scenario::instrumental(int nx, int na, int nb) {
  std::vector<std::vector<int>> wiring(static_cast<std::size_t>(std::max(na, 0)));
  for (int a = 0; a < na; ++a) wiring[static_cast<std::size_t>(a)].assign(static_cast<std::size_t>(std::max(nx, 0)), a);
  return Scenario(ScenarioKind::Instrumental, nx, na, na, nb, std::move(wiring));
}

Scenario Scenario::f_instrumental(int nx, int ny, int na, int nb, std::vector<std::vector<int>> wiring) {
  return Scenario(ScenarioKind::FInstrumental, nx, ny, na, nb, std::move(wiring));
}

Scenario Scenario::chained(int n) {
  if (n < 2) throw std::invalid_argument("chained scenario needs N >= 2");
  std::vector<std::vector<int>> wiring(2, std::vector<int>(static_cast<std::size_t>(n + 1)));
  for (int a = 0; a < 2; ++a) {
    for (int x = 0; x <= n; ++x) wiring[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)] = ((x - a) % n + n) % n;
  }
  return f_instrumental(n + 1, n, 2, 2, std::move(wiring));
}

int Scenario::wiring(int a, int x) const {
  if (kind_ == ScenarioKind::Bell) throw std::logic_error("Bell scenario has no wiring");
  return wiring_[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)];
}

std::size_t Scenario::dimension() const {
  const auto base = static_cast<std::size_t>(nx_ * na_ * nb_);
  return kind_ == ScenarioKind::Bell ? base * static_cast<std::size_t>(ny_) : base;
}

std::size_t Scenario::index(int x, int a, int b) const {
  if (kind_ == ScenarioKind::Bell) throw std::logic_error("Bell coordinates need (x, y, a, b)");
  return static_cast<std::size_t>((x * na_ + a) * nb_ + b);
}

std::size_t Scenario::index(int x, int y, int a, int b) const {
  if (kind_ != ScenarioKind::Bell) throw std::logic_error("instrumental coordinates need (x, a, b)");
  return static_cast<std::size_t>(((x * ny_ + y) * na_ + a) * nb_ + b);
}

std::size_t Scenario::block_count() const {
  return static_cast<std::size_t>(kind_ == ScenarioKind::Bell ? nx_ * ny_ : nx_);
}

Scenario Scenario::parent_bell() const {
  if (kind_ == ScenarioKind::Bell) return *this;
  return bell(nx_, ny_, na_, nb_);
}

std::string Scenario::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(nX=" << nx_;
  if (kind_ != ScenarioKind::Instrumental) os << ", nY=" << ny_;
  os << ", nA=" << na_ << ", nB=" << nb_ << ")";
  return os.str();
}

namespace {

bool advance(std::vector<int>& digits, int base) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

std::vector<DeterministicStrategy> enumerate_deterministic_strategies(const Scenario& s, std::size_t limit) {
  // Bob's response is indexed by his input, which is a for the instrumental
  // scenario (nY = nA) and y otherwise.
  long double count = std::pow(static_cast<long double>(s.na()), s.nx()) * std::pow(static_cast<long double>(s.nb()), s.ny());
  if (count > static_cast<long double>(limit)) {
    throw CapacityError("scenario " + s.describe() + " has more deterministic strategies than the limit " +
                        std::to_string(limit));
  }
  std::vector<DeterministicStrategy> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> alpha(static_cast<std::size_t>(s.nx()), 0);
  do {
    std::vector<int> beta(static_cast<std::size_t>(s.ny()), 0);
    do {
      out.push_back({alpha, beta});
    } while (advance(beta, s.nb()));
  } while (advance(alpha, s.na()));
  return out;
}

Correlation strategy_to_correlation(const DeterministicStrategy& d, const Scenario& s) {
  if (d.alpha.size() != static_cast<std::size_t>(s.nx()) || d.beta.size() != static_cast<std::size_t>(s.ny())) {
    throw ShapeError("strategy tables do not match scenario " + s.describe());
  }
  for (int a : d.alpha) {
    if (a < 0 || a >= s.na()) throw ShapeError("alpha entry outside output range");
  }
  for (int b : d.beta) {
    if (b < 0 || b >= s.nb()) throw ShapeError("beta entry outside output range");
  }
  std::vector<Rational> entries(s.dimension(), Rational(0));
  if (s.is_bell()) {
    for (int x = 0; x < s.nx(); ++x) {
      for (int y = 0; y < s.ny(); ++y) entries[s.index(x, y, d.alpha[x], d.beta[y])] = 1;
    }
  } else {
    for (int x = 0; x < s.nx(); ++x) {
      const int a = d.alpha[x];
      entries[s.index(x, a, d.beta[s.wiring(a, x)])] = 1;
    }
  }
  return Correlation(s, std::move(entries));
}

std::vector<Correlation> deterministic_correlations(const Scenario& s, std::size_t limit) {
  std::set<std::vector<Rational>, decltype([](const auto& l, const auto& r) { return compare(l, r) < 0; })> seen;
  for (const auto& d : enumerate_deterministic_strategies(s, limit)) seen.insert(strategy_to_correlation(d, s).entries);
  std::vector<Correlation> out;
  out.reserve(seen.size());
  for (const auto& e : seen) out.emplace_back(s, e);
  return out;
}

std::vector<std::size_t> postselection_coordinates(const Scenario& bell, const Scenario& target) {
  if (!bell.is_bell()) throw ShapeError("post-selection source must be a Bell scenario");
  if (target.is_bell()) throw ShapeError("post-selection target must be an instrumental scenario");
  if (bell.nx() != target.nx() || bell.ny() != target.ny() || bell.na() != target.na() || bell.nb() != target.nb()) {
    throw ShapeError("Bell scenario " + bell.describe() + " does not match target " + target.describe());
  }
  std::vector<std::size_t> coords;
  coords.reserve(target.dimension());
  for (int x = 0; x < target.nx(); ++x) {
    for (int a = 0; a < target.na(); ++a) {
      for (int b = 0; b < target.nb(); ++b) coords.push_back(bell.index(x, target.wiring(a, x), a, b));
    }
  }
  return coords;
}

namespace {

template <typename T>
bool is_zero(const T& v, double tol) {
  if constexpr (std::is_same_v<T, double>) {
    return std::abs(v) <= tol;
  } else {
    (void)tol;
    return sgn(v) == 0;
  }
}

template <typename T>
bool is_negative(const T& v, double tol) {
  if constexpr (std::is_same_v<T, double>) {
    return v < -tol;
  } else {
    (void)tol;
    return sgn(v) < 0;
  }
}

}  // namespace

template <typename T>
BasicCorrelation<T> postselect(const BasicCorrelation<T>& p, const Scenario& target) {
  const auto coords = postselection_coordinates(p.scenario, target);
  std::vector<T> entries;
  entries.reserve(coords.size());
  for (std::size_t c : coords) entries.push_back(p.entries[c]);
  BasicCorrelation<T> out(target, std::move(entries));
  auto report = validate(out, 1e-9);
  if (!report.normalized) {
    throw SignallingError("post-selected table is not normalized (block " +
                          std::to_string(*report.first_unnormalized_block) + "); the Bell input is signalling");
  }
  return out;
}

template <typename T>
BasicCorrelation<T> dummy_input_extension(const BasicCorrelation<T>& p, int forced_output) {
  const Scenario& s = p.scenario;
  if (!s.is_bell()) throw ShapeError("dummy-input extension needs a Bell correlation");
  if (forced_output < 0 || forced_output >= s.na()) throw ShapeError("forced output outside Alice's output range");
  Scenario ext = Scenario::bell(s.nx() + 1, s.ny(), s.na(), s.nb());
  std::vector<T> entries(ext.dimension(), T(0));
  for (int x = 0; x < s.nx(); ++x) {
    for (int y = 0; y < s.ny(); ++y) {
      for (int a = 0; a < s.na(); ++a) {
        for (int b = 0; b < s.nb(); ++b) entries[ext.index(x, y, a, b)] = p.at(x, y, a, b);
      }
    }
  }
  for (int y = 0; y < s.ny(); ++y) {
    for (int b = 0; b < s.nb(); ++b) {
      T marginal(0);
      for (int a = 0; a < s.na(); ++a) marginal += p.at(0, y, a, b);
      entries[ext.index(s.nx(), y, forced_output, b)] = marginal;
    }
  }
  return BasicCorrelation<T>(ext, std::move(entries));
}

template <typename T>
ValidationReport validate(const BasicCorrelation<T>& p, double tolerance) {
  ValidationReport report;
  const Scenario& s = p.scenario;
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    if (is_negative(p.entries[i], tolerance)) {
      report.nonnegative = false;
      report.first_negative = i;
      break;
    }
  }
  const std::size_t bs = s.block_size();
  for (std::size_t blk = 0; blk < s.block_count(); ++blk) {
    T sum(0);
    for (std::size_t j = 0; j < bs; ++j) sum += p.entries[blk * bs + j];
    if (!is_zero(T(sum - T(1)), tolerance)) {
      report.normalized = false;
      report.first_unnormalized_block = blk;
      break;
    }
  }
  if (s.is_bell()) {
    // Alice's marginal p(a|x,y) must not depend on y.
    for (int x = 0; x < s.nx() && report.no_signalling; ++x) {
      for (int a = 0; a < s.na() && report.no_signalling; ++a) {
        T ref(0);
        for (int b = 0; b < s.nb(); ++b) ref += p.at(x, 0, a, b);
        for (int y = 1; y < s.ny(); ++y) {
          T m(0);
          for (int b = 0; b < s.nb(); ++b) m += p.at(x, y, a, b);
          if (!is_zero(T(m - ref), tolerance)) {
            report.no_signalling = false;
            report.first_signalling = s.index(x, y, a, 0);
            break;
          }
        }
      }
    }
    // Bob's marginal p(b|x,y) must not depend on x.
    for (int y = 0; y < s.ny() && report.no_signalling; ++y) {
      for (int b = 0; b < s.nb() && report.no_signalling; ++b) {
        T ref(0);
        for (int a = 0; a < s.na(); ++a) ref += p.at(0, y, a, b);
        for (int x = 1; x < s.nx(); ++x) {
          T m(0);
          for (int a = 0; a < s.na(); ++a) m += p.at(x, y, a, b);
          if (!is_zero(T(m - ref), tolerance)) {
            report.no_signalling = false;
            report.first_signalling = s.index(x, y, 0, b);
            break;
          }
        }
      }
    }
  }
  return report;
}

template BasicCorrelation<Rational> postselect(const BasicCorrelation<Rational>&, const Scenario&);
template BasicCorrelation<double> postselect(const BasicCorrelation<double>&, const Scenario&);
template BasicCorrelation<Rational> dummy_input_extension(const BasicCorrelation<Rational>&, int);
template BasicCorrelation<double> dummy_input_extension(const BasicCorrelation<double>&, int);
template ValidationReport validate(const BasicCorrelation<Rational>&, double);
template ValidationReport validate(const BasicCorrelation<double>&, double);

Correlation wiring_box(int nx, int ny, const std::vector<std::vector<int>>& f) {
  Scenario s = Scenario::bell(nx, ny, 2, 2);
  if (f.size() != static_cast<std::size_t>(nx)) throw ShapeError("wiring box table needs nX rows");
  std::vector<Rational> entries(s.dimension(), Rational(0));
  for (int x = 0; x < nx; ++x) {
    if (f[x].size() != static_cast<std::size_t>(ny)) throw ShapeError("wiring box table needs nY columns");
    for (int y = 0; y < ny; ++y) {
      for (int a = 0; a < 2; ++a) entries[s.index(x, y, a, (a + f[x][y]) % 2)] = Rational(1, 2);
    }
  }
  return Correlation(s, std::move(entries));
}

Correlation pr_box() { return wiring_box(2, 2, {{0, 0}, {0, 1}}); }

Correlation uniform_box(const Scenario& s) {
  return Correlation(s, std::vector<Rational>(s.dimension(), Rational(1, s.na() * s.nb())));
}

Correlation mix(const std::vector<Correlation>& parts, const std::vector<Rational>& weights) {
  if (parts.empty() || parts.size() != weights.size()) throw ShapeError("mix needs one weight per correlation");
  std::vector<Rational> entries(parts.front().entries.size(), Rational(0));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!(parts[i].scenario == parts.front().scenario)) throw ShapeError("mix over different scenarios");
    if (sgn(weights[i]) == 0) continue;
    for (std::size_t j = 0; j < entries.size(); ++j) entries[j] += weights[i] * parts[i].entries[j];
  }
  return Correlation(parts.front().scenario, std::move(entries));
}

NumericCorrelation to_numeric(const Correlation& p) {
  std::vector<double> entries;
  entries.reserve(p.entries.size());
  for (const auto& v : p.entries) entries.push_back(v.get_d());
  return NumericCorrelation(p.scenario, std::move(entries));
}

Correlation rationalize(const NumericCorrelation& p, double tolerance, const Integer& max_denominator) {
  std::vector<Rational> entries;
  entries.reserve(p.entries.size());
  for (double v : p.entries) entries.push_back(rationalize(v, max_denominator));
  const std::size_t bs = p.scenario.block_size();
  for (std::size_t blk = 0; blk < p.scenario.block_count(); ++blk) {
    std::size_t largest = blk * bs;
    Rational sum = 0;
    for (std::size_t j = blk * bs; j < (blk + 1) * bs; ++j) {
      sum += entries[j];
      if (entries[j] > entries[largest]) largest = j;
    }
    entries[largest] += 1 - sum;
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (sgn(entries[i]) < 0 || std::abs(entries[i].get_d() - p.entries[i]) > tolerance) {
      throw std::domain_error("rationalized entry " + std::to_string(i) + " drifts beyond tolerance");
    }
  }
  return Correlation(p.scenario, std::move(entries));
}

}  // namespace instrumental
