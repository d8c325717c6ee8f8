#include "instrumental/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace instrumental {

namespace {

std::vector<Rational> random_weights(std::mt19937_64& rng, int parts) {
  if (parts < 1 || parts > 1000) throw std::invalid_argument("parts must lie in [1, 1000]");
  // Distinct cut points in 1..999 split 1000 into positive parts.
  std::vector<int> cuts;
  std::uniform_int_distribution<int> pick(1, 999);
  while (static_cast<int>(cuts.size()) < parts - 1) {
    int c = pick(rng);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(1000);
  std::vector<Rational> w;
  for (std::size_t i = 1; i < cuts.size(); ++i) w.push_back(fraction(cuts[i] - cuts[i - 1], 1000));
  return w;
}

DeterministicStrategy random_strategy(const Scenario& s, std::mt19937_64& rng) {
  DeterministicStrategy d;
  std::uniform_int_distribution<int> a(0, s.na() - 1), b(0, s.nb() - 1);
  for (int x = 0; x < s.nx(); ++x) d.alpha.push_back(a(rng));
  const int bob_inputs = s.kind() == ScenarioKind::Instrumental ? s.na() : s.ny();
  for (int y = 0; y < bob_inputs; ++y) d.beta.push_back(b(rng));
  return d;
}

}  // namespace

Correlation sample_nosignalling(const Scenario& bell, std::mt19937_64& rng, int parts) {
  if (!bell.is_bell()) throw ShapeError("no-signalling sampling needs a Bell scenario");
  const bool binary = bell.na() == 2 && bell.nb() == 2;
  std::vector<Correlation> pieces;
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int i = 0; i < parts; ++i) {
    if (binary && coin(rng)) {
      std::vector<std::vector<int>> f(static_cast<std::size_t>(bell.nx()), std::vector<int>(static_cast<std::size_t>(bell.ny())));
      for (auto& row : f)
        for (auto& v : row) v = bit(rng);
      pieces.push_back(wiring_box(bell.nx(), bell.ny(), f));
    } else {
      pieces.push_back(strategy_to_correlation(random_strategy(bell, rng), bell));
    }
  }
  return mix(pieces, random_weights(rng, parts));
}

Correlation sample_classical(const Scenario& s, std::mt19937_64& rng, int parts) {
  std::vector<Correlation> pieces;
  for (int i = 0; i < parts; ++i) pieces.push_back(strategy_to_correlation(random_strategy(s, rng), s));
  return mix(pieces, random_weights(rng, parts));
}

}  // namespace instrumental
