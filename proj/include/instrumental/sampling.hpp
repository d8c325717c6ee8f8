#pragma once

#include <random>

#include "instrumental/scenario.hpp"

namespace instrumental {

/// Random convex mixture of `parts` no-signalling vertices of a Bell scenario:
/// deterministic boxes and, for binary outputs, boxes b = a + f(x, y) mod 2.
/// Weights are k_i / 1000 with positive integers k_i summing to 1000.
Correlation sample_nosignalling(const Scenario& bell, std::mt19937_64& rng, int parts = 6);

/// Random mixture of deterministic strategies of any scenario, weights k_i / 1000.
Correlation sample_classical(const Scenario& s, std::mt19937_64& rng, int parts = 6);

}  // namespace instrumental
