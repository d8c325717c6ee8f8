#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "instrumental/inequalities.hpp"
#include "instrumental/polytope.hpp"
#include "instrumental/scenario.hpp"

namespace instrumental {

/// vx σx + vz σz with (vx, vz) a unit vector.
struct Observable2 {
  double vx = 0.0;
  double vz = 1.0;

  /// cos(theta) σz + sin(theta) σx
  static Observable2 from_angle(double theta);
  /// Throws std::invalid_argument unless |(vx, vz)| = 1 within 1e-12.
  void check() const;
  Eigen::Matrix2cd matrix() const;
  /// Projector onto the eigenvalue (-1)^outcome eigenspace.
  Eigen::Matrix2cd projector(int outcome) const;
};

/// Density matrix on Alice ⊗ Bob, basis |00>, |01>, |10>, |11>.
class TwoQubitState {
 public:
  static TwoQubitState phi_plus();
  static TwoQubitState maximally_mixed();
  /// |ψ_A> ⊗ |ψ_B>; the kets are normalized here.
  static TwoQubitState product(const Eigen::Vector2cd& alice, const Eigen::Vector2cd& bob);
  /// Throws std::invalid_argument unless Hermitian, unit trace and PSD
  /// (eigenvalues >= -1e-12).
  static TwoQubitState from_matrix(const Eigen::Matrix4cd& rho);

  const Eigen::Matrix4cd& matrix() const { return rho_; }
  bool is_phi_plus() const;
  /// lambda * this + (1 - lambda) * other
  TwoQubitState mix(double lambda, const TwoQubitState& other) const;

 private:
  explicit TwoQubitState(Eigen::Matrix4cd rho) : rho_(std::move(rho)) {}
  Eigen::Matrix4cd rho_;
};

struct QuantumStrategy {
  TwoQubitState state = TwoQubitState::phi_plus();
  std::vector<Observable2> alice;
  std::vector<Observable2> bob;
};

/// p(ab|xy) = tr(ρ E_{a|x} ⊗ F_{b|y}) over Bell(alice.size(), bob.size(), 2, 2).
NumericCorrelation born_table(const QuantumStrategy& q);
/// Same, checking that `bell` matches the strategy's input counts.
NumericCorrelation born_table(const QuantumStrategy& q, const Scenario& bell);

/// |φ+>, Alice σx, σz, -(σx+σz)/√2, Bob (σx+σz)/√2, (σx-σz)/√2.
QuantumStrategy bonet_strategy();
/// |φ+>, Alice σz, σx, Bob (σz+σx)/√2, (σz-σx)/√2.
QuantumStrategy chsh_strategy();
/// |φ+>, Alice angles πj/N, Bob angles π(2j+1)/(2N).
QuantumStrategy chained_strategy(int n);

struct TiltedResult {
  double value = 0.0;  // tilted CHSH
  QuantumStrategy strategy;
  /// Tilted instrumental expression on the post-selected dummy-input extension.
  double instrumental_value = 0.0;
  std::size_t iterations = 0;
};

/// See-saw over x-z plane observables on |φ+> for
/// alpha<A0B0> + <A0B1> + alpha<A1B0> - <A1B1>. Each party's update is the
/// normalized sum of the other's weighted Bloch vectors. Throws
/// ConvergenceError when `max_iterations` is hit before the improvement drops
/// below `tolerance`.
TiltedResult tilted_search(const Rational& alpha, std::size_t max_iterations = 10'000, double tolerance = 1e-12);

/// Dummy-input extension with the given forced output, post-selected onto s.
NumericCorrelation induced_instrumental_table(const QuantumStrategy& q, const Scenario& s, int forced_output);

struct GptBoxResult {
  Rational value;
  Correlation box;
  std::size_t candidates = 0;  // distinct post-selected no-signalling vertices
};

/// Post-selected vertices of the parent no-signalling polytope of s.
std::vector<Correlation> postselected_nosignalling_vertices(const Scenario& s, const PolytopeLimits& limits = {});

/// Exact maximum of e over the post-selected no-signalling vertices; ties go
/// to the lexicographically smallest box. Needs binary outputs and nX <= 4.
GptBoxResult gpt_box_search(const LinearExpression& e, const PolytopeLimits& limits = {});

/// Strategy value used for the quantum entry of the bounds table.
double quantum_value(const ExpressionSpec& spec);

struct VerifiedBounds {
  BoundsTriple closed_form;
  Rational classical;  // vertex maximum
  Rational gpt;        // LP maximum over the no-signalling polytope
  double quantum = 0;  // explicit strategy
  double quantum_tolerance = 1e-9;
  std::vector<std::string> mismatches;

  bool ok() const { return mismatches.empty(); }
};

VerifiedBounds verify_bounds(const ExpressionSpec& spec);

}  // namespace instrumental
