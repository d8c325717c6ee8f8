#include "instrumental/quantum.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace instrumental {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

double expectation(const TwoQubitState& s, const Eigen::Matrix4cd& op) { return (s.matrix() * op).trace().real(); }

}  // namespace

Observable2 Observable2::from_angle(double theta) { return {std::sin(theta), std::cos(theta)}; }

void Observable2::check() const {
  if (std::abs(std::hypot(vx, vz) - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "observable Bloch vector (" << vx << ", " << vz << ") is not a unit vector";
    throw std::invalid_argument(os.str());
  }
}

Eigen::Matrix2cd Observable2::matrix() const { return vx * pauli_x() + vz * pauli_z(); }

Eigen::Matrix2cd Observable2::projector(int outcome) const {
  const double sign = outcome == 0 ? 1.0 : -1.0;
  return 0.5 * (Eigen::Matrix2cd::Identity() + sign * matrix());
}

TwoQubitState TwoQubitState::phi_plus() {
  Eigen::Vector4cd psi(kInvSqrt2, 0, 0, kInvSqrt2);
  return TwoQubitState(psi * psi.adjoint());
}

TwoQubitState TwoQubitState::maximally_mixed() { return TwoQubitState(Eigen::Matrix4cd::Identity() / 4.0); }

TwoQubitState TwoQubitState::product(const Eigen::Vector2cd& alice, const Eigen::Vector2cd& bob) {
  if (alice.norm() == 0.0 || bob.norm() == 0.0) throw std::invalid_argument("product state needs nonzero kets");
  const Eigen::Vector2cd a = alice.normalized(), b = bob.normalized();
  Eigen::Vector4cd psi;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) psi(2 * i + k) = a(i) * b(k);
  return TwoQubitState(psi * psi.adjoint());
}

TwoQubitState TwoQubitState::from_matrix(const Eigen::Matrix4cd& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-12) throw std::invalid_argument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(rho);
  if (eig.eigenvalues().minCoeff() < -1e-12) throw std::invalid_argument("density matrix is not positive semidefinite");
  return TwoQubitState(rho);
}

bool TwoQubitState::is_phi_plus() const {
  return (rho_ - phi_plus().matrix()).cwiseAbs().maxCoeff() < 1e-15;
}

TwoQubitState TwoQubitState::mix(double lambda, const TwoQubitState& other) const {
  if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("mixing weight outside [0, 1]");
  return TwoQubitState(lambda * rho_ + (1.0 - lambda) * other.rho_);
}

NumericCorrelation born_table(const QuantumStrategy& q) {
  return born_table(q, Scenario::bell(static_cast<int>(q.alice.size()), static_cast<int>(q.bob.size()), 2, 2));
}

NumericCorrelation born_table(const QuantumStrategy& q, const Scenario& bell) {
  if (!bell.is_bell() || bell.na() != 2 || bell.nb() != 2 || bell.nx() != static_cast<int>(q.alice.size()) ||
      bell.ny() != static_cast<int>(q.bob.size())) {
    throw ShapeError("strategy does not match scenario " + bell.describe());
  }
  for (const auto& o : q.alice) o.check();
  for (const auto& o : q.bob) o.check();
  std::vector<double> entries(bell.dimension());
  for (int x = 0; x < bell.nx(); ++x)
    for (int y = 0; y < bell.ny(); ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double v = expectation(q.state, kron(q.alice[static_cast<std::size_t>(x)].projector(a),
                                              q.bob[static_cast<std::size_t>(y)].projector(b)));
          if (v < 0.0 && v >= -1e-12) v = 0.0;
          if (v > 1.0 && v <= 1.0 + 1e-12) v = 1.0;
          if (v < 0.0 || v > 1.0) throw std::domain_error("Born probability outside [0, 1]");
          entries[bell.index(x, y, a, b)] = v;
        }
  return NumericCorrelation(bell, std::move(entries));
}

QuantumStrategy bonet_strategy() {
  QuantumStrategy q;
  q.alice = {{1.0, 0.0}, {0.0, 1.0}, {-kInvSqrt2, -kInvSqrt2}};
  q.bob = {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
  return q;
}

QuantumStrategy chsh_strategy() {
  QuantumStrategy q;
  q.alice = {{0.0, 1.0}, {1.0, 0.0}};
  q.bob = {{kInvSqrt2, kInvSqrt2}, {-kInvSqrt2, kInvSqrt2}};
  return q;
}

QuantumStrategy chained_strategy(int n) {
  if (n < 2) throw std::invalid_argument("chained strategy needs N >= 2");
  QuantumStrategy q;
  for (int j = 0; j < n; ++j) {
    q.alice.push_back(Observable2::from_angle(kPi * j / n));
    q.bob.push_back(Observable2::from_angle(kPi * (2 * j + 1) / (2.0 * n)));
  }
  return q;
}

NumericCorrelation induced_instrumental_table(const QuantumStrategy& q, const Scenario& s, int forced_output) {
  return postselect(dummy_input_extension(born_table(q), forced_output), s);
}

TiltedResult tilted_search(const Rational& alpha, std::size_t max_iterations, double tolerance) {
  if (alpha < 1) throw std::invalid_argument("alpha must be at least 1");
  const double al = alpha.get_d();
  const TwoQubitState state = TwoQubitState::phi_plus();
  // Correlation matrix in the (x, z) Bloch coordinates.
  Eigen::Matrix2d t;
  const std::array<Eigen::Matrix2cd, 2> paulis{pauli_x(), pauli_z()};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t(i, j) = expectation(state, kron(paulis[static_cast<std::size_t>(i)], paulis[static_cast<std::size_t>(j)]));
  const double w[2][2] = {{al, 1.0}, {al, -1.0}};

  using Vec = Eigen::Vector2d;
  auto value = [&](const std::array<Vec, 2>& a, const std::array<Vec, 2>& b) {
    double v = 0.0;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) v += w[x][y] * a[static_cast<std::size_t>(x)].dot(t * b[static_cast<std::size_t>(y)]);
    return v;
  };
  auto unit = [](double theta) { return Vec(std::sin(theta), std::cos(theta)); };

  const std::array<std::array<double, 4>, 4> starts{{
      {0.0, kPi / 2, kPi / 4, -kPi / 4},
      {0.3, 1.9, 1.1, -0.7},
      {1.0, 2.0, 0.5, 2.5},
      {-0.4, 0.9, 2.2, 0.1},
  }};

  TiltedResult best;
  best.value = -1e300;
  std::size_t total = 0;
  for (const auto& st : starts) {
    std::array<Vec, 2> a{unit(st[0]), unit(st[1])};
    std::array<Vec, 2> b{unit(st[2]), unit(st[3])};
    double current = value(a, b);
    std::size_t it = 0;
    while (true) {
      if (++it > max_iterations) throw ConvergenceError("tilted see-saw did not converge");
      for (int x = 0; x < 2; ++x) {
        Vec g = w[x][0] * (t * b[0]) + w[x][1] * (t * b[1]);
        if (g.norm() > 0) a[static_cast<std::size_t>(x)] = g.normalized();
      }
      for (int y = 0; y < 2; ++y) {
        Vec g = w[0][y] * (t.transpose() * a[0]) + w[1][y] * (t.transpose() * a[1]);
        if (g.norm() > 0) b[static_cast<std::size_t>(y)] = g.normalized();
      }
      const double next = value(a, b);
      const double gain = next - current;
      current = next;
      if (gain < tolerance) break;
    }
    total += it;
    if (current > best.value) {
      best.value = current;
      best.strategy.alice = {{a[0](0), a[0](1)}, {a[1](0), a[1](1)}};
      best.strategy.bob = {{b[0](0), b[0](1)}, {b[1](0), b[1](1)}};
    }
  }
  best.iterations = total;
  // Re-evaluate through the Born rule so the reported value is the strategy's.
  const LinearExpression chsh = catalog(ExpressionSpec::tilted_chsh(alpha));
  best.value = chsh.evaluate(born_table(best.strategy));
  const LinearExpression instr = catalog(ExpressionSpec::tilted(alpha));
  best.instrumental_value = instr.evaluate(induced_instrumental_table(best.strategy, instr.scenario, 0));
  return best;
}

std::vector<Correlation> postselected_nosignalling_vertices(const Scenario& s, const PolytopeLimits& limits) {
  if (s.is_bell()) throw ShapeError("post-selection needs an instrumental scenario");
  if (s.na() != 2 || s.nb() != 2) throw ShapeError("no-signalling vertex search needs binary outputs");
  if (s.nx() > 4) throw CapacityError("no-signalling vertex search is limited to nX <= 4");
  const Scenario bell = s.parent_bell();
  const auto coords = postselection_coordinates(bell, s);
  const VPolytope v = vertex_enumeration(no_signalling_polytope(bell), limits);
  std::vector<RationalVector> points;
  for (const auto& vertex : v.vertices) {
    RationalVector p;
    for (std::size_t i : coords) p.push_back(vertex[i]);
    points.push_back(std::move(p));
  }
  std::vector<Correlation> out;
  for (auto& p : VPolytope::from_points(std::move(points)).vertices) out.emplace_back(s, std::move(p));
  return out;
}

GptBoxResult gpt_box_search(const LinearExpression& e, const PolytopeLimits& limits) {
  auto boxes = postselected_nosignalling_vertices(e.scenario, limits);
  GptBoxResult out{Rational(0), boxes.front(), boxes.size()};
  out.value = e.evaluate(boxes.front());
  for (std::size_t i = 1; i < boxes.size(); ++i) {
    Rational v = e.evaluate(boxes[i]);
    if (v > out.value) {
      out.value = v;
      out.box = boxes[i];
    }
  }
  return out;
}

double quantum_value(const ExpressionSpec& spec) {
  spec.check();
  const LinearExpression e = catalog(spec);
  switch (spec.kind) {
    case ExpressionKind::Bonet: return e.evaluate(postselect(born_table(bonet_strategy()), e.scenario));
    case ExpressionKind::Tilted: return tilted_search(spec.alpha).instrumental_value;
    case ExpressionKind::Chained:
      return e.evaluate(induced_instrumental_table(chained_strategy(spec.n), e.scenario, 1));
    case ExpressionKind::Chsh: return e.evaluate(born_table(chsh_strategy()));
    case ExpressionKind::TiltedChsh: return tilted_search(spec.alpha).value;
    case ExpressionKind::ChainedBell: return e.evaluate(born_table(chained_strategy(spec.n)));
  }
  throw std::logic_error("unhandled expression kind");
}

VerifiedBounds verify_bounds(const ExpressionSpec& spec) {
  VerifiedBounds out;
  out.closed_form = bounds(spec);
  const LinearExpression e = catalog(spec);
  out.classical = maximize_linear(e.coeffs, e.constant, classical_polytope(e.scenario)).value;
  if (spec.instrumental()) {
    const LinearExpression lifted = lift_to_bell(e);
    out.gpt = maximize_linear(lifted.coeffs, lifted.constant, no_signalling_polytope(lifted.scenario), false).value;
  } else {
    out.gpt = maximize_linear(e.coeffs, e.constant, no_signalling_polytope(e.scenario), false).value;
  }
  const bool seesaw = spec.kind == ExpressionKind::Tilted || spec.kind == ExpressionKind::TiltedChsh;
  out.quantum_tolerance = seesaw ? 1e-6 : 1e-9;
  out.quantum = quantum_value(spec);

  if (out.classical != out.closed_form.classical) {
    out.mismatches.push_back("classical: closed form " + to_string(out.closed_form.classical) + ", vertex maximum " +
                             to_string(out.classical));
  }
  if (out.gpt != out.closed_form.gpt) {
    out.mismatches.push_back("gpt: closed form " + to_string(out.closed_form.gpt) + ", LP maximum " + to_string(out.gpt));
  }
  const double q = out.closed_form.quantum.approx();
  if (std::abs(out.quantum - q) > out.quantum_tolerance) {
    std::ostringstream os;
    os.precision(12);
    os << "quantum: closed form " << out.closed_form.quantum.to_string() << " = " << q << ", strategy value "
       << out.quantum;
    out.mismatches.push_back(os.str());
  }
  return out;
}

}  // namespace instrumental
