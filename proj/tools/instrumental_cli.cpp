// Command-line front end: facets, bounds, membership, identity.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "instrumental/inequalities.hpp"
#include "instrumental/io.hpp"
#include "instrumental/polytope.hpp"
#include "instrumental/quantum.hpp"
#include "instrumental/sampling.hpp"

using namespace instrumental;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kCapacity = 2, kMismatch = 3 };

/// Raised when a computed value disagrees with its closed form or certificate.
struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format;  // empty: table, or porta under PORTA_COMPAT=1
  std::string output;
  std::size_t max_rays = 1'000'000;

  std::string resolved_format() const {
    if (!format.empty()) return format;
    const char* compat = std::getenv("PORTA_COMPAT");
    return compat && std::string(compat) == "1" ? "porta" : "table";
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format (default table; porta under PORTA_COMPAT=1)")
      ->check(CLI::IsMember({"json", "porta", "table", "csv"}));
  cmd->add_option("-o,--output", c.output, "Write to this path (porta: base name for .ieq/.poi)");
  cmd->add_option("--max-rays", c.max_rays, "Capacity limit for double description and Fourier-Motzkin rows")
      ->check(CLI::PositiveNumber);
}

/// Writes to the --output file or stdout.
void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw std::runtime_error("cannot write " + c.output);
  out << text;
}

// ---------------------------------------------------------------------------
// facets

struct FacetsArgs {
  Common common;
  std::string kind = "instrumental";
  bool classical = false;
  bool gpt = false;
  int nx = 2, ny = 2, na = 2, nb = 2;
  int chained_n = 0;
};

Scenario facets_scenario(const FacetsArgs& a) {
  if (a.chained_n > 0) return Scenario::chained(a.chained_n);
  switch (parse_scenario_kind(a.kind)) {
    case ScenarioKind::Bell: return Scenario::bell(a.nx, a.ny, a.na, a.nb);
    case ScenarioKind::Instrumental: return Scenario::instrumental(a.nx, a.na, a.nb);
    case ScenarioKind::FInstrumental:
      throw std::invalid_argument("f-instrumental facets need --chained N");
  }
  throw std::logic_error("unhandled scenario kind");
}

/// Orbits computed in the instrumental frame when the wiring permutes outputs.
std::optional<std::vector<FacetOrbit>> classify(const Scenario& s, const HPolytope& h) {
  if (s.is_bell()) return std::nullopt;
  if (s.kind() == ScenarioKind::Instrumental) {
    return facet_orbit_classify(h.inequalities, SymmetryGroup::instrumental(s));
  }
  std::vector<LinearInequality> framed;
  try {
    for (const auto& f : h.inequalities) {
      LinearExpression e(s, f.coeffs);
      framed.push_back(to_instrumental_frame(e).at_most(f.bound));
    }
  } catch (const ShapeError&) {
    return std::nullopt;
  }
  return facet_orbit_classify(framed, SymmetryGroup::instrumental(Scenario::instrumental(s.nx(), s.na(), s.nb())));
}

int run_facets(const FacetsArgs& a) {
  if (a.classical == a.gpt) throw CLI::ValidationError("facets", "choose exactly one of --classical and --gpt");
  const Scenario s = facets_scenario(a);
  const PolytopeLimits limits{a.common.max_rays};
  std::optional<VPolytope> vertices;
  HPolytope h;
  DoubleDescriptionStats stats;
  if (a.classical) {
    vertices = classical_polytope(s);
    h = facet_enumeration(*vertices, limits, &stats);
  } else if (s.is_bell()) {
    h = remove_redundancy(no_signalling_polytope(s));
  } else {
    const Scenario bell = s.parent_bell();
    const auto keep = postselection_coordinates(bell, s);
    h = fourier_motzkin_project(no_signalling_polytope(bell), keep, limits);
  }
  const auto orbits = classify(s, h);
  std::vector<std::string> tags(h.inequalities.size(), "-");
  if (orbits) {
    for (const auto& o : *orbits)
      for (std::size_t m : o.members) tags[m] = to_string(o.tag);
  }
  const auto names = coordinate_names(s);
  const std::string fmt = a.common.resolved_format();
  const std::string theory = a.classical ? "classical" : "gpt";

  if (fmt == "porta") {
    std::ostringstream ieq;
    write_ieq(ieq, h);
    if (a.common.output.empty()) {
      std::cout << ieq.str();
    } else {
      std::ofstream(a.common.output + ".ieq") << ieq.str();
      if (vertices) {
        std::ofstream poi(a.common.output + ".poi");
        write_poi(poi, *vertices);
      }
    }
  } else if (fmt == "json") {
    Json j{{"scenario", to_json(s)}, {"theory", theory}, {"polytope", to_json(h)}, {"tags", tags}};
    if (vertices) j["vertex_count"] = vertices->vertices.size();
    if (orbits) {
      Json arr = Json::array();
      for (const auto& o : *orbits) {
        arr.push_back({{"tag", to_string(o.tag)}, {"size", o.members.size()}, {"representative", to_json(o.representative)},
                       {"members", o.members}});
      }
      j["orbits"] = arr;
    }
    emit(a.common, j.dump(2) + "\n");
  } else if (fmt == "csv") {
    std::ostringstream os;
    os << "index,tag,bound";
    for (const auto& n : names) os << ",\"" << n << "\"";
    os << "\n";
    for (std::size_t i = 0; i < h.inequalities.size(); ++i) {
      os << i + 1 << ',' << tags[i] << ',' << to_string(h.inequalities[i].bound);
      for (const auto& c : h.inequalities[i].coeffs) os << ',' << to_string(c);
      os << "\n";
    }
    emit(a.common, os.str());
  } else {
    std::ostringstream os;
    os << s.describe() << ", " << theory << " polytope\n";
    if (vertices) os << "vertices: " << vertices->vertices.size() << ", affine dimension " << affine_dimension(*vertices) << "\n";
    os << "equalities: " << h.equalities.size() << "\n";
    for (const auto& e : h.equalities) {
      std::string row = format_inequality({e.coeffs, e.rhs}, names);
      row.replace(row.rfind("<="), 2, "==");
      os << "  " << row << "\n";
    }
    os << "facets: " << h.inequalities.size() << "\n";
    if (orbits) {
      os << "orbits: " << orbits->size() << "\n";
      for (const auto& o : *orbits) {
        os << "  " << std::left << std::setw(11) << to_string(o.tag) << " size " << std::setw(5) << o.members.size()
           << " " << format_inequality(o.representative, names) << "\n";
      }
    }
    for (std::size_t i = 0; i < h.inequalities.size(); ++i) {
      os << "(" << std::right << std::setw(4) << i + 1 << ") [" << tags[i] << "] "
         << format_inequality(h.inequalities[i], names) << "\n";
    }
    emit(a.common, os.str());
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
  Common common;
  std::string kind;
  std::string param;
  std::string alpha;
  int n = 0;
};

ExpressionSpec spec_from(const std::string& kind_text, const std::string& param, const std::string& alpha, int n) {
  ExpressionSpec spec;
  spec.kind = parse_expression_kind(kind_text);
  switch (spec.kind) {
    case ExpressionKind::Tilted:
    case ExpressionKind::TiltedChsh:
      spec.alpha = parse_rational(!param.empty() ? param : (!alpha.empty() ? alpha : "1"));
      break;
    case ExpressionKind::Chained:
    case ExpressionKind::ChainedBell:
      spec.n = !param.empty() ? std::stoi(param) : (n > 0 ? n : 2);
      break;
    default:
      if (!param.empty()) throw std::invalid_argument(kind_text + " takes no parameter");
  }
  spec.check();
  return spec;
}

int run_bounds(const BoundsArgs& a) {
  const ExpressionSpec spec = spec_from(a.kind, a.param, a.alpha, a.n);
  const VerifiedBounds v = verify_bounds(spec);
  const std::string fmt = a.common.resolved_format();
  if (fmt == "json") {
    emit(a.common, to_json(v).dump(2) + "\n");
  } else if (fmt == "csv") {
    emit(a.common, bounds_csv_header() + "\n" + bounds_csv_row(v) + "\n");
  } else {
    emit(a.common, bounds_table(v));
  }
  if (!v.ok()) {
    std::cerr << "verification mismatch for " << spec.label() << ":\n";
    for (const auto& m : v.mismatches) std::cerr << "  " << m << "\n";
    return kMismatch;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// membership

struct MembershipArgs {
  Common common;
  std::string file;
  std::string theory = "classical";
  bool local_processing = false;
  bool chained = false;
  int forced_output = -1;
  std::string expect;
};

constexpr const char* kCaveat =
    "note: a box that passes this test can still come from a non-classical Bell box; post-selection hides it. "
    "Given the Bell parent, rerun with --with-local-processing to add a deterministic dummy input before testing.";

/// Exact re-check of a certificate against the instrumental table.
void check_certificate(const Correlation& p, Theory theory, const MembershipCertificate& cert) {
  if (cert.inside()) {
    if (theory == Theory::Classical) {
      const VPolytope v = postselected_classical_vertices(p.scenario);
      RationalVector sum(p.entries.size());
      Rational total;
      for (std::size_t i = 0; i < v.vertices.size(); ++i) {
        if (sgn(cert.weights[i]) < 0) throw VerificationFailure("negative convex weight");
        total += cert.weights[i];
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += cert.weights[i] * v.vertices[i][j];
      }
      if (total != 1 || sum != p.entries) throw VerificationFailure("convex weights do not reproduce the table");
    } else {
      const Scenario bell = p.scenario.parent_bell();
      const Correlation w(bell, cert.witness);
      if (!validate(w).ok()) throw VerificationFailure("no-signalling witness is not a valid Bell box");
      if (postselect(w, p.scenario).entries != p.entries) throw VerificationFailure("witness does not post-select to the table");
    }
    return;
  }
  if (!cert.separator) throw VerificationFailure("outside verdict without a separator");
  if (cert.separator->satisfied_by(p.entries)) throw VerificationFailure("separator does not cut off the table");
  if (theory == Theory::Classical) {
    for (const auto& v : postselected_classical_vertices(p.scenario).vertices) {
      if (!cert.separator->satisfied_by(v)) throw VerificationFailure("separator is violated by a classical vertex");
    }
  }
}

int run_membership(const MembershipArgs& a) {
  const Theory theory = parse_theory(a.theory);
  Correlation input = correlation_from_json(read_json_file(a.file));
  Correlation table = input;
  std::string route;
  if (input.scenario.is_bell()) {
    const Scenario& b = input.scenario;
    if (a.local_processing) {
      const int forced = a.forced_output >= 0 ? a.forced_output : (a.chained ? 1 : 0);
      const Correlation ext = dummy_input_extension(input, forced);
      Scenario target = a.chained ? Scenario::chained(b.nx()) : Scenario::instrumental(b.nx() + 1, b.na(), b.nb());
      if (a.chained && (b.nx() != b.ny())) throw std::invalid_argument("--chained needs a Bell box with nX = nY");
      if (!a.chained && b.ny() != b.na()) throw std::invalid_argument("post-selection needs nY = nA");
      table = postselect(ext, target);
      route = "dummy-input extension (a = " + std::to_string(forced) + " at x = " + std::to_string(b.nx()) +
              ") then post-selection onto " + target.describe();
    } else {
      if (b.ny() != b.na()) throw std::invalid_argument("post-selection needs nY = nA");
      table = postselect(input, Scenario::instrumental(b.nx(), b.na(), b.nb()));
      route = "post-selection onto " + table.scenario.describe();
    }
  } else if (a.local_processing) {
    throw std::invalid_argument("--with-local-processing needs the Bell parent box as input");
  }

  const MembershipCertificate cert = extension_membership(table, theory);
  check_certificate(table, theory, cert);
  const bool caveat = theory == Theory::Classical && cert.inside() && !a.local_processing;

  const std::string fmt = a.common.resolved_format();
  if (fmt == "json") {
    Json j{{"theory", to_string(theory)}, {"scenario", to_json(table.scenario)}, {"certificate", to_json(cert)}};
    if (!route.empty()) j["route"] = route;
    if (caveat) j["caveat"] = kCaveat;
    emit(a.common, j.dump(2) + "\n");
  } else {
    const auto names = coordinate_names(table.scenario);
    std::ostringstream os;
    if (!route.empty()) os << "input: " << input.scenario.describe() << " via " << route << "\n";
    os << "theory: " << to_string(theory) << "\nverdict: " << (cert.inside() ? "inside" : "outside") << "\n";
    if (cert.inside() && theory == Theory::Classical) {
      const VPolytope v = postselected_classical_vertices(table.scenario);
      os << "weights over deterministic vertices:\n";
      for (std::size_t i = 0; i < cert.weights.size(); ++i) {
        if (sgn(cert.weights[i]) == 0) continue;
        os << "  " << to_string(cert.weights[i]) << " x [";
        for (std::size_t j = 0; j < v.vertices[i].size(); ++j) os << (j ? " " : "") << to_string(v.vertices[i][j]);
        os << "]\n";
      }
    } else if (cert.inside()) {
      const auto bell_names = coordinate_names(table.scenario.parent_bell());
      os << "no-signalling extension:\n";
      for (std::size_t i = 0; i < cert.witness.size(); ++i) {
        if (sgn(cert.witness[i]) != 0) os << "  " << bell_names[i] << " = " << to_string(cert.witness[i]) << "\n";
      }
    } else {
      os << "separator: " << format_inequality(*cert.separator, names) << "\n";
      os << "value at input: " << to_string(dot(cert.separator->coeffs, table.entries)) << "\n";
    }
    if (caveat) os << kCaveat << "\n";
    emit(a.common, os.str());
  }
  if (!a.expect.empty() && (a.expect == "inside") != cert.inside()) {
    std::cerr << "verification mismatch: expected " << a.expect << ", got " << (cert.inside() ? "inside" : "outside")
              << "\n";
    return kMismatch;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// identity

struct IdentityArgs {
  Common common;
  std::string kind;
  std::string alpha = "1";
  int n = 2;
  int trials = 500;
  std::uint64_t seed = 1;
};

int run_identity(const IdentityArgs& a) {
  ExpressionSpec spec = spec_from(a.kind, "", a.alpha, a.n);
  if (!spec.instrumental()) throw std::invalid_argument("identity needs bonet, tilted or chained");
  const Scenario bell = expression_scenario(spec).parent_bell();
  std::mt19937_64 rng(a.seed);
  Rational worst;
  std::size_t nonzero = 0;
  for (int t = 0; t < a.trials; ++t) {
    const Rational r = identity_check(spec, sample_nosignalling(bell, rng));
    if (sgn(r) != 0) ++nonzero;
    if (abs(r) > worst) worst = abs(r);
  }
  const std::string fmt = a.common.resolved_format();
  if (fmt == "json") {
    emit(a.common, Json{{"kind", spec.label()}, {"trials", a.trials}, {"seed", a.seed}, {"max_abs_residual", to_string(worst)},
                        {"nonzero", nonzero}}.dump(2) + "\n");
  } else if (fmt == "csv") {
    std::ostringstream os;
    os << "kind,trials,seed,max_abs_residual,nonzero\n" << spec.label() << ',' << a.trials << ',' << a.seed << ','
       << to_string(worst) << ',' << nonzero << "\n";
    emit(a.common, os.str());
  } else {
    std::ostringstream os;
    os << spec.label() << ": " << a.trials << " rational no-signalling points over " << bell.describe() << " (seed "
       << a.seed << ")\nmax |residual| = " << to_string(worst) << "\n";
    emit(a.common, os.str());
  }
  return nonzero == 0 ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical, quantum and no-signalling correlations in the instrumental scenario"};
  app.require_subcommand(1);

  FacetsArgs fa;
  auto* facets = app.add_subcommand("facets", "Facets of a classical or no-signalling correlation polytope, with orbits");
  facets->add_option("--kind", fa.kind, "bell | instrumental")->check(CLI::IsMember({"bell", "instrumental"}));
  facets->add_flag("--classical", fa.classical, "Hull of the deterministic strategies");
  facets->add_flag("--gpt", fa.gpt, "No-signalling polytope (projected onto y = wiring for instrumental)");
  facets->add_option("-x,--nx", fa.nx, "Alice inputs")->check(CLI::PositiveNumber);
  facets->add_option("-y,--ny", fa.ny, "Bob inputs (Bell)")->check(CLI::PositiveNumber);
  facets->add_option("-a,--na", fa.na, "Alice outputs")->check(CLI::Range(2, 64));
  facets->add_option("-b,--nb", fa.nb, "Bob outputs")->check(CLI::Range(2, 64));
  facets->add_option("--chained", fa.chained_n, "Use the chained f-instrumental scenario with this N")->check(CLI::Range(2, 64));
  add_common(facets, fa.common);

  BoundsArgs ba;
  auto* bounds_cmd = app.add_subcommand("bounds", "Classical / quantum / GPT bounds, verified by computation");
  bounds_cmd->add_option("kind", ba.kind, "bonet | tilted | chained | chsh | tilted_chsh | chained_bell")->required();
  bounds_cmd->add_option("param", ba.param, "alpha (tilted) or N (chained)");
  bounds_cmd->add_option("--alpha", ba.alpha, "Tilt parameter, rational >= 1");
  bounds_cmd->add_option("--n", ba.n, "Chained parameter N >= 2");
  add_common(bounds_cmd, ba.common);

  MembershipArgs ma;
  auto* member = app.add_subcommand("membership", "Classical or no-signalling extension test with a certificate");
  member->add_option("file", ma.file, "Correlation JSON (instrumental table or its Bell parent)")->required()->check(CLI::ExistingFile);
  member->add_option("--theory", ma.theory, "classical | nosignalling")->check(CLI::IsMember({"classical", "nosignalling"}));
  member->add_flag("--with-local-processing", ma.local_processing,
                   "Append a deterministic dummy input to the Bell parent before post-selecting");
  member->add_flag("--chained", ma.chained, "With local processing, post-select onto the chained scenario (dummy a = 1)");
  member->add_option("--forced-output", ma.forced_output, "Output of the dummy input")->check(CLI::NonNegativeNumber);
  member->add_option("--expect", ma.expect, "Exit with status 3 unless the verdict is this")
      ->check(CLI::IsMember({"inside", "outside"}));
  add_common(member, ma.common);

  IdentityArgs ia;
  auto* ident = app.add_subcommand("identity", "Exact residuals of the lifting identities on sampled no-signalling boxes");
  ident->add_option("kind", ia.kind, "bonet | tilted | chained")->required()->check(CLI::IsMember({"bonet", "tilted", "chained"}));
  ident->add_option("--alpha", ia.alpha, "Tilt parameter (rational >= 1)");
  ident->add_option("--n", ia.n, "Chained parameter N >= 2");
  ident->add_option("--trials", ia.trials, "Number of sampled points")->check(CLI::PositiveNumber);
  ident->add_option("--seed", ia.seed, "Sampling seed");
  add_common(ident, ia.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*facets) return run_facets(fa);
    if (*bounds_cmd) return run_bounds(ba);
    if (*member) return run_membership(ma);
    if (*ident) return run_identity(ia);
  } catch (const CapacityError& e) {
    std::cerr << "capacity limit: " << e.what() << "\n";
    std::cerr << "no result was produced; raise --max-rays to continue\n";
    return kCapacity;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification mismatch: " << e.what() << "\n";
    return kMismatch;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
