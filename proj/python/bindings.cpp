#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "instrumental/inequalities.hpp"
#include "instrumental/io.hpp"
#include "instrumental/polytope.hpp"
#include "instrumental/quantum.hpp"
#include "instrumental/sampling.hpp"

namespace py = pybind11;
using namespace instrumental;

// Rational <-> fractions.Fraction (int and "p/q" strings also accepted).
namespace pybind11::detail {
template <>
struct type_caster<mpq_class> {
  PYBIND11_TYPE_CASTER(mpq_class, const_name("fractions.Fraction"));

  bool load(handle src, bool) {
    if (!src) return false;
    try {
      if (py::isinstance<py::str>(src)) {
        value = parse_rational(src.cast<std::string>());
        return true;
      }
      if (py::isinstance<py::bool_>(src)) return false;
      if (py::isinstance<py::int_>(src)) {
        value = parse_rational(py::str(src).cast<std::string>());
        return true;
      }
      if (py::hasattr(src, "numerator") && py::hasattr(src, "denominator") && !py::isinstance<py::float_>(src)) {
        const std::string num = py::str(src.attr("numerator")).cast<std::string>();
        const std::string den = py::str(src.attr("denominator")).cast<std::string>();
        value = parse_rational(num + "/" + den);
        return true;
      }
    } catch (const std::exception&) {
      return false;
    }
    return false;
  }

  static handle cast(const mpq_class& r, return_value_policy, handle) {
    py::object fraction = py::module_::import("fractions").attr("Fraction");
    py::object as_int = py::module_::import("builtins").attr("int");
    return fraction(as_int(r.get_num().get_str()), as_int(r.get_den().get_str())).release();
  }
};
}  // namespace pybind11::detail

namespace {

py::dict hpolytope_dict(const HPolytope& h) {
  py::list ineqs, eqs;
  for (const auto& i : h.inequalities) ineqs.append(py::make_tuple(i.coeffs, i.bound));
  for (const auto& e : h.equalities) eqs.append(py::make_tuple(e.coeffs, e.rhs));
  py::dict d;
  d["dim"] = h.dim;
  d["inequalities"] = ineqs;
  d["equalities"] = eqs;
  return d;
}

py::dict certificate_dict(const MembershipCertificate& c) {
  py::dict d;
  d["inside"] = c.inside();
  d["weights"] = c.weights;
  d["witness"] = c.witness;
  if (c.separator) d["separator"] = py::make_tuple(c.separator->coeffs, c.separator->bound);
  else d["separator"] = py::none();
  return d;
}

ExpressionSpec make_spec(const std::string& kind, const Rational& alpha, int n) {
  ExpressionSpec s;
  s.kind = parse_expression_kind(kind);
  s.alpha = alpha;
  s.n = n;
  s.check();
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact correlation polytopes for the instrumental scenario";

  py::register_exception<CapacityError>(m, "CapacityError");
  py::register_exception<SignallingError>(m, "SignallingError");
  py::register_exception<UnboundedError>(m, "UnboundedError");
  py::register_exception<ConvergenceError>(m, "ConvergenceError");

  py::class_<Scenario>(m, "Scenario")
      .def_static("bell", &Scenario::bell, py::arg("nx"), py::arg("ny"), py::arg("na"), py::arg("nb"))
      .def_static("instrumental", &Scenario::instrumental, py::arg("nx"), py::arg("na"), py::arg("nb"))
      .def_static("f_instrumental", &Scenario::f_instrumental, py::arg("nx"), py::arg("ny"), py::arg("na"),
                  py::arg("nb"), py::arg("wiring"))
      .def_static("chained", &Scenario::chained, py::arg("n"))
      .def_property_readonly("kind", [](const Scenario& s) { return to_string(s.kind()); })
      .def_property_readonly("nx", &Scenario::nx)
      .def_property_readonly("ny", &Scenario::ny)
      .def_property_readonly("na", &Scenario::na)
      .def_property_readonly("nb", &Scenario::nb)
      .def_property_readonly("dimension", &Scenario::dimension)
      .def("index", py::overload_cast<int, int, int>(&Scenario::index, py::const_))
      .def("bell_index", py::overload_cast<int, int, int, int>(&Scenario::index, py::const_))
      .def("parent_bell", &Scenario::parent_bell)
      .def("coordinate_names", [](const Scenario& s) { return coordinate_names(s); })
      .def("__eq__", [](const Scenario& a, const Scenario& b) { return a == b; })
      .def("__repr__", &Scenario::describe);

  py::class_<Correlation>(m, "Correlation")
      .def(py::init<Scenario, RationalVector>(), py::arg("scenario"), py::arg("entries"))
      .def_readonly("scenario", &Correlation::scenario)
      .def_readonly("entries", &Correlation::entries)
      .def("to_json", [](const Correlation& p) { return to_json(p).dump(); })
      .def_static("from_json", [](const std::string& text) { return correlation_from_json(Json::parse(text)); })
      .def("validate", [](const Correlation& p) { return validate(p).ok(); });

  m.def("pr_box", &pr_box);
  m.def("uniform_box", &uniform_box, py::arg("scenario"));
  m.def("wiring_box", &wiring_box, py::arg("nx"), py::arg("ny"), py::arg("f"));
  m.def("deterministic_correlations", [](const Scenario& s) { return deterministic_correlations(s); }, py::arg("scenario"));
  m.def("postselect", [](const Correlation& p, const Scenario& t) { return postselect(p, t); }, py::arg("p"), py::arg("target"));
  m.def("dummy_input_extension", [](const Correlation& p, int forced) { return dummy_input_extension(p, forced); },
        py::arg("p"), py::arg("forced_output") = 0);

  m.def("classical_vertices", [](const Scenario& s) { return classical_polytope(s).vertices; }, py::arg("scenario"));
  m.def(
      "facet_enumeration",
      [](std::vector<RationalVector> vertices, std::size_t max_rays) {
        return hpolytope_dict(facet_enumeration(VPolytope::from_points(std::move(vertices)), PolytopeLimits{max_rays}));
      },
      py::arg("vertices"), py::arg("max_rays") = 1'000'000);
  m.def(
      "gpt_projection",
      [](const Scenario& s, std::size_t max_rays) {
        const Scenario bell = s.parent_bell();
        const auto keep = postselection_coordinates(bell, s);
        return hpolytope_dict(fourier_motzkin_project(no_signalling_polytope(bell), keep, PolytopeLimits{max_rays}));
      },
      py::arg("scenario"), py::arg("max_rays") = 1'000'000);
  m.def(
      "membership",
      [](const RationalVector& q, std::vector<RationalVector> vertices) {
        return certificate_dict(membership(q, VPolytope::from_points(std::move(vertices))));
      },
      py::arg("point"), py::arg("vertices"));
  m.def(
      "extension_membership",
      [](const Correlation& p, const std::string& theory) { return certificate_dict(extension_membership(p, parse_theory(theory))); },
      py::arg("p"), py::arg("theory") = "classical");
  m.def(
      "classify_facets",
      [](const Scenario& s, const std::vector<std::tuple<RationalVector, Rational>>& facets) {
        std::vector<LinearInequality> ineqs;
        for (const auto& [c, b] : facets) ineqs.push_back({c, b});
        py::list out;
        for (const auto& o : facet_orbit_classify(ineqs, SymmetryGroup::instrumental(s))) {
          out.append(py::make_tuple(to_string(o.tag), o.members.size(), py::make_tuple(o.representative.coeffs, o.representative.bound)));
        }
        return out;
      },
      py::arg("scenario"), py::arg("facets"));

  m.def(
      "expression",
      [](const std::string& kind, const Rational& alpha, int n) {
        const LinearExpression e = catalog(make_spec(kind, alpha, n));
        return py::make_tuple(e.scenario, e.coeffs, e.constant);
      },
      py::arg("kind"), py::arg("alpha") = Rational(1), py::arg("n") = 2);
  m.def(
      "evaluate",
      [](const std::string& kind, const Correlation& p, const Rational& alpha, int n) {
        return catalog(make_spec(kind, alpha, n)).evaluate(p);
      },
      py::arg("kind"), py::arg("p"), py::arg("alpha") = Rational(1), py::arg("n") = 2);
  m.def(
      "bounds",
      [](const std::string& kind, const Rational& alpha, int n) {
        const VerifiedBounds v = verify_bounds(make_spec(kind, alpha, n));
        py::dict d;
        d["label"] = v.closed_form.label;
        d["classical"] = v.classical;
        d["quantum"] = v.quantum;
        d["quantum_exact"] = v.closed_form.quantum.to_string();
        d["gpt"] = v.gpt;
        d["verified"] = v.ok();
        return d;
      },
      py::arg("kind"), py::arg("alpha") = Rational(1), py::arg("n") = 2);
  m.def(
      "identity_residual",
      [](const std::string& kind, const Correlation& p, const Rational& alpha, int n) {
        return identity_check(make_spec(kind, alpha, n), p);
      },
      py::arg("kind"), py::arg("p"), py::arg("alpha") = Rational(1), py::arg("n") = 2);
  m.def(
      "sample_nosignalling",
      [](const Scenario& bell, std::uint64_t seed, int count) {
        std::mt19937_64 rng(seed);
        std::vector<Correlation> out;
        for (int i = 0; i < count; ++i) out.push_back(sample_nosignalling(bell, rng));
        return out;
      },
      py::arg("bell"), py::arg("seed") = 1, py::arg("count") = 1);

  m.def("bonet_born_table", [] { return born_table(bonet_strategy()).entries; });
  m.def("chained_born_table", [](int n) { return born_table(chained_strategy(n)).entries; }, py::arg("n"));
  m.def(
      "bonet_quantum_value",
      [] { return catalog(ExpressionSpec::bonet()).evaluate(postselect(born_table(bonet_strategy()), Scenario::instrumental(3, 2, 2))); });
  m.def(
      "tilted_search",
      [](const Rational& alpha) {
        const TiltedResult r = tilted_search(alpha);
        return py::make_tuple(r.value, r.instrumental_value);
      },
      py::arg("alpha"));
  m.def(
      "gpt_box_search",
      [](const std::string& kind, const Rational& alpha, int n) {
        const GptBoxResult r = gpt_box_search(catalog(make_spec(kind, alpha, n)));
        return py::make_tuple(r.value, r.box);
      },
      py::arg("kind"), py::arg("alpha") = Rational(1), py::arg("n") = 2);
}
