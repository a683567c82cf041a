// Python access to group construction, domains, snapshots and IRS estimates.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "irslab/chabauty.hpp"
#include "irslab/domains.hpp"
#include "irslab/error.hpp"
#include "irslab/fuchsian.hpp"
#include "irslab/irs.hpp"
#include "irslab/surfaces.hpp"

namespace py = pybind11;
using namespace irslab;

namespace {

py::dict estimate_dict(const IRSEstimate& e) {
  py::dict d;
  d["functional"] = e.functional.name();
  d["mean"] = e.mean;
  d["std_error"] = e.std_error;
  d["n"] = e.n_samples;
  d["seed"] = e.seed;
  d["delta"] = e.delta;
  d["bias_bound"] = e.truncation_bias_bound;
  d["acceptance"] = e.acceptance;
  return d;
}

py::dict check_dict(const ThinAreaCheck& r) {
  py::dict d;
  d["delta"] = r.delta;
  d["length"] = r.len;
  d["closed_form"] = r.closed_form;
  d["quadrature"] = r.quadrature;
  d["relative_error"] = r.relative_error;
  d["cusp_bound"] = r.cusp_bound;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fuchsian groups, Dirichlet domains and invariant random subgroups";

  py::register_exception<Error>(m, "IrslabError", PyExc_RuntimeError);

  py::class_<HPoint>(m, "HPoint")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def_property_readonly("x", &HPoint::x)
      .def_property_readonly("y", &HPoint::y)
      .def("__repr__", [](const HPoint& z) {
        std::ostringstream s;
        s << "HPoint(" << z.x() << ", " << z.y() << ")";
        return s.str();
      });

  py::class_<Isometry>(m, "Isometry")
      .def(py::init<>())
      .def(py::init<double, double, double, double>(), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"))
      .def_property_readonly("a", &Isometry::a)
      .def_property_readonly("b", &Isometry::b)
      .def_property_readonly("c", &Isometry::c)
      .def_property_readonly("d", &Isometry::d)
      .def("trace", &Isometry::trace)
      .def("inverse", &Isometry::inverse)
      .def("__mul__", [](const Isometry& f, const Isometry& g) { return f * g; })
      .def("__call__", [](const Isometry& g, const HPoint& z) { return apply(g, z); })
      .def("entries", [](const Isometry& g) { return std::vector<double>{g.a(), g.b(), g.c(), g.d()}; });

  m.def("distance", [](const HPoint& z, const HPoint& w) { return distance(z, w); });
  m.def("translation_length", [](const Isometry& g) { return translation_length(g); });
  m.def("frobenius_distance", &frobenius_distance);
  m.def("rotation_about_i", &rotation_about_i);
  m.def("dilation", &dilation);

  py::class_<FuchsianGroup>(m, "FuchsianGroup")
      .def_readonly("generators", &FuchsianGroup::generators)
      .def_readonly("generator_names", &FuchsianGroup::generator_names)
      .def_property_readonly("signature",
                             [](const FuchsianGroup& g) -> std::optional<std::pair<int, int>> {
                               if (!g.signature) return std::nullopt;
                               return std::make_pair(g.signature->genus(), g.signature->punctures());
                             })
      .def("is_lattice", &FuchsianGroup::is_lattice)
      .def("core_area", &FuchsianGroup::core_area)
      .def("to_text", [](const FuchsianGroup& g) { return to_text(g); })
      .def("conjugate", [](const FuchsianGroup& g, const Isometry& h) { return conjugate_group(g, h); });

  m.def("punctured_torus", &punctured_torus, py::arg("len_a"), py::arg("len_b"), py::arg("twist") = 0.0);
  m.def("pair_of_pants", &pair_of_pants, py::arg("l1"), py::arg("l2"), py::arg("l3"));
  m.def("cyclic_group", &cyclic_group);
  m.def("parse_group", &parse_group);
  m.def("load_group", &load_group);
  m.def("pinch_member", [](const std::string& family, double t) { return pinch_member(parse_pinch_family(family), t); },
        py::arg("family"), py::arg("t"));

  m.def("euler_char", [](int genus, int punctures) { return SurfaceSig(genus, punctures).euler_char(); });
  m.def("fiber_bound", [](int genus, int punctures) { return fiber_bound(SurfaceSig(genus, punctures)); });

  m.def(
      "dirichlet_area",
      [](const FuchsianGroup& g) { return polygon_area(truncate_domain(g, dirichlet_domain(g))); },
      "Gauss-Bonnet area of the (truncated) Dirichlet domain at i");
  m.def("certify_group", [](const FuchsianGroup& g) { return certify_group(g); });
  m.def("dirichlet_svg", [](const FuchsianGroup& g) { return to_svg(dirichlet_domain(g)); });

  m.def("cusp_strip_area", &cusp_strip_area);
  m.def("funnel_sector_area", &funnel_sector_area);
  m.def("check_cusp_strip", [](double delta) { return check_dict(check_cusp_strip(delta)); });
  m.def("check_funnel_sector", [](double len, double delta) { return check_dict(check_funnel_sector(len, delta)); });

  m.def(
      "snapshot_size",
      [](const FuchsianGroup& g, double radius) {
        const TileWalker walker(dirichlet_domain(g));
        return snapshot(walker, Isometry{}, kI, radius).elements.size();
      },
      py::arg("group"), py::arg("radius"));
  m.def(
      "escape_is_abelian",
      [](const FuchsianGroup& g, int steps, double radius) {
        if (g.peripheral_words.empty()) throw Error(ErrorKind::InvalidArgument, "group has no cusp");
        return escape_dichotomy(g, g.peripheral_words[0], steps, radius).terminal_abelian;
      },
      py::arg("group"), py::arg("steps") = 8, py::arg("radius") = 3.0);

  m.def(
      "estimate",
      [](const FuchsianGroup& g, const std::string& functional, double radius, double delta, std::size_t n,
         std::uint64_t seed, unsigned threads) {
        EstimateOptions options;
        options.threads = threads;
        const TestFunctional f = parse_functional(functional);
        IRSEstimate e;
        {
          py::gil_scoped_release release;
          e = estimate_functional(g, f, radius, delta, n, seed, options);
        }
        return estimate_dict(e);
      },
      py::arg("group"), py::arg("functional"), py::arg("radius") = 3.0, py::arg("delta") = 0.2,
      py::arg("n") = 10000, py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "degenerate",
      [](const std::string& family, const std::vector<double>& schedule, const std::vector<std::string>& functionals,
         double radius, double delta, std::size_t n, std::uint64_t seed, unsigned threads) {
        const PinchFamily f = parse_pinch_family(family);
        DegenerationConfig cfg;
        cfg.schedule = schedule;
        for (const std::string& s : functionals) cfg.functionals.push_back(parse_functional(s));
        cfg.radius = radius;
        cfg.delta = delta;
        cfg.n = n;
        cfg.seed = seed;
        cfg.options.threads = threads;
        DegenerationResult result;
        {
          py::gil_scoped_release release;
          result = degeneration_experiment([f](double t) { return pinch_member(f, t); }, pinch_target(f), cfg);
        }
        py::dict out;
        out["csv"] = to_csv(result);
        out["json"] = to_json(result);
        out["pass"] = result.pass();
        return out;
      },
      py::arg("family"), py::arg("schedule"), py::arg("functionals"), py::arg("radius") = 3.0,
      py::arg("delta") = 0.2, py::arg("n") = 10000, py::arg("seed") = 1, py::arg("threads") = 1);
}
