#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ponomarev/analysis.hpp"
#include "ponomarev/errors.hpp"
#include "ponomarev/io.hpp"

namespace py = pybind11;
using namespace ponomarev;

namespace {

GaugeSpec gauge(const std::string& json) { return gauge_from_json(Json::parse(json)); }
TauSpec tau(const std::string& json) { return tau_from_json(Json::parse(json)); }

Side side_of(const std::string& s) {
  if (s == "domain") return Side::domain;
  if (s == "target") return Side::target;
  throw ConfigError("side must be 'domain' or 'target'");
}

// Applies fn row by row to an (m, n) array, or once to a length-n vector.
template <class F>
py::array_t<double> map_points(const PonomarevMap& map, py::array_t<double> x, F fn) {
  const int n = map.dimension();
  auto in = x.unchecked();
  if (in.ndim() == 1) {
    if (in.shape(0) != n) throw DomainError("point has wrong dimension");
    Point p(n);
    for (int i = 0; i < n; ++i) p[i] = in(i);
    const Point y = fn(p);
    py::array_t<double> out(n);
    auto o = out.mutable_unchecked<1>();
    for (int i = 0; i < n; ++i) o(i) = y[i];
    return out;
  }
  if (in.ndim() != 2 || in.shape(1) != n) throw DomainError("expected an (m, n) array");
  const auto m = in.shape(0);
  py::array_t<double> out({m, static_cast<py::ssize_t>(n)});
  auto o = out.mutable_unchecked<2>();
  Point p(n);
  for (py::ssize_t r = 0; r < m; ++r) {
    for (int i = 0; i < n; ++i) p[i] = in(r, i);
    const Point y = fn(p);
    for (int i = 0; i < n; ++i) o(r, i) = y[i];
  }
  return out;
}

py::object json_to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nested-cube homeomorphisms and gauge Hausdorff measures";

  // Translators registered later are tried first, so the base goes first.
  auto base = py::register_exception<Error>(m, "PonomarevError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<RidgeSetError>(m, "RidgeSetError", base.ptr());

  // Gauges take their JSON config form as a string; the Python wrapper
  // serializes dicts.
  m.def("eval_h", [](const std::string& g, double t) { return eval_h(gauge(g), t); });
  m.def("eval_tau", [](const std::string& t, double x) { return eval_tau(tau(t), x); });
  m.def("tau_root", [](const std::string& t, double p, int n, double tol) {
    return tau_root(tau(t), p, n, tol);
  }, py::arg("tau"), py::arg("p"), py::arg("n"), py::arg("tol") = 1e-14);
  m.def("thm1_sequence", [](const std::string& t, int n, int depth) {
    return thm1_sequence(tau(t), n, depth);
  });
  m.def("thm2_sequence", [](const std::string& g, int depth, double safety) {
    return thm2_sequence(gauge(g), depth, safety);
  }, py::arg("gauge"), py::arg("depth"), py::arg("safety") = 0.5);
  m.def("diameter_constant", &diameter_constant);

  py::class_<SequencePack>(m, "SequencePack")
      .def_static("standard", &SequencePack::standard)
      .def_static("custom", &SequencePack::custom)
      .def_static("reciprocal", &SequencePack::reciprocal)
      .def_static("identity", &SequencePack::identity)
      .def_property_readonly("dimension", &SequencePack::dimension)
      .def_property_readonly("depth", &SequencePack::depth)
      .def_property_readonly("is_standard", &SequencePack::is_standard)
      .def("a", &SequencePack::a)
      .def("b", &SequencePack::b)
      .def("r", &SequencePack::r)
      .def("rt", &SequencePack::rt)
      .def("alpha", &SequencePack::alpha)
      .def("beta", &SequencePack::beta)
      .def("prefix", &SequencePack::prefix)
      .def("validate", &SequencePack::validate, py::arg("max_gluing_ulps") = 4.0)
      .def("max_gluing_residual_ulps", &SequencePack::max_gluing_residual_ulps);

  py::class_<PonomarevMap>(m, "PonomarevMap")
      .def_static("build", &PonomarevMap::build, py::arg("pack"),
                  py::arg("provenance") = "custom")
      .def_property_readonly("dimension", &PonomarevMap::dimension)
      .def_property_readonly("depth", &PonomarevMap::depth)
      .def_property_readonly("pack", &PonomarevMap::pack)
      .def_property_readonly("truncation_error", &PonomarevMap::truncation_error)
      .def("eval", [](const PonomarevMap& f, py::array_t<double> x) {
        return map_points(f, x, [&](const Point& p) { return f.eval(p); });
      })
      .def("eval_inverse", [](const PonomarevMap& f, py::array_t<double> y) {
        return map_points(f, y, [&](const Point& p) { return f.eval_inverse(p); });
      })
      .def("derivative", [](const PonomarevMap& f, const Point& x) {
        return f.derivative(x).matrix;
      })
      .def("jacobian_det", &PonomarevMap::jacobian_det)
      .def("locate", [](const PonomarevMap& f, const Point& x, const std::string& side) {
        const auto loc = locate(x, f.pack(), f.depth(), side_of(side));
        return py::make_tuple(loc.region == Region::core ? "core" : "annulus",
                              loc.word.to_string());
      }, py::arg("x"), py::arg("side") = "domain")
      .def("truncated", &PonomarevMap::truncated);

  m.def("center", [](const std::string& word, const SequencePack& pack,
                     const std::string& side) {
    return center(VertexWord::parse(word), pack, side_of(side));
  }, py::arg("word"), py::arg("pack"), py::arg("side") = "domain");

  m.def("code_z", [](const std::string& word) {
    const auto cube = code_z(VertexWord::parse(word));
    return py::make_tuple(cube.level, cube.corner_index);
  });
  m.def("dyadic_preimage", [](const std::vector<double>& corner, int k) {
    return dyadic_preimage(corner, k).to_string();
  });

  m.def("lebesgue_level", [](const SequencePack& pack, int k, const std::string& side) {
    return lebesgue_level(pack, k, side_of(side));
  }, py::arg("pack"), py::arg("k"), py::arg("side") = "domain");
  m.def("hausdorff_upper_sum", [](const std::string& g, const SequencePack& pack, int k) {
    return json_to_py(to_json(hausdorff_upper_sum(gauge(g), pack, k)));
  });
  m.def("grand_norm_report", [](const PonomarevMap& f, const std::vector<double>& eps) {
    return json_to_py(to_json(grand_norm_report(f, eps)));
  });
  m.def("sobolev_norm", [](const PonomarevMap& f, double p) {
    const auto r = sobolev_norm(f, p);
    py::dict d;
    d["p"] = r.p;
    d["annulus_terms"] = r.annulus_terms;
    d["partial_sums"] = r.partial_sums;
    d["core_term"] = r.core_term;
    d["total"] = r.total;
    return d;
  });
  m.def("shell_integral", [](double alpha, double beta, double p, double r, double R, int n) {
    return shell_integral(RadialIntegrand::radial_gradient(alpha, beta, p), r, R, n);
  }, py::arg("alpha"), py::arg("beta"), py::arg("p"), py::arg("r"), py::arg("R"), py::arg("n"));
  m.def("default_eps_grid", &default_eps_grid);
}
