#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fpplab/boundary.hpp"
#include "fpplab/contours.hpp"
#include "fpplab/growth.hpp"
#include "fpplab/harness.hpp"
#include "fpplab/seeds.hpp"

namespace py = pybind11;
using namespace fpplab;

namespace {

Vertex to_vertex(const std::vector<int>& c) {
  if (c.empty() || static_cast<int>(c.size()) > kMaxDim) throw std::invalid_argument("vertex: bad dimension");
  Vertex v = Vertex::origin(static_cast<int>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) v[static_cast<int>(i)] = c[i];
  return v;
}

ExperimentConfig make_config(const std::string& recipe, const std::map<std::string, std::string>& overrides) {
  std::string text = "[" + recipe + "]\n";
  for (const auto& [k, v] : overrides) text += k + " = " + v + "\n";
  return ExperimentConfig::parse(text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = kLibraryVersion;

  m.def("seed_stream", &seed_stream, py::arg("base"), py::arg("index"));

  py::class_<WeightModel>(m, "WeightModel")
      .def_static("parse", &WeightModel::parse)
      .def_static("exponential", &WeightModel::exponential, py::arg("rate") = 1.0)
      .def_static("uniform", &WeightModel::uniform, py::arg("lo"), py::arg("hi"))
      .def_static("dirac", &WeightModel::dirac, py::arg("value"))
      .def_static("bernoulli_zero", &WeightModel::bernoulli_zero, py::arg("p0"), py::arg("high"))
      .def_static("pareto", &WeightModel::pareto, py::arg("beta"))
      .def_static("tower", &WeightModel::tower, py::arg("levels"), py::arg("d"))
      .def("descriptor", &WeightModel::descriptor)
      .def("survival", &WeightModel::survival)
      .def("cdf", &WeightModel::cdf)
      .def("is_subcritical", &WeightModel::is_subcritical)
      .def("__repr__", [](const WeightModel& w) { return "WeightModel('" + w.descriptor() + "')"; })
      .def(py::self == py::self);

  py::class_<YStatistic>(m, "YStatistic")
      .def(py::init<WeightModel, int>(), py::arg("model"), py::arg("d"))
      .def("tail", &YStatistic::tail)
      .def("expected_truncated", &YStatistic::expected_truncated);

  py::class_<BoundRatio>(m, "BoundRatio")
      .def_readonly("lower", &BoundRatio::lower)
      .def_readonly("upper", &BoundRatio::upper)
      .def_readonly("ratio", &BoundRatio::ratio);
  m.def("bound_ratio", &bound_ratio, py::arg("y"), py::arg("t"));

  py::class_<PassageField>(m, "PassageField")
      .def_property_readonly("horizon", &PassageField::horizon)
      .def_property_readonly("dim", &PassageField::dim)
      .def_property_readonly("box_radius", [](const PassageField& pf) { return pf.box().radius(); })
      .def("times",
           [](const PassageField& pf) {
             auto t = pf.times();
             return py::array_t<double>(static_cast<py::ssize_t>(t.size()), t.data());
           })
      .def("time", [](const PassageField& pf, const std::vector<int>& v) { return pf.time(to_vertex(v)); })
      .def("ball_size", &PassageField::ball_size)
      .def("reached_count", &PassageField::reached_count);

  m.def(
      "compute_passage",
      [](const WeightModel& model, int d, int box_radius, double horizon, std::uint64_t seed) {
        py::gil_scoped_release release;
        return compute_passage(EdgeWeightField(model, seed), LatticeBox(d, box_radius), horizon);
      },
      py::arg("model"), py::arg("d"), py::arg("box_radius"), py::arg("horizon"), py::arg("seed"));

  m.def(
      "boundary_timeline",
      [](const PassageField& pf) {
        BoundaryTimeline tl = boundary_timeline(pf);
        return py::make_tuple(tl.breakpoints, tl.counts);
      },
      "(breakpoints, counts) of the edge boundary size step function");
  m.def("count_edge_boundary", &count_edge_boundary);
  m.def("hole_counts", [](const PassageField& pf, double s) {
    HoleCensus h = hole_census_at(pf, s);
    return py::make_tuple(h.components.size(), h.size_one_count());
  });

  m.def("count_fixed_star_animals", &count_fixed_star_animals, py::arg("n"), py::arg("d"), py::arg("symmetry") = 0);
  m.def("contour_count_bound", &contour_count_bound);

  m.def("recipe_names", &recipe_names);
  m.def(
      "default_config", [](const std::string& name) { return default_config(name).serialize(); },
      "serialized default config of a recipe");
  m.def(
      "run_recipe",
      [](const std::string& recipe, const std::map<std::string, std::string>& overrides, bool write) {
        ExperimentConfig cfg = make_config(recipe, overrides);
        RunRecord r;
        {
          py::gil_scoped_release release;
          r = write ? run_recipe(cfg) : execute_recipe(cfg);
        }
        return r.summary.dump();
      },
      py::arg("recipe"), py::arg("overrides") = std::map<std::string, std::string>{}, py::arg("write") = false,
      "runs a recipe and returns its JSON summary as text");

  py::register_exception<GuardFailure>(m, "GuardFailure", PyExc_RuntimeError);
}
