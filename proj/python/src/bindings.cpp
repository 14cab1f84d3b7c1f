#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "kdv5/calibration.hpp"
#include "kdv5/config.hpp"
#include "kdv5/diagnostics.hpp"
#include "kdv5/errors.hpp"
#include "kdv5/evolution.hpp"
#include "kdv5/families.hpp"
#include "kdv5/report.hpp"
#include "kdv5/scenarios.hpp"
#include "kdv5/weights.hpp"

namespace py = pybind11;
using namespace kdv5;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

RealField field_of(const Grid& g, const Array& a) {
  if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != g.size()) {
    throw std::invalid_argument("expected a 1-d array with " + std::to_string(g.size()) + " samples");
  }
  return RealField(g, std::vector<double>(a.data(), a.data() + a.shape(0)));
}

Array array_of(std::span<const double> v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Array array_of(const RealField& f) { return array_of(f.samples()); }

py::dict trajectory_dict(const Trajectory& t) {
  const std::size_t rows = t.size();
  const std::size_t n = rows ? t.grid().size() : 0;
  Array fields({rows, n});
  double* p = fields.mutable_data();
  for (const auto& f : t.fields) p = std::copy(f.samples().begin(), f.samples().end(), p);
  py::dict d;
  d["times"] = array_of(t.times);
  d["fields"] = fields;
  d["iterations"] = t.iterations;
  return d;
}

Trajectory trajectory_of(const Grid& g, const Array& times, const Array& fields, int k, bool nonlinear) {
  if (fields.ndim() != 2 || fields.shape(0) != times.shape(0) || static_cast<std::size_t>(fields.shape(1)) != g.size()) {
    throw std::invalid_argument("fields must have shape (len(times), grid.n)");
  }
  Trajectory t;
  t.k = k;
  t.nonlinear = nonlinear;
  const double* p = fields.data();
  for (py::ssize_t i = 0; i < times.shape(0); ++i, p += g.size()) {
    t.times.push_back(times.data()[i]);
    t.fields.emplace_back(g, std::vector<double>(p, p + g.size()));
  }
  return t;
}

WeightChoice weight_of(std::optional<double> N) { return WeightChoice{N}; }

}  // namespace

PYBIND11_MODULE(_kdv5, m) {
  m.doc() = "Fifth-order KdV simulator and weighted-norm diagnostics";

  py::register_exception<BlowUp>(m, "BlowUp", PyExc_RuntimeError);
  py::register_exception<NoContraction>(m, "NoContraction", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainTooSmall>(m, "DomainTooSmall", PyExc_ValueError);

  py::class_<Grid>(m, "Grid")
      .def(py::init<double, std::size_t>(), py::arg("L"), py::arg("n"))
      .def_property_readonly("L", &Grid::half_width)
      .def_property_readonly("n", &Grid::size)
      .def_property_readonly("dx", &Grid::dx)
      .def("x", [](const Grid& g) { return array_of(g.points()); })
      .def("wavenumbers", [](const Grid& g) { return array_of(g.signed_wavenumbers()); });

  // Fields
  m.def("gaussian", [](const Grid& g, double a, double w, double c) { return array_of(gaussian(g, a, w, c)); },
        py::arg("grid"), py::arg("amplitude") = 1.0, py::arg("width") = 8.0, py::arg("center") = 0.0);
  m.def("random_family",
        [](const Grid& g, std::uint64_t seed, std::size_t count) {
          py::list out;
          for (const auto& f : random_family(g, seed, count)) out.append(array_of(f));
          return out;
        },
        py::arg("grid"), py::arg("seed"), py::arg("count"));

  // Spectral operators
  m.def("derivative", [](const Grid& g, const Array& u, int order) { return array_of(derivative(field_of(g, u), order)); },
        py::arg("grid"), py::arg("u"), py::arg("order"));
  m.def("fractional_derivative",
        [](const Grid& g, const Array& u, double s) { return array_of(fractional_derivative(field_of(g, u), s)); },
        py::arg("grid"), py::arg("u"), py::arg("s"));
  m.def("free_propagate", [](const Grid& g, const Array& u, double t) { return array_of(free_propagate(field_of(g, u), t)); },
        py::arg("grid"), py::arg("u"), py::arg("t"));
  m.def("l2_norm", [](const Grid& g, const Array& u) { return l2_norm(field_of(g, u)); }, py::arg("grid"), py::arg("u"));

  // Weights
  m.def("smooth_weight", [](const Grid& g, double r, int j) { return array_of(smooth_weight(g, r, j)); },
        py::arg("grid"), py::arg("r"), py::arg("j") = 0);
  m.def("truncated_weight", [](const Grid& g, double N, int j) { return array_of(truncated_weight(g, N, j)); },
        py::arg("grid"), py::arg("N"), py::arg("j") = 0);
  m.def("odd_weight",
        [](const Grid& g, double N, double alpha, bool tilde, int j) { return array_of(odd_weight(g, N, alpha, tilde, j)); },
        py::arg("grid"), py::arg("N"), py::arg("alpha") = 0.125, py::arg("tilde") = false, py::arg("j") = 0);

  // Evolution
  m.def("integrate",
        [](const Grid& g, const Array& u0, double T, double dt, int k, bool nonlinear, std::size_t store_every) {
          EvolutionOptions o;
          o.nonlinear = nonlinear;
          o.store_every = store_every;
          Trajectory t;
          {
            py::gil_scoped_release release;
            t = integrate(field_of(g, u0), T, dt, k, o);
          }
          return trajectory_dict(t);
        },
        py::arg("grid"), py::arg("u0"), py::arg("T"), py::arg("dt"), py::arg("k") = 1, py::arg("nonlinear") = true,
        py::arg("store_every") = 1);
  m.def("picard_solve",
        [](const Grid& g, const Array& u0, double T, std::size_t nt, int k, double tol, int max_iter) {
          Trajectory t;
          {
            py::gil_scoped_release release;
            t = picard_solve(field_of(g, u0), T, nt, k, tol, max_iter);
          }
          return trajectory_dict(t);
        },
        py::arg("grid"), py::arg("u0"), py::arg("T"), py::arg("nt"), py::arg("k") = 1, py::arg("tol") = 1e-10,
        py::arg("max_iter") = 60);

  // Diagnostics
  m.def("sobolev_norm", [](const Grid& g, const Array& u, double s) { return sobolev_norm(field_of(g, u), s); },
        py::arg("grid"), py::arg("u"), py::arg("s"));
  m.def("weighted_l2_norm",
        [](const Grid& g, const Array& u, double r, std::optional<double> N) {
          return weighted_l2_norm(field_of(g, u), r, weight_of(N));
        },
        py::arg("grid"), py::arg("u"), py::arg("r"), py::arg("N") = py::none());
  m.def("conserved_quantities",
        [](const Grid& g, const Array& u, int k) {
          const ConservedQuantities c = conserved_quantities(field_of(g, u), k);
          return py::make_tuple(c.I1, c.I2);
        },
        py::arg("grid"), py::arg("u"), py::arg("k"));
  m.def("lambda_norms",
        [](const Grid& g, const Array& times, const Array& fields, double r, int k, double rho) {
          const LambdaNorms l = lambda_norms(trajectory_of(g, times, fields, k, true), r, k, rho);
          return py::make_tuple(l.lambda, l.Lambda);
        },
        py::arg("grid"), py::arg("times"), py::arg("fields"), py::arg("r") = 0.5, py::arg("k") = 1,
        py::arg("rho") = 1.0);
  m.def("weighted_energy_residual",
        [](const Grid& g, const Array& times, const Array& fields, double r, int k, std::optional<double> N,
           bool nonlinear) {
          return weighted_energy_residual(trajectory_of(g, times, fields, k, nonlinear), r, k, weight_of(N));
        },
        py::arg("grid"), py::arg("times"), py::arg("fields"), py::arg("r"), py::arg("k") = 1,
        py::arg("N") = py::none(), py::arg("nonlinear") = true);
  m.def("interpolation_ratio",
        [](const Grid& g, const Array& u, double a, double b, double theta) {
          return interpolation_check(field_of(g, u), a, b, theta).ratio();
        },
        py::arg("grid"), py::arg("u"), py::arg("a"), py::arg("b"), py::arg("theta"));

  // Scenarios
  m.def("run_scenario",
        [](const std::filesystem::path& config, const std::string& scenario, std::optional<std::filesystem::path> out,
           std::optional<std::filesystem::path> calibration) {
          ScenarioConfig cfg = parse_config(config);
          cfg.scenario = scenario;
          if (out) cfg.out = *out;
          validate(cfg);
          const Calibration cal = load_calibration(calibration ? *calibration : default_calibration_path());
          ScenarioResult res;
          {
            py::gil_scoped_release release;
            res = run_scenario(cfg, cal);
          }
          if (out) emit(res, *out);
          return summary_json(res);
        },
        py::arg("config"), py::arg("scenario"), py::arg("out") = py::none(), py::arg("calibration") = py::none(),
        "Runs a scenario and returns its summary as a JSON string; writes series.csv and summary.json when `out` "
        "is given.");
  m.def("default_calibration_path", [] { return default_calibration_path(); });
}
