#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sqlab/experiments.hpp"

namespace py = pybind11;
using namespace sqlab;

namespace {

Signal make_signal(const Grid& g, const std::vector<cplx>& values) {
    return Signal(g, values);
}

std::string run_experiment(const std::string& config_json, const std::string& format) {
    ExperimentConfig cfg = ExperimentConfig::from_json(config_json);
    ExperimentReport rep;
    if (cfg.kind == "counterexample")
        rep = run_counterexample(cfg);
    else if (cfg.kind == "boundedness")
        rep = run_boundedness(cfg);
    else if (cfg.kind == "tile-audit")
        rep = run_tile_audit(cfg);
    else
        throw std::invalid_argument("run_experiment: unknown kind " + cfg.kind);
    return emit(rep, format);
}

}  // namespace

PYBIND11_MODULE(_sqlab, m) {
    m.doc() = "torus square-function laboratory";

    py::class_<Grid>(m, "Grid")
        .def(py::init<int, int>(), py::arg("n"), py::arg("length"))
        .def_readonly("n", &Grid::n)
        .def_readonly("length", &Grid::length)
        .def("__repr__", [](const Grid& g) {
            return "Grid(n=" + std::to_string(g.n) + ", length=" + std::to_string(g.length) + ")";
        });

    py::class_<Signal>(m, "Signal")
        .def(py::init(&make_signal), py::arg("grid"), py::arg("values"))
        .def_readonly("grid", &Signal::grid)
        .def_readonly("values", &Signal::values);

    m.def("to_json", &to_json, py::arg("signal"));
    m.def("signal_from_json", &signal_from_json, py::arg("text"));
    m.def("random_band_limited", &random_band_limited, py::arg("grid"), py::arg("seed"));
    m.def("dirichlet_pair", &dirichlet_pair, py::arg("grid"), py::arg("P"));
    m.def("lp_norm", &lp_norm, py::arg("signal"), py::arg("p"));
    m.def(
        "spectrum",
        [](const Signal& f) { return forward(f).coeff; },
        "fourier coefficients, ascending mode order", py::arg("signal"));

    m.def(
        "project",
        [](const Signal& f, long long lo, long long hi) {
            return project(f, FreqInterval(lo, hi, f.grid.length));
        },
        "sharp cutoff to [lo, hi) in 1/L lattice units", py::arg("signal"), py::arg("lo"),
        py::arg("hi"));
    m.def("linear_square_unit", &linear_square_unit, py::arg("signal"), py::arg("n_from"),
          py::arg("n_to"));
    m.def(
        "bilinear_project",
        [](const Signal& f, const Signal& g, long long lo, long long hi, bool oracle) {
            return bilinear_project(f, g, FreqInterval(lo, hi, f.grid.length),
                                    oracle ? BilinearMode::Oracle : BilinearMode::Fast);
        },
        py::arg("f"), py::arg("g"), py::arg("lo"), py::arg("hi"), py::arg("oracle") = false);
    m.def(
        "bilinear_square",
        [](const Signal& f, const Signal& g, long long a0, long long width, long long gap,
           int n_min, int n_max) {
            return bilinear_square(f, g,
                                   StripFamily(a0, width, gap, n_min, n_max, f.grid.length));
        },
        py::arg("f"), py::arg("g"), py::arg("a0"), py::arg("width"), py::arg("gap"),
        py::arg("n_min"), py::arg("n_max"));

    m.def("run_experiment", &run_experiment, "run a configured experiment, return the report",
          py::arg("config_json"), py::arg("format") = "json");
}
