#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cpd/detect.hpp"
#include "cpd/evaluation.hpp"
#include "cpd/simulation.hpp"
#include "cpd/theorem1_suite.hpp"

namespace py = pybind11;
using namespace cpd;

namespace {

TimeSeries make_series(int p, int n, std::vector<double> data) {
    return TimeSeries(p, n, std::move(data));
}

DetectConfig make_config(int n, int p, double sigma, double delta,
                         const std::string& regime, double L, const std::string& grid,
                         double adic_ratio, const std::string& aggregation, int threads) {
    DetectConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.sigma = sigma;
    cfg.delta = delta;
    cfg.regime = regime == "subgaussian" ? NoiseRegime::subgaussian : NoiseRegime::gaussian;
    cfg.L = L;
    if (grid == "complete")
        cfg.grid_kind = GridKind::complete;
    else if (grid == "adic")
        cfg.grid_kind = GridKind::adic;
    else
        cfg.grid_kind = GridKind::dyadic;
    cfg.adic_ratio = adic_ratio;
    cfg.aggregation =
        aggregation == "first_keep" ? AggregationVariant::first_keep : AggregationVariant::merge;
    cfg.threads = threads;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_cpd, m) {
    m.doc() = "Multiscale change-point detection";

    py::class_<TimeSeries>(m, "TimeSeries")
        .def(py::init(&make_series), py::arg("p"), py::arg("n"), py::arg("data"))
        .def_property_readonly("p", &TimeSeries::p)
        .def_property_readonly("n", &TimeSeries::n)
        .def("raw", &TimeSeries::raw);

    py::class_<DetectConfig>(m, "DetectConfig")
        .def(py::init(&make_config), py::arg("n"), py::arg("p"), py::arg("sigma") = 1.0,
             py::arg("delta") = 0.1, py::arg("regime") = "gaussian", py::arg("L") = 0.0,
             py::arg("grid") = "dyadic", py::arg("adic_ratio") = 0.5,
             py::arg("aggregation") = "merge", py::arg("threads") = 1)
        .def_readwrite("n", &DetectConfig::n)
        .def_readwrite("p", &DetectConfig::p)
        .def_readwrite("sigma", &DetectConfig::sigma)
        .def_readwrite("delta", &DetectConfig::delta)
        .def_readwrite("L", &DetectConfig::L)
        .def_readwrite("threads", &DetectConfig::threads);

    py::class_<SegComponent>(m, "SegComponent")
        .def_readonly("lo", &SegComponent::lo)
        .def_readonly("hi", &SegComponent::hi)
        .def_readonly("scales", &SegComponent::scales)
        .def("tau", &SegComponent::tau)
        .def("tau_int", &SegComponent::tau_int);

    py::class_<Segmentation>(m, "Segmentation")
        .def_readonly("components", &Segmentation::components)
        .def("K_hat", &Segmentation::K_hat)
        .def("changepoints", &Segmentation::changepoints)
        .def("to_json", &Segmentation::to_json);

    py::class_<GroundTruth>(m, "GroundTruth")
        .def_readonly("n", &GroundTruth::n)
        .def_readonly("p", &GroundTruth::p)
        .def_readonly("tau", &GroundTruth::tau)
        .def_readonly("mus", &GroundTruth::mus)
        .def("K", &GroundTruth::K)
        .def("height", &GroundTruth::height)
        .def("length", &GroundTruth::length)
        .def("sparsity", &GroundTruth::sparsity)
        .def("theta", &GroundTruth::theta)
        .def("to_json", &GroundTruth::to_json);

    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("no_spurious", &EvalResult::no_spurious)
        .def_readonly("detected", &EvalResult::detected)
        .def_readonly("localization_error", &EvalResult::localization_error)
        .def_readonly("K_hat", &EvalResult::K_hat)
        .def_readonly("K", &EvalResult::K)
        .def("to_json", &EvalResult::to_json);

    m.def("detect", &detect, py::arg("series"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("calibration_json", &calibration_json, py::arg("config"));
    m.def("make_signal", &make_signal, py::arg("n"), py::arg("p"), py::arg("tau"),
          py::arg("mus"));
    m.def(
        "add_noise",
        [](const GroundTruth& truth, const std::string& model, double sigma,
           std::uint64_t seed) {
            return add_noise(truth, noise_model_from_string(model), sigma, seed);
        },
        py::arg("truth"), py::arg("model"), py::arg("sigma"), py::arg("seed"));
    m.def("score", &score, py::arg("result"), py::arg("truth"));
    m.def(
        "run_theorem1_suite",
        [](int n_min, int n_max) {
            auto res = run_theorem1_suite(n_min, n_max);
            py::dict d;
            d["instances"] = res.instances;
            d["failures"] = res.failures;
            d["pass"] = res.pass();
            return d;
        },
        py::arg("n_min") = 6, py::arg("n_max") = 12);
}
