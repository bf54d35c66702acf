#include "fbmlab/compensator.hpp"
#include "fbmlab/engine.hpp"
#include "fbmlab/experiments.hpp"
#include "fbmlab/models.hpp"
#include "fbmlab/partition.hpp"
#include "fbmlab/report_io.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace fbmlab;

namespace {

GaussianIncrementModel make_model(double hurst, const Partition& part) {
    return GaussianIncrementModel(HurstIndex(hurst), part);
}

TriangularFactor make_factor(const GaussianIncrementModel& model) {
    if (model.uniform_grid()) return factorize_toeplitz(model.stationary_autocovariances());
    return factorize(increment_covariance(model));
}

py::array_t<double> covariance_array(double hurst, const Partition& part) {
    const SymmetricMatrix cov = increment_covariance(make_model(hurst, part));
    const std::size_t k = cov.dim();
    py::array_t<double> out({k, k});
    auto buf = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) buf(i, j) = cov(i, j);
    return out;
}

py::tuple weights_tuple(double hurst, const Partition& part) {
    const auto [w, profile] = predictor_weights(make_model(hurst, part));
    const std::size_t k = w.dim();
    py::array_t<double> wm({k, k});
    auto wb = wm.mutable_unchecked<2>();
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < k; ++i) wb(j, i) = w.at(j, i);
    py::array_t<double> v(static_cast<py::ssize_t>(k));
    auto vb = v.mutable_unchecked<1>();
    for (std::size_t j = 0; j < k; ++j) vb(j) = profile.v[j];
    return py::make_tuple(std::move(wm), std::move(v));
}

py::array_t<double> sample_array(double hurst, const Partition& part, std::uint64_t n_paths,
                                 std::uint64_t seed) {
    SampleMatrix m;
    {
        py::gil_scoped_release release;
        m = sample_increments(make_factor(make_model(hurst, part)),
                              static_cast<std::size_t>(n_paths), seed);
    }
    py::array_t<double> out({static_cast<std::size_t>(m.n_paths), static_cast<std::size_t>(m.k)});
    auto buf = out.mutable_unchecked<2>();
    for (std::size_t p = 0; p < m.n_paths; ++p) {
        const auto row = m.path(p);
        for (std::size_t j = 0; j < m.k; ++j) buf(p, j) = row[j];
    }
    return out;
}

py::tuple decompose_tuple(double hurst, const Partition& part, std::vector<double> values) {
    const auto [w, profile] = predictor_weights(make_model(hurst, part));
    const DecompositionPath d = compensator_path(w, DiscretePath(part, std::move(values)));
    return py::make_tuple(py::array_t<double>(static_cast<py::ssize_t>(d.a.size()), d.a.data()),
                          py::array_t<double>(static_cast<py::ssize_t>(d.m.size()), d.m.data()));
}

double jacod_sum_at(double hurst, const Partition& part, double t) {
    const auto [w, profile] = predictor_weights(make_model(hurst, part));
    return jacod_sum(profile, part, t);
}

std::pair<std::string, std::vector<std::string>> run_experiment_json(
    const std::string& command, double hurst, double horizon, const std::string& levels,
    std::uint64_t paths, std::uint64_t seed, std::optional<double> ridge,
    std::optional<double> eps_sup, std::optional<double> probe_time, bool allow_large) {
    ExperimentConfig cfg;
    cfg.hurst = hurst;
    cfg.horizon = horizon;
    cfg.levels = parse_levels(levels);
    cfg.n_paths = paths;
    cfg.seed = seed;
    cfg.ridge = ridge;
    cfg.eps_sup = eps_sup;
    cfg.probe_time = probe_time.value_or(0.4 * horizon);
    cfg.allow_large = allow_large;

    py::gil_scoped_release release;
    if (command == "doobmeyer") {
        DoobMeyerOutcome o = run_doob_meyer_demo(cfg);
        o.report.manifest.format = "json";
        return {to_json_string(o.report), o.violations};
    }
    RunOutcome o;
    if (command == "converge")
        o = run_uniform_convergence(cfg);
    else if (command == "explode")
        o = run_explosion(cfg);
    else if (command == "martingale")
        o = run_martingale_null(cfg);
    else if (command == "energy")
        o = run_energy_zero(cfg);
    else if (command == "jacod")
        o = run_jacod(cfg);
    else
        throw ConfigError("unknown command '" + command + "'");
    o.report.manifest.format = "json";
    return {to_json_string(o.report), o.violations};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Discrete predictable compensators of fractional Brownian motion";
    m.attr("__version__") = FBMLAB_VERSION;

    py::class_<Partition>(m, "Partition")
        .def_static("uniform", &Partition::uniform, py::arg("horizon"), py::arg("steps"))
        .def_static("from_times", &Partition::from_times, py::arg("times"))
        .def("steps", &Partition::steps)
        .def("horizon", &Partition::horizon)
        .def("mesh", &Partition::mesh)
        .def("time", &Partition::time, py::arg("i"))
        .def("dt", &Partition::dt, py::arg("j"))
        .def("times",
             [](const Partition& p) {
                 return std::vector<double>(p.times().begin(), p.times().end());
             })
        .def("uniform_grid", &Partition::uniform_grid)
        .def("refines", &Partition::refines, py::arg("coarser"))
        .def("floor_index", &Partition::floor_index, py::arg("t"))
        .def("__len__", &Partition::steps)
        .def("__repr__", [](const Partition& p) {
            return "Partition(horizon=" + format_double(p.horizon()) +
                   ", steps=" + std::to_string(p.steps()) + ")";
        });

    m.def(
        "fbm_covariance",
        [](double hurst, double s, double t) { return fbm_covariance(s, t, HurstIndex(hurst)); },
        py::arg("hurst"), py::arg("s"), py::arg("t"),
        "Covariance of fractional Brownian motion at times s and t.");

    m.def(
        "analytic_energy",
        [](double hurst, double horizon, std::size_t k) {
            return analytic_energy(make_model(hurst, uniform_partition(horizon, k)));
        },
        py::arg("hurst"), py::arg("horizon"), py::arg("steps"),
        "Expected quadratic variation sum over a uniform grid: k (T/k)^(2H).");

    m.def("increment_covariance", &covariance_array, py::arg("hurst"), py::arg("partition"),
          "Dense covariance matrix of the grid increments.");

    m.def("predictor_weights", &weights_tuple, py::arg("hurst"), py::arg("partition"),
          "One-step regression weights W (strictly lower, row j predicts increment j) and\n"
          "innovation variances v.");

    m.def("sample_increments", &sample_array, py::arg("hurst"), py::arg("partition"),
          py::arg("n_paths"), py::arg("seed"),
          "Sample increment rows; path i depends only on (seed, i), never on scheduling.");

    m.def("decompose", &decompose_tuple, py::arg("hurst"), py::arg("partition"),
          py::arg("values"),
          "Split a discrete path into (compensator, martingale part), both starting at 0.");

    m.def(
        "quadratic_variation",
        [](const std::vector<double>& values) { return quadratic_variation(values); },
        py::arg("values"), "Sum of squared increments of a discrete path.");

    m.def("jacod_sum", &jacod_sum_at, py::arg("hurst"), py::arg("partition"), py::arg("t"),
          "Sum of innovation variances over increments completed by time t.");

    m.def("run_experiment_json", &run_experiment_json, py::arg("command"),
          py::arg("hurst") = 0.75, py::arg("horizon") = 1.0, py::arg("levels") = "4:10",
          py::arg("paths") = 10000, py::arg("seed") = 42, py::arg("ridge") = py::none(),
          py::arg("eps_sup") = py::none(), py::arg("probe_time") = py::none(),
          py::arg("allow_large") = false,
          "Run one named experiment; returns (JSON report text, violated bounds).");
}
