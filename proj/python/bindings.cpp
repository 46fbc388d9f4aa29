#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "smoothstop/errors.hpp"
#include "smoothstop/estimator.hpp"
#include "smoothstop/experiments.hpp"
#include "smoothstop/oracles.hpp"
#include "smoothstop/random.hpp"
#include "smoothstop/stopping.hpp"

namespace py = pybind11;
using namespace smoothstop;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

Spectrum spectrum_from(const py::object& obj) {
    if (py::isinstance<Spectrum>(obj)) return obj.cast<Spectrum>();
    return Spectrum(to_vector(obj.cast<py::array_t<double, py::array::c_style | py::array::forcecast>>()));
}

Signal signal_from(const py::object& obj) {
    if (py::isinstance<Signal>(obj)) return obj.cast<Signal>();
    return Signal{to_vector(obj.cast<py::array_t<double, py::array::c_style | py::array::forcecast>>()), "", {}};
}

Observation observation_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& y, double delta) {
    Observation obs;
    obs.y = to_vector(y);
    obs.delta = delta;
    return obs;
}

}  // namespace

PYBIND11_MODULE(_smoothstop, m) {
    m.doc() = "Smoothed-residual early stopping for truncated SVD estimation";

    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
    py::register_exception<MissingSeed>(m, "MissingSeed", PyExc_ValueError);

    py::class_<Spectrum>(m, "Spectrum")
        .def(py::init([](const py::array_t<double, py::array::c_style | py::array::forcecast>& values) {
                 return Spectrum(to_vector(values));
             }),
             py::arg("values"))
        .def_property_readonly("dimension", &Spectrum::dimension)
        .def_property_readonly("values", [](const Spectrum& s) {
            return to_array(std::vector<double>(s.values().begin(), s.values().end()));
        })
        .def("__len__", &Spectrum::dimension);

    py::class_<Signal>(m, "Signal")
        .def_property_readonly("coefficients", [](const Signal& s) { return to_array(s.coefficients); })
        .def_readonly("label", &Signal::label)
        .def_readonly("seed", &Signal::seed)
        .def("__len__", &Signal::dimension);

    m.def("polynomial_spectrum", &make_polynomial_spectrum, py::arg("p"), py::arg("dimension"),
          "lambda_i = i^-p, i = 1..D");
    m.def(
        "paper_signal",
        [](const std::string& kind, std::size_t dimension, std::optional<std::uint64_t> seed) {
            return make_paper_signal(parse_signal_kind(kind), dimension, seed);
        },
        py::arg("kind"), py::arg("dimension"), py::arg("seed") = py::none());

    m.def(
        "simulate",
        [](const py::object& s, const py::object& mu, double delta, std::uint64_t seed) {
            return to_array(simulate(spectrum_from(s), signal_from(mu), delta, seed, false).y);
        },
        py::arg("spectrum"), py::arg("signal"), py::arg("delta"), py::arg("seed"),
        "One realization Y_i = lambda_i mu_i + delta eps_i as a numpy array.");

    m.def(
        "residual_path",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& y, const py::object& s,
           double alpha) { return to_array(residual_path(observation_from(y, 1.0), spectrum_from(s), alpha)); },
        py::arg("y"), py::arg("spectrum"), py::arg("alpha"));

    m.def(
        "default_kappa",
        [](const py::object& s, double alpha, double delta) { return default_kappa(spectrum_from(s), alpha, delta); },
        py::arg("spectrum"), py::arg("alpha"), py::arg("delta"));

    m.def(
        "stopping_time",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& y, const py::object& s,
           double alpha, double kappa) {
            return stopping_time(observation_from(y, 1.0), spectrum_from(s), StoppingConfig{alpha, kappa, 1.0});
        },
        py::arg("y"), py::arg("spectrum"), py::arg("alpha"), py::arg("kappa"));

    m.def(
        "oracles",
        [](const py::object& s, const py::object& mu, double delta, double alpha, std::optional<double> kappa) {
            const auto spectrum = spectrum_from(s);
            const double k = kappa ? *kappa : default_kappa(spectrum, alpha, delta);
            const auto r = oracle_report(spectrum, signal_from(mu), delta, StoppingConfig{alpha, k, 1.0});
            py::dict out;
            out["t_classical"] = r.classical.index;
            out["risk_classical"] = r.classical.risk;
            out["t_balanced"] = r.balanced;
            out["t_alpha_balanced"] = r.alpha_balanced;
            out["t_proxy"] = r.proxy;
            out["m_balanced"] = r.discrete_balanced;
            return out;
        },
        py::arg("spectrum"), py::arg("signal"), py::arg("delta"), py::arg("alpha") = 0.0,
        py::arg("kappa") = py::none());

    m.def(
        "risk", [](const py::object& s, const py::object& mu, double delta, double t) {
            return risk(spectrum_from(s), signal_from(mu), delta, t);
        },
        py::arg("spectrum"), py::arg("signal"), py::arg("delta"), py::arg("t"));

    m.def("derive_seed", &rng::derive_seed, py::arg("master"), py::arg("replicate"), py::arg("label"),
          py::arg("alpha"));

    m.def(
        "efficiency_study",
        [](double p, std::size_t dimension, double delta, std::vector<std::string> signals,
           std::vector<double> alphas, std::size_t replicates, std::uint64_t master_seed, unsigned workers) {
            EfficiencyStudyConfig cfg;
            cfg.p = p;
            cfg.dimension = dimension;
            cfg.delta = delta;
            cfg.signals = std::move(signals);
            cfg.alphas = std::move(alphas);
            cfg.replicates = replicates;
            cfg.master_seed = master_seed;
            cfg.workers = workers;
            std::vector<ReplicateRecord> records;
            {
                py::gil_scoped_release release;
                records = run_efficiency_study(cfg);
            }
            py::dict cols;
            py::list sig, alpha, rep, tau, loss, eff, rel;
            for (const auto& r : records) {
                sig.append(r.signal);
                alpha.append(r.alpha);
                rep.append(r.replicate);
                tau.append(r.tau);
                loss.append(r.loss);
                eff.append(r.rel_efficiency);
                rel.append(r.rel_stopping);
            }
            cols["signal"] = sig;
            cols["alpha"] = alpha;
            cols["replicate"] = rep;
            cols["tau"] = tau;
            cols["loss"] = loss;
            cols["rel_efficiency"] = eff;
            cols["rel_stopping"] = rel;
            return cols;
        },
        py::arg("p") = 0.5, py::arg("dimension") = 10000, py::arg("delta") = 0.01,
        py::arg("signals") = std::vector<std::string>{"supersmooth", "smooth3", "smooth21", "rough"},
        py::arg("alphas") = std::vector<double>{0.0, 0.2, 0.5, 1.0, 1.5}, py::arg("replicates") = 1000,
        py::arg("master_seed") = 0, py::arg("workers") = 1,
        "Runs the relative-efficiency study; returns a dict of columns.");
}
