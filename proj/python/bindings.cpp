#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mgaoi/analysis.hpp"
#include "mgaoi/commands.hpp"
#include "mgaoi/error.hpp"
#include "mgaoi/inversion.hpp"
#include "mgaoi/model.hpp"
#include "mgaoi/scenario.hpp"
#include "mgaoi/simulator.hpp"

namespace py = pybind11;
using namespace mgaoi;

namespace {

InversionConfig inversion_config(const std::string& method, int nodes, double target_error) {
    InversionConfig cfg;
    if (method == "euler") cfg.method = InversionMethod::euler;
    else if (method == "talbot") cfg.method = InversionMethod::talbot;
    else throw ConfigError("unknown inversion method '" + method + "'");
    cfg.nodes = nodes;
    cfg.target_error = target_error;
    return cfg;
}

py::dict estimate(const Estimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["ci_halfwidth"] = e.ci_halfwidth;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Age of Information in multi-source FCFS M/GI/1 queues";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    auto numeric = py::register_exception<NumericError>(m, "NumericError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", numeric.ptr());
    py::register_exception<SimulationError>(m, "SimulationError", base.ptr());

    py::class_<ServiceDistribution>(m, "ServiceDistribution")
        .def_static("exponential", &ServiceDistribution::exponential, py::arg("rate"))
        .def_static("deterministic", &ServiceDistribution::deterministic, py::arg("value"))
        .def_static("erlang", &ServiceDistribution::erlang, py::arg("shape"), py::arg("rate"))
        .def_static("hyperexponential", &ServiceDistribution::hyperexponential, py::arg("probs"), py::arg("rates"))
        .def_static("gamma", &ServiceDistribution::gamma, py::arg("shape"), py::arg("rate"))
        .def_static("uniform", &ServiceDistribution::uniform, py::arg("low"), py::arg("high"))
        .def_static("mixture", &ServiceDistribution::mixture, py::arg("weights"), py::arg("components"))
        .def("lst", py::overload_cast<double>(&ServiceDistribution::lst, py::const_), py::arg("s"))
        .def("lst", py::overload_cast<cplx>(&ServiceDistribution::lst, py::const_), py::arg("s"))
        .def("lst_deriv", py::overload_cast<double>(&ServiceDistribution::lst_deriv, py::const_), py::arg("s"))
        .def("lst_deriv", py::overload_cast<cplx>(&ServiceDistribution::lst_deriv, py::const_), py::arg("s"))
        .def("moment", &ServiceDistribution::moment, py::arg("n"))
        .def("mean", &ServiceDistribution::mean)
        .def_property_readonly("family", [](const ServiceDistribution& d) { return std::string(family_name(d.family())); })
        .def("__repr__", &ServiceDistribution::describe);

    py::class_<SystemModel>(m, "SystemModel")
        .def("__len__", &SystemModel::size)
        .def_property_readonly("total_rate", &SystemModel::total_rate)
        .def_property_readonly("total_load", &SystemModel::total_load)
        .def("class_load", &SystemModel::class_load, py::arg("k"));

    m.def(
        "validate",
        [](const std::vector<std::pair<double, ServiceDistribution>>& classes) {
            std::vector<SourceClass> src;
            for (const auto& [rate, dist] : classes) src.push_back(SourceClass{rate, dist});
            return validate(std::move(src));
        },
        py::arg("classes"), "Build a model from (arrival_rate, service) pairs; raises ValidationError if unstable.");

    py::class_<TaggedView>(m, "TaggedView")
        .def_readonly("index", &TaggedView::index)
        .def_readonly("rate", &TaggedView::rate)
        .def_readonly("load", &TaggedView::load)
        .def_property_readonly("background_rate", [](const TaggedView& v) { return v.background.rate; })
        .def_property_readonly("background_load", [](const TaggedView& v) { return v.background.load; })
        .def("gamma", &gamma_root)
        .def("waiting_lst", &waiting_lst, py::arg("s"))
        .def("delay_lst", &delay_lst, py::arg("s"))
        .def("peak_aoi_lst", &peak_aoi_lst, py::arg("s"))
        .def("aoi_lst", &aoi_lst, py::arg("s"))
        .def("aoi_lst_from_peak", &aoi_lst_from_peak, py::arg("s"))
        .def("phi", [](const TaggedView& v, cplx s) { return phi(v.background, s); }, py::arg("s"))
        .def("psi", [](const TaggedView& v, cplx w) { return psi(v.background, w); }, py::arg("omega"))
        .def("mean_metrics", [](const TaggedView& v) {
            const auto r = mean_metrics(v);
            py::dict d;
            d["gamma"] = r.gamma;
            d["mean_wait"] = r.mean_wait;
            d["mean_delay"] = r.mean_delay;
            d["mean_peak_aoi"] = r.mean_peak_aoi;
            d["mean_aoi"] = r.mean_aoi;
            return d;
        });

    m.def("tagged", &make_tagged_view, py::arg("model"), py::arg("k"));

    m.def(
        "invert_cdf",
        [](const Transform& f, const std::vector<double>& x, const std::string& method, int nodes, double target) {
            return invert_cdf(f, x, inversion_config(method, nodes, target)).values;
        },
        py::arg("transform"), py::arg("x"), py::arg("method") = "euler", py::arg("nodes") = 49,
        py::arg("target_error") = 1e-8);
    m.def(
        "invert_pdf",
        [](const Transform& f, const std::vector<double>& x, const std::string& method, int nodes, double target) {
            return invert_pdf(f, x, inversion_config(method, nodes, target));
        },
        py::arg("transform"), py::arg("x"), py::arg("method") = "euler", py::arg("nodes") = 49,
        py::arg("target_error") = 1e-8);
    m.def(
        "aoi_cdf",
        [](const TaggedView& v, const std::vector<double>& x) {
            // Stays in C++ for the whole inversion instead of calling back per node.
            return invert_cdf([&v](cplx s) { return aoi_lst(v, s); }, x).values;
        },
        py::arg("view"), py::arg("x"));
    m.def(
        "numerical_moment",
        [](const Transform& f, int order, double scale_hint) { return numerical_moment(f, order, scale_hint).value; },
        py::arg("transform"), py::arg("order"), py::arg("scale_hint") = 1.0);

    m.def(
        "simulate",
        [](const SystemModel& model, double horizon, int replications, std::uint64_t seed, double warmup_fraction,
           std::vector<double> cdf_grid, int threads) {
            SimConfig cfg;
            cfg.horizon = horizon;
            cfg.replications = replications;
            cfg.seed = seed;
            cfg.warmup_fraction = warmup_fraction;
            cfg.cdf_grid = std::move(cdf_grid);
            cfg.threads = threads;
            SimulationResult r;
            {
                py::gil_scoped_release release;
                r = simulate(model, cfg);
            }
            py::list classes;
            for (const auto& c : r.classes) {
                py::dict d;
                d["mean_aoi"] = estimate(c.mean_aoi);
                d["mean_delay"] = estimate(c.mean_delay);
                d["mean_peak_aoi"] = estimate(c.mean_peak_aoi);
                d["mean_intergeneration"] = estimate(c.mean_intergeneration);
                d["throughput"] = estimate(c.throughput);
                d["aoi_cdf"] = c.aoi_cdf;
                d["updates"] = c.updates;
                classes.append(d);
            }
            py::dict out;
            out["classes"] = classes;
            out["busy_fraction"] = estimate(r.busy_fraction);
            out["cdf_grid"] = r.cdf_grid;
            out["seed"] = r.base_seed;
            out["replications"] = r.replications;
            return out;
        },
        py::arg("model"), py::arg("horizon") = 1e6, py::arg("replications") = 10, py::arg("seed") = 1,
        py::arg("warmup_fraction") = 0.1, py::arg("cdf_grid") = std::vector<double>{}, py::arg("threads") = 0);

    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly("model", &Scenario::model)
        .def_readonly("tolerance", &Scenario::tolerance)
        .def("tagged_classes", &Scenario::tagged_classes);
    m.def("parse_scenario", &parse_scenario, py::arg("path"));
    m.def("parse_scenario_text", &parse_scenario_text, py::arg("text"));
    m.def("analyze", [](const Scenario& sc) {
        py::list rows;
        for (const auto& r : run_analyze(sc)) {
            py::dict d;
            d["class"] = r.cls;
            d["lambda"] = r.lambda;
            d["rho"] = r.rho;
            d["gamma"] = r.metrics.gamma;
            d["mean_wait"] = r.metrics.mean_wait;
            d["mean_delay"] = r.metrics.mean_delay;
            d["mean_peak_aoi"] = r.metrics.mean_peak_aoi;
            d["mean_aoi"] = r.metrics.mean_aoi;
            rows.append(d);
        }
        return rows;
    });
    m.def("validate_scenario", [](const Scenario& sc) {
        ValidationReport report;
        {
            py::gil_scoped_release release;
            report = run_validate(sc);
        }
        py::list rows;
        for (const auto& c : report.checks) {
            py::dict d;
            d["class"] = c.cls;
            d["metric"] = c.metric;
            d["analytic"] = c.analytic;
            d["simulated"] = c.simulated;
            d["ci_halfwidth"] = c.ci_halfwidth;
            d["relative_gap"] = c.relative_gap;
            d["threshold"] = c.threshold;
            d["pass"] = c.pass;
            d["cause"] = c.cause;
            rows.append(d);
        }
        return rows;
    });
}
