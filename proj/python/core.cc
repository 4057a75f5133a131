// Copyright 2026 The fqcontrol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fqc/errors.h"
#include "fqc/fit.h"
#include "fqc/gaussian.h"
#include "fqc/qubit_control.h"
#include "fqc/sweep.h"

namespace py = pybind11;
using namespace fqc;

namespace {

py::dict record_dict(const SweepRecord &r) {
    py::dict d;
    if (auto *p = std::get_if<QubitChannelParams>(&r.params)) {
        d["theta_bar"] = p->theta;
        d["phi_bar"] = p->phi;
    } else {
        d["q"] = std::get<GaussianChannelParam>(r.params).q;
    }
    d["Q"] = r.capacity;
    d["n_targets"] = r.n_targets;
    d["frac_reachable"] = r.frac_reachable;
    d["mean_err"] = r.mean_err;
    d["neglog2_mean_err"] = r.neglog2_mean_err;
    d["std_neglog2_err"] = r.std_neglog2;
    d["max_err"] = r.max_err;
    d["seed"] = r.seed;
    return d;
}

py::list records_list(const std::vector<SweepRecord> &recs) {
    py::list out;
    for (const auto &r : recs) {
        out.append(record_dict(r));
    }
    return out;
}

TargetMeasure parse_measure(const std::string &name) {
    if (name == "haar") {
        return TargetMeasure::HaarPure;
    }
    if (name == "hilbert-schmidt") {
        return TargetMeasure::HilbertSchmidt;
    }
    throw DomainError("unknown target measure '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Controllability of quantum systems through quantum controllers: core routines";

    auto base = py::register_exception<Error>(m, "FqcError", PyExc_RuntimeError);
    py::register_exception<NotAState>(m, "NotAState", base.ptr());
    py::register_exception<ChannelNotTracePreserving>(m, "ChannelNotTracePreserving", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<DegenerateChannel>(m, "DegenerateChannel", base.ptr());
    py::register_exception<OptimizerStalled>(m, "OptimizerStalled", base.ptr());
    py::register_exception<NonPhysicalInput>(m, "NonPhysicalInput", base.ptr());
    py::register_exception<NonPositiveInput>(m, "NonPositiveInput", base.ptr());
    py::register_exception<InsufficientData>(m, "InsufficientData", base.ptr());
    py::register_exception<SingularDesign>(m, "SingularDesign", base.ptr());
    py::register_exception<EmptyWindow>(m, "EmptyWindow", base.ptr());
    py::register_exception<SweepError>(m, "SweepError", base.ptr());

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init(&DensityMatrix::from_parts), py::arg("y"), py::arg("z"))
        .def_static("from_bloch", &DensityMatrix::from_bloch)
        .def_static("maximally_mixed", &DensityMatrix::maximally_mixed)
        .def_property_readonly("y", &DensityMatrix::y)
        .def_property_readonly("z", &DensityMatrix::z)
        .def_property_readonly("bloch", &DensityMatrix::bloch)
        .def_property_readonly("det", &DensityMatrix::det)
        .def("__repr__", [](const DensityMatrix &d) {
            return "DensityMatrix(y=" + std::to_string(d.y()) + ", z=(" + std::to_string(d.z().real()) + "," +
                   std::to_string(d.z().imag()) + "))";
        });

    m.def("is_physical_dm", &is_physical_dm, py::arg("y"), py::arg("z"));
    m.def("uhlmann_fidelity", &uhlmann_fidelity, py::arg("rho"), py::arg("sigma"));
    m.def("binary_entropy", &binary_entropy, py::arg("x"));
    m.def(
        "haar_pure_qubit", [](std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
            auto rng = RngStream::derive(seed, a, b);
            return haar_pure_qubit(rng);
        },
        py::arg("seed"), py::arg("a") = 0, py::arg("b") = 0, "Haar pure state from the substream (seed, a, b).");

    m.def("capacity_qubit_family", &capacity_qubit_family, py::arg("theta"), py::arg("phi"));
    m.def(
        "capacity_control_channel",
        [](double theta, double phi) { return capacity_control_channel(QubitChannelParams::checked(theta, phi)); },
        py::arg("theta"), py::arg("phi"));
    m.def(
        "coherent_information_oracle",
        [](double theta, double phi, int n_grid) {
            return coherent_information_oracle(control_kraus(QubitChannelParams::checked(theta, phi)), n_grid);
        },
        py::arg("theta"), py::arg("phi"), py::arg("n_grid") = 100000);
    m.def(
        "analytic_control_state",
        [](double theta, double phi, const DensityMatrix &target) {
            auto a = analytic_control_state(QubitChannelParams::checked(theta, phi), target);
            return py::make_tuple(a.y, a.z, a.physical());
        },
        py::arg("theta"), py::arg("phi"), py::arg("target"), "Raw inverse (y, z, physical).");

    py::class_<ControlSolution>(m, "ControlSolution")
        .def_readonly("controller", &ControlSolution::controller)
        .def_readonly("reachable", &ControlSolution::reachable)
        .def_readonly("error", &ControlSolution::error)
        .def_readonly("iterations", &ControlSolution::iterations)
        .def_readonly("starts_agreement", &ControlSolution::starts_agreement);
    m.def(
        "solve_qubit_control",
        [](double theta, double phi, const DensityMatrix &target) {
            return solve_qubit_control(QubitChannelParams::checked(theta, phi), target);
        },
        py::arg("theta"), py::arg("phi"), py::arg("target"));

    py::class_<CovarianceMatrix>(m, "CovarianceMatrix")
        .def(py::init([](double g1, double g2, double g3) { return CovarianceMatrix{g1, g2, g3}; }), py::arg("g1"),
             py::arg("g2"), py::arg("g3"))
        .def_readonly("g1", &CovarianceMatrix::g1)
        .def_readonly("g2", &CovarianceMatrix::g2)
        .def_readonly("g3", &CovarianceMatrix::g3)
        .def_property_readonly("det", &CovarianceMatrix::det)
        .def_static("identity", &CovarianceMatrix::identity)
        .def("__repr__", [](const CovarianceMatrix &c) {
            return "CovarianceMatrix(" + std::to_string(c.g1) + ", " + std::to_string(c.g2) + ", " +
                   std::to_string(c.g3) + ")";
        });

    m.def("is_physical_cov", &is_physical_cov, py::arg("gamma"));
    m.def("squeezed_thermal", &squeezed_thermal, py::arg("nbar"), py::arg("r"), py::arg("angle"));
    m.def(
        "channel_apply", [](double q, const CovarianceMatrix &g) { return channel_apply(GaussianChannelParam::checked(q), g); },
        py::arg("q"), py::arg("gamma"));
    m.def(
        "capacity_gaussian", [](double q) { return capacity_gaussian(GaussianChannelParam::checked(q)); }, py::arg("q"));
    m.def(
        "analytic_control_cov",
        [](double q, const CovarianceMatrix &t) { return analytic_control_cov(GaussianChannelParam::checked(q), t); },
        py::arg("q"), py::arg("target"));
    m.def("gaussian_fidelity", &gaussian_fidelity, py::arg("a"), py::arg("b"));
    m.def("matrix_uhlmann", &matrix_uhlmann, py::arg("a"), py::arg("b"));

    py::class_<GaussianControlSolution>(m, "GaussianControlSolution")
        .def_readonly("controller_cov", &GaussianControlSolution::controller_cov)
        .def_readonly("reachable", &GaussianControlSolution::reachable)
        .def_readonly("error", &GaussianControlSolution::error)
        .def_readonly("iterations", &GaussianControlSolution::iterations)
        .def_readonly("starts_agreement", &GaussianControlSolution::starts_agreement);
    m.def(
        "solve_gaussian_control",
        [](double q, const CovarianceMatrix &t, const std::string &cost) {
            return solve_gaussian_control(GaussianChannelParam::checked(q), t, parse_cost_kind(cost));
        },
        py::arg("q"), py::arg("target"), py::arg("cost") = "gaussian");

    m.def(
        "qubit_sweep",
        [](std::optional<std::vector<double>> theta_grid, std::optional<std::vector<double>> phi_grid,
           std::int64_t n_targets, std::uint64_t seed, const std::string &measure, int threads) {
            QubitSweepConfig cfg;
            if (theta_grid) {
                cfg.theta_grid = *theta_grid;
            }
            if (phi_grid) {
                cfg.phi_grid = *phi_grid;
            }
            cfg.n_targets = n_targets;
            cfg.seed = seed;
            cfg.measure = parse_measure(measure);
            cfg.threads = threads;
            std::vector<SweepRecord> recs;
            {
                py::gil_scoped_release release;
                recs = run_qubit_sweep(cfg);
            }
            return records_list(recs);
        },
        py::arg("theta_grid") = py::none(), py::arg("phi_grid") = py::none(), py::arg("n_targets") = 1000,
        py::arg("seed") = 42, py::arg("target_measure") = "haar", py::arg("threads") = 0);

    m.def(
        "gaussian_sweep",
        [](std::optional<std::vector<double>> q_grid, std::int64_t n_targets, std::uint64_t seed,
           const std::string &cost, double r_max, double nbar_max, int threads) {
            GaussianSweepConfig cfg;
            if (q_grid) {
                cfg.q_grid = *q_grid;
            }
            cfg.n_targets = n_targets;
            cfg.seed = seed;
            cfg.cost = parse_cost_kind(cost);
            cfg.r_max = r_max;
            cfg.nbar_max = nbar_max;
            cfg.threads = threads;
            std::vector<SweepRecord> recs;
            {
                py::gil_scoped_release release;
                recs = run_gaussian_sweep(cfg);
            }
            return records_list(recs);
        },
        py::arg("q_grid") = py::none(), py::arg("n_targets") = 1000, py::arg("seed") = 42,
        py::arg("cost") = "gaussian", py::arg("r_max") = 1.0, py::arg("nbar_max") = 1.0, py::arg("threads") = 0);

    m.def(
        "fit",
        [](const std::string &model, const std::vector<double> &capacity, const std::vector<double> &y,
           std::optional<std::pair<double, double>> window) {
            if (capacity.size() != y.size()) {
                throw DomainError("capacity and y must have equal length");
            }
            std::vector<FitPoint> pts;
            for (size_t i = 0; i < y.size(); i++) {
                pts.push_back({capacity[i], y[i]});
            }
            std::optional<Window> w;
            if (window) {
                w = Window{window->first, window->second};
            }
            auto f = fit_points(parse_model(model), pts, w);
            py::dict d;
            d["model"] = std::string(model_name(f.kind));
            d["coefficients"] = f.coefficients;
            d["zeta"] = f.zeta;
            d["n_points_used"] = f.n_points_used;
            d["sse"] = f.sse;
            return d;
        },
        py::arg("model"), py::arg("capacity"), py::arg("y"), py::arg("window") = py::none(),
        "Fit y = -log2(err) against capacity with model 'i', 'ii' or 'iii'.");
    m.def("spearman", &spearman_rank_correlation, py::arg("a"), py::arg("b"));
    m.def(
        "shannon_hartley_bound",
        [](int n, int dimension, double ratio, double capacity) {
            return shannon_hartley_bound({n, dimension, ratio}, capacity);
        },
        py::arg("n"), py::arg("dimension"), py::arg("ratio"), py::arg("capacity"));
}
