// SPDX-License-Identifier: Apache-2.0
//
// fdbeam: self-interference-aware analog beamforming codebooks for
// full-duplex millimeter-wave transceivers
// Copyright (C) 2026 The fdbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Python bindings. Matrices cross the boundary as complex128 NumPy arrays.

#include "fdbeam/config.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fdbeam;

namespace
{
    std::vector<Direction> directions(const std::vector<std::pair<double, double>> &deg)
    {
        std::vector<Direction> out;
        out.reserve(deg.size());
        for (const auto &[az, el] : deg)
            out.push_back(Direction::from_degrees(az, el));
        return out;
    }

    std::vector<std::pair<double, double>> degrees(const std::vector<Direction> &dirs)
    {
        std::vector<std::pair<double, double>> out;
        for (const auto &d : dirs)
            out.emplace_back(rad_to_deg(d.azimuth), rad_to_deg(d.elevation));
        return out;
    }

    py::dict subproblem_dict(const SubproblemResult &r)
    {
        py::dict d;
        d["solution"] = r.solution;
        d["objective"] = r.objective;
        d["coverage_error"] = r.coverage_error;
        d["max_magnitude"] = r.max_magnitude;
        d["multiplier"] = r.multiplier;
        d["kkt_residual"] = r.kkt_residual;
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        return d;
    }
}

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Self-interference-aware analog beamforming codebooks";

    py::register_exception<infeasible_error>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);

    py::class_<QuantizationSpec>(m, "QuantizationSpec")
        .def(py::init([](int phase_bits, int amplitude_bits, double step_db) {
                 QuantizationSpec s{phase_bits, amplitude_bits, step_db, false};
                 s.validate();
                 return s;
             }),
             py::arg("phase_bits") = 8, py::arg("amplitude_bits") = 8, py::arg("attenuation_step_db") = 0.5)
        .def_static("infinite", &QuantizationSpec::infinite)
        .def_readonly("phase_bits", &QuantizationSpec::phase_bits)
        .def_readonly("amplitude_bits", &QuantizationSpec::amplitude_bits)
        .def_readonly("attenuation_step_db", &QuantizationSpec::attenuation_step_db)
        .def_readonly("infinite_resolution", &QuantizationSpec::infinite_resolution);

    py::class_<UpaGeometry>(m, "UpaGeometry")
        .def(py::init([](int rows, int cols, double spacing) {
                 UpaGeometry g{rows, cols, spacing};
                 g.validate();
                 return g;
             }),
             py::arg("rows"), py::arg("cols"), py::arg("element_spacing") = 0.5)
        .def_readonly("rows", &UpaGeometry::rows)
        .def_readonly("cols", &UpaGeometry::cols)
        .def_readonly("element_spacing", &UpaGeometry::element_spacing)
        .def_property_readonly("size", &UpaGeometry::size);

    m.def(
        "array_response",
        [](const UpaGeometry &g, double az_deg, double el_deg) {
            return CVector(array_response(g, Direction::from_degrees(az_deg, el_deg)));
        },
        py::arg("geometry"), py::arg("azimuth_deg"), py::arg("elevation_deg"));
    m.def(
        "steering_matrix",
        [](const UpaGeometry &g, const std::vector<std::pair<double, double>> &dirs_deg) {
            return steering_matrix(g, directions(dirs_deg)).entries;
        },
        py::arg("geometry"), py::arg("directions_deg"));
    m.def(
        "default_coverage_grid", [] { return degrees(default_coverage_grid(LinkKind::transmit)); },
        "Default coverage directions as (azimuth, elevation) pairs in degrees.");

    m.def(
        "spherical_wave_channel",
        [](const UpaGeometry &tx, const UpaGeometry &rx, double separation) {
            return spherical_wave_channel(ArrayPairLayout::center_aligned(tx, rx, separation)).entries;
        },
        py::arg("tx"), py::arg("rx"), py::arg("separation") = 10.0);

    m.def("realizable_amplitudes", &realizable_amplitudes, py::arg("spec"));
    m.def("realizable_phases", &realizable_phases, py::arg("spec"));
    m.def("project_codebook", &project_codebook, py::arg("matrix"), py::arg("spec"));
    m.def("taylor_window", &taylor_window, py::arg("length"), py::arg("sll_db"), py::arg("nbar") = 4);
    m.def(
        "cbf_codebook",
        [](const UpaGeometry &g, const std::vector<std::pair<double, double>> &dirs_deg, const QuantizationSpec &s) {
            return cbf_codebook(g, directions(dirs_deg), s).matrix;
        },
        py::arg("geometry"), py::arg("directions_deg"), py::arg("spec"));
    m.def(
        "taylor_codebook",
        [](const UpaGeometry &g, const std::vector<std::pair<double, double>> &dirs_deg, const QuantizationSpec &s,
           double sll_db, int nbar) { return taylor_codebook(g, directions(dirs_deg), s, sll_db, nbar).matrix; },
        py::arg("geometry"), py::arg("directions_deg"), py::arg("spec"), py::arg("sll_db") = 25.0,
        py::arg("nbar") = 4);

    m.def(
        "expected_objective",
        [](const CMatrix &F, const CMatrix &W, const CMatrix &H, double eps) {
            return expected_objective(F, W, ChannelEstimate{{H, false}, eps});
        },
        py::arg("F"), py::arg("W"), py::arg("H"), py::arg("error_variance") = 0.0);
    m.def(
        "solve_coverage_qp",
        [](const CMatrix &Q, const CMatrix &A, double sigma_sq) {
            return subproblem_dict(solve_coverage_qp(Q, A, sigma_sq, SolverConfig{}));
        },
        py::arg("Q"), py::arg("A"), py::arg("sigma_sq"));
    m.def(
        "lonestar_design",
        [](const CMatrix &H, const CMatrix &A_tx, const CMatrix &A_rx, const QuantizationSpec &spec,
           double sigma_tx_sq, double sigma_rx_sq, double error_variance, int passes) {
            SolverConfig cfg;
            cfg.sigma_tx_sq = sigma_tx_sq;
            cfg.sigma_rx_sq = sigma_rx_sq;
            cfg.am_passes = passes;
            // Directions only label the steering matrices; the solver uses the entries.
            SteeringMatrix tx{A_tx, std::vector<Direction>(static_cast<std::size_t>(A_tx.cols()))};
            SteeringMatrix rx{A_rx, std::vector<Direction>(static_cast<std::size_t>(A_rx.cols()))};
            const DesignResult r = lonestar_design(ChannelEstimate{{H, false}, error_variance}, tx, rx, spec, cfg);
            py::list trace;
            for (const auto &t : r.trace)
                trace.append(py::make_tuple(t.pass, t.label, t.objective));
            py::dict d;
            d["F"] = r.tx_codebook.matrix;
            d["W"] = r.rx_codebook.matrix;
            d["trace"] = trace;
            d["coverage_variance_tx"] = r.coverage_variance_tx;
            d["coverage_variance_rx"] = r.coverage_variance_rx;
            d["warnings"] = r.warnings;
            return d;
        },
        py::arg("H"), py::arg("A_tx"), py::arg("A_rx"), py::arg("spec"), py::arg("sigma_tx_sq") = 0.031622776601683791,
        py::arg("sigma_rx_sq") = 0.031622776601683791, py::arg("error_variance") = 0.0, py::arg("passes") = 1);

    m.def("gamma_sum", &gamma_sum, py::arg("rate_tx"), py::arg("rate_rx"), py::arg("snr_cbf_tx"),
          py::arg("snr_cbf_rx"));
    m.def(
        "avg_inr_db",
        [](const CMatrix &F, const CMatrix &W, const CMatrix &H, double inrbar_rx_db) {
            LinkBudget b;
            b.inrbar_rx_db = inrbar_rx_db;
            return avg_inr(b, F, W, H).db;
        },
        py::arg("F"), py::arg("W"), py::arg("H"), py::arg("inrbar_rx_db") = 90.0);

    m.def(
        "run_sweep",
        [](const std::string &ini_text, const std::string &experiment) {
            const auto exp = parse_experiment(experiment);
            if (!exp)
                throw py::value_error("unknown experiment: " + experiment);
            const ExperimentConfig cfg = parse_config(ini_text);
            py::gil_scoped_release release;
            return sweep_to_csv(sweep(*exp, cfg.axes, cfg.scenario));
        },
        py::arg("ini_text"), py::arg("experiment"), "Run a sweep from INI text and return the CSV.");
}
