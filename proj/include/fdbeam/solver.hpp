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


#ifndef FDBEAM_SOLVER_HPP
#define FDBEAM_SOLVER_HPP

#include "fdbeam/channels.hpp"
#include "fdbeam/codebooks.hpp"

#include <string>
#include <vector>

namespace fdbeam
{
    struct SolverConfig
    {
        double sigma_tx_sq = 0.031622776601683791; // -15 dB
        double sigma_rx_sq = 0.031622776601683791;
        int am_passes = 1;
        double subproblem_tolerance = 1e-6;   // KKT residual relative to (1 + objective)
        int subproblem_max_iters = 200;       // multiplier search iterations
        double dual_bisection_tolerance = 1e-6; // relative width of the accepted coverage band
        double ridge = 1e-10;                 // Tikhonov term, relative to the largest eigenvalue of Q

        void validate() const;
    };

    // Relaxed subproblem solution (entries bounded by 1, coverage met in complex form).
    struct SubproblemResult
    {
        CMatrix solution;
        double objective = 0.0;         // sum_i x_i^H Q x_i, without the ridge term
        double coverage_error = 0.0;    // ||N 1 - diag(A^H X)||^2 / (N^2 M)
        double coverage_violation = 0.0; // max(0, coverage_error - sigma^2)
        double max_magnitude = 0.0;
        double multiplier = 0.0;        // coverage multiplier lambda
        double kkt_residual = 0.0;      // relative to (1 + objective)
        int iterations = 0;
        int active_entries = 0;         // entries held on the unit circle
        bool converged = true;
        bool kept_incumbent = false;
    };

    // Generic form shared by both subproblems:
    //   minimize sum_i x_i^H Q x_i  s.t.  ||N 1 - diag(A^H X)||^2 <= sigma_sq N^2 M,  |X_ki| <= 1.
    // If `incumbent` is given and is feasible with objective no larger than the solver's
    // point, the incumbent is returned instead.
    // Throws infeasible_error when no magnitude-bounded X meets the coverage bound.
    SubproblemResult solve_coverage_qp(const CMatrix &Q, const CMatrix &A, double sigma_sq, const SolverConfig &cfg,
                                       const CMatrix *incumbent = nullptr);

    // Quadratic forms of the two subproblems.
    CMatrix tx_quadratic(const CMatrix &W, const ChannelEstimate &est);
    CMatrix rx_quadratic(const CMatrix &F, const ChannelEstimate &est);

    // ||W^H H F||_F^2 + eps^2 ||F||_F^2 ||W||_F^2: the expected coupling under the error model.
    double expected_objective(const CMatrix &F, const CMatrix &W, const ChannelEstimate &est);

    // Same value; kept as a separate entry point for labelling trace steps.
    double subproblem_objective(const CMatrix &F, const CMatrix &W, const ChannelEstimate &est);

    // Minimize over F with W fixed.
    SubproblemResult solve_tx_subproblem(const CMatrix &W, const ChannelEstimate &est, const SteeringMatrix &tx_steering,
                                         double sigma_tx_sq, const SolverConfig &cfg, const CMatrix *incumbent = nullptr);

    // Minimize over W with F fixed.
    SubproblemResult solve_rx_subproblem(const CMatrix &F, const ChannelEstimate &est, const SteeringMatrix &rx_steering,
                                         double sigma_rx_sq, const SolverConfig &cfg, const CMatrix *incumbent = nullptr);

    // Complex-form coverage error ||N 1 - diag(A^H X)||^2 / (N^2 M).
    double complex_coverage_error(const CMatrix &X, const CMatrix &A);

    struct TraceEntry
    {
        std::string label; // init, solve_tx, project_tx, solve_rx, project_rx
        int pass = 0;
        double objective = 0.0;
    };

    struct DesignResult
    {
        Codebook tx_codebook; // quantized F
        Codebook rx_codebook; // quantized W
        std::vector<TraceEntry> trace;

        // Pre-projection (relaxed) solutions of the last pass and their diagnostics.
        CMatrix relaxed_tx;
        CMatrix relaxed_rx;
        SubproblemResult tx_solve;
        SubproblemResult rx_solve;

        // Normalized coverage-constraint violation of the relaxed solutions (0 when met).
        double coverage_residual_tx = 0.0;
        double coverage_residual_rx = 0.0;

        // Magnitude-form coverage variance of the final quantized codebooks.
        double coverage_variance_tx = 0.0;
        double coverage_variance_rx = 0.0;

        std::vector<std::string> warnings;

        std::vector<double> objective_trace() const;
        double final_objective() const { return trace.empty() ? 0.0 : trace.back().objective; }
    };

    // Projected alternating minimization from the matched-filter start:
    // per pass solve F, project F, solve W, project W.
    DesignResult lonestar_design(const ChannelEstimate &est, const SteeringMatrix &tx_steering,
                                 const SteeringMatrix &rx_steering, const QuantizationSpec &spec, const SolverConfig &cfg);

    // Objective trace CSV: "pass,step,objective".
    std::string trace_to_csv(const DesignResult &r);
}

#endif
