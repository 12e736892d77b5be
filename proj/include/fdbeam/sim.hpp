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

#ifndef FDBEAM_SIM_HPP
#define FDBEAM_SIM_HPP

#include "fdbeam/linkmetrics.hpp"
#include "fdbeam/solver.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fdbeam
{
    struct SimConfig
    {
        int num_user_pairs = 500;
        std::uint64_t master_seed = 1;
        double user_az_min = deg_to_rad(-67.5);
        double user_az_max = deg_to_rad(67.5);
        double user_el_min = deg_to_rad(-37.5);
        double user_el_max = deg_to_rad(37.5);
        LinkBudget budget;
        // (sigma_tx^2, sigma_rx^2) candidates, linear.
        std::vector<std::pair<double, double>> sigma_grid = default_sigma_grid();
        int threads = 1;

        // sigma_tx^2 = sigma_rx^2 over -40, -35, ..., 0 dB.
        static std::vector<std::pair<double, double>> default_sigma_grid();
        void validate() const;
    };

    // Downlink user served by the transmit array, uplink user served by the receive array.
    struct UserPair
    {
        Direction downlink;
        Direction uplink;
    };

    UserPair draw_user_pair(const SimConfig &cfg, RandomStream &rng);

    struct AlignedBeam
    {
        int index = 0;
        double snr = 0.0; // linear
    };

    // Exhaustive sweep over the codebook columns; ties go to the lower index.
    AlignedBeam beam_align(const CMatrix &codebook, const CVector &h, LinkKind kind, const LinkBudget &budget);

    // Beams are aligned on (F, W) per link; the gamma_sum denominator uses the CBF pair.
    TrialMetrics run_trial(const CMatrix &F, const CMatrix &W, const CMatrix &H_true, const LinkBudget &budget,
                           const CVector &h_downlink, const CVector &h_uplink, const CMatrix &F_cbf,
                           const CMatrix &W_cbf);

    struct LabeledCodebooks
    {
        std::string label;
        CMatrix F;
        CMatrix W;
    };

    // Self-interference channel seen by a trial: `truth` as given, or `truth` plus
    // i.i.d. CN(0, error_variance) drawn per trial.
    struct TrialChannelPolicy
    {
        CMatrix truth;
        double error_variance = 0.0;
    };

    struct CodebookSummary
    {
        std::string label;
        double mean_gamma_sum = 0.0;
        double stderr_gamma_sum = 0.0;
        double mean_rate_tx = 0.0;
        double mean_rate_rx = 0.0;
        double mean_inr_rx_db = neg_inf_db; // dB of the arithmetic mean of linear INR_rx
        int trials = 0;
    };

    struct MonteCarloResult
    {
        std::vector<CodebookSummary> summaries; // one per input codebook pair, same order
        std::vector<std::vector<TrialMetrics>> trials; // [codebook][trial]
        // Per trial, a digest of the user draws and channel realization shared by every codebook.
        std::vector<std::uint64_t> draw_digests;
    };

    // Every codebook pair is evaluated on the same users and channel draws. Trial t of
    // point p uses the stream derived from (master_seed, p, t).
    MonteCarloResult monte_carlo(const std::vector<LabeledCodebooks> &codebooks, const ArrayPairLayout &layout,
                                 const TrialChannelPolicy &channel, const SimConfig &cfg, std::uint64_t point_index,
                                 const CMatrix &F_cbf, const CMatrix &W_cbf);

    // Design inputs shared by every sweep point.
    struct Scenario
    {
        ArrayPairLayout layout = ArrayPairLayout::center_aligned(UpaGeometry{8, 8}, UpaGeometry{8, 8}, 10.0);
        std::vector<Direction> tx_region = default_coverage_grid(LinkKind::transmit);
        std::vector<Direction> rx_region = default_coverage_grid(LinkKind::receive);
        QuantizationSpec lonestar_quantization;
        QuantizationSpec baseline_quantization; // CBF and Taylor, also the gamma_sum reference
        double taylor_sll_db = 25.0;
        int taylor_nbar = 4;
        SolverConfig solver;
        double error_variance = 0.0;  // linear; estimate is the spherical-wave channel
        double mixing_variance = 0.0; // linear; > 0 draws a mixture channel, known to the solver
        bool tune_sigma = true;       // otherwise solver.sigma_{tx,rx}_sq are used
        SimConfig sim;

        void validate() const;
    };

    // Spherical-wave channel of the scenario layout, or a mixture drawn from a stream
    // that depends only on the master seed (so mixing points share one Rayleigh draw up
    // to scale).
    ChannelMatrix scenario_channel(const Scenario &s, double mixing_variance);

    // Memoizes lonestar_design on (estimate digest, error variance, quantization, sigma pair).
    class DesignCache
    {
    public:
        const DesignResult &get(const ChannelEstimate &est, const SteeringMatrix &tx, const SteeringMatrix &rx,
                                const QuantizationSpec &spec, const SolverConfig &cfg);
        std::size_t size() const { return designs_.size(); }

    private:
        std::map<std::vector<std::uint64_t>, DesignResult> designs_;
    };

    struct TunedDesign
    {
        double sigma_tx_sq = 0.0;
        double sigma_rx_sq = 0.0;
        const DesignResult *design = nullptr;
        CodebookSummary summary;                 // at the chosen grid point
        std::vector<double> grid_mean_gamma_sum; // one per sigma_grid entry
    };

    // Picks the sigma_grid point with the highest mean gamma_sum on the point's user
    // draws; ties go to the smaller sigma^2 (grid order otherwise).
    TunedDesign tune_sigma(const ChannelEstimate &est, const Scenario &scenario, const QuantizationSpec &spec,
                           const TrialChannelPolicy &channel, std::uint64_t point_index, DesignCache &cache);

    enum class Experiment
    {
        snr_sweep,
        inr_sweep,
        snr_heatmap,
        inr_heatmap,
        error_sweep,
        mixing_sweep,
        sigma_sweep
    };

    std::optional<Experiment> parse_experiment(const std::string &name);
    std::string experiment_name(Experiment e);

    // Axis values, all in dB except `lonestar_bits`. Which axes an experiment reads:
    //   snr_sweep    snr_db (SNRbar_tx = SNRbar_rx)
    //   inr_sweep    inrbar_rx_db
    //   snr_heatmap  snr_db x snr_db (tx outer, rx inner)
    //   inr_heatmap  inr_tx_db x inrbar_rx_db
    //   error_sweep  error_variance_db
    //   mixing_sweep mixing_variance_db
    //   sigma_sweep  sigma_db x inrbar_rx_db (no tuning; sigma_tx^2 = sigma_rx^2)
    struct SweepAxes
    {
        std::vector<double> snr_db{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
        std::vector<double> inrbar_rx_db{40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0, 110.0, 120.0};
        std::vector<double> inr_tx_db{-10.0, 0.0, 10.0, 20.0};
        std::vector<double> error_variance_db{-60.0, -55.0, -50.0, -45.0, -40.0, -35.0, -30.0, -25.0, -20.0};
        std::vector<double> mixing_variance_db{-40.0, -35.0, -30.0, -25.0, -20.0, -15.0, -10.0};
        std::vector<double> sigma_db{-40.0, -35.0, -30.0, -25.0, -20.0, -15.0, -10.0, -5.0, 0.0};
        std::vector<int> lonestar_bits{6}; // b_phs = b_amp per LoneSTAR curve
    };

    struct SweepRecord
    {
        std::vector<double> axis_values;
        CodebookSummary summary;
        double tuned_sigma_tx_sq = std::numeric_limits<double>::quiet_NaN(); // linear, NaN for baselines
        double tuned_sigma_rx_sq = std::numeric_limits<double>::quiet_NaN();
    };

    struct SweepResult
    {
        Experiment experiment = Experiment::inr_sweep;
        std::vector<std::string> axis_labels;
        std::vector<SweepRecord> records;
        std::vector<std::vector<std::uint64_t>> draw_digests; // per point
    };

    SweepResult sweep(Experiment experiment, const SweepAxes &axes, const Scenario &scenario);

    // Header: axis labels, codebook, mean_gamma_sum, stderr_gamma_sum, mean_rate_tx,
    // mean_rate_rx, mean_inr_rx_db, tuned_sigma_tx_sq_db, tuned_sigma_rx_sq_db, trials.
    std::string sweep_to_csv(const SweepResult &r);
}

#endif
