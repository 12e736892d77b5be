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

// Command-line front end: design | sweep | eval.

#include "fdbeam/config.hpp"
#include "fdbeam/io.hpp"
#include "fdbeam/sim.hpp"
#include "fdbeam/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace
{
    using namespace fdbeam;

    constexpr int exit_config = 1;
    constexpr int exit_infeasible = 2;
    constexpr int exit_internal = 3;

    struct CommonOptions
    {
        std::string config;
        std::string out;
        std::optional<std::uint64_t> seed;
        std::optional<int> threads;
    };

    void add_common(CLI::App *cmd, CommonOptions &o)
    {
        cmd->add_option("--config", o.config, "configuration file (INI)")->required();
        cmd->add_option("--out", o.out, "output directory (overrides output.directory)");
        cmd->add_option("--seed", o.seed, "master seed (overrides sim.seed)");
        cmd->add_option("--threads", o.threads, "worker threads (overrides sim.threads)")->check(CLI::Range(1, 1024));
    }

    ExperimentConfig load(const CommonOptions &o)
    {
        ExperimentConfig cfg = load_config(o.config);
        if (!o.out.empty())
            cfg.output_dir = o.out;
        if (o.seed)
            cfg.scenario.sim.master_seed = *o.seed;
        if (o.threads)
            cfg.scenario.sim.threads = *o.threads;
        return cfg;
    }

    std::string out_path(const ExperimentConfig &cfg, const std::string &name)
    {
        return (std::filesystem::path(cfg.output_dir) / name).string();
    }

    void echo_config(const ExperimentConfig &cfg)
    {
        write_file_atomic(out_path(cfg, "effective_config.ini"), config_to_ini(cfg));
    }

    int cmd_design(const CommonOptions &o)
    {
        const ExperimentConfig cfg = load(o);
        const Scenario &s = cfg.scenario;
        const ChannelEstimate est{scenario_channel(s, s.mixing_variance), s.error_variance};
        const SteeringMatrix tx = steering_matrix(s.layout.tx_geom, s.tx_region);
        const SteeringMatrix rx = steering_matrix(s.layout.rx_geom, s.rx_region);
        const DesignResult r = lonestar_design(est, tx, rx, s.lonestar_quantization, s.solver);

        echo_config(cfg);
        save_codebook_csv(r.tx_codebook, out_path(cfg, "tx_codebook.csv"));
        save_codebook_csv(r.rx_codebook, out_path(cfg, "rx_codebook.csv"));
        write_file_atomic(out_path(cfg, "trace.csv"), trace_to_csv(r));

        std::printf("final expected objective: %s\n", format_double(r.final_objective()).c_str());
        std::printf("relaxed coverage residual: tx %s rx %s\n", format_double(r.coverage_residual_tx).c_str(),
                    format_double(r.coverage_residual_rx).c_str());
        std::printf("quantized coverage variance: tx %s rx %s\n", format_double(r.coverage_variance_tx).c_str(),
                    format_double(r.coverage_variance_rx).c_str());
        const AverageInr cbf = avg_inr(s.sim.budget, cbf_codebook(s.layout.tx_geom, s.tx_region, s.baseline_quantization).matrix,
                                       cbf_codebook(s.layout.rx_geom, s.rx_region, s.baseline_quantization).matrix,
                                       est.estimate.entries);
        const AverageInr ours = avg_inr(s.sim.budget, r.tx_codebook.matrix, r.rx_codebook.matrix, est.estimate.entries);
        std::printf("average INR_rx: %.2f dB (CBF %.2f dB)\n", ours.db, cbf.db);
        for (const auto &w : r.warnings)
            std::fprintf(stderr, "warning: %s\n", w.c_str());
        std::printf("wrote %s\n", cfg.output_dir.c_str());
        return 0;
    }

    int cmd_sweep(const CommonOptions &o, const std::string &experiment)
    {
        const std::optional<Experiment> e = parse_experiment(experiment);
        if (!e)
        {
            std::fprintf(stderr, "error: --experiment: unknown experiment '%s' (expected snr_sweep, inr_sweep, "
                                 "snr_heatmap, inr_heatmap, error_sweep, mixing_sweep or sigma_sweep)\n",
                         experiment.c_str());
            return exit_config;
        }
        const ExperimentConfig cfg = load(o);
        const SweepResult r = sweep(*e, cfg.axes, cfg.scenario);
        echo_config(cfg);
        const std::string path = out_path(cfg, experiment_name(*e) + ".csv");
        write_file_atomic(path, sweep_to_csv(r));
        std::printf("%zu records, wrote %s\n", r.records.size(), path.c_str());
        return 0;
    }

    int cmd_eval(const CommonOptions &o, const std::string &tx_file, const std::string &rx_file)
    {
        const ExperimentConfig cfg = load(o);
        const Scenario &s = cfg.scenario;
        Codebook tx_cb, rx_cb;
        try
        {
            tx_cb = load_codebook_csv(tx_file);
            rx_cb = load_codebook_csv(rx_file);
        }
        catch (const std::exception &ex)
        {
            std::fprintf(stderr, "error: %s\n", ex.what());
            return exit_config;
        }
        if (tx_cb.matrix.rows() != s.layout.tx_geom.size() || rx_cb.matrix.rows() != s.layout.rx_geom.size())
        {
            std::fprintf(stderr, "error: codebook antenna count does not match array.rows * array.cols\n");
            return exit_config;
        }
        const ChannelMatrix H = scenario_channel(s, s.mixing_variance);
        const AverageInr inr = avg_inr(s.sim.budget, tx_cb.matrix, rx_cb.matrix, H.entries);
        const CMatrix F_cbf = cbf_codebook(s.layout.tx_geom, s.tx_region, s.baseline_quantization).matrix;
        const CMatrix W_cbf = cbf_codebook(s.layout.rx_geom, s.rx_region, s.baseline_quantization).matrix;
        const MonteCarloResult mc = monte_carlo({{"eval", tx_cb.matrix, rx_cb.matrix}}, s.layout,
                                                {H.entries, s.error_variance}, s.sim, 0, F_cbf, W_cbf);
        const CodebookSummary &sum = mc.summaries.front();

        std::printf("average INR_rx: %.4f dB\n", inr.db);
        std::printf("mean gamma_sum: %.6f (stderr %.6f, %d trials)\n", sum.mean_gamma_sum, sum.stderr_gamma_sum,
                    sum.trials);
        auto variance = [](const Codebook &cb, const UpaGeometry &g) -> std::string {
            return format_double(coverage_variance(cb, steering_matrix(g, cb.region)));
        };
        std::printf("coverage variance: tx %s rx %s\n", variance(tx_cb, s.layout.tx_geom).c_str(),
                    variance(rx_cb, s.layout.rx_geom).c_str());
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Self-interference-aware analog beam codebooks for full-duplex arrays"};
    app.require_subcommand(1);

    CommonOptions design_opts, sweep_opts, eval_opts;
    std::string experiment, tx_file, rx_file;

    CLI::App *design = app.add_subcommand("design", "design transmit and receive codebooks");
    add_common(design, design_opts);
    CLI::App *sweep_cmd = app.add_subcommand("sweep", "run a Monte Carlo sweep and write its CSV");
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--experiment", experiment, "sweep name")->required();
    CLI::App *eval = app.add_subcommand("eval", "evaluate a pair of codebook files");
    add_common(eval, eval_opts);
    eval->add_option("--tx", tx_file, "transmit codebook CSV")->required();
    eval->add_option("--rx", rx_file, "receive codebook CSV")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try
    {
        if (design->parsed())
            return cmd_design(design_opts);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_opts, experiment);
        return cmd_eval(eval_opts, tx_file, rx_file);
    }
    catch (const config_error &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_config;
    }
    catch (const infeasible_error &e)
    {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return exit_infeasible;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_internal;
    }
}
