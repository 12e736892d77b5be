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

#include "fdbeam/sim.hpp"

#include "fdbeam/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fdbeam
{
    std::vector<std::pair<double, double>> SimConfig::default_sigma_grid()
    {
        std::vector<std::pair<double, double>> grid;
        for (int db = -40; db <= 0; db += 5)
            grid.emplace_back(db_to_linear(db), db_to_linear(db));
        return grid;
    }

    void SimConfig::validate() const
    {
        if (num_user_pairs < 1)
            throw std::invalid_argument("SimConfig: num_user_pairs must be at least 1");
        if (!(user_az_min <= user_az_max) || !(user_el_min <= user_el_max))
            throw std::invalid_argument("SimConfig: user bounds must be ordered");
        if (sigma_grid.empty())
            throw std::invalid_argument("SimConfig: sigma_grid must not be empty");
        for (const auto &[tx, rx] : sigma_grid)
            if (!(tx >= 0.0) || !(rx >= 0.0))
                throw std::invalid_argument("SimConfig: sigma_grid entries must be nonnegative");
        if (threads < 1)
            throw std::invalid_argument("SimConfig: threads must be at least 1");
        budget.validate();
    }

    UserPair draw_user_pair(const SimConfig &cfg, RandomStream &rng)
    {
        UserPair p;
        p.downlink.azimuth = rng.uniform(cfg.user_az_min, cfg.user_az_max);
        p.downlink.elevation = rng.uniform(cfg.user_el_min, cfg.user_el_max);
        p.uplink.azimuth = rng.uniform(cfg.user_az_min, cfg.user_az_max);
        p.uplink.elevation = rng.uniform(cfg.user_el_min, cfg.user_el_max);
        return p;
    }

    AlignedBeam beam_align(const CMatrix &codebook, const CVector &h, LinkKind kind, const LinkBudget &budget)
    {
        require_dims(codebook.cols() > 0, "beam_align: empty codebook");
        require_dims(codebook.rows() == h.size(), "beam_align: codebook and channel sizes differ");
        AlignedBeam best;
        bool first = true;
        for (Eigen::Index j = 0; j < codebook.cols(); ++j)
        {
            const CVector beam = codebook.col(j);
            double snr = 0.0;
            if (kind == LinkKind::transmit)
                snr = snr_tx(budget, beam, h);
            else if (beam.squaredNorm() > 0.0)
                snr = snr_rx(budget, beam, h);
            if (first || snr > best.snr)
            {
                best = {static_cast<int>(j), snr};
                first = false;
            }
        }
        return best;
    }

    TrialMetrics run_trial(const CMatrix &F, const CMatrix &W, const CMatrix &H_true, const LinkBudget &budget,
                           const CVector &h_downlink, const CVector &h_uplink, const CMatrix &F_cbf,
                           const CMatrix &W_cbf)
    {
        require_dims(H_true.rows() == W.rows() && H_true.cols() == F.rows(), "run_trial: channel shape differs");
        const AlignedBeam tx = beam_align(F, h_downlink, LinkKind::transmit, budget);
        const AlignedBeam rx = beam_align(W, h_uplink, LinkKind::receive, budget);
        const AlignedBeam tx_ref = beam_align(F_cbf, h_downlink, LinkKind::transmit, budget);
        const AlignedBeam rx_ref = beam_align(W_cbf, h_uplink, LinkKind::receive, budget);

        TrialMetrics m;
        m.tx_beam_index = tx.index;
        m.rx_beam_index = rx.index;
        m.snr_tx = tx.snr;
        m.snr_rx = rx.snr;
        const CVector w = W.col(rx.index);
        m.inr_rx = w.squaredNorm() > 0.0 ? inr_rx(budget, F.col(tx.index), w, H_true) : 0.0;
        const SinrRates r = sinr_and_rates(m.snr_tx, m.snr_rx, m.inr_rx, budget.inr_tx());
        m.sinr_tx = r.sinr_tx;
        m.sinr_rx = r.sinr_rx;
        m.rate_tx = r.rate_tx;
        m.rate_rx = r.rate_rx;
        m.gamma_sum = gamma_sum(r.rate_tx, r.rate_rx, tx_ref.snr, rx_ref.snr);
        return m;
    }

    namespace
    {
        template <class Fn>
        void parallel_for(int count, int threads, Fn &&fn)
        {
            const int workers = std::max(1, std::min(threads, count));
            if (workers == 1)
            {
                for (int i = 0; i < count; ++i)
                    fn(i);
                return;
            }
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
            for (int t = 0; t < workers; ++t)
                pool.emplace_back([&, t] {
                    try
                    {
                        for (int i = t; i < count; i += workers)
                            fn(i);
                    }
                    catch (...)
                    {
                        errors[static_cast<std::size_t>(t)] = std::current_exception();
                    }
                });
            for (auto &th : pool)
                th.join();
            for (auto &e : errors)
                if (e)
                    std::rethrow_exception(e);
        }

        CodebookSummary summarize(const std::string &label, const std::vector<TrialMetrics> &trials)
        {
            CodebookSummary s;
            s.label = label;
            s.trials = static_cast<int>(trials.size());
            const double n = static_cast<double>(trials.size());
            double g = 0.0, g2 = 0.0, inr = 0.0;
            for (const auto &t : trials)
            {
                g += t.gamma_sum;
                s.mean_rate_tx += t.rate_tx;
                s.mean_rate_rx += t.rate_rx;
                inr += t.inr_rx;
            }
            s.mean_gamma_sum = g / n;
            s.mean_rate_tx /= n;
            s.mean_rate_rx /= n;
            s.mean_inr_rx_db = linear_to_db(inr / n);
            for (const auto &t : trials)
                g2 += (t.gamma_sum - s.mean_gamma_sum) * (t.gamma_sum - s.mean_gamma_sum);
            s.stderr_gamma_sum = trials.size() > 1 ? std::sqrt(g2 / (n - 1.0) / n) : 0.0;
            return s;
        }

        std::uint64_t bits_of(double v) { return std::bit_cast<std::uint64_t>(v); }
    }

    MonteCarloResult monte_carlo(const std::vector<LabeledCodebooks> &codebooks, const ArrayPairLayout &layout,
                                 const TrialChannelPolicy &channel, const SimConfig &cfg, std::uint64_t point_index,
                                 const CMatrix &F_cbf, const CMatrix &W_cbf)
    {
        cfg.validate();
        require_dims(!codebooks.empty(), "monte_carlo: no codebooks");
        const int n = cfg.num_user_pairs;
        MonteCarloResult out;
        out.trials.assign(codebooks.size(), std::vector<TrialMetrics>(static_cast<std::size_t>(n)));
        out.draw_digests.assign(static_cast<std::size_t>(n), 0);

        parallel_for(n, cfg.threads, [&](int t) {
            RandomStream rng = RandomStream::derive(cfg.master_seed, {point_index, static_cast<std::uint64_t>(t)});
            const UserPair users = draw_user_pair(cfg, rng);
            const CVector h_dl = los_user_channel(layout.tx_geom, users.downlink);
            const CVector h_ul = los_user_channel(layout.rx_geom, users.uplink);
            ChannelMatrix truth{channel.truth, false};
            if (channel.error_variance > 0.0)
                truth = perturb_estimate(truth, channel.error_variance, rng);

            std::uint64_t d = digest(truth.entries);
            d = digest_combine(d, users.downlink.azimuth);
            d = digest_combine(d, users.downlink.elevation);
            d = digest_combine(d, users.uplink.azimuth);
            d = digest_combine(d, users.uplink.elevation);
            out.draw_digests[static_cast<std::size_t>(t)] = d;

            for (std::size_t c = 0; c < codebooks.size(); ++c)
                out.trials[c][static_cast<std::size_t>(t)] =
                    run_trial(codebooks[c].F, codebooks[c].W, truth.entries, cfg.budget, h_dl, h_ul, F_cbf, W_cbf);
        });

        for (std::size_t c = 0; c < codebooks.size(); ++c)
            out.summaries.push_back(summarize(codebooks[c].label, out.trials[c]));
        return out;
    }

    void Scenario::validate() const
    {
        layout.validate();
        if (tx_region.empty() || rx_region.empty())
            throw std::invalid_argument("Scenario: coverage regions must not be empty");
        lonestar_quantization.validate();
        baseline_quantization.validate();
        solver.validate();
        sim.validate();
        if (!(error_variance >= 0.0) || !(mixing_variance >= 0.0))
            throw std::invalid_argument("Scenario: variances must be nonnegative");
        if (taylor_nbar < 1)
            throw std::invalid_argument("Scenario: taylor_nbar must be positive");
    }

    ChannelMatrix scenario_channel(const Scenario &s, double mixing_variance)
    {
        const ChannelMatrix spherical = spherical_wave_channel(s.layout);
        if (!(mixing_variance > 0.0))
            return spherical;
        RandomStream mix = RandomStream::derive(s.sim.master_seed, {0x6D6978ULL});
        return mixture_channel(spherical, mixing_variance, mix);
    }

    const DesignResult &DesignCache::get(const ChannelEstimate &est, const SteeringMatrix &tx, const SteeringMatrix &rx,
                                         const QuantizationSpec &spec, const SolverConfig &cfg)
    {
        std::vector<std::uint64_t> key{digest(est.estimate.entries),
                                       bits_of(est.error_variance),
                                       digest(tx.entries),
                                       digest(rx.entries),
                                       static_cast<std::uint64_t>(spec.phase_bits),
                                       static_cast<std::uint64_t>(spec.amplitude_bits),
                                       bits_of(spec.attenuation_step_db),
                                       spec.infinite_resolution ? 1u : 0u,
                                       bits_of(cfg.sigma_tx_sq),
                                       bits_of(cfg.sigma_rx_sq),
                                       static_cast<std::uint64_t>(cfg.am_passes),
                                       bits_of(cfg.subproblem_tolerance),
                                       static_cast<std::uint64_t>(cfg.subproblem_max_iters),
                                       bits_of(cfg.dual_bisection_tolerance),
                                       bits_of(cfg.ridge)};
        auto it = designs_.find(key);
        if (it == designs_.end())
            it = designs_.emplace(std::move(key), lonestar_design(est, tx, rx, spec, cfg)).first;
        return it->second;
    }

    namespace
    {
        struct Baselines
        {
            CMatrix F_cbf, W_cbf, F_taylor, W_taylor;
        };

        Baselines make_baselines(const Scenario &s)
        {
            Baselines b;
            b.F_cbf = cbf_codebook(s.layout.tx_geom, s.tx_region, s.baseline_quantization).matrix;
            b.W_cbf = cbf_codebook(s.layout.rx_geom, s.rx_region, s.baseline_quantization).matrix;
            b.F_taylor =
                taylor_codebook(s.layout.tx_geom, s.tx_region, s.baseline_quantization, s.taylor_sll_db, s.taylor_nbar)
                    .matrix;
            b.W_taylor =
                taylor_codebook(s.layout.rx_geom, s.rx_region, s.baseline_quantization, s.taylor_sll_db, s.taylor_nbar)
                    .matrix;
            return b;
        }
    }

    TunedDesign tune_sigma(const ChannelEstimate &est, const Scenario &scenario, const QuantizationSpec &spec,
                           const TrialChannelPolicy &channel, std::uint64_t point_index, DesignCache &cache)
    {
        scenario.validate();
        const SteeringMatrix tx = steering_matrix(scenario.layout.tx_geom, scenario.tx_region);
        const SteeringMatrix rx = steering_matrix(scenario.layout.rx_geom, scenario.rx_region);
        const Baselines base = make_baselines(scenario);

        TunedDesign best;
        bool have = false;
        for (const auto &[s_tx, s_rx] : scenario.sim.sigma_grid)
        {
            SolverConfig cfg = scenario.solver;
            cfg.sigma_tx_sq = s_tx;
            cfg.sigma_rx_sq = s_rx;
            const DesignResult &d = cache.get(est, tx, rx, spec, cfg);
            const MonteCarloResult mc = monte_carlo({{"lonestar", d.tx_codebook.matrix, d.rx_codebook.matrix}},
                                                    scenario.layout, channel, scenario.sim, point_index, base.F_cbf,
                                                    base.W_cbf);
            const CodebookSummary &sum = mc.summaries.front();
            best.grid_mean_gamma_sum.push_back(sum.mean_gamma_sum);
            const bool better = !have || sum.mean_gamma_sum > best.summary.mean_gamma_sum ||
                                (sum.mean_gamma_sum == best.summary.mean_gamma_sum &&
                                 s_tx + s_rx < best.sigma_tx_sq + best.sigma_rx_sq);
            if (better)
            {
                best.sigma_tx_sq = s_tx;
                best.sigma_rx_sq = s_rx;
                best.design = &d;
                best.summary = sum;
                have = true;
            }
        }
        return best;
    }

    namespace
    {
        const char *const experiment_names[] = {"snr_sweep",   "inr_sweep",    "snr_heatmap", "inr_heatmap",
                                                "error_sweep", "mixing_sweep", "sigma_sweep"};
    }

    std::optional<Experiment> parse_experiment(const std::string &name)
    {
        for (int i = 0; i < 7; ++i)
            if (name == experiment_names[i])
                return static_cast<Experiment>(i);
        return std::nullopt;
    }

    std::string experiment_name(Experiment e)
    {
        return experiment_names[static_cast<int>(e)];
    }

    namespace
    {
        // One sweep point: budget and channel settings plus the axis values reported.
        struct SweepPoint
        {
            std::vector<double> axis_values;
            LinkBudget budget;
            double error_variance = 0.0;
            double mixing_variance = 0.0;
            std::optional<double> fixed_sigma; // sigma_sweep only
        };

        std::vector<SweepPoint> expand(Experiment e, const SweepAxes &axes, const Scenario &s,
                                       std::vector<std::string> &labels)
        {
            std::vector<SweepPoint> pts;
            SweepPoint base;
            base.budget = s.sim.budget;
            base.error_variance = s.error_variance;
            base.mixing_variance = s.mixing_variance;
            auto need = [](const std::vector<double> &v, const char *name) {
                if (v.empty())
                    throw std::invalid_argument(std::string("sweep: axis ") + name + " is empty");
            };
            switch (e)
            {
            case Experiment::snr_sweep:
                need(axes.snr_db, "snr_db");
                labels = {"snr_db"};
                for (double v : axes.snr_db)
                {
                    SweepPoint p = base;
                    p.budget.snrbar_tx_db = p.budget.snrbar_rx_db = v;
                    p.axis_values = {v};
                    pts.push_back(p);
                }
                break;
            case Experiment::inr_sweep:
                need(axes.inrbar_rx_db, "inrbar_rx_db");
                labels = {"inrbar_rx_db"};
                for (double v : axes.inrbar_rx_db)
                {
                    SweepPoint p = base;
                    p.budget.inrbar_rx_db = v;
                    p.axis_values = {v};
                    pts.push_back(p);
                }
                break;
            case Experiment::snr_heatmap:
                need(axes.snr_db, "snr_db");
                labels = {"snrbar_tx_db", "snrbar_rx_db"};
                for (double t : axes.snr_db)
                    for (double r : axes.snr_db)
                    {
                        SweepPoint p = base;
                        p.budget.snrbar_tx_db = t;
                        p.budget.snrbar_rx_db = r;
                        p.axis_values = {t, r};
                        pts.push_back(p);
                    }
                break;
            case Experiment::inr_heatmap:
                need(axes.inr_tx_db, "inr_tx_db");
                need(axes.inrbar_rx_db, "inrbar_rx_db");
                labels = {"inr_tx_db", "inrbar_rx_db"};
                for (double t : axes.inr_tx_db)
                    for (double r : axes.inrbar_rx_db)
                    {
                        SweepPoint p = base;
                        p.budget.inr_tx_db = t;
                        p.budget.inrbar_rx_db = r;
                        p.axis_values = {t, r};
                        pts.push_back(p);
                    }
                break;
            case Experiment::error_sweep:
                need(axes.error_variance_db, "error_variance_db");
                labels = {"error_variance_db"};
                for (double v : axes.error_variance_db)
                {
                    SweepPoint p = base;
                    p.error_variance = db_to_linear(v);
                    p.axis_values = {v};
                    pts.push_back(p);
                }
                break;
            case Experiment::mixing_sweep:
                need(axes.mixing_variance_db, "mixing_variance_db");
                labels = {"mixing_variance_db"};
                for (double v : axes.mixing_variance_db)
                {
                    SweepPoint p = base;
                    p.mixing_variance = db_to_linear(v);
                    p.axis_values = {v};
                    pts.push_back(p);
                }
                break;
            case Experiment::sigma_sweep:
                need(axes.sigma_db, "sigma_db");
                need(axes.inrbar_rx_db, "inrbar_rx_db");
                labels = {"sigma_db", "inrbar_rx_db"};
                for (double sg : axes.sigma_db)
                    for (double r : axes.inrbar_rx_db)
                    {
                        SweepPoint p = base;
                        p.budget.inrbar_rx_db = r;
                        p.fixed_sigma = db_to_linear(sg);
                        p.axis_values = {sg, r};
                        pts.push_back(p);
                    }
                break;
            }
            return pts;
        }
    }

    SweepResult sweep(Experiment experiment, const SweepAxes &axes, const Scenario &scenario)
    {
        scenario.validate();
        if (axes.lonestar_bits.empty())
            throw std::invalid_argument("sweep: lonestar_bits is empty");

        SweepResult out;
        out.experiment = experiment;
        const std::vector<SweepPoint> points = expand(experiment, axes, scenario, out.axis_labels);

        const SteeringMatrix tx = steering_matrix(scenario.layout.tx_geom, scenario.tx_region);
        const SteeringMatrix rx = steering_matrix(scenario.layout.rx_geom, scenario.rx_region);
        const Baselines base = make_baselines(scenario);
        const ChannelMatrix spherical = spherical_wave_channel(scenario.layout);
        DesignCache cache;

        for (std::size_t pi = 0; pi < points.size(); ++pi)
        {
            const SweepPoint &pt = points[pi];
            const std::uint64_t point_index = pi;

            const ChannelMatrix truth =
                pt.mixing_variance > 0.0 ? scenario_channel(scenario, pt.mixing_variance) : spherical;
            const ChannelEstimate est{truth, pt.error_variance};
            const TrialChannelPolicy channel{truth.entries, pt.error_variance};

            Scenario local = scenario;
            local.sim.budget = pt.budget;

            std::vector<SweepRecord> lonestar_records;
            for (int bits : axes.lonestar_bits)
            {
                const QuantizationSpec spec =
                    QuantizationSpec::bits(bits, scenario.lonestar_quantization.attenuation_step_db);
                if (pt.fixed_sigma || !scenario.tune_sigma)
                {
                    local.sim.sigma_grid = {pt.fixed_sigma ? std::make_pair(*pt.fixed_sigma, *pt.fixed_sigma)
                                                           : std::make_pair(scenario.solver.sigma_tx_sq,
                                                                            scenario.solver.sigma_rx_sq)};
                }
                else
                {
                    local.sim.sigma_grid = scenario.sim.sigma_grid;
                }
                const TunedDesign tuned = tune_sigma(est, local, spec, channel, point_index, cache);
                SweepRecord rec;
                rec.axis_values = pt.axis_values;
                rec.summary = tuned.summary;
                rec.summary.label = "lonestar_b" + std::to_string(bits);
                rec.tuned_sigma_tx_sq = tuned.sigma_tx_sq;
                rec.tuned_sigma_rx_sq = tuned.sigma_rx_sq;
                lonestar_records.push_back(rec);
            }

            const MonteCarloResult mc =
                monte_carlo({{"cbf", base.F_cbf, base.W_cbf}, {"taylor", base.F_taylor, base.W_taylor}},
                            scenario.layout, channel, local.sim, point_index, base.F_cbf, base.W_cbf);
            for (const auto &s : mc.summaries)
            {
                SweepRecord rec;
                rec.axis_values = pt.axis_values;
                rec.summary = s;
                out.records.push_back(rec);
            }
            for (auto &r : lonestar_records)
                out.records.push_back(std::move(r));
            out.draw_digests.push_back(mc.draw_digests);
        }
        return out;
    }

    std::string sweep_to_csv(const SweepResult &r)
    {
        std::ostringstream os;
        for (const auto &l : r.axis_labels)
            os << l << ',';
        os << "codebook,mean_gamma_sum,stderr_gamma_sum,mean_rate_tx,mean_rate_rx,mean_inr_rx_db,"
              "tuned_sigma_tx_sq_db,tuned_sigma_rx_sq_db,trials\n";
        auto sigma = [](double v) { return std::isnan(v) ? std::string() : format_double(linear_to_db(v)); };
        for (const auto &rec : r.records)
        {
            for (double v : rec.axis_values)
                os << format_double(v) << ',';
            const CodebookSummary &s = rec.summary;
            os << s.label << ',' << format_double(s.mean_gamma_sum) << ',' << format_double(s.stderr_gamma_sum) << ','
               << format_double(s.mean_rate_tx) << ',' << format_double(s.mean_rate_rx) << ','
               << format_double(s.mean_inr_rx_db) << ',' << sigma(rec.tuned_sigma_tx_sq) << ','
               << sigma(rec.tuned_sigma_rx_sq) << ',' << s.trials << '\n';
        }
        return os.str();
    }
}
