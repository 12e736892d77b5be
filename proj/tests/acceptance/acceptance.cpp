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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if
// any criterion fails. Pass criterion numbers as arguments to run a subset.

#include "fdbeam/sim.hpp"

#include "reference_qcqp.hpp"
#include "test_helpers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

using namespace fdbeam;

namespace
{
    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    std::string fmt(const char *f, double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, v);
        return buf;
    }

    double elapsed(std::chrono::steady_clock::time_point t0)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    // Mean gamma_sum per (axis value, codebook label) from a single-axis sweep.
    using Curve = std::map<double, double>;
    std::map<std::string, Curve> curves(const SweepResult &r)
    {
        std::map<std::string, Curve> out;
        for (const auto &rec : r.records)
            out[rec.summary.label][rec.axis_values.at(0)] = rec.summary.mean_gamma_sum;
        return out;
    }

    // First axis value where the curve drops below `level`, interpolated linearly.
    std::optional<double> first_crossing(const Curve &c, double level)
    {
        auto prev = c.end();
        for (auto it = c.begin(); it != c.end(); ++it)
        {
            if (it->second < level)
            {
                if (prev == c.end())
                    return std::nullopt;
                const double t = (prev->second - level) / (prev->second - it->second);
                return prev->first + t * (it->first - prev->first);
            }
            prev = it;
        }
        return std::nullopt;
    }

    // ---------------------------------------------------------------------
    // 1. Expected objective against Monte Carlo over the error matrix.
    Outcome expected_objective_oracle()
    {
        const auto t0 = std::chrono::steady_clock::now();
        RandomStream rng(1001);
        const double eps_values[] = {0.01, 0.1, 1.0};
        const int draws = 100000;
        double worst_z = 0.0;
        for (int inst = 0; inst < 20; ++inst)
        {
            const double eps = eps_values[inst % 3];
            CMatrix H = testing::random_matrix(8, 8, rng);
            H *= 8.0 / H.norm();
            const ChannelEstimate est{{H, true}, eps};
            const CMatrix F = testing::random_phases(8, 4, rng);
            const CMatrix W = testing::random_phases(8, 4, rng);
            const CMatrix WH = W.adjoint() * H * F;
            double s = 0.0, s2 = 0.0;
            CMatrix D(8, 8);
            for (int d = 0; d < draws; ++d)
            {
                for (Eigen::Index k = 0; k < D.size(); ++k)
                    D(k) = rng.complex_normal(eps);
                const double v = (WH + W.adjoint() * D * F).squaredNorm();
                s += v;
                s2 += v * v;
            }
            const double mean = s / draws;
            const double se = std::sqrt((s2 / draws - mean * mean) / (draws - 1.0));
            worst_z = std::max(worst_z, std::abs(expected_objective(F, W, est) - mean) / se);
        }
        const double t = elapsed(t0);
        return {worst_z <= 3.0 && t < 60.0,
                "20 instances, worst deviation " + fmt("%.2f", worst_z) + " standard errors, " + fmt("%.1f", t) + " s"};
    }

    // ---------------------------------------------------------------------
    // 2. Quantizer against exhaustive search over the realizable grid.
    Outcome quantizer_oracle()
    {
        const auto t0 = std::chrono::steady_clock::now();
        RandomStream rng(1002);
        long mismatches = 0, checked = 0;
        for (int bp = 1; bp <= 6; ++bp)
            for (int ba = 1; ba <= 6; ++ba)
            {
                const QuantizationSpec s{bp, ba, 0.5};
                const auto amps = realizable_amplitudes(s);
                const auto phases = realizable_phases(s);
                for (int t = 0; t < 10000; ++t)
                {
                    // Mix of generic inputs and exact amplitude/phase midpoints.
                    double r = rng.uniform(0.0, 1.2);
                    double th = rng.uniform(-pi, pi);
                    if (t % 10 == 0)
                    {
                        const std::size_t k = static_cast<std::size_t>(rng.uniform(0.0, amps.size() - 1.0));
                        r = k + 1 < amps.size() ? 0.5 * (amps[k] + amps[k + 1]) : amps[k];
                        th = phases[static_cast<std::size_t>(rng.uniform(0.0, static_cast<double>(phases.size())))] +
                             pi / phases.size();
                    }
                    const cdouble w = std::polar(r, th);
                    const double mag = std::abs(w);
                    const cdouble unit = std::polar(1.0, std::arg(w));
                    // Separate nearest searches; the first index wins exact ties.
                    std::size_t ba_best = 0, bp_best = 0;
                    for (std::size_t k = 1; k < amps.size(); ++k)
                        if (std::abs(amps[k] - mag) < std::abs(amps[ba_best] - mag))
                            ba_best = k;
                    for (std::size_t k = 1; k < phases.size(); ++k)
                        if (std::abs(std::polar(1.0, phases[k]) - unit) < std::abs(std::polar(1.0, phases[bp_best]) - unit))
                            bp_best = k;
                    const cdouble expect = amps[ba_best] * std::polar(1.0, phases[bp_best]);
                    const QuantIndex got = quantize_index(w, s);
                    if (got.amplitude != static_cast<int>(ba_best) || got.phase != static_cast<int>(bp_best) ||
                        std::abs(project_weight(w, s) - expect) > 1e-15)
                        ++mismatches;
                    ++checked;
                }
            }
        return {mismatches == 0, std::to_string(checked) + " inputs over 36 resolutions, " +
                                     std::to_string(mismatches) + " mismatches, " + fmt("%.1f", elapsed(t0)) + " s"};
    }

    // ---------------------------------------------------------------------
    // 3. Subproblem optimum against the independent reference solver.
    Outcome subproblem_optimality()
    {
        const auto t0 = std::chrono::steady_clock::now();
        RandomStream rng(1003);
        SolverConfig cfg;
        const int shapes[][3] = {{2, 2, 2}, {2, 3, 3}, {2, 4, 4}, {1, 8, 4}, {2, 4, 3},
                                 {2, 2, 4}, {2, 3, 2}, {2, 4, 4}, {1, 6, 4}, {2, 4, 1}};
        const double sigmas[] = {0.01, 0.03, 0.05, 0.1, 0.2, 0.02, 0.08, 0.004, 0.15, 0.05};
        double worst = 0.0;
        for (int i = 0; i < 10; ++i)
        {
            const int rows = shapes[i][0], cols = shapes[i][1], m = shapes[i][2];
            const int n = rows * cols;
            const UpaGeometry g{rows, cols};
            std::vector<Direction> region;
            for (int k = 0; k < m; ++k)
                region.push_back(Direction::from_degrees(rng.uniform(-60, 60), rng.uniform(-30, 30)));
            const SteeringMatrix A = steering_matrix(g, region);
            // Receive side of a spherical-wave pair, or a random channel.
            CMatrix H;
            if (i % 2 == 0)
                H = spherical_wave_channel(ArrayPairLayout::center_aligned(g, g, rng.uniform(2.0, 10.0))).entries;
            else
            {
                H = testing::random_matrix(n, n, rng);
                H *= std::sqrt(double(n * n)) / H.norm();
            }
            const ChannelEstimate est{{H, true}, i % 3 == 0 ? 0.0 : 0.01 * i};
            // As many fixed-side beams as antennas keeps Q full rank, so the optimum is
            // strictly positive and a relative gap is meaningful.
            const CMatrix W = project_codebook(testing::random_phases(n, n, rng), QuantizationSpec::bits(4));
            const CMatrix Q = tx_quadratic(W, est);
            const auto mine = solve_coverage_qp(Q, A.entries, sigmas[i], cfg);
            const auto ref = testing::ReferenceQcqp(Q, A.entries, sigmas[i] * n * n * m).solve();
            const double rel = std::abs(mine.objective - ref.objective) / std::max(ref.objective, 1e-300);
            worst = std::max(worst, rel);
            std::printf("  instance %d: N=%d M=%d sigma^2=%g  solver %.10g  reference %.10g  rel %.2e\n", i, n, m,
                        sigmas[i], mine.objective, ref.objective, rel);
        }
        const double t = elapsed(t0);
        return {worst <= 5e-3 && t < 300.0,
                "10 instances, worst relative gap " + fmt("%.2e", worst) + ", " + fmt("%.1f", t) + " s"};
    }

    // ---------------------------------------------------------------------
    // 4. Alternating-minimization trace on the default 8x8, 45-beam instance.
    Outcome trace_property()
    {
        const auto t0 = std::chrono::steady_clock::now();
        const Scenario s;
        const ChannelEstimate est{spherical_wave_channel(s.layout), 0.0};
        const SteeringMatrix tx = steering_matrix(s.layout.tx_geom, s.tx_region);
        const SteeringMatrix rx = steering_matrix(s.layout.rx_geom, s.rx_region);
        const DesignResult d = lonestar_design(est, tx, rx, s.lonestar_quantization, s.solver);
        bool ok = true;
        double worst_rise = 0.0;
        for (std::size_t i = 1; i < d.trace.size(); ++i)
        {
            std::printf("  %-10s %.12g\n", d.trace[i].label.c_str(), d.trace[i].objective);
            if (d.trace[i].label.rfind("solve", 0) == 0)
            {
                const double rise = (d.trace[i].objective - d.trace[i - 1].objective) / d.trace[i - 1].objective;
                worst_rise = std::max(worst_rise, rise);
                ok = ok && rise <= 1e-9;
            }
        }
        // Feasibility of the relaxed solutions, recomputed here.
        const double slack = 1e-6;
        const double cov_tx = complex_coverage_error(d.relaxed_tx, tx.entries);
        const double cov_rx = complex_coverage_error(d.relaxed_rx, rx.entries);
        const double mag = std::max(max_entry_magnitude(d.relaxed_tx), max_entry_magnitude(d.relaxed_rx));
        ok = ok && cov_tx <= s.solver.sigma_tx_sq + slack && cov_rx <= s.solver.sigma_rx_sq + slack &&
             mag <= 1.0 + 1e-9;
        return {ok, "worst solve-step rise " + fmt("%.1e", worst_rise) + ", relaxed coverage tx " + fmt("%.6g", cov_tx) +
                        " rx " + fmt("%.6g", cov_rx) + " (target " + fmt("%.6g", s.solver.sigma_tx_sq) +
                        "), max |entry| " + fmt("%.12g", mag) + ", KKT tx " + fmt("%.1e", d.tx_solve.kkt_residual) +
                        " rx " + fmt("%.1e", d.rx_solve.kkt_residual) + ", " + fmt("%.1f", elapsed(t0)) + " s"};
    }

    // ---------------------------------------------------------------------
    // 5. Baseline beam anchors.
    Outcome baseline_anchors()
    {
        const Scenario s;
        const UpaGeometry &g = s.layout.tx_geom;
        const Direction broadside{};
        const CVector cbf = cbf_codebook(g, {broadside}, s.baseline_quantization).matrix.col(0);
        const CVector tay = taylor_codebook(g, {broadside}, s.baseline_quantization, s.taylor_sll_db, s.taylor_nbar).matrix.col(0);

        // Azimuth cut on a 1 degree grid; side lobes are everything outside the main lobe.
        std::vector<double> gain;
        for (int az = -90; az <= 90; ++az)
            gain.push_back(beam_gain(tay, g, Direction::from_degrees(az, 0.0)));
        std::size_t right = 90, left = 90;
        while (right + 1 < gain.size() && gain[right + 1] <= gain[right])
            ++right;
        while (left > 0 && gain[left - 1] <= gain[left])
            --left;
        double side = 0.0;
        for (std::size_t i = 0; i < gain.size(); ++i)
            if (i < left || i > right)
                side = std::max(side, gain[i]);
        const double sll_db = linear_to_db(side / gain[90]);
        const double loss_db = linear_to_db(beam_gain(cbf, g, broadside) / gain[90]);

        const double n2 = static_cast<double>(g.size()) * g.size();
        const Codebook ideal = cbf_codebook(g, s.tx_region, QuantizationSpec::infinite());
        double worst = 0.0;
        for (std::size_t i = 0; i < s.tx_region.size(); ++i)
            worst = std::max(worst, std::abs(beam_gain(ideal.matrix.col(static_cast<Eigen::Index>(i)), g, s.tx_region[i]) - n2) / n2);

        const bool ok = std::abs(sll_db + 25.0) <= 3.0 && std::abs(loss_db - 6.0) <= 1.5 && worst <= 1e-9;
        return {ok, "Taylor side lobe " + fmt("%.2f", sll_db) + " dB, main-lobe loss " + fmt("%.2f", loss_db) +
                        " dB, CBF gain relative error " + fmt("%.1e", worst)};
    }

    // ---------------------------------------------------------------------
    // 6. Low-SNR anchor for the baselines.
    Outcome low_snr_anchor()
    {
        const auto t0 = std::chrono::steady_clock::now();
        Scenario s;
        s.sim.num_user_pairs = 500;
        s.sim.budget.snrbar_tx_db = s.sim.budget.snrbar_rx_db = -10.0;
        s.sim.budget.inrbar_rx_db = 90.0;
        const CMatrix F = cbf_codebook(s.layout.tx_geom, s.tx_region, s.baseline_quantization).matrix;
        const CMatrix W = cbf_codebook(s.layout.rx_geom, s.rx_region, s.baseline_quantization).matrix;
        const CMatrix Ft = taylor_codebook(s.layout.tx_geom, s.tx_region, s.baseline_quantization, s.taylor_sll_db, s.taylor_nbar).matrix;
        const CMatrix Wt = taylor_codebook(s.layout.rx_geom, s.rx_region, s.baseline_quantization, s.taylor_sll_db, s.taylor_nbar).matrix;
        const TrialChannelPolicy ch{spherical_wave_channel(s.layout).entries, 0.0};
        const auto mc = monte_carlo({{"cbf", F, W}, {"taylor", Ft, Wt}}, s.layout, ch, s.sim, 0, F, W);
        const double g_cbf = mc.summaries[0].mean_gamma_sum, g_tay = mc.summaries[1].mean_gamma_sum;
        const double t = elapsed(t0);
        return {std::abs(g_cbf - 0.50) <= 0.05 && std::abs(g_tay - 0.46) <= 0.05 && t < 600.0,
                "CBF " + fmt("%.4f", g_cbf) + " (target 0.50), Taylor " + fmt("%.4f", g_tay) + " (target 0.46), " +
                    fmt("%.1f", t) + " s"};
    }

    // ---------------------------------------------------------------------
    // 7 and 8 share one INR sweep at SNR 10 dB, 200 user pairs, 5 dB grid.
    const SweepResult &inr_sweep_result()
    {
        static std::optional<SweepResult> r;
        if (!r)
        {
            Scenario s;
            s.sim.num_user_pairs = 200;
            SweepAxes axes;
            axes.inrbar_rx_db.clear();
            for (double v = 40.0; v <= 150.0; v += 5.0)
                axes.inrbar_rx_db.push_back(v);
            axes.lonestar_bits = {6, 7, 8};
            const auto t0 = std::chrono::steady_clock::now();
            r = sweep(Experiment::inr_sweep, axes, s);
            std::printf("  INR sweep: %zu records in %.1f s\n", r->records.size(), elapsed(t0));
            for (const auto &[label, c] : curves(*r))
            {
                std::printf("  %-12s", label.c_str());
                for (const auto &[x, y] : c)
                    std::printf(" %.0f:%.3f", x, y);
                std::printf("\n");
            }
        }
        return *r;
    }

    Outcome robustness_per_bit()
    {
        const auto c = curves(inr_sweep_result());
        std::optional<double> x[3];
        for (int b = 6; b <= 8; ++b)
            x[b - 6] = first_crossing(c.at("lonestar_b" + std::to_string(b)), 0.75);
        if (!x[0] || !x[1] || !x[2])
            return {false, "a LoneSTAR curve does not cross 0.75 inside the sweep range"};
        const double d1 = *x[1] - *x[0], d2 = *x[2] - *x[1];
        return {std::abs(d1 - 10.0) <= 4.0 && std::abs(d2 - 10.0) <= 4.0,
                "0.75 crossings at " + fmt("%.1f", *x[0]) + " / " + fmt("%.1f", *x[1]) + " / " + fmt("%.1f", *x[2]) +
                    " dB for b = 6 / 7 / 8; shifts " + fmt("%.1f", d1) + " and " + fmt("%.1f", d2) + " dB"};
    }

    Outcome taylor_band()
    {
        const auto c = curves(inr_sweep_result());
        const Curve &cbf = c.at("cbf"), &tay = c.at("taylor");
        // Difference curve; Taylor must lead on one contiguous run of grid points.
        std::vector<std::pair<double, double>> diff;
        for (const auto &[x, y] : tay)
            diff.emplace_back(x, y - cbf.at(x));
        int runs = 0;
        std::size_t first = 0, last = 0;
        for (std::size_t i = 0; i < diff.size(); ++i)
            if (diff[i].second > 0.0)
            {
                if (i == 0 || diff[i - 1].second <= 0.0)
                {
                    ++runs;
                    first = i;
                }
                last = i;
            }
        if (runs != 1 || first == 0 || last + 1 == diff.size())
            return {false, "Taylor leads CBF on " + std::to_string(runs) + " separate ranges or at a sweep edge"};
        auto zero = [&](std::size_t a, std::size_t b) {
            const double t = diff[a].second / (diff[a].second - diff[b].second);
            return diff[a].first + t * (diff[b].first - diff[a].first);
        };
        const double lo = zero(first - 1, first), hi = zero(last, last + 1);
        return {std::abs(lo - 72.0) <= 5.0 && std::abs(hi - 100.0) <= 5.0,
                "Taylor above CBF for INRbar in [" + fmt("%.1f", lo) + ", " + fmt("%.1f", hi) + "] dB"};
    }

    // ---------------------------------------------------------------------
    // 9. Degradation with estimation error and with mixing.
    Outcome degradation_trends()
    {
        const auto t0 = std::chrono::steady_clock::now();
        Scenario s;
        s.sim.num_user_pairs = 200;
        SweepAxes axes;
        axes.lonestar_bits = {8};
        const auto err = curves(sweep(Experiment::error_sweep, axes, s));
        const auto mix = curves(sweep(Experiment::mixing_sweep, axes, s));
        double worst_rise = -1.0;
        auto track = [&](const Curve &curve, const char *name) {
            std::printf("  %s:", name);
            double prev = std::numeric_limits<double>::quiet_NaN();
            for (const auto &[x, y] : curve)
            {
                std::printf(" %.0f:%.3f", x, y);
                if (!std::isnan(prev))
                    worst_rise = std::max(worst_rise, y - prev);
                prev = y;
            }
            std::printf("\n");
        };
        track(err.at("lonestar_b8"), "LoneSTAR vs error variance");
        track(err.at("cbf"), "CBF vs error variance (reference only)");
        track(mix.at("lonestar_b8"), "LoneSTAR vs mixing variance");
        const double gap = std::abs(err.at("lonestar_b8").at(-30.0) - err.at("cbf").at(-30.0));
        return {worst_rise <= 0.03 && gap <= 0.05,
                "largest adjacent increase " + fmt("%.4f", worst_rise) + ", gap to CBF at -30 dB " + fmt("%.4f", gap) +
                    ", " + fmt("%.1f", elapsed(t0)) + " s"};
    }

    // ---------------------------------------------------------------------
    // 10. Byte-identical sweep output across reruns and thread counts.
    Outcome determinism()
    {
        Scenario s;
        s.sim.num_user_pairs = 60;
        s.sim.sigma_grid = {{0.01, 0.01}, {db_to_linear(-25.0), db_to_linear(-25.0)}};
        SweepAxes axes;
        axes.error_variance_db = {-50.0, -35.0};
        axes.lonestar_bits = {6};
        const std::string a = sweep_to_csv(sweep(Experiment::error_sweep, axes, s));
        const std::string b = sweep_to_csv(sweep(Experiment::error_sweep, axes, s));
        s.sim.threads = 3;
        const std::string c = sweep_to_csv(sweep(Experiment::error_sweep, axes, s));
        s.sim.threads = 1;
        s.sim.master_seed = 2;
        const std::string d = sweep_to_csv(sweep(Experiment::error_sweep, axes, s));
        return {a == b && a == c && a != d, std::string("rerun ") + (a == b ? "identical" : "DIFFERS") + ", 3 threads " +
                                                (a == c ? "identical" : "DIFFERS") + ", other seed " +
                                                (a != d ? "differs" : "IDENTICAL") + ", " +
                                                std::to_string(a.size()) + " bytes"};
    }
}

int main(int argc, char **argv)
{
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"expected objective matches Monte Carlo over estimation error", expected_objective_oracle},
        {"quantizer matches exhaustive nearest search", quantizer_oracle},
        {"subproblem optimum matches the reference convex solver", subproblem_optimality},
        {"alternating-minimization trace and relaxed feasibility", trace_property},
        {"Taylor side lobes, main-lobe loss and CBF gain", baseline_anchors},
        {"CBF and Taylor sum spectral efficiency at low SNR", low_snr_anchor},
        {"robustness gained per added bit of resolution", robustness_per_bit},
        {"INR band where Taylor beats CBF", taylor_band},
        {"degradation with estimation error and mixing", degradation_trends},
        {"sweep determinism", determinism},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id))
            continue;
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
