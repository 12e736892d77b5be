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

#include "fdbeam/config.hpp"

#include "fdbeam/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace fdbeam
{
    namespace
    {
        namespace pt = boost::property_tree;

        double parse_real(const std::string &key, const std::string &text)
        {
            const char *b = text.c_str();
            char *end = nullptr;
            errno = 0;
            const double v = std::strtod(b, &end);
            if (end == b || *end != '\0' || std::isnan(v))
                throw config_error(key, "expected a number, got '" + text + "'");
            return v;
        }

        long long parse_integer(const std::string &key, const std::string &text)
        {
            const char *b = text.c_str();
            char *end = nullptr;
            errno = 0;
            const long long v = std::strtoll(b, &end, 10);
            if (end == b || *end != '\0' || errno == ERANGE)
                throw config_error(key, "expected an integer, got '" + text + "'");
            return v;
        }

        bool parse_bool(const std::string &key, const std::string &text)
        {
            if (text == "true" || text == "1" || text == "yes")
                return true;
            if (text == "false" || text == "0" || text == "no")
                return false;
            throw config_error(key, "expected true or false, got '" + text + "'");
        }

        // "a, b, c" or "start:step:stop" (inclusive).
        std::vector<double> parse_list(const std::string &key, const std::string &text)
        {
            std::vector<double> out;
            if (text.find(':') != std::string::npos)
            {
                std::vector<std::string> parts;
                std::stringstream ss(text);
                std::string p;
                while (std::getline(ss, p, ':'))
                    parts.push_back(split_csv_line(p).at(0));
                if (parts.size() != 3)
                    throw config_error(key, "range must be start:step:stop");
                const double a = parse_real(key, parts[0]);
                const double s = parse_real(key, parts[1]);
                const double b = parse_real(key, parts[2]);
                if (!(s > 0.0) || !(b >= a) || !std::isfinite(a) || !std::isfinite(b))
                    throw config_error(key, "range needs a positive step and start <= stop");
                const long n = std::lround(std::floor((b - a) / s + 1e-9));
                for (long i = 0; i <= n; ++i)
                    out.push_back(a + static_cast<double>(i) * s);
                return out;
            }
            for (const auto &f : split_csv_line(text))
                out.push_back(parse_real(key, f));
            if (out.empty())
                throw config_error(key, "list must not be empty");
            return out;
        }

        std::string list_text(const std::vector<double> &v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? ", " : "") + format_double(v[i]);
            return s;
        }

        int bits_value(const std::string &key, const std::string &text)
        {
            const long long v = parse_integer(key, text);
            if (v < 0 || v > 16)
                throw config_error(key, "bits must be in 0..16");
            return static_cast<int>(v);
        }

        double positive(const std::string &key, double v)
        {
            if (!(v > 0.0) || !std::isfinite(v))
                throw config_error(key, "must be positive and finite");
            return v;
        }

        // Key table: setter per "section.key". Echo order follows the table.
        struct Binder
        {
            std::string key;
            std::function<void(ExperimentConfig &, const std::string &)> set;
            std::function<std::string(const ExperimentConfig &)> get;
        };

        struct CoverageGrid
        {
            double az_min = -60, az_max = 60, az_step = 15, el_min = -30, el_max = 30, el_step = 15;
        };

        struct Staging
        {
            int rows = 0, cols = 0;
            double spacing = 0.5, separation = 10.0;
            CoverageGrid grid;
            std::vector<double> sigma_grid_db{-40, -35, -30, -25, -20, -15, -10, -5, 0};
            double user_az_min = -67.5, user_az_max = 67.5, user_el_min = -37.5, user_el_max = 37.5;
            double error_variance_db = neg_inf_db, mixing_variance_db = neg_inf_db;
            double sigma_tx_db = -15.0, sigma_rx_db = -15.0;
        };

        std::vector<Binder> binders(Staging &st)
        {
            using C = ExperimentConfig;
            using S = const std::string &;
            std::vector<Binder> b;
            auto add = [&](std::string key, std::function<void(C &, S)> set, std::function<std::string(const C &)> get) {
                b.push_back({std::move(key), std::move(set), std::move(get)});
            };

            add("array.rows", [&](C &, S t) {
                const long long v = parse_integer("array.rows", t);
                if (v < 1 || v > 4096) throw config_error("array.rows", "must be in 1..4096");
                st.rows = static_cast<int>(v); }, [&](const C &) { return std::to_string(st.rows); });
            add("array.cols", [&](C &, S t) {
                const long long v = parse_integer("array.cols", t);
                if (v < 1 || v > 4096) throw config_error("array.cols", "must be in 1..4096");
                st.cols = static_cast<int>(v); }, [&](const C &) { return std::to_string(st.cols); });
            add("array.spacing_wavelengths", [&](C &, S t) {
                st.spacing = positive("array.spacing_wavelengths", parse_real("array.spacing_wavelengths", t)); },
                [&](const C &) { return format_double(st.spacing); });
            add("array.separation_wavelengths", [&](C &, S t) {
                st.separation = positive("array.separation_wavelengths", parse_real("array.separation_wavelengths", t)); },
                [&](const C &) { return format_double(st.separation); });

            add("quantization.phase_bits", [](C &c, S t) {
                c.scenario.lonestar_quantization.phase_bits = bits_value("quantization.phase_bits", t); },
                [](const C &c) { return std::to_string(c.scenario.lonestar_quantization.phase_bits); });
            add("quantization.amplitude_bits", [](C &c, S t) {
                c.scenario.lonestar_quantization.amplitude_bits = bits_value("quantization.amplitude_bits", t); },
                [](const C &c) { return std::to_string(c.scenario.lonestar_quantization.amplitude_bits); });
            add("quantization.attenuation_step_db", [](C &c, S t) {
                c.scenario.lonestar_quantization.attenuation_step_db =
                    positive("quantization.attenuation_step_db", parse_real("quantization.attenuation_step_db", t)); },
                [](const C &c) { return format_double(c.scenario.lonestar_quantization.attenuation_step_db); });

            add("baseline.phase_bits", [](C &c, S t) {
                c.scenario.baseline_quantization.phase_bits = bits_value("baseline.phase_bits", t); },
                [](const C &c) { return std::to_string(c.scenario.baseline_quantization.phase_bits); });
            add("baseline.amplitude_bits", [](C &c, S t) {
                c.scenario.baseline_quantization.amplitude_bits = bits_value("baseline.amplitude_bits", t); },
                [](const C &c) { return std::to_string(c.scenario.baseline_quantization.amplitude_bits); });
            add("baseline.attenuation_step_db", [](C &c, S t) {
                c.scenario.baseline_quantization.attenuation_step_db =
                    positive("baseline.attenuation_step_db", parse_real("baseline.attenuation_step_db", t)); },
                [](const C &c) { return format_double(c.scenario.baseline_quantization.attenuation_step_db); });
            add("baseline.taylor_sll_db", [](C &c, S t) {
                c.scenario.taylor_sll_db = positive("baseline.taylor_sll_db", parse_real("baseline.taylor_sll_db", t)); },
                [](const C &c) { return format_double(c.scenario.taylor_sll_db); });
            add("baseline.taylor_nbar", [](C &c, S t) {
                const long long v = parse_integer("baseline.taylor_nbar", t);
                if (v < 1 || v > 64) throw config_error("baseline.taylor_nbar", "must be in 1..64");
                c.scenario.taylor_nbar = static_cast<int>(v); },
                [](const C &c) { return std::to_string(c.scenario.taylor_nbar); });

            auto grid_key = [&](const char *name, double CoverageGrid::*field) {
                const std::string key = std::string("coverage.") + name;
                add(key, [&st, key, field](C &, S t) { st.grid.*field = parse_real(key, t); },
                    [&st, field](const C &) { return format_double(st.grid.*field); });
            };
            grid_key("az_min_deg", &CoverageGrid::az_min);
            grid_key("az_max_deg", &CoverageGrid::az_max);
            grid_key("az_step_deg", &CoverageGrid::az_step);
            grid_key("el_min_deg", &CoverageGrid::el_min);
            grid_key("el_max_deg", &CoverageGrid::el_max);
            grid_key("el_step_deg", &CoverageGrid::el_step);

            auto budget_key = [&](const char *name, double LinkBudget::*field) {
                const std::string key = std::string("budget.") + name;
                add(key, [key, field](C &c, S t) { c.scenario.sim.budget.*field = parse_real(key, t); },
                    [field](const C &c) { return format_double(c.scenario.sim.budget.*field); });
            };
            budget_key("snrbar_tx_db", &LinkBudget::snrbar_tx_db);
            budget_key("snrbar_rx_db", &LinkBudget::snrbar_rx_db);
            budget_key("inrbar_rx_db", &LinkBudget::inrbar_rx_db);
            budget_key("inr_tx_db", &LinkBudget::inr_tx_db);

            add("channel.error_variance_db", [&](C &, S t) {
                st.error_variance_db = parse_real("channel.error_variance_db", t); },
                [&](const C &) { return format_double(st.error_variance_db); });
            add("channel.mixing_variance_db", [&](C &, S t) {
                st.mixing_variance_db = parse_real("channel.mixing_variance_db", t); },
                [&](const C &) { return format_double(st.mixing_variance_db); });

            add("solver.sigma_tx_sq_db", [&](C &, S t) { st.sigma_tx_db = parse_real("solver.sigma_tx_sq_db", t); },
                [&](const C &) { return format_double(st.sigma_tx_db); });
            add("solver.sigma_rx_sq_db", [&](C &, S t) { st.sigma_rx_db = parse_real("solver.sigma_rx_sq_db", t); },
                [&](const C &) { return format_double(st.sigma_rx_db); });
            add("solver.am_passes", [](C &c, S t) {
                const long long v = parse_integer("solver.am_passes", t);
                if (v < 1 || v > 1000) throw config_error("solver.am_passes", "must be in 1..1000");
                c.scenario.solver.am_passes = static_cast<int>(v); },
                [](const C &c) { return std::to_string(c.scenario.solver.am_passes); });
            add("solver.subproblem_tolerance", [](C &c, S t) {
                c.scenario.solver.subproblem_tolerance =
                    positive("solver.subproblem_tolerance", parse_real("solver.subproblem_tolerance", t)); },
                [](const C &c) { return format_double(c.scenario.solver.subproblem_tolerance); });
            add("solver.subproblem_max_iters", [](C &c, S t) {
                const long long v = parse_integer("solver.subproblem_max_iters", t);
                if (v < 1 || v > 1000000) throw config_error("solver.subproblem_max_iters", "must be positive");
                c.scenario.solver.subproblem_max_iters = static_cast<int>(v); },
                [](const C &c) { return std::to_string(c.scenario.solver.subproblem_max_iters); });
            add("solver.dual_bisection_tolerance", [](C &c, S t) {
                c.scenario.solver.dual_bisection_tolerance =
                    positive("solver.dual_bisection_tolerance", parse_real("solver.dual_bisection_tolerance", t)); },
                [](const C &c) { return format_double(c.scenario.solver.dual_bisection_tolerance); });
            add("solver.ridge", [](C &c, S t) {
                c.scenario.solver.ridge = positive("solver.ridge", parse_real("solver.ridge", t)); },
                [](const C &c) { return format_double(c.scenario.solver.ridge); });

            add("sim.num_user_pairs", [](C &c, S t) {
                const long long v = parse_integer("sim.num_user_pairs", t);
                if (v < 1 || v > 100000000) throw config_error("sim.num_user_pairs", "must be positive");
                c.scenario.sim.num_user_pairs = static_cast<int>(v); },
                [](const C &c) { return std::to_string(c.scenario.sim.num_user_pairs); });
            add("sim.seed", [](C &c, S t) {
                const char *b = t.c_str();
                char *end = nullptr;
                errno = 0;
                const unsigned long long v = std::strtoull(b, &end, 10);
                if (end == b || *end != '\0' || errno == ERANGE || t.front() == '-')
                    throw config_error("sim.seed", "expected an unsigned 64-bit integer, got '" + t + "'");
                c.scenario.sim.master_seed = v; },
                [](const C &c) { return std::to_string(c.scenario.sim.master_seed); });
            add("sim.user_az_min_deg", [&](C &, S t) { st.user_az_min = parse_real("sim.user_az_min_deg", t); },
                [&](const C &) { return format_double(st.user_az_min); });
            add("sim.user_az_max_deg", [&](C &, S t) { st.user_az_max = parse_real("sim.user_az_max_deg", t); },
                [&](const C &) { return format_double(st.user_az_max); });
            add("sim.user_el_min_deg", [&](C &, S t) { st.user_el_min = parse_real("sim.user_el_min_deg", t); },
                [&](const C &) { return format_double(st.user_el_min); });
            add("sim.user_el_max_deg", [&](C &, S t) { st.user_el_max = parse_real("sim.user_el_max_deg", t); },
                [&](const C &) { return format_double(st.user_el_max); });
            add("sim.tune_sigma", [](C &c, S t) { c.scenario.tune_sigma = parse_bool("sim.tune_sigma", t); },
                [](const C &c) { return std::string(c.scenario.tune_sigma ? "true" : "false"); });
            add("sim.sigma_grid_db", [&](C &, S t) { st.sigma_grid_db = parse_list("sim.sigma_grid_db", t); },
                [&](const C &) { return list_text(st.sigma_grid_db); });
            add("sim.threads", [](C &c, S t) {
                const long long v = parse_integer("sim.threads", t);
                if (v < 1 || v > 1024) throw config_error("sim.threads", "must be in 1..1024");
                c.scenario.sim.threads = static_cast<int>(v); },
                [](const C &c) { return std::to_string(c.scenario.sim.threads); });

            auto axis_key = [&](const char *name, std::vector<double> SweepAxes::*field) {
                const std::string key = std::string("sweep.") + name;
                add(key, [key, field](C &c, S t) { c.axes.*field = parse_list(key, t); },
                    [field](const C &c) { return list_text(c.axes.*field); });
            };
            axis_key("snr_db", &SweepAxes::snr_db);
            axis_key("inrbar_rx_db", &SweepAxes::inrbar_rx_db);
            axis_key("inr_tx_db", &SweepAxes::inr_tx_db);
            axis_key("error_variance_db", &SweepAxes::error_variance_db);
            axis_key("mixing_variance_db", &SweepAxes::mixing_variance_db);
            axis_key("sigma_db", &SweepAxes::sigma_db);
            add("sweep.lonestar_bits", [](C &c, S t) {
                c.axes.lonestar_bits.clear();
                for (const auto &f : split_csv_line(t))
                    c.axes.lonestar_bits.push_back(bits_value("sweep.lonestar_bits", f));
                if (c.axes.lonestar_bits.empty()) throw config_error("sweep.lonestar_bits", "list must not be empty"); },
                [](const C &c) {
                    std::string s;
                    for (std::size_t i = 0; i < c.axes.lonestar_bits.size(); ++i)
                        s += (i ? ", " : "") + std::to_string(c.axes.lonestar_bits[i]);
                    return s; });

            add("output.directory", [](C &c, S t) {
                if (t.empty()) throw config_error("output.directory", "must not be empty");
                c.output_dir = t; }, [](const C &c) { return c.output_dir; });
            return b;
        }

        const char *const required_keys[] = {"array.rows", "array.cols", "array.spacing_wavelengths",
                                             "quantization.phase_bits", "quantization.amplitude_bits"};

        void finish(ExperimentConfig &c, const Staging &st)
        {
            const UpaGeometry g{st.rows, st.cols, st.spacing, Vec3::Zero()};
            c.scenario.layout = ArrayPairLayout::center_aligned(g, g, st.separation);
            const auto &gr = st.grid;
            try
            {
                c.scenario.tx_region = direction_grid(gr.az_min, gr.az_max, gr.az_step, gr.el_min, gr.el_max, gr.el_step);
            }
            catch (const std::invalid_argument &e)
            {
                throw config_error("coverage", e.what());
            }
            c.scenario.rx_region = c.scenario.tx_region;
            c.scenario.sim.user_az_min = deg_to_rad(st.user_az_min);
            c.scenario.sim.user_az_max = deg_to_rad(st.user_az_max);
            c.scenario.sim.user_el_min = deg_to_rad(st.user_el_min);
            c.scenario.sim.user_el_max = deg_to_rad(st.user_el_max);
            if (!(st.user_az_min <= st.user_az_max))
                throw config_error("sim.user_az_max_deg", "must not be below sim.user_az_min_deg");
            if (!(st.user_el_min <= st.user_el_max))
                throw config_error("sim.user_el_max_deg", "must not be below sim.user_el_min_deg");
            c.scenario.sim.sigma_grid.clear();
            for (double db : st.sigma_grid_db)
            {
                if (db > 0.0)
                    throw config_error("sim.sigma_grid_db", "values must be at most 0 dB");
                c.scenario.sim.sigma_grid.emplace_back(db_to_linear(db), db_to_linear(db));
            }
            if (st.sigma_tx_db > 0.0)
                throw config_error("solver.sigma_tx_sq_db", "must be at most 0 dB");
            if (st.sigma_rx_db > 0.0)
                throw config_error("solver.sigma_rx_sq_db", "must be at most 0 dB");
            c.scenario.solver.sigma_tx_sq = db_to_linear(st.sigma_tx_db);
            c.scenario.solver.sigma_rx_sq = db_to_linear(st.sigma_rx_db);
            c.scenario.error_variance = db_to_linear(st.error_variance_db);
            c.scenario.mixing_variance = db_to_linear(st.mixing_variance_db);
            try
            {
                c.scenario.validate();
            }
            catch (const std::invalid_argument &e)
            {
                throw config_error("config", e.what());
            }
        }
    }

    ExperimentConfig parse_config(const std::string &text)
    {
        pt::ptree tree;
        std::istringstream is(text);
        try
        {
            pt::read_ini(is, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw config_error("config", std::string("malformed INI: ") + e.message() + " (line " +
                                             std::to_string(e.line()) + ")");
        }

        ExperimentConfig cfg;
        cfg.scenario.lonestar_quantization = QuantizationSpec::bits(8);
        cfg.scenario.baseline_quantization = QuantizationSpec::bits(8);
        Staging st;
        const auto table = binders(st);
        std::map<std::string, const Binder *> by_key;
        for (const auto &b : table)
            by_key[b.key] = &b;

        std::set<std::string> seen;
        for (const auto &[section, body] : tree)
        {
            if (body.empty() && !body.data().empty())
                throw config_error(section, "key outside of any section");
            for (const auto &[name, node] : body)
            {
                const std::string key = section + "." + name;
                const auto it = by_key.find(key);
                if (it == by_key.end())
                    throw config_error(key, "unknown key");
                it->second->set(cfg, node.data());
                seen.insert(key);
            }
        }
        for (const char *k : required_keys)
            if (!seen.count(k))
                throw config_error(k, "required key is missing");
        finish(cfg, st);
        return cfg;
    }

    ExperimentConfig load_config(const std::string &path)
    {
        std::string text;
        try
        {
            text = read_file(path);
        }
        catch (const std::exception &e)
        {
            throw config_error("config", e.what());
        }
        return parse_config(text);
    }

    std::string config_to_ini(const ExperimentConfig &cfg)
    {
        // Recover the staged values from the parsed configuration.
        Staging st;
        const Scenario &s = cfg.scenario;
        st.rows = s.layout.tx_geom.rows;
        st.cols = s.layout.tx_geom.cols;
        st.spacing = s.layout.tx_geom.element_spacing;
        st.separation = s.layout.vertical_separation;
        if (!s.tx_region.empty())
        {
            double az_lo = 1e300, az_hi = -1e300, el_lo = 1e300, el_hi = -1e300;
            std::set<double> az, el;
            for (const auto &d : s.tx_region)
            {
                az.insert(rad_to_deg(d.azimuth));
                el.insert(rad_to_deg(d.elevation));
            }
            az_lo = *az.begin();
            az_hi = *az.rbegin();
            el_lo = *el.begin();
            el_hi = *el.rbegin();
            auto step = [](const std::set<double> &v, double lo, double hi) {
                return v.size() > 1 ? (hi - lo) / static_cast<double>(v.size() - 1) : 1.0;
            };
            auto clean = [](double v) { return std::round(v * 1e9) / 1e9; };
            st.grid = {clean(az_lo), clean(az_hi), clean(step(az, az_lo, az_hi)),
                       clean(el_lo), clean(el_hi), clean(step(el, el_lo, el_hi))};
        }
        auto clean = [](double v) { return std::round(v * 1e9) / 1e9; };
        st.user_az_min = clean(rad_to_deg(s.sim.user_az_min));
        st.user_az_max = clean(rad_to_deg(s.sim.user_az_max));
        st.user_el_min = clean(rad_to_deg(s.sim.user_el_min));
        st.user_el_max = clean(rad_to_deg(s.sim.user_el_max));
        auto db = [&](double lin) { return std::isinf(linear_to_db(lin)) ? neg_inf_db : clean(linear_to_db(lin)); };
        st.sigma_grid_db.clear();
        for (const auto &g : s.sim.sigma_grid)
            st.sigma_grid_db.push_back(db(g.first));
        st.sigma_tx_db = db(s.solver.sigma_tx_sq);
        st.sigma_rx_db = db(s.solver.sigma_rx_sq);
        st.error_variance_db = db(s.error_variance);
        st.mixing_variance_db = db(s.mixing_variance);

        std::ostringstream os;
        std::string section;
        for (const auto &b : binders(st))
        {
            const auto dot = b.key.find('.');
            const std::string sec = b.key.substr(0, dot);
            if (sec != section)
            {
                os << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
                section = sec;
            }
            os << b.key.substr(dot + 1) << " = " << b.get(cfg) << '\n';
        }
        return os.str();
    }
}
