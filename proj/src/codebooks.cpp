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


#include "fdbeam/codebooks.hpp"
#include "fdbeam/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fdbeam
{
    void QuantizationSpec::validate() const
    {
        if (infinite_resolution)
            return;
        if (phase_bits < 0 || phase_bits > 16)
            throw std::invalid_argument("QuantizationSpec: phase_bits must be in [0, 16]");
        if (amplitude_bits < 0 || amplitude_bits > 16)
            throw std::invalid_argument("QuantizationSpec: amplitude_bits must be in [0, 16]");
        if (!(attenuation_step_db > 0.0) || !std::isfinite(attenuation_step_db))
            throw std::invalid_argument("QuantizationSpec: attenuation_step_db must be positive");
    }

    std::vector<double> realizable_amplitudes(const QuantizationSpec &spec)
    {
        spec.validate();
        if (spec.infinite_resolution)
            throw std::invalid_argument("realizable_amplitudes: infinite-resolution spec has no finite set");
        std::vector<double> a(static_cast<std::size_t>(spec.amplitude_levels()));
        for (std::size_t k = 0; k < a.size(); ++k)
            a[k] = std::pow(10.0, -static_cast<double>(k) * spec.attenuation_step_db / 20.0);
        return a;
    }

    std::vector<double> realizable_phases(const QuantizationSpec &spec)
    {
        spec.validate();
        if (spec.infinite_resolution)
            throw std::invalid_argument("realizable_phases: infinite-resolution spec has no finite set");
        std::vector<double> p(static_cast<std::size_t>(spec.phase_levels()));
        for (std::size_t k = 0; k < p.size(); ++k)
            p[k] = 2.0 * pi * static_cast<double>(k) / static_cast<double>(p.size());
        return p;
    }

    namespace
    {
        // Lookup tables shared by quantize_index and realize.
        struct Tables
        {
            std::vector<double> amps;
            std::vector<cdouble> phasors;
        };

        cdouble phasor(int k, int levels)
        {
            const double th = 2.0 * pi * static_cast<double>(k) / static_cast<double>(levels);
            return {std::cos(th), std::sin(th)};
        }

        double amplitude(int k, double step_db)
        {
            return std::pow(10.0, -static_cast<double>(k) * step_db / 20.0);
        }

        int nearest_amplitude(double r, const QuantizationSpec &spec)
        {
            const int levels = spec.amplitude_levels();
            if (r >= 1.0 || levels == 1)
                return 0;
            // Continuous index of r on the log grid; the nearest level brackets it.
            const double kc = r > 0.0 ? -20.0 * std::log10(r) / spec.attenuation_step_db : static_cast<double>(levels);
            const int k0 = std::max(0, std::min(levels - 1, static_cast<int>(std::floor(kc)) - 1));
            const int k1 = std::min(levels - 1, static_cast<int>(std::min(kc, static_cast<double>(levels))) + 2);
            int best = k0;
            double best_d = std::abs(amplitude(k0, spec.attenuation_step_db) - r);
            for (int k = k0 + 1; k <= k1; ++k)
            {
                const double d = std::abs(amplitude(k, spec.attenuation_step_db) - r);
                if (d < best_d)
                {
                    best_d = d;
                    best = k;
                }
            }
            return best;
        }

        int nearest_phase(cdouble unit, double angle, const QuantizationSpec &spec)
        {
            const int levels = spec.phase_levels();
            if (levels == 1)
                return 0;
            const double step = 2.0 * pi / levels;
            double a = angle < 0.0 ? angle + 2.0 * pi : angle;
            const int kr = static_cast<int>(std::lround(a / step));
            // Candidates kr-1, kr, kr+1 (mod levels) visited in increasing index order.
            int cand[3];
            for (int i = 0; i < 3; ++i)
                cand[i] = ((kr - 1 + i) % levels + levels) % levels;
            std::sort(cand, cand + 3);
            int best = -1;
            double best_d = 0.0;
            for (int i = 0; i < 3; ++i)
            {
                if (i > 0 && cand[i] == cand[i - 1])
                    continue;
                const double d = std::abs(phasor(cand[i], levels) - unit);
                if (best < 0 || d < best_d)
                {
                    best_d = d;
                    best = cand[i];
                }
            }
            return best;
        }
    }

    QuantIndex quantize_index(cdouble w, const QuantizationSpec &spec)
    {
        spec.validate();
        if (spec.infinite_resolution)
            throw std::invalid_argument("quantize_index: infinite-resolution spec has no index set");
        const double angle = std::arg(w);
        const cdouble unit(std::cos(angle), std::sin(angle));
        return {nearest_amplitude(std::abs(w), spec), nearest_phase(unit, angle, spec)};
    }

    cdouble realize(const QuantIndex &idx, const QuantizationSpec &spec)
    {
        if (idx.amplitude < 0 || idx.amplitude >= spec.amplitude_levels() || idx.phase < 0 || idx.phase >= spec.phase_levels())
            throw std::out_of_range("realize: quantizer index out of range");
        return amplitude(idx.amplitude, spec.attenuation_step_db) * phasor(idx.phase, spec.phase_levels());
    }

    cdouble project_weight(cdouble w, const QuantizationSpec &spec)
    {
        if (spec.infinite_resolution)
        {
            const double r = std::abs(w);
            return r > 1.0 ? w / r : w;
        }
        return realize(quantize_index(w, spec), spec);
    }

    CMatrix project_codebook(const CMatrix &m, const QuantizationSpec &spec)
    {
        spec.validate();
        CMatrix out(m.rows(), m.cols());
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                out(i, j) = project_weight(m(i, j), spec);
        return out;
    }

    Codebook cbf_codebook(const UpaGeometry &geom, const std::vector<Direction> &region, const QuantizationSpec &spec)
    {
        Codebook cb;
        cb.matrix = project_codebook(steering_matrix(geom, region).entries, spec);
        cb.region = region;
        cb.quantized_under = spec;
        return cb;
    }

    RVector taylor_window(int length, double sll_db, int nbar)
    {
        if (length < 1)
            throw std::invalid_argument("taylor_window: length must be positive");
        if (!(sll_db > 0.0))
            throw std::invalid_argument("taylor_window: sll_db must be positive");
        if (nbar < 1)
            throw std::invalid_argument("taylor_window: nbar must be >= 1");
        if (std::isinf(sll_db) || length == 1)
            return RVector::Ones(length);

        const double b = std::pow(10.0, sll_db / 20.0);
        const double a = std::acosh(b) / pi;
        const double s2 = nbar * nbar / (a * a + (nbar - 0.5) * (nbar - 0.5));
        std::vector<double> fm(static_cast<std::size_t>(nbar - 1));
        for (int m = 1; m < nbar; ++m)
        {
            const double m2 = static_cast<double>(m) * m;
            double numer = (m % 2 == 1) ? 1.0 : -1.0;
            double denom = 2.0;
            for (int i = 1; i < nbar; ++i)
            {
                numer *= 1.0 - m2 / s2 / (a * a + (i - 0.5) * (i - 0.5));
                if (i != m)
                    denom *= 1.0 - m2 / (static_cast<double>(i) * i);
            }
            fm[static_cast<std::size_t>(m - 1)] = numer / denom;
        }
        RVector w(length);
        for (int n = 0; n < length; ++n)
        {
            double v = 1.0;
            for (int m = 1; m < nbar; ++m)
                v += 2.0 * fm[static_cast<std::size_t>(m - 1)] *
                     std::cos(2.0 * pi * m * (n - length / 2.0 + 0.5) / length);
            w[n] = v;
        }
        return w / w.maxCoeff();
    }

    Codebook taylor_codebook(const UpaGeometry &geom, const std::vector<Direction> &region, const QuantizationSpec &spec,
                             double sll_db, int nbar)
    {
        const RVector wr = taylor_window(geom.rows, sll_db, nbar);
        const RVector wc = taylor_window(geom.cols, sll_db, nbar);
        RVector taper(geom.size());
        for (int r = 0; r < geom.rows; ++r)
            for (int c = 0; c < geom.cols; ++c)
                taper[r * geom.cols + c] = wr[r] * wc[c];
        CMatrix tapered = steering_matrix(geom, region).entries;
        for (Eigen::Index j = 0; j < tapered.cols(); ++j)
            tapered.col(j) = tapered.col(j).cwiseProduct(taper.cast<cdouble>());
        Codebook cb;
        cb.matrix = project_codebook(tapered, spec);
        cb.region = region;
        cb.quantized_under = spec;
        return cb;
    }

    double beam_gain(const CVector &beam, const UpaGeometry &geom, const Direction &dir)
    {
        require_dims(beam.size() == geom.size(), "beam_gain: beam length does not match antenna count");
        return std::norm(array_response(geom, dir).dot(beam));
    }

    double coverage_variance(const Codebook &cb, const SteeringMatrix &steering)
    {
        if (cb.region != steering.region)
            throw std::invalid_argument("coverage_variance: codebook region does not match steering region");
        require_dims(cb.matrix.rows() == steering.entries.rows() && cb.matrix.cols() == steering.entries.cols(),
                     "coverage_variance: codebook and steering matrix shapes differ");
        const double n = static_cast<double>(cb.matrix.rows());
        double acc = 0.0;
        for (Eigen::Index i = 0; i < cb.matrix.cols(); ++i)
        {
            const double g = std::abs(steering.entries.col(i).dot(cb.matrix.col(i)));
            acc += (n - g) * (n - g);
        }
        return acc / (n * n * static_cast<double>(cb.matrix.cols()));
    }

    double max_entry_magnitude(const CMatrix &m)
    {
        return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    }

    std::string codebook_to_csv(const Codebook &cb)
    {
        const bool indexed = cb.quantized_under && !cb.quantized_under->infinite_resolution;
        if (static_cast<Eigen::Index>(cb.region.size()) != cb.matrix.cols())
            throw std::invalid_argument("codebook_to_csv: region length does not match beam count");
        std::ostringstream ss;
        ss << "N,M,phase_bits,amplitude_bits,attenuation_step_db\n";
        ss << cb.matrix.rows() << ',' << cb.matrix.cols() << ',';
        if (indexed)
            ss << cb.quantized_under->phase_bits << ',' << cb.quantized_under->amplitude_bits << ','
               << format_double(cb.quantized_under->attenuation_step_db) << '\n';
        else
            ss << "inf,inf,0\n";
        ss << "beam,azimuth_rad,elevation_rad\n";
        for (std::size_t i = 0; i < cb.region.size(); ++i)
            ss << i << ',' << format_double(cb.region[i].azimuth) << ',' << format_double(cb.region[i].elevation) << '\n';
        ss << (indexed ? "row,col,amp_index,phase_index\n" : "row,col,re,im\n");
        for (Eigen::Index j = 0; j < cb.matrix.cols(); ++j)
            for (Eigen::Index i = 0; i < cb.matrix.rows(); ++i)
            {
                const cdouble w = cb.matrix(i, j);
                ss << i << ',' << j << ',';
                if (indexed)
                {
                    const QuantIndex q = quantize_index(w, *cb.quantized_under);
                    if (realize(q, *cb.quantized_under) != w)
                        throw std::invalid_argument("codebook_to_csv: entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                    ") is not a realizable weight");
                    ss << q.amplitude << ',' << q.phase << '\n';
                }
                else
                    ss << format_double(w.real()) << ',' << format_double(w.imag()) << '\n';
            }
        return ss.str();
    }

    void save_codebook_csv(const Codebook &cb, const std::string &path)
    {
        write_file_atomic(path, codebook_to_csv(cb));
    }

    Codebook codebook_from_csv(const std::string &text)
    {
        std::istringstream ss(text);
        std::string line;
        auto next = [&](const char *what) {
            if (!std::getline(ss, line))
                throw std::runtime_error(std::string("codebook file: missing ") + what);
            return split_csv_line(line);
        };
        auto expect = [&](const std::vector<std::string> &want, const char *what) {
            if (next(what) != want)
                throw std::runtime_error(std::string("codebook file: bad ") + what);
        };
        expect({"N", "M", "phase_bits", "amplitude_bits", "attenuation_step_db"}, "header");
        const auto h = next("dimensions");
        if (h.size() != 5)
            throw std::runtime_error("codebook file: bad dimensions line");
        const long n = std::stol(h[0]), m = std::stol(h[1]);
        if (n < 1 || m < 1)
            throw std::runtime_error("codebook file: N and M must be positive");
        Codebook cb;
        const bool indexed = h[2] != "inf";
        if (indexed)
        {
            QuantizationSpec spec{std::stoi(h[2]), std::stoi(h[3]), std::stod(h[4]), false};
            spec.validate();
            cb.quantized_under = spec;
        }
        else
            cb.quantized_under = QuantizationSpec::infinite();

        expect({"beam", "azimuth_rad", "elevation_rad"}, "region header");
        cb.region.resize(static_cast<std::size_t>(m));
        for (long i = 0; i < m; ++i)
        {
            const auto f = next("region row");
            if (f.size() != 3 || std::stol(f[0]) != i)
                throw std::runtime_error("codebook file: bad region row " + std::to_string(i));
            cb.region[static_cast<std::size_t>(i)] = {std::stod(f[1]), std::stod(f[2])};
        }
        expect(indexed ? std::vector<std::string>{"row", "col", "amp_index", "phase_index"}
                       : std::vector<std::string>{"row", "col", "re", "im"},
               "entry header");
        cb.matrix.resize(n, m);
        for (long j = 0; j < m; ++j)
            for (long i = 0; i < n; ++i)
            {
                const auto f = next("entry row");
                if (f.size() != 4 || std::stol(f[0]) != i || std::stol(f[1]) != j)
                    throw std::runtime_error("codebook file: bad entry row for (" + std::to_string(i) + "," + std::to_string(j) + ")");
                if (indexed)
                    cb.matrix(i, j) = realize({std::stoi(f[2]), std::stoi(f[3])}, *cb.quantized_under);
                else
                    cb.matrix(i, j) = cdouble(std::stod(f[2]), std::stod(f[3]));
            }
        return cb;
    }

    Codebook load_codebook_csv(const std::string &path)
    {
        return codebook_from_csv(read_file(path));
    }
}
