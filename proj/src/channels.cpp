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


#include "fdbeam/channels.hpp"
#include "fdbeam/io.hpp"

#include <cmath>
#include <sstream>

namespace fdbeam
{
    void ChannelEstimate::validate() const
    {
        if (!(error_variance >= 0.0) || !std::isfinite(error_variance))
            throw std::invalid_argument("ChannelEstimate: error_variance must be finite and >= 0");
    }

    Vec3 ArrayPairLayout::tx_position(int n) const
    {
        return tx_geom.position(n);
    }

    Vec3 ArrayPairLayout::rx_position(int m) const
    {
        return rx_geom.position(m) + Vec3(0.0, 0.0, vertical_separation);
    }

    void ArrayPairLayout::validate() const
    {
        tx_geom.validate();
        rx_geom.validate();
        if (!(vertical_separation > 0.0) || !std::isfinite(vertical_separation))
            throw std::invalid_argument("ArrayPairLayout: vertical_separation must be positive");
    }

    ArrayPairLayout ArrayPairLayout::center_aligned(UpaGeometry tx, UpaGeometry rx, double separation)
    {
        ArrayPairLayout l;
        l.tx_geom = tx.centered_at(Vec3::Zero());
        l.rx_geom = rx.centered_at(Vec3::Zero());
        l.vertical_separation = separation;
        return l;
    }

    ChannelMatrix spherical_wave_channel(const ArrayPairLayout &layout)
    {
        layout.validate();
        const int nt = layout.tx_geom.size();
        const int nr = layout.rx_geom.size();
        ChannelMatrix h;
        h.entries.resize(nr, nt);
        double inv_r2_sum = 0.0;
        for (int n = 0; n < nt; ++n)
        {
            const Vec3 pt = layout.tx_position(n);
            for (int m = 0; m < nr; ++m)
            {
                const double r = (layout.rx_position(m) - pt).norm();
                if (!(r > 0.0))
                    throw degenerate_layout_error("spherical_wave_channel: coincident transmit and receive elements");
                // Reduce the phase argument mod 1 wavelength before scaling by 2 pi.
                const double frac = r - std::floor(r);
                const double ph = -2.0 * pi * frac;
                h.entries(m, n) = cdouble(std::cos(ph), std::sin(ph)) / r;
                inv_r2_sum += 1.0 / (r * r);
            }
        }
        const double rho = std::sqrt(static_cast<double>(nt) * nr / inv_r2_sum);
        h.entries *= rho;
        h.normalized = true;
        return h;
    }

    ChannelMatrix mixture_channel(const ChannelMatrix &spherical, double mixing_variance, RandomStream &rng)
    {
        if (!(mixing_variance >= 0.0) || !std::isfinite(mixing_variance))
            throw std::invalid_argument("mixture_channel: mixing variance must be finite and >= 0");
        const Eigen::Index nr = spherical.entries.rows(), nt = spherical.entries.cols();
        CMatrix sum = spherical.entries;
        if (mixing_variance > 0.0)
        {
            // Column-major fill order is part of the reproducibility contract.
            for (Eigen::Index n = 0; n < nt; ++n)
                for (Eigen::Index m = 0; m < nr; ++m)
                    sum(m, n) += rng.complex_normal(mixing_variance);
        }
        const double fro = sum.norm();
        if (fro == 0.0)
            throw std::runtime_error("mixture_channel: zero channel cannot be normalized");
        ChannelMatrix h;
        h.entries = sum * (std::sqrt(static_cast<double>(nt * nr)) / fro);
        h.normalized = true;
        return h;
    }

    ChannelMatrix mixture_channel(const ArrayPairLayout &layout, double mixing_variance, RandomStream &rng)
    {
        return mixture_channel(spherical_wave_channel(layout), mixing_variance, rng);
    }

    ChannelMatrix perturb_estimate(const ChannelMatrix &input, double error_variance, RandomStream &rng)
    {
        if (!(error_variance >= 0.0) || !std::isfinite(error_variance))
            throw std::invalid_argument("perturb_estimate: error variance must be finite and >= 0");
        ChannelMatrix out = input;
        if (error_variance == 0.0)
            return out;
        out.normalized = false;
        for (Eigen::Index n = 0; n < out.entries.cols(); ++n)
            for (Eigen::Index m = 0; m < out.entries.rows(); ++m)
                out.entries(m, n) += rng.complex_normal(error_variance);
        return out;
    }

    CVector los_user_channel(const UpaGeometry &geom, const Direction &dir)
    {
        return array_response(geom, dir);
    }

    void save_channel_csv(const ChannelMatrix &h, const std::string &path)
    {
        std::ostringstream ss;
        ss << "rows,cols\n" << h.entries.rows() << ',' << h.entries.cols() << '\n';
        for (Eigen::Index m = 0; m < h.entries.rows(); ++m)
        {
            for (Eigen::Index n = 0; n < h.entries.cols(); ++n)
            {
                if (n)
                    ss << ',';
                ss << format_double(h.entries(m, n).real()) << ',' << format_double(h.entries(m, n).imag());
            }
            ss << '\n';
        }
        write_file_atomic(path, ss.str());
    }

    ChannelMatrix load_channel_csv(const std::string &path)
    {
        std::istringstream ss(read_file(path));
        std::string line;
        if (!std::getline(ss, line) || split_csv_line(line) != std::vector<std::string>{"rows", "cols"})
            throw std::runtime_error("load_channel_csv: bad header in " + path);
        if (!std::getline(ss, line))
            throw std::runtime_error("load_channel_csv: missing dimensions in " + path);
        const auto dims = split_csv_line(line);
        if (dims.size() != 2)
            throw std::runtime_error("load_channel_csv: bad dimensions in " + path);
        const long rows = std::stol(dims[0]), cols = std::stol(dims[1]);
        if (rows < 1 || cols < 1)
            throw std::runtime_error("load_channel_csv: bad dimensions in " + path);
        ChannelMatrix h;
        h.entries.resize(rows, cols);
        for (long m = 0; m < rows; ++m)
        {
            if (!std::getline(ss, line))
                throw std::runtime_error("load_channel_csv: truncated file " + path);
            const auto f = split_csv_line(line);
            if (static_cast<long>(f.size()) != 2 * cols)
                throw std::runtime_error("load_channel_csv: wrong field count on row " + std::to_string(m));
            for (long n = 0; n < cols; ++n)
                h.entries(m, n) = cdouble(std::stod(f[2 * n]), std::stod(f[2 * n + 1]));
        }
        const double nt_nr = static_cast<double>(rows * cols);
        h.normalized = std::abs(h.entries.squaredNorm() - nt_nr) <= 1e-9 * nt_nr;
        return h;
    }
}
