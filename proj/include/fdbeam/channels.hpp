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

#ifndef FDBEAM_CHANNELS_HPP
#define FDBEAM_CHANNELS_HPP

#include "fdbeam/arrays.hpp"
#include "fdbeam/rng.hpp"

#include <string>

namespace fdbeam
{
    // Inter-array (self-interference) channel, N_r rows by N_t columns.
    struct ChannelMatrix
    {
        CMatrix entries;
        bool normalized = false; // true when ||H||_F^2 == N_t * N_r by construction

        Eigen::Index rx_antennas() const { return entries.rows(); }
        Eigen::Index tx_antennas() const { return entries.cols(); }
    };

    // Estimated channel plus the variance of its i.i.d. complex Gaussian error.
    struct ChannelEstimate
    {
        ChannelMatrix estimate;
        double error_variance = 0.0; // linear

        void validate() const;
    };

    class degenerate_layout_error : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Transmit and receive arrays in a common frame. The receive array is placed at
    // rx_geom.origin_offset + (0, 0, vertical_separation), the transmit array at
    // tx_geom.origin_offset.
    struct ArrayPairLayout
    {
        UpaGeometry tx_geom;
        UpaGeometry rx_geom;
        double vertical_separation = 10.0; // wavelengths

        Vec3 tx_position(int n) const;
        Vec3 rx_position(int m) const;
        void validate() const;

        // Both arrays centered on the same vertical axis, centers `separation` apart.
        static ArrayPairLayout center_aligned(UpaGeometry tx, UpaGeometry rx, double separation);
    };

    // Near-field channel: H(m,n) = rho / r * exp(-j 2 pi r), r in wavelengths, with rho
    // set so that ||H||_F^2 = N_t * N_r.
    ChannelMatrix spherical_wave_channel(const ArrayPairLayout &layout);

    // (H_sw + H_ray) rescaled to ||H||_F^2 = N_t * N_r, H_ray i.i.d. CN(0, mixing_variance).
    ChannelMatrix mixture_channel(const ArrayPairLayout &layout, double mixing_variance, RandomStream &rng);
    ChannelMatrix mixture_channel(const ChannelMatrix &spherical, double mixing_variance, RandomStream &rng);

    // input + Delta, Delta i.i.d. CN(0, error_variance). Not renormalized.
    ChannelMatrix perturb_estimate(const ChannelMatrix &input, double error_variance, RandomStream &rng);

    // Line-of-sight user channel; identical to the array response.
    CVector los_user_channel(const UpaGeometry &geom, const Direction &dir);

    // CSV interchange: header "rows,cols", then one line per row with interleaved re,im.
    void save_channel_csv(const ChannelMatrix &h, const std::string &path);
    ChannelMatrix load_channel_csv(const std::string &path);
}

#endif
