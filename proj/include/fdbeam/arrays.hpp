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

#ifndef FDBEAM_ARRAYS_HPP
#define FDBEAM_ARRAYS_HPP

#include "fdbeam/types.hpp"

#include <vector>

namespace fdbeam
{
    // A direction in radians. Azimuth is measured from boresight in the array
    // plane, elevation from the horizon.
    struct Direction
    {
        double azimuth = 0.0;   // [-pi, pi]
        double elevation = 0.0; // [-pi/2, pi/2]

        static Direction from_degrees(double az_deg, double el_deg)
        {
            return {deg_to_rad(az_deg), deg_to_rad(el_deg)};
        }
        bool operator==(const Direction &) const = default;
    };

    // Unit propagation vector (cos el sin az, cos el cos az, sin el). Boresight is +y.
    Vec3 propagation_vector(const Direction &dir);

    // Uniform planar array in the x-z plane. Columns run along x, rows along z.
    // Element n = row * cols + col sits at origin_offset + (col * spacing, 0, row * spacing).
    // All lengths are in wavelengths.
    struct UpaGeometry
    {
        int rows = 1;
        int cols = 1;
        double element_spacing = 0.5;
        Vec3 origin_offset = Vec3::Zero();

        int size() const { return rows * cols; }

        // Element position relative to origin_offset.
        Vec3 local_position(int n) const;

        // Element position in the common frame (origin_offset + local).
        Vec3 position(int n) const;

        // Copy of this geometry with origin_offset chosen so the array center is at `center`.
        UpaGeometry centered_at(const Vec3 &center) const;

        void validate() const;
    };

    // Steering vectors stacked column-wise, one per direction of the coverage region.
    struct SteeringMatrix
    {
        CMatrix entries;
        std::vector<Direction> region;

        Eigen::Index antennas() const { return entries.rows(); }
        Eigen::Index beams() const { return entries.cols(); }
    };

    // Array response a(dir): entry n = exp(j 2 pi <p_n, u(dir)>) with p_n relative to
    // origin_offset, so the element at the origin offset has phase zero and ||a||^2 = N.
    CVector array_response(const UpaGeometry &geom, const Direction &dir);

    SteeringMatrix steering_matrix(const UpaGeometry &geom, const std::vector<Direction> &region);

    enum class LinkKind
    {
        transmit,
        receive
    };

    // Rectangular direction grid, elevation outer and azimuth inner.
    std::vector<Direction> direction_grid(double az_min_deg, double az_max_deg, double az_step_deg,
                                          double el_min_deg, double el_max_deg, double el_step_deg);

    // 45 directions: azimuth -60..60 deg and elevation -30..30 deg in 15 deg steps.
    // Both link kinds use the same grid.
    std::vector<Direction> default_coverage_grid(LinkKind kind);
}

#endif
