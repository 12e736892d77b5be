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

#include "fdbeam/arrays.hpp"

#include <cmath>

namespace fdbeam
{
    Vec3 propagation_vector(const Direction &dir)
    {
        const double ce = std::cos(dir.elevation);
        return {ce * std::sin(dir.azimuth), ce * std::cos(dir.azimuth), std::sin(dir.elevation)};
    }

    Vec3 UpaGeometry::local_position(int n) const
    {
        const int row = n / cols;
        const int col = n % cols;
        return {col * element_spacing, 0.0, row * element_spacing};
    }

    Vec3 UpaGeometry::position(int n) const
    {
        return origin_offset + local_position(n);
    }

    UpaGeometry UpaGeometry::centered_at(const Vec3 &center) const
    {
        UpaGeometry g = *this;
        const Vec3 half((cols - 1) * element_spacing / 2.0, 0.0, (rows - 1) * element_spacing / 2.0);
        g.origin_offset = center - half;
        return g;
    }

    void UpaGeometry::validate() const
    {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("UpaGeometry: rows and cols must be positive");
        if (!std::isfinite(element_spacing) || element_spacing <= 0.0)
            throw std::invalid_argument("UpaGeometry: element_spacing must be positive and finite");
        if (!origin_offset.allFinite())
            throw std::invalid_argument("UpaGeometry: origin_offset must be finite");
    }

    CVector array_response(const UpaGeometry &geom, const Direction &dir)
    {
        const Vec3 u = propagation_vector(dir);
        const int n_ant = geom.size();
        CVector a(n_ant);
        for (int n = 0; n < n_ant; ++n)
        {
            const double phase = 2.0 * pi * geom.local_position(n).dot(u);
            a[n] = cdouble(std::cos(phase), std::sin(phase));
        }
        return a;
    }

    SteeringMatrix steering_matrix(const UpaGeometry &geom, const std::vector<Direction> &region)
    {
        if (region.empty())
            throw std::invalid_argument("steering_matrix: region must not be empty");
        SteeringMatrix s;
        s.region = region;
        s.entries.resize(geom.size(), static_cast<Eigen::Index>(region.size()));
        for (std::size_t i = 0; i < region.size(); ++i)
            s.entries.col(static_cast<Eigen::Index>(i)) = array_response(geom, region[i]);
        return s;
    }

    std::vector<Direction> direction_grid(double az_min_deg, double az_max_deg, double az_step_deg,
                                          double el_min_deg, double el_max_deg, double el_step_deg)
    {
        if (az_step_deg <= 0.0 || el_step_deg <= 0.0 || az_max_deg < az_min_deg || el_max_deg < el_min_deg)
            throw std::invalid_argument("direction_grid: invalid bounds or step");
        // Integer counts keep the grid free of accumulated rounding.
        const int n_az = static_cast<int>(std::floor((az_max_deg - az_min_deg) / az_step_deg + 1e-9)) + 1;
        const int n_el = static_cast<int>(std::floor((el_max_deg - el_min_deg) / el_step_deg + 1e-9)) + 1;
        std::vector<Direction> grid;
        grid.reserve(static_cast<std::size_t>(n_az * n_el));
        for (int e = 0; e < n_el; ++e)
            for (int a = 0; a < n_az; ++a)
                grid.push_back(Direction::from_degrees(az_min_deg + a * az_step_deg, el_min_deg + e * el_step_deg));
        return grid;
    }

    std::vector<Direction> default_coverage_grid(LinkKind)
    {
        return direction_grid(-60.0, 60.0, 15.0, -30.0, 30.0, 15.0);
    }
}
