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

#ifndef FDBEAM_TYPES_HPP
#define FDBEAM_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fdbeam
{
    using cdouble = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RVector = Eigen::VectorXd;
    using Vec3 = Eigen::Vector3d;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double neg_inf_db = -std::numeric_limits<double>::infinity();

    // dB (power) to linear; -inf dB maps to exactly 0
    inline double db_to_linear(double db)
    {
        if (db == neg_inf_db)
            return 0.0;
        return std::pow(10.0, db / 10.0);
    }

    inline double linear_to_db(double lin)
    {
        if (lin <= 0.0)
            return neg_inf_db;
        return 10.0 * std::log10(lin);
    }

    inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
    inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }

    // Thrown when operand shapes do not conform.
    class dimension_error : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Thrown by the subproblem solver when no magnitude-bounded codebook can meet
    // the requested coverage variance.
    class infeasible_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline void require_dims(bool ok, const std::string &what)
    {
        if (!ok)
            throw dimension_error(what);
    }
}

#endif
