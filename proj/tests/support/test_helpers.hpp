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

// Small helpers shared by the unit and acceptance tests.

#ifndef FDBEAM_TESTS_HELPERS_HPP
#define FDBEAM_TESTS_HELPERS_HPP

#include "fdbeam/rng.hpp"
#include "fdbeam/types.hpp"

#include <filesystem>
#include <string>

namespace fdbeam::testing
{
    inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, RandomStream &rng, double variance = 1.0)
    {
        CMatrix m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                m(i, j) = rng.complex_normal(variance);
        return m;
    }

    // Random unit-modulus matrix, e.g. a stand-in steering matrix.
    inline CMatrix random_phases(Eigen::Index rows, Eigen::Index cols, RandomStream &rng)
    {
        CMatrix m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                m(i, j) = std::polar(1.0, rng.uniform(-pi, pi));
        return m;
    }

    // Fresh scratch directory under the system temp dir.
    inline std::filesystem::path scratch_dir(const std::string &name)
    {
        auto p = std::filesystem::temp_directory_path() / ("fdbeam_test_" + name);
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
        return p;
    }
}

#endif
