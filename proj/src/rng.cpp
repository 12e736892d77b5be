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


#include "fdbeam/rng.hpp"

#include <bit>
#include <cstring>

namespace fdbeam
{
    std::uint64_t digest_combine(std::uint64_t h, double v)
    {
        return splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
    }

    std::uint64_t digest(const CMatrix &m)
    {
        std::uint64_t h = splitmix64(static_cast<std::uint64_t>(m.rows()) * 0x100000001B3ULL + static_cast<std::uint64_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
            {
                h = digest_combine(h, m(i, j).real());
                h = digest_combine(h, m(i, j).imag());
            }
        return h;
    }
}
