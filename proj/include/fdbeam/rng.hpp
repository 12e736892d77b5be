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

#ifndef FDBEAM_RNG_HPP
#define FDBEAM_RNG_HPP

#include "fdbeam/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fdbeam
{
    // SplitMix64 finalizer, used to derive independent stream seeds.
    constexpr std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Seeded random stream. Streams derived with `derive` from the same parent and
    // the same key path are bit-identical on every platform that implements
    // std::mt19937_64 (standard-mandated output sequence).
    class RandomStream
    {
    public:
        explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

        // Child stream keyed on a sequence of indices, e.g. {point, trial}.
        static RandomStream derive(std::uint64_t master, std::initializer_list<std::uint64_t> keys)
        {
            std::uint64_t s = splitmix64(master);
            for (auto k : keys)
                s = splitmix64(s ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
            return RandomStream(s);
        }

        std::uint64_t seed() const { return seed_; }

        // Uniform on [lo, hi). Implemented directly on the 53-bit mantissa so the
        // sequence does not depend on the standard library's distribution code.
        double uniform(double lo, double hi)
        {
            const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
            return lo + (hi - lo) * u;
        }

        // Standard normal by Box-Muller, deterministic across standard libraries.
        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            double u1 = 0.0;
            do
                u1 = uniform(0.0, 1.0);
            while (u1 <= 0.0);
            const double u2 = uniform(0.0, 1.0);
            const double r = std::sqrt(-2.0 * std::log(u1));
            spare_ = r * std::sin(2.0 * pi * u2);
            has_spare_ = true;
            return r * std::cos(2.0 * pi * u2);
        }

        // Circularly-symmetric complex Gaussian with total variance `variance`.
        cdouble complex_normal(double variance)
        {
            const double s = std::sqrt(variance / 2.0);
            const double re = normal();
            const double im = normal();
            return {s * re, s * im};
        }

    private:
        std::uint64_t seed_;
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };

    // Order-sensitive digest of a complex matrix, used to log which draws a trial consumed.
    std::uint64_t digest(const CMatrix &m);
    std::uint64_t digest_combine(std::uint64_t h, double v);
}

#endif
