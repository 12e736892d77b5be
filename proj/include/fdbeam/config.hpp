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

#ifndef FDBEAM_CONFIG_HPP
#define FDBEAM_CONFIG_HPP

#include "fdbeam/sim.hpp"

#include <stdexcept>
#include <string>

namespace fdbeam
{
    // Configuration problem tied to one key ("section.key").
    class config_error : public std::runtime_error
    {
    public:
        config_error(const std::string &key, const std::string &what)
            : std::runtime_error(key + ": " + what), key_(key)
        {
        }
        const std::string &key() const { return key_; }

    private:
        std::string key_;
    };

    struct ExperimentConfig
    {
        Scenario scenario;
        SweepAxes axes;
        std::string output_dir = "out";
    };

    // INI text with sections [array], [quantization], [baseline], [coverage], [budget],
    // [channel], [solver], [sim], [sweep], [output]. Required keys: array.rows,
    // array.cols, array.spacing_wavelengths, quantization.phase_bits,
    // quantization.amplitude_bits. Unknown sections or keys are errors.
    ExperimentConfig parse_config(const std::string &text);
    ExperimentConfig load_config(const std::string &path);

    // Effective configuration with every default spelled out; parses back to the same values.
    std::string config_to_ini(const ExperimentConfig &cfg);
}

#endif
