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


#ifndef FDBEAM_CODEBOOKS_HPP
#define FDBEAM_CODEBOOKS_HPP

#include "fdbeam/arrays.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fdbeam
{
    // Digitally controlled phase shifter and log-stepped attenuator per element.
    struct QuantizationSpec
    {
        int phase_bits = 8;
        int amplitude_bits = 8;
        double attenuation_step_db = 0.5; // attenuation per LSB
        bool infinite_resolution = false;

        static QuantizationSpec infinite()
        {
            QuantizationSpec s;
            s.infinite_resolution = true;
            return s;
        }
        static QuantizationSpec bits(int b, double step_db = 0.5) { return {b, b, step_db, false}; }

        int phase_levels() const { return 1 << phase_bits; }
        int amplitude_levels() const { return 1 << amplitude_bits; }
        void validate() const;
        bool operator==(const QuantizationSpec &) const = default;
    };

    // Amplitude index and phase index into the realizable sets.
    struct QuantIndex
    {
        int amplitude = 0;
        int phase = 0;
        bool operator==(const QuantIndex &) const = default;
    };

    // Beamforming weights (one column per beam) and the directions they serve.
    struct Codebook
    {
        CMatrix matrix;
        std::vector<Direction> region;
        std::optional<QuantizationSpec> quantized_under;

        Eigen::Index antennas() const { return matrix.rows(); }
        Eigen::Index beams() const { return matrix.cols(); }
    };

    // {10^(-k step / 20) : k = 0 .. 2^b_amp - 1}, descending from 1.
    std::vector<double> realizable_amplitudes(const QuantizationSpec &spec);

    // {2 pi k / 2^b_phs}, radians.
    std::vector<double> realizable_phases(const QuantizationSpec &spec);

    // Nearest amplitude (absolute difference) and chord-nearest phase, ties toward the
    // smaller index. Requires a finite-resolution spec.
    QuantIndex quantize_index(cdouble w, const QuantizationSpec &spec);

    // Complex weight for a quantizer index. Every projected entry is produced here, so
    // reconstruction from stored indices is bit-exact.
    cdouble realize(const QuantIndex &idx, const QuantizationSpec &spec);

    cdouble project_weight(cdouble w, const QuantizationSpec &spec);
    CMatrix project_codebook(const CMatrix &m, const QuantizationSpec &spec);

    // Conjugate beamforming: projected steering vectors.
    Codebook cbf_codebook(const UpaGeometry &geom, const std::vector<Direction> &region, const QuantizationSpec &spec);

    // 1-D Taylor window with `nbar` nearly constant-level side lobes at `sll_db` below
    // the main lobe, scaled so its largest sample is 1. An infinite sll_db gives ones.
    RVector taylor_window(int length, double sll_db, int nbar = 4);

    // Steering vectors tapered by the separable window (row window x column window).
    Codebook taylor_codebook(const UpaGeometry &geom, const std::vector<Direction> &region, const QuantizationSpec &spec,
                             double sll_db, int nbar = 4);

    // |a(dir)^H f|^2.
    double beam_gain(const CVector &beam, const UpaGeometry &geom, const Direction &dir);

    // (1/M) sum_i (N - |a_i^H f_i|)^2 / N^2.
    double coverage_variance(const Codebook &cb, const SteeringMatrix &steering);

    // Largest entry magnitude of a matrix (0 for empty).
    double max_entry_magnitude(const CMatrix &m);

    // Codebook file. Quantized codebooks store (amplitude, phase) index pairs; codebooks
    // without a finite quantizer store re,im at 17 significant digits.
    void save_codebook_csv(const Codebook &cb, const std::string &path);
    std::string codebook_to_csv(const Codebook &cb);
    Codebook load_codebook_csv(const std::string &path);
    Codebook codebook_from_csv(const std::string &text);
}

#endif
