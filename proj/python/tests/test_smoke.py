# SPDX-License-Identifier: Apache-2.0
#
# fdbeam: self-interference-aware analog beamforming codebooks for
# full-duplex millimeter-wave transceivers
# Copyright (C) 2026 The fdbeam authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

import numpy as np
import pytest

import fdbeam


def small_grid():
    return [(az, el) for el in (-15.0, 15.0) for az in (-30.0, 0.0, 30.0)]


def test_array_response_broadside_is_all_ones():
    g = fdbeam.UpaGeometry(4, 4)
    a = fdbeam.array_response(g, 0.0, 0.0)
    assert a.shape == (16,)
    np.testing.assert_allclose(a, np.ones(16), atol=1e-12)


def test_quantizer_sets_and_projection():
    spec = fdbeam.QuantizationSpec(3, 2, 0.5)
    amps = fdbeam.realizable_amplitudes(spec)
    phases = fdbeam.realizable_phases(spec)
    assert len(amps) == 4 and len(phases) == 8
    assert amps[0] == 1.0
    p = fdbeam.project_codebook(np.array([[0.2 + 0.9j, -1.0]]), spec)
    for w in p.ravel():
        assert np.min(np.abs(np.abs(w) - np.array(amps))) < 1e-12


def test_cbf_gain_is_n_squared():
    g = fdbeam.UpaGeometry(4, 4)
    F = fdbeam.cbf_codebook(g, small_grid(), fdbeam.QuantizationSpec.infinite())
    A = fdbeam.steering_matrix(g, small_grid())
    gains = np.abs(np.sum(A.conj() * F, axis=0)) ** 2
    np.testing.assert_allclose(gains, 256.0, rtol=1e-9)


def test_expected_objective_matches_closed_form():
    rng = np.random.default_rng(3)
    H = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    F = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(4, 2)))
    W = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(4, 3)))
    eps = 0.1
    expect = np.linalg.norm(W.conj().T @ H @ F) ** 2 + eps * np.linalg.norm(F) ** 2 * np.linalg.norm(W) ** 2
    assert fdbeam.expected_objective(F, W, H, eps) == pytest.approx(expect, rel=1e-12)


def test_design_reduces_coupling_and_respects_magnitude():
    g = fdbeam.UpaGeometry(4, 4)
    H = fdbeam.spherical_wave_channel(g, g, 10.0)
    A = fdbeam.steering_matrix(g, small_grid())
    spec = fdbeam.QuantizationSpec(6, 6)
    out = fdbeam.lonestar_design(H, A, A, spec, 0.05, 0.05)
    assert np.max(np.abs(out["F"])) <= 1.0 + 1e-12
    labels = [t[1] for t in out["trace"]]
    assert labels == ["init", "solve_tx", "project_tx", "solve_rx", "project_rx"]
    assert out["trace"][-1][2] < out["trace"][0][2]


def test_infeasible_raises():
    A = np.ones((4, 2), dtype=complex)
    with pytest.raises(fdbeam.InfeasibleError):
        fdbeam.solve_coverage_qp(np.eye(4, dtype=complex), 0.5 * A, 0.0)


def test_sweep_is_deterministic():
    ini = """
[array]
rows = 2
cols = 2
spacing_wavelengths = 0.5
[quantization]
phase_bits = 4
amplitude_bits = 4
[sim]
num_user_pairs = 10
[sweep]
error_variance_db = -40, -30
"""
    a = fdbeam.run_sweep(ini, "error_sweep")
    assert a == fdbeam.run_sweep(ini, "error_sweep")
    assert a.splitlines()[0].startswith("error_variance_db,codebook,mean_gamma_sum")
    assert len(a.splitlines()) == 1 + 2 * 3


def test_bad_config_key():
    with pytest.raises(fdbeam.ConfigError):
        fdbeam.run_sweep("[array]\nrows = 2\n", "inr_sweep")
