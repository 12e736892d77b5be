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


#ifndef FDBEAM_LINKMETRICS_HPP
#define FDBEAM_LINKMETRICS_HPP

#include "fdbeam/channels.hpp"
#include "fdbeam/codebooks.hpp"

namespace fdbeam
{
    // Normalized link budget. Each value is the metric attained with ideal beams:
    // SNR_tx with a matched transmit beam, INR_rx with worst-case beam coupling.
    // A value of -inf dB marks the term as absent.
    struct LinkBudget
    {
        double snrbar_tx_db = 10.0;
        double snrbar_rx_db = 10.0;
        double inrbar_rx_db = 90.0;
        double inr_tx_db = neg_inf_db; // cross-link interference at the downlink user

        double snrbar_tx() const { return db_to_linear(snrbar_tx_db); }
        double snrbar_rx() const { return db_to_linear(snrbar_rx_db); }
        double inrbar_rx() const { return db_to_linear(inrbar_rx_db); }
        double inr_tx() const { return db_to_linear(inr_tx_db); }
        void validate() const;
    };

    // SNRbar_tx |h^H f|^2 / N_t^2.
    double snr_tx(const LinkBudget &budget, const CVector &f, const CVector &h_tx);

    // SNRbar_rx |w^H h|^2 / (N_r ||w||^2). Throws for w = 0.
    double snr_rx(const LinkBudget &budget, const CVector &w, const CVector &h_rx);

    // INRbar_rx |w^H H f|^2 / (N_t^2 N_r ||w||^2). Throws for w = 0.
    double inr_rx(const LinkBudget &budget, const CVector &f, const CVector &w, const CMatrix &H);

    struct SinrRates
    {
        double sinr_tx = 0.0;
        double sinr_rx = 0.0;
        double rate_tx = 0.0; // bits/s/Hz
        double rate_rx = 0.0;
    };

    // Interference treated as noise on both links.
    SinrRates sinr_and_rates(double snr_tx, double snr_rx, double inr_rx, double inr_tx);

    // (R_tx + R_rx) / (log2(1 + snr_cbf_tx) + log2(1 + snr_cbf_rx)). Throws on a zero denominator.
    double gamma_sum(double rate_tx, double rate_rx, double snr_cbf_tx, double snr_cbf_rx);

    struct AverageInr
    {
        double linear = 0.0;
        double db = neg_inf_db;
    };

    // Exact mean of inr_rx over all M_tx * M_rx beam pairs (per-pair receive norms).
    AverageInr avg_inr(const LinkBudget &budget, const CMatrix &F, const CMatrix &W, const CMatrix &H);

    // INRbar_rx ||W^H H F||_F^2 / (N_t^2 N_r^2 M_tx M_rx); equals avg_inr when every
    // receive beam has squared norm N_r.
    double avg_inr_frobenius(const LinkBudget &budget, const CMatrix &F, const CMatrix &W, const CMatrix &H);

    struct TrialMetrics
    {
        double snr_tx = 0.0;
        double snr_rx = 0.0;
        double inr_rx = 0.0;
        double sinr_tx = 0.0;
        double sinr_rx = 0.0;
        double rate_tx = 0.0;
        double rate_rx = 0.0;
        double gamma_sum = 0.0;
        int tx_beam_index = 0;
        int rx_beam_index = 0;
    };
}

#endif
