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


#include "fdbeam/linkmetrics.hpp"

#include <cmath>

namespace fdbeam
{
    void LinkBudget::validate() const
    {
        for (double v : {snrbar_tx_db, snrbar_rx_db, inrbar_rx_db, inr_tx_db})
            if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
                throw std::invalid_argument("LinkBudget: values must be finite or -inf dB");
    }

    double snr_tx(const LinkBudget &budget, const CVector &f, const CVector &h_tx)
    {
        require_dims(f.size() == h_tx.size() && f.size() > 0, "snr_tx: beam and channel lengths differ");
        const double nt = static_cast<double>(f.size());
        return budget.snrbar_tx() * std::norm(h_tx.dot(f)) / (nt * nt);
    }

    double snr_rx(const LinkBudget &budget, const CVector &w, const CVector &h_rx)
    {
        require_dims(w.size() == h_rx.size() && w.size() > 0, "snr_rx: beam and channel lengths differ");
        const double w2 = w.squaredNorm();
        if (w2 == 0.0)
            throw std::invalid_argument("snr_rx: receive beam is zero");
        return budget.snrbar_rx() * std::norm(w.dot(h_rx)) / (static_cast<double>(w.size()) * w2);
    }

    double inr_rx(const LinkBudget &budget, const CVector &f, const CVector &w, const CMatrix &H)
    {
        require_dims(H.rows() == w.size() && H.cols() == f.size(), "inr_rx: beams do not match the channel");
        const double w2 = w.squaredNorm();
        if (w2 == 0.0)
            throw std::invalid_argument("inr_rx: receive beam is zero");
        const double nt = static_cast<double>(f.size()), nr = static_cast<double>(w.size());
        return budget.inrbar_rx() * std::norm(w.dot(H * f)) / (nt * nt * nr * w2);
    }

    SinrRates sinr_and_rates(double snr_tx, double snr_rx, double inr_rx, double inr_tx)
    {
        for (double v : {snr_tx, snr_rx, inr_rx, inr_tx})
            if (!(v >= 0.0))
                throw std::invalid_argument("sinr_and_rates: inputs must be >= 0");
        SinrRates r;
        r.sinr_tx = std::isinf(inr_tx) ? 0.0 : snr_tx / (1.0 + inr_tx);
        r.sinr_rx = std::isinf(inr_rx) ? 0.0 : snr_rx / (1.0 + inr_rx);
        r.rate_tx = std::log2(1.0 + r.sinr_tx);
        r.rate_rx = std::log2(1.0 + r.sinr_rx);
        return r;
    }

    double gamma_sum(double rate_tx, double rate_rx, double snr_cbf_tx, double snr_cbf_rx)
    {
        const double den = std::log2(1.0 + snr_cbf_tx) + std::log2(1.0 + snr_cbf_rx);
        if (!(den > 0.0))
            throw std::domain_error("gamma_sum: reference capacity is zero");
        return (rate_tx + rate_rx) / den;
    }

    AverageInr avg_inr(const LinkBudget &budget, const CMatrix &F, const CMatrix &W, const CMatrix &H)
    {
        require_dims(H.rows() == W.rows() && H.cols() == F.rows(), "avg_inr: codebooks do not match the channel");
        require_dims(F.cols() > 0 && W.cols() > 0, "avg_inr: empty codebook");
        const double nt = static_cast<double>(F.rows()), nr = static_cast<double>(W.rows());
        const CMatrix C = W.adjoint() * H * F; // M_rx x M_tx coupling
        double acc = 0.0;
        for (Eigen::Index j = 0; j < W.cols(); ++j)
        {
            const double w2 = W.col(j).squaredNorm();
            if (w2 == 0.0)
                throw std::invalid_argument("avg_inr: receive beam " + std::to_string(j) + " is zero");
            acc += C.row(j).squaredNorm() / w2;
        }
        AverageInr r;
        r.linear = budget.inrbar_rx() * acc / (nt * nt * nr * static_cast<double>(F.cols() * W.cols()));
        r.db = linear_to_db(r.linear);
        return r;
    }

    double avg_inr_frobenius(const LinkBudget &budget, const CMatrix &F, const CMatrix &W, const CMatrix &H)
    {
        require_dims(H.rows() == W.rows() && H.cols() == F.rows(), "avg_inr_frobenius: codebooks do not match the channel");
        const double nt = static_cast<double>(F.rows()), nr = static_cast<double>(W.rows());
        return budget.inrbar_rx() * (W.adjoint() * H * F).squaredNorm() /
               (nt * nt * nr * nr * static_cast<double>(F.cols() * W.cols()));
    }
}
