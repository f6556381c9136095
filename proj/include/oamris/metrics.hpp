// SPDX-License-Identifier: Apache-2.0
//
// oamris - RIS-assisted multi-user OAM downlink simulation library
// Copyright (C) 2026 The oamris authors
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

#pragma once

#include "oamris/numerics.hpp"

#include <stdexcept>

namespace oamris
{

// Rates in bits/s/Hz. Noise enters only through its power.
struct RateReport
{
    RMatrix per_stream_sinr; // K x S, linear
    RVector per_user_rate;   // K
    double sum_rate = 0.0;
    double logdet_capacity = 0.0;
};

// T = Gamma W; stream r sees |T_rr|^2 over the rest of row r plus noise.
inline RMatrix per_stream_sinr(const CMatrix &gamma, const CMatrix &w, double sigma2, int n_users, int streams)
{
    if (gamma.cols() != w.rows() || gamma.rows() != w.cols() || gamma.rows() != static_cast<Index>(n_users) * streams)
        throw std::invalid_argument("per_stream_sinr: nonconformable gamma / precoder");
    const CMatrix t = gamma * w;
    RMatrix sinr(n_users, streams);
    for (Index r = 0; r < t.rows(); ++r)
    {
        const double signal = std::norm(t(r, r));
        const double interference = t.row(r).squaredNorm() - signal;
        sinr(r / streams, r % streams) = signal / (std::max(interference, 0.0) + sigma2);
    }
    return sinr;
}

inline double sum_rate(const RMatrix &sinr)
{
    double acc = 0.0;
    for (Index j = 0; j < sinr.cols(); ++j)
        for (Index i = 0; i < sinr.rows(); ++i)
            acc += log2_1p(sinr(i, j));
    return acc;
}

// log2 det(I + Gamma W W^H Gamma^H / sigma2), via Cholesky of the HPD argument.
inline double logdet_capacity(const CMatrix &gamma, const CMatrix &w, double sigma2)
{
    const CMatrix a = gamma * w;
    const Index n = a.rows();
    CMatrix m = CMatrix::Identity(n, n) + (a * a.adjoint()) / sigma2;
    m = 0.5 * (m + m.adjoint());
    return log2_det_hpd(m);
}

inline RateReport evaluate_rates(const CMatrix &gamma, const CMatrix &w, double sigma2, int n_users, int streams)
{
    RateReport rep;
    rep.per_stream_sinr = per_stream_sinr(gamma, w, sigma2, n_users, streams);
    rep.per_user_rate = RVector::Zero(n_users);
    for (Index k = 0; k < n_users; ++k)
        for (Index i = 0; i < streams; ++i)
            rep.per_user_rate(k) += log2_1p(rep.per_stream_sinr(k, i));
    rep.sum_rate = rep.per_user_rate.sum();
    rep.logdet_capacity = logdet_capacity(gamma, w, sigma2);
    return rep;
}

} // namespace oamris
