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

#include "oamris/channel.hpp"
#include "oamris/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace oamris
{

// Raised when a scenario draw cannot be served by the three-layer precoder
// (too little null space, or a near-singular per-user channel).
class DegenerateChannel : public std::runtime_error
{
  public:
    DegenerateChannel(const std::string &what, double metric) : std::runtime_error(what), metric_(metric) {}
    // Condition number or numerical rank, depending on the failure.
    double metric() const noexcept { return metric_; }

  private:
    double metric_;
};

inline constexpr double kMaxEqualizerCondition = 1e8;

// W = Q D E, one column group of S streams per user.
struct PrecoderStack
{
    std::vector<CMatrix> q_blocks;    // (K S) x S, orthonormal columns, null space of the other users
    std::vector<CMatrix> d_blocks;    // S x S, (Gamma_k Q_k)^{-1} Sigma_k
    std::vector<RVector> sigma_tilde; // singular values of Gamma_k Q_k, descending
    RVector e_powers;                 // K S water-filled powers
    double scale = 1.0;               // global budget rescale applied to Q D E
    CMatrix w;

    int n_users() const { return static_cast<int>(q_blocks.size()); }

    // Diagonal of Gamma_k W_k: scale * sigma * sqrt(p).
    RVector stream_amplitudes() const
    {
        RVector a(e_powers.size());
        Index r = 0;
        for (const auto &s : sigma_tilde)
            for (Index i = 0; i < s.size(); ++i, ++r)
                a(r) = scale * s(i) * std::sqrt(e_powers(r));
        return a;
    }
};

// Gamma without the row block of user k.
inline CMatrix other_users_rows(const CMatrix &gamma, int k, int streams)
{
    const Index S = streams;
    const Index rows = gamma.rows() - S;
    CMatrix out(rows, gamma.cols());
    const Index before = static_cast<Index>(k) * S;
    out.topRows(before) = gamma.topRows(before);
    out.bottomRows(rows - before) = gamma.bottomRows(gamma.rows() - before - S);
    return out;
}

// Last `streams` right singular vectors of the other users' rows.
inline CMatrix interuser_nullspace(const CMatrix &gamma, int k, int streams)
{
    const Index n = gamma.cols();
    if (gamma.rows() % streams != 0 || k < 0 || k >= gamma.rows() / streams)
        throw std::invalid_argument("interuser_nullspace: user index or stream count inconsistent with gamma");
    if (gamma.rows() == streams)
        return CMatrix::Identity(n, streams); // single user, nothing to null

    const SvdResult svd = svd_full(other_users_rows(gamma, k, streams));
    const Index eta = svd.numerical_rank();
    if (n - eta < streams)
        throw DegenerateChannel("interuser_nullspace: user " + std::to_string(k) + " null space too small (rank " +
                                    std::to_string(eta) + " of " + std::to_string(n) + " columns, need " +
                                    std::to_string(streams) + " free)",
                                static_cast<double>(eta));
    return svd.v.rightCols(streams);
}

struct Equalizer
{
    CMatrix d;           // S x S
    RVector sigma_tilde; // singular values of Gamma_k Q_k
    double condition = 0.0;
};

// D_k = (Gamma_k Q_k)^{-1} Sigma_k so that Gamma_k Q_k D_k = Sigma_k.
inline Equalizer intermode_equalizer(const CMatrix &gamma_k, const CMatrix &q_k)
{
    const CMatrix eff = gamma_k * q_k;
    if (eff.rows() != eff.cols())
        throw std::invalid_argument("intermode_equalizer: Gamma_k Q_k must be square");
    const SvdResult svd = svd_full(eff);
    const RVector &s = svd.singular_values;
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond < kMaxEqualizerCondition))
        throw DegenerateChannel("intermode_equalizer: Gamma_k Q_k is near-singular (condition number " +
                                    std::to_string(cond) + ")",
                                cond);

    // (U S V^H)^{-1} S = V S^{-1} U^H S
    const RVector inv = s.cwiseInverse();
    CMatrix d = svd.v * inv.asDiagonal() * svd.u.adjoint() * s.asDiagonal();
    return {std::move(d), s, cond};
}

// Clamped water-filling over parallel channels with amplitude gains g_i:
// p_i = max(0, mu - sigma2 / g_i^2) with sum p_i = p_t. Exact active-set solution.
inline RVector waterfill(const RVector &gains, double sigma2, double p_t)
{
    if (!(p_t > 0.0) || !(sigma2 > 0.0))
        throw std::invalid_argument("waterfill: p_t and sigma2 must be > 0");
    const Index n = gains.size();
    std::vector<Index> usable;
    for (Index i = 0; i < n; ++i)
    {
        if (!(gains(i) >= 0.0))
            throw std::invalid_argument("waterfill: gains must be non-negative");
        if (gains(i) > 0.0)
            usable.push_back(i);
    }
    if (usable.empty())
        throw std::invalid_argument("waterfill: all gains are zero, no usable channel");

    std::vector<double> floor(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    for (Index i : usable)
        floor[static_cast<std::size_t>(i)] = sigma2 / (gains(i) * gains(i));
    std::sort(usable.begin(), usable.end(), [&](Index a, Index b) {
        return floor[static_cast<std::size_t>(a)] < floor[static_cast<std::size_t>(b)];
    });

    // Grow the active set while the candidate level stays above the next floor.
    double acc = 0.0;
    std::size_t active = 0;
    for (std::size_t i = 0; i < usable.size(); ++i)
    {
        acc += floor[static_cast<std::size_t>(usable[i])];
        const double candidate = (p_t + acc) / static_cast<double>(i + 1);
        active = i + 1;
        if (i + 1 < usable.size() && candidate > floor[static_cast<std::size_t>(usable[i + 1])])
            continue;
        break;
    }

    // p_i = (p_t + sum_j (f_j - f_i)) / |A| avoids cancelling p_t against large floors.
    RVector p = RVector::Zero(n);
    for (std::size_t i = 0; i < active; ++i)
    {
        const double fi = floor[static_cast<std::size_t>(usable[i])];
        double spread = 0.0;
        for (std::size_t j = 0; j < active; ++j)
            spread += floor[static_cast<std::size_t>(usable[j])] - fi;
        p(usable[i]) = std::max(0.0, (p_t + spread) / static_cast<double>(active));
    }
    return p;
}

// W_k = Q_k D_k diag(sqrt p_k), then a global rescale only if the budget is exceeded.
inline CMatrix compose_precoder(PrecoderStack &stack, double p_t)
{
    const int K = stack.n_users();
    if (K == 0 || static_cast<int>(stack.d_blocks.size()) != K)
        throw std::invalid_argument("compose_precoder: incomplete precoder stack");
    const Index S = stack.q_blocks.front().cols();
    const Index rows = stack.q_blocks.front().rows();
    if (stack.e_powers.size() != K * S)
        throw std::invalid_argument("compose_precoder: power vector length mismatch");

    CMatrix w(rows, K * S);
    for (int k = 0; k < K; ++k)
    {
        const RVector amp = stack.e_powers.segment(static_cast<Index>(k) * S, S).cwiseSqrt();
        w.middleCols(static_cast<Index>(k) * S, S) = stack.q_blocks[static_cast<std::size_t>(k)] *
                                                     stack.d_blocks[static_cast<std::size_t>(k)] * amp.asDiagonal();
    }
    const double total = w.squaredNorm();
    stack.scale = (total > p_t) ? std::sqrt(p_t / total) : 1.0;
    stack.w = stack.scale * w;
    return stack.w;
}

// Three-layer precoder for the effective channel gamma ((K S) x (K S)).
inline PrecoderStack design_precoder(const CMatrix &gamma, int n_users, int streams, double sigma2, double p_t)
{
    if (gamma.rows() != static_cast<Index>(n_users) * streams)
        throw std::invalid_argument("design_precoder: gamma rows must equal n_users * streams");
    PrecoderStack stack;
    RVector gains(gamma.rows());
    for (int k = 0; k < n_users; ++k)
    {
        CMatrix q = interuser_nullspace(gamma, k, streams);
        Equalizer eq = intermode_equalizer(user_rows(gamma, k, streams), q);
        gains.segment(static_cast<Index>(k) * streams, streams) = eq.sigma_tilde;
        stack.q_blocks.push_back(std::move(q));
        stack.d_blocks.push_back(std::move(eq.d));
        stack.sigma_tilde.push_back(std::move(eq.sigma_tilde));
    }
    stack.e_powers = waterfill(gains, sigma2, p_t);
    compose_precoder(stack, p_t);
    return stack;
}

enum class BaselineKind
{
    mrt,
    zf,
    mmse
};

// Classical linear precoders on the stacked channel (streams x antennas), each scaled
// to total power p_t. ZF uses a thresholded pseudo-inverse; a rank-deficient channel
// sets *warning when provided.
inline CMatrix baseline_precoder(BaselineKind kind, const CMatrix &h_eff, double p_t, double sigma2,
                                 std::string *warning = nullptr)
{
    if (!(p_t > 0.0))
        throw std::invalid_argument("baseline_precoder: p_t must be > 0");
    CMatrix w;
    switch (kind)
    {
    case BaselineKind::mrt:
        w = h_eff.adjoint();
        break;
    case BaselineKind::zf: {
        const SvdResult svd = svd_full(h_eff);
        const Index r = svd.numerical_rank();
        if (r < std::min(h_eff.rows(), h_eff.cols()) && warning)
            *warning = "baseline_precoder(zf): channel is rank deficient (rank " + std::to_string(r) +
                       "), using thresholded pseudo-inverse";
        if (r == 0)
            throw std::invalid_argument("baseline_precoder(zf): zero channel");
        const RVector inv = svd.singular_values.head(r).cwiseInverse();
        w = svd.v.leftCols(r) * inv.asDiagonal() * svd.u.leftCols(r).adjoint();
        break;
    }
    case BaselineKind::mmse: {
        const Index n = h_eff.rows();
        const double reg = sigma2 * static_cast<double>(n) / p_t;
        const CMatrix gram = h_eff * h_eff.adjoint() + reg * CMatrix::Identity(n, n);
        w = h_eff.adjoint() * solve_hermitian(0.5 * (gram + gram.adjoint()), CMatrix::Identity(n, n));
        break;
    }
    }
    const double norm2 = w.squaredNorm();
    if (!(norm2 > 0.0))
        throw std::invalid_argument("baseline_precoder: zero channel");
    return w * std::sqrt(p_t / norm2);
}

} // namespace oamris
