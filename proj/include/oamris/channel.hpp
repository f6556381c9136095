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

#include "oamris/config.hpp"
#include "oamris/geometry.hpp"
#include "oamris/numerics.hpp"
#include "oamris/random.hpp"

#include <numbers>
#include <stdexcept>
#include <vector>

namespace oamris
{

// Line-of-sight links and the OAM-decomposed end-to-end channel.
//
// The end-to-end channel seen after mode (de)multiplexing is
//   Gamma = B diag(phi) Z,   B = [F_K^H G_1; ...; F_K^H G_K],   Z = H F,
// so Gamma is a phi-weighted sum of the M rank-one terms b_m z_m^H.
struct ChannelSet
{
    CMatrix h;              // M x N_T, transmitter -> RIS
    std::vector<CMatrix> g; // K matrices N_R x M, RIS -> user k
    CMatrix f_k;            // N_R x S mode matrix
    CMatrix f;              // (K N_R) x (K S), I_K (x) F_K
    CMatrix b;              // (K S) x M
    CMatrix z;              // M x (K S)
    int n_users = 0;
    int streams_per_user = 0;

    Index elements() const { return h.rows(); }
    Index total_streams() const { return b.rows(); }
};

// RIS reflection coefficients, all unit modulus.
struct ReflectionPattern
{
    CVector phases;

    Index size() const { return phases.size(); }

    static ReflectionPattern ones(Index m)
    {
        return ReflectionPattern{CVector::Ones(m)};
    }

    static ReflectionPattern from_angles(const RVector &angles)
    {
        ReflectionPattern p{CVector(angles.size())};
        for (Index i = 0; i < angles.size(); ++i)
            p.phases(i) = unit_phasor(angles(i));
        return p;
    }

    // Phases uniform on [0, 2 pi).
    static ReflectionPattern random(Index m, Rng &rng)
    {
        ReflectionPattern p{CVector(m)};
        for (Index i = 0; i < m; ++i)
            p.phases(i) = unit_phasor(rng.uniform(0.0, 2.0 * std::numbers::pi));
        return p;
    }

    bool is_unit_modulus(double tol = 1e-12) const
    {
        for (Index i = 0; i < phases.size(); ++i)
            if (std::abs(std::abs(phases(i)) - 1.0) > tol)
                return false;
        return true;
    }

    CMatrix diagonal() const { return phases.asDiagonal(); }
};

// Entry (i, j) = beta lambda / (4 pi d) exp(-j 2 pi d / lambda) with d = |dst_i - src_j|.
inline CMatrix los_channel(const std::vector<Point3> &src, const std::vector<Point3> &dst, double wavelength,
                           double beta)
{
    if (src.empty() || dst.empty())
        throw std::invalid_argument("los_channel: empty position list");
    CMatrix out(static_cast<Index>(dst.size()), static_cast<Index>(src.size()));
    const double k0 = 2.0 * std::numbers::pi / wavelength;
    for (std::size_t i = 0; i < dst.size(); ++i)
        for (std::size_t j = 0; j < src.size(); ++j)
        {
            const double d = (dst[i] - src[j]).norm();
            if (!(d > 0.0))
                throw std::invalid_argument("los_channel: coincident source and destination (dst " +
                                            std::to_string(i) + ", src " + std::to_string(j) + ")");
            out(static_cast<Index>(i), static_cast<Index>(j)) =
                std::polar(beta * wavelength / (4.0 * std::numbers::pi * d), -k0 * d);
        }
    return out;
}

// N_R x S partial IFFT matrix: column k-1 is f(k)^H for modes k = 1..S, i.e. entries exp(+j 2 pi k n / N_R).
inline CMatrix oam_mode_matrix(int n_rx, int n_modes)
{
    if (n_rx < 1 || n_modes < 1)
        throw std::invalid_argument("oam_mode_matrix: counts must be >= 1");
    if (n_modes > n_rx)
        throw std::invalid_argument("oam_mode_matrix: n_modes (" + std::to_string(n_modes) +
                                    ") exceeds n_rx (" + std::to_string(n_rx) + "); modes not separable");
    CMatrix f(n_rx, n_modes);
    for (int n = 0; n < n_rx; ++n)
        for (int k = 1; k <= n_modes; ++k)
            f(n, k - 1) = unit_phasor(2.0 * std::numbers::pi * k * n / n_rx);
    return f;
}

inline ChannelSet assemble_links(const ScenarioGeometry &geometry, const SystemConfig &config)
{
    const int K = config.n_users;
    const int S = config.streams_per_user;
    const int NR = config.n_rx;
    if (static_cast<int>(geometry.user_positions.size()) != K)
        throw std::invalid_argument("assemble_links: geometry user count does not match config");
    if (static_cast<int>(geometry.tx_positions.size()) != config.n_tx)
        throw std::invalid_argument("assemble_links: geometry transmitter size does not match config");

    ChannelSet cs;
    cs.n_users = K;
    cs.streams_per_user = S;
    cs.h = los_channel(geometry.tx_positions, geometry.ris_positions, config.wavelength, config.beta);
    cs.f_k = oam_mode_matrix(NR, S);

    cs.f = CMatrix::Zero(static_cast<Index>(K) * NR, static_cast<Index>(K) * S);
    for (int k = 0; k < K; ++k)
        cs.f.block(static_cast<Index>(k) * NR, static_cast<Index>(k) * S, NR, S) = cs.f_k;

    const Index M = cs.h.rows();
    cs.b.resize(static_cast<Index>(K) * S, M);
    for (int k = 0; k < K; ++k)
    {
        if (static_cast<int>(geometry.user_positions[static_cast<std::size_t>(k)].size()) != NR)
            throw std::invalid_argument("assemble_links: user ring size does not match n_rx");
        cs.g.push_back(los_channel(geometry.ris_positions, geometry.user_positions[static_cast<std::size_t>(k)],
                                   config.wavelength, config.beta));
        cs.b.middleRows(static_cast<Index>(k) * S, S) = cs.f_k.adjoint() * cs.g.back();
    }
    if (cs.f.rows() != cs.h.cols())
        throw std::invalid_argument("assemble_links: K * N_R must equal N_T");
    cs.z = cs.h * cs.f;
    return cs;
}

// Gamma = sum_m phi_m b_m z_m^H, evaluated as B diag(phi) Z.
inline CMatrix effective_channel(const ChannelSet &channels, const ReflectionPattern &pattern)
{
    if (pattern.size() != channels.b.cols())
        throw std::invalid_argument("effective_channel: pattern length does not match RIS size");
    return (channels.b * pattern.phases.asDiagonal()) * channels.z;
}

// Row block of user k (S rows).
inline CMatrix user_rows(const CMatrix &gamma, int k, int streams)
{
    return gamma.middleRows(static_cast<Index>(k) * streams, streams);
}

} // namespace oamris
