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
#include "oamris/config.hpp"
#include "oamris/metrics.hpp"
#include "oamris/numerics.hpp"
#include "oamris/precoder.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

// Element-wise RIS phase optimization under a fixed transmit covariance R = W W^H,
// and the outer alternation between precoder design and RIS sweeps.
//
// With Zbar = Z R^{1/2} and z'_m^H its m-th row, the log-det objective as a function
// of one coefficient is
//   f_m(phi) = log2 det(J_m + phi O_m + conj(phi) O_m^H),
//   J_m = I + (A_m A_m^H + |z'_m|^2 b_m b_m^H) / sigma2,   O_m = b_m z'_m^H A_m^H / sigma2,
// where A_m = sum_{i != m} phi_i b_i z'_i^H. O_m is rank one, and the unit-modulus
// maximizer is exp(-j arg eps_m) with eps_m the non-zero eigenvalue of J_m^{-1} O_m.

namespace oamris
{

// Hermitian square root of W W^H (eigenvalues clamped at zero). Any right-unitary
// rotation of it gives the same objective.
inline CMatrix covariance_root(const CMatrix &w)
{
    require_finite(w, "covariance_root");
    CMatrix r = w * w.adjoint();
    r = 0.5 * (r + r.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> evd(r);
    if (evd.info() != Eigen::Success)
        throw NumericsError("covariance_root: eigendecomposition failed");
    const RVector root = evd.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return evd.eigenvectors() * root.asDiagonal() * evd.eigenvectors().adjoint();
}

struct RisWorkspace
{
    CMatrix root;      // R^{1/2}
    CMatrix z_bar;     // M x (K S), Z R^{1/2}
    CMatrix a_current; // sum_i phi_i b_i z'_i^H
};

inline RisWorkspace make_workspace(const ChannelSet &channels, const ReflectionPattern &pattern, const CMatrix &w)
{
    RisWorkspace ws;
    ws.root = covariance_root(w);
    ws.z_bar = channels.z * ws.root;
    ws.a_current = (channels.b * pattern.phases.asDiagonal()) * ws.z_bar;
    return ws;
}

// log2 det(I + A A^H / sigma2) for the workspace's current A.
inline double ris_objective(const RisWorkspace &ws, double sigma2)
{
    const Index n = ws.a_current.rows();
    CMatrix m = CMatrix::Identity(n, n) + ws.a_current * ws.a_current.adjoint() / sigma2;
    return log2_det_hpd(0.5 * (m + m.adjoint()));
}

// J_m and the rank-one factors of O_m = u v^H for element m. `a_without_m` must
// exclude element m's term.
struct ElementTerms
{
    CMatrix j;
    CVector u; // b_m / sigma2
    CVector v; // A_m z'_m
};

inline ElementTerms element_terms(const CMatrix &a_without_m, const CVector &b_m, const CVector &zbar_row_m,
                                  double sigma2)
{
    // zbar_row_m holds the row z'_m^H as a column vector of its entries.
    const Index n = a_without_m.rows();
    ElementTerms t;
    const double zz = zbar_row_m.squaredNorm();
    t.j = CMatrix::Identity(n, n) + (a_without_m * a_without_m.adjoint() + zz * (b_m * b_m.adjoint())) / sigma2;
    t.j = 0.5 * (t.j + t.j.adjoint());
    t.u = b_m / sigma2;
    t.v = a_without_m * zbar_row_m.conjugate();
    return t;
}

// log2 det(J + phi O + conj(phi) O^H).
inline double phase_objective(const CMatrix &j, const CMatrix &o, Complex phi)
{
    CMatrix m = j + phi * o + std::conj(phi) * o.adjoint();
    m = 0.5 * (m + m.adjoint());
    return log2_det_hpd(m);
}

// exp(-j arg eps) for eps = v^H J^{-1} u; keeps `previous` when eps vanishes.
inline Complex optimal_phase(const CMatrix &j, const CVector &u, const CVector &v, Complex previous)
{
    const Complex eps = rank_one_eigenvalue(j, u, v);
    if (eps == Complex(0.0, 0.0))
        return previous;
    return unit_phasor(-arg_or_zero(eps));
}

// Best unit-modulus phi_m given that ws.a_current already excludes element m.
inline Complex element_update(Index m, const RisWorkspace &ws, const CMatrix &b, double sigma2, Complex previous)
{
    const CVector b_m = b.col(m);
    const CVector z_row = ws.z_bar.row(m).transpose();
    const ElementTerms t = element_terms(ws.a_current, b_m, z_row, sigma2);
    return optimal_phase(t.j, t.u, t.v, previous);
}

// One ascending pass over all elements with rank-one downdate/update of A.
inline ReflectionPattern sweep(const ReflectionPattern &pattern, RisWorkspace &ws, const CMatrix &b, double sigma2)
{
    if (pattern.size() != b.cols() || ws.z_bar.rows() != b.cols())
        throw std::invalid_argument("sweep: pattern / workspace / B sizes disagree");
    ReflectionPattern out = pattern;
    for (Index m = 0; m < out.size(); ++m)
    {
        const CMatrix term = b.col(m) * ws.z_bar.row(m);
        ws.a_current -= out.phases(m) * term;
        out.phases(m) = element_update(m, ws, b, sigma2, out.phases(m));
        ws.a_current += out.phases(m) * term;
    }
    return out;
}

enum class TerminalStatus
{
    converged,
    max_iters
};

struct ConvergenceTrace
{
    std::vector<double> sum_rates; // one per accepted outer iteration
    int iterations = 0;            // precoder builds performed
    TerminalStatus status = TerminalStatus::max_iters;
    int rejected = 0; // iterations whose rebuilt precoder lowered the sum rate

    bool converged() const { return status == TerminalStatus::converged; }
};

struct AlternationOptions
{
    int n_users = 0;
    int streams = 0;
    double sigma2 = 1.0;
    double p_t = 1.0;
    int max_iters = 50;
    double eps = 1e-3;
    bool optimize_ris = true;
};

inline AlternationOptions alternation_options(const SystemConfig &config)
{
    return {config.n_users, config.streams_per_user, config.sigma2, config.p_t, config.max_iters, config.eps, true};
}

template <typename Design>
struct AlternationResult
{
    Design design;
    CMatrix w;
    ReflectionPattern pattern;
    ConvergenceTrace trace;
    RateReport report;
};

// Outer loop. Each iteration builds a precoder for the current pattern (`designer`
// maps Gamma to a Design exposing `.w`), records the stream sum rate of that matched
// pair, then sweeps the RIS under the fixed W. It stops when the gain over the
// previous iteration is <= eps or after max_iters builds. An iteration whose rebuilt
// precoder lowers the sum rate is rejected: the previous pair is kept and the loop
// stops as converged, so the recorded trace never decreases.
template <typename Designer>
auto alternate_with(const ChannelSet &channels, const ReflectionPattern &initial, const AlternationOptions &opt,
                    Designer &&designer)
{
    using Design = std::decay_t<decltype(designer(std::declval<const CMatrix &>()))>;
    if (initial.size() != channels.elements())
        throw std::invalid_argument("alternate: initial pattern length does not match RIS size");
    if (opt.max_iters < 1)
        throw std::invalid_argument("alternate: max_iters must be >= 1");

    ReflectionPattern current = initial;
    std::optional<AlternationResult<Design>> best;
    ConvergenceTrace trace;

    for (int it = 1; it <= opt.max_iters; ++it)
    {
        const CMatrix gamma = effective_channel(channels, current);
        Design design = designer(gamma);
        RateReport rep = evaluate_rates(gamma, design.w, opt.sigma2, opt.n_users, opt.streams);
        trace.iterations = it;

        if (best && rep.sum_rate < best->report.sum_rate)
        {
            ++trace.rejected;
            trace.status = TerminalStatus::converged;
            break;
        }

        const double gain = best ? rep.sum_rate - best->report.sum_rate : 0.0;
        trace.sum_rates.push_back(rep.sum_rate);
        CMatrix w = design.w;
        best = AlternationResult<Design>{std::move(design), std::move(w), current, {}, std::move(rep)};

        if (it > 1 && gain <= opt.eps)
        {
            trace.status = TerminalStatus::converged;
            break;
        }
        if (!opt.optimize_ris)
        {
            trace.status = TerminalStatus::converged;
            break;
        }
        RisWorkspace ws = make_workspace(channels, current, best->w);
        current = sweep(current, ws, channels.b, opt.sigma2);
        if (it == opt.max_iters)
            trace.status = TerminalStatus::max_iters;
    }
    best->trace = std::move(trace);
    return std::move(*best);
}

struct ThreeLayerDesigner
{
    int n_users;
    int streams;
    double sigma2;
    double p_t;
    PrecoderStack operator()(const CMatrix &gamma) const { return design_precoder(gamma, n_users, streams, sigma2, p_t); }
};

// Joint precoder / reflector design with the three-layer precoder.
inline AlternationResult<PrecoderStack> alternate(const SystemConfig &config, const ChannelSet &channels,
                                                  const ReflectionPattern &initial)
{
    const AlternationOptions opt = alternation_options(config);
    return alternate_with(channels, initial, opt,
                          ThreeLayerDesigner{config.n_users, config.streams_per_user, config.sigma2, config.p_t});
}

} // namespace oamris
