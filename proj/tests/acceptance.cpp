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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oamris/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace oamris;

namespace
{

struct Verdict
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double a)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

CMatrix random_matrix(Index rows, Index cols, Rng &rng)
{
    CMatrix a(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            a(i, j) = Complex(rng.normal(), rng.normal());
    return a;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Effective channel and precoder for default-system trial `trial`, resampling
// degenerate draws the same way the sweep runner does.
struct Designed
{
    CMatrix gamma;
    PrecoderStack stack;
};

Designed design_trial(const SystemConfig &sys, int trial)
{
    for (int attempt = 0; attempt <= kMaxResamples; ++attempt)
    {
        const std::uint64_t seed = scenario_seed(sys.seed, 0, trial, attempt);
        Rng geo(seed);
        const ChannelSet ch = assemble_links(build_geometry(sys, sample_user_poses(sys, geo)), sys);
        Rng pr(mix_seed({seed, kPatternStream}));
        const CMatrix gamma = effective_channel(ch, ReflectionPattern::random(ch.elements(), pr));
        try
        {
            return {gamma, design_precoder(gamma, sys.n_users, sys.streams_per_user, sys.sigma2, sys.p_t)};
        }
        catch (const DegenerateChannel &)
        {
        }
    }
    throw std::runtime_error("trial " + std::to_string(trial) + " stayed degenerate");
}

Verdict interference_nulling()
{
    const auto t0 = std::chrono::steady_clock::now();
    const SystemConfig sys = parse_config_text("").system;
    const int K = sys.n_users;
    const int S = sys.streams_per_user;
    double worst_inter = 0.0;
    double worst_intra = 0.0;
    for (int trial = 0; trial < 50; ++trial)
    {
        const Designed d = design_trial(sys, trial);
        auto wk = [&](int k) { return d.stack.w.middleCols(static_cast<Index>(k) * S, S); };
        for (int i = 0; i < K; ++i)
        {
            const CMatrix gi = user_rows(d.gamma, i, S);
            const double own = (gi * wk(i)).norm();
            for (int j = 0; j < K; ++j)
            {
                if (i == j)
                    continue;
                // A user left without power has no own-signal reference; scale by the operands.
                const double ref = own > 0.0 ? own : gi.norm() * wk(j).norm();
                const double leak = (gi * wk(j)).norm();
                if (leak > 0.0)
                    worst_inter = std::max(worst_inter, ref > 0.0 ? leak / ref : INFINITY);
            }
            const CMatrix t = gi * wk(i);
            CMatrix off = t;
            off.diagonal().setZero();
            if (t.norm() > 0.0)
                worst_intra = std::max(worst_intra, off.norm() / t.norm());
        }
    }
    const double secs = seconds_since(t0);
    return {worst_inter <= 1e-8 && worst_intra <= 1e-8 && secs < 60.0,
            "worst inter-user " + fmt("%.3g", worst_inter) + ", worst intra-user " + fmt("%.3g", worst_intra) +
                " (limit 1e-8), " + fmt("%.2f", secs) + " s"};
}

Verdict waterfilling_optimality()
{
    const SystemConfig sys = parse_config_text("").system;
    double worst_level = 0.0;
    int priced_violations = 0;
    int uniform_wins = 0;
    for (int trial = 0; trial < 50; ++trial)
    {
        const Designed d = design_trial(sys, trial);
        RVector gains(d.stack.e_powers.size());
        Index r = 0;
        for (const auto &s : d.stack.sigma_tilde)
            for (Index i = 0; i < s.size(); ++i)
                gains(r++) = s(i);
        const RVector &p = d.stack.e_powers;
        double mu = -1.0;
        for (Index i = 0; i < p.size(); ++i)
            if (p(i) > 0.0)
            {
                const double level = p(i) + sys.sigma2 / (gains(i) * gains(i));
                if (mu < 0.0)
                    mu = level;
                worst_level = std::max(worst_level, std::abs(level - mu) / mu);
            }
        for (Index i = 0; i < p.size(); ++i)
            if (p(i) == 0.0 && sys.sigma2 / (gains(i) * gains(i)) < mu * (1 - 1e-12))
                ++priced_violations;
        double wf = 0.0;
        double uni = 0.0;
        const double share = sys.p_t / static_cast<double>(p.size());
        for (Index i = 0; i < p.size(); ++i)
        {
            wf += log2_1p(gains(i) * gains(i) * p(i) / sys.sigma2);
            uni += log2_1p(gains(i) * gains(i) * share / sys.sigma2);
        }
        if (wf < uni)
            ++uniform_wins;
    }
    return {worst_level <= 1e-8 && priced_violations == 0 && uniform_wins == 0,
            "worst water-level spread " + fmt("%.3g", worst_level) + " (limit 1e-8), " +
                std::to_string(priced_violations) + " inactive streams below the level, uniform better on " +
                std::to_string(uniform_wins) + "/50 seeds"};
}

Verdict element_update_optimality()
{
    Rng rng(0x0e1e);
    double worst_grid = 0.0;
    double worst_identity = 0.0;
    for (int inst = 0; inst < 50; ++inst)
    {
        const Index n = 8;
        const Index m_count = inst % 2 ? 8 : 4;
        const CMatrix b = random_matrix(n, m_count, rng);
        const CMatrix z = random_matrix(m_count, n, rng);
        const CMatrix w = random_matrix(n, n, rng);
        const double sigma2 = std::exp(rng.uniform(-1.0, 3.0));
        CVector phases(m_count);
        for (Index i = 0; i < m_count; ++i)
            phases(i) = unit_phasor(rng.uniform(0.0, 2 * std::numbers::pi));

        const CMatrix root = covariance_root(w);
        const CMatrix z_bar = z * root;
        const Index m = inst % m_count;
        CMatrix a = (b * phases.asDiagonal()) * z_bar;
        a -= phases(m) * b.col(m) * z_bar.row(m);
        const ElementTerms t = element_terms(a, b.col(m), z_bar.row(m).transpose(), sigma2);
        const CMatrix o = t.u * t.v.adjoint();
        const Complex phi = optimal_phase(t.j, t.u, t.v, phases(m));

        double grid = -INFINITY;
        for (int g = 0; g < 10000; ++g)
            grid = std::max(grid, phase_objective(t.j, o, std::polar(1.0, 2 * std::numbers::pi * g / 10000)));
        worst_grid = std::max(worst_grid, grid - phase_objective(t.j, o, phi));

        for (int r = 0; r < 100; ++r)
        {
            CVector trial = phases;
            trial(m) = unit_phasor(rng.uniform(0.0, 2 * std::numbers::pi));
            const CMatrix gamma = (b * trial.asDiagonal()) * z;
            const CMatrix cov = gamma * w * w.adjoint() * gamma.adjoint() / sigma2;
            // Direct log-det via eigenvalues, independent of the element factorization.
            Eigen::SelfAdjointEigenSolver<CMatrix> evd(CMatrix::Identity(n, n) + 0.5 * (cov + cov.adjoint()));
            double direct = 0.0;
            for (Index e = 0; e < n; ++e)
                direct += std::log2(evd.eigenvalues()(e));
            const double f = phase_objective(t.j, o, trial(m));
            worst_identity = std::max(worst_identity, std::abs(f - direct) / std::abs(direct));
        }
    }
    return {worst_grid <= 1e-6 && worst_identity <= 1e-8,
            "worst grid shortfall " + fmt("%.3g", worst_grid) + " bit/s/Hz (limit 1e-6), worst f_m vs log-det " +
                fmt("%.3g", worst_identity) + " (limit 1e-8)"};
}

std::vector<ResultRecord> sweep(const std::string &text)
{
    return run_sweep(parse_config_text(text));
}

double mean_rate(const std::vector<ResultRecord> &recs, const std::string &scheme, double value)
{
    double acc = 0.0;
    int n = 0;
    for (const auto &r : recs)
        if (r.scheme == scheme && r.value == value && !r.failed)
        {
            acc += r.sum_rate;
            ++n;
        }
    return n ? acc / n : std::numeric_limits<double>::quiet_NaN();
}

Verdict monotone_convergence()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto recs = sweep("sweep = p_t_db\nvalues = 0, 10, 20\nschemes = proposed\ntrials = 20\n");
    bool all_monotone = true;
    std::string per_power;
    bool fast_enough = true;
    for (double v : {0.0, 10.0, 20.0})
    {
        int fast = 0;
        int total = 0;
        for (const auto &r : recs)
        {
            if (r.value != v)
                continue;
            ++total;
            for (std::size_t i = 1; i < r.trace.size(); ++i)
                if (r.trace[i] < r.trace[i - 1] - 1e-9)
                    all_monotone = false;
            const double final_rate = r.trace.empty() ? 0.0 : r.trace.back();
            std::size_t reach = r.trace.size();
            for (std::size_t i = 0; i < r.trace.size(); ++i)
                if (std::abs(r.trace[i] - final_rate) <= 0.01 * std::abs(final_rate))
                {
                    reach = i + 1;
                    break;
                }
            if (!r.failed && reach <= 30)
                ++fast;
        }
        fast_enough = fast_enough && fast >= 0.9 * total;
        per_power += " P_T=" + fmt("%g", v) + "dB:" + std::to_string(fast) + "/" + std::to_string(total);
    }
    const double secs = seconds_since(t0);
    return {all_monotone && fast_enough && secs < 600.0,
            std::string("traces ") + (all_monotone ? "non-decreasing" : "DECREASE") + ", within 1% by iteration 30:" +
                per_power + ", " + fmt("%.1f", secs) + " s"};
}

Verdict reflecting_elements_trend()
{
    const auto recs = sweep("sweep = m_elements\nvalues = 20, 40, 60\nschemes = proposed\ntrials = 20\n");
    const double a = mean_rate(recs, "proposed", 20);
    const double b = mean_rate(recs, "proposed", 40);
    const double c = mean_rate(recs, "proposed", 60);
    return {a < b && b < c, "mean sum rate M=20/40/60: " + fmt("%.6g", a) + " / " + fmt("%.6g", b) + " / " +
                                fmt("%.6g", c) + " bit/s/Hz"};
}

Verdict transmit_antennas_trend()
{
    const auto recs = sweep("sweep = n_tx\nvalues = 8, 12, 16, 20\n"
                            "schemes = proposed, uca-mimo-mrt, uca-mimo-zf, uca-mimo-mmse, random-phase-oam\n"
                            "trials = 20\n");
    bool ok = true;
    std::string detail;
    for (SchemeName s : kAllSchemes)
    {
        const std::string label(scheme_label(s));
        detail += " " + label + ":";
        double prev = -INFINITY;
        bool inc = true;
        for (double v : {8.0, 12.0, 16.0, 20.0})
        {
            const double m = mean_rate(recs, label, v);
            detail += fmt(v == 8.0 ? "%.4g" : "/%.4g", m);
            inc = inc && m > prev;
            prev = m;
        }
        if (!inc)
            detail += "(not increasing)";
        ok = ok && inc;
    }
    return {ok, "mean sum rate over N_T=8/12/16/20;" + detail};
}

std::string ordering_config()
{
    return "sweep = p_t_db\nvalues = 10\nm_elements = 60\n"
           "schemes = proposed, uca-mimo-mrt, uca-mimo-zf, uca-mimo-mmse, random-phase-oam\ntrials = 20\n";
}

Verdict scheme_ordering()
{
    const auto recs = sweep(ordering_config());
    const double prop = mean_rate(recs, "proposed", 10);
    const double mmse = mean_rate(recs, "uca-mimo-mmse", 10);
    const double zf = mean_rate(recs, "uca-mimo-zf", 10);
    const double mrt = mean_rate(recs, "uca-mimo-mrt", 10);
    int seeds = 0;
    int beats = 0;
    for (const auto &p : recs)
        if (p.scheme == "proposed")
            for (const auto &q : recs)
                if (q.scheme == "random-phase-oam" && q.trial == p.trial)
                {
                    ++seeds;
                    beats += p.sum_rate > q.sum_rate ? 1 : 0;
                }
    const bool order = prop > mmse && mmse > zf && zf > mrt;
    return {order && beats == seeds,
            "means proposed " + fmt("%.4g", prop) + ", mmse " + fmt("%.4g", mmse) + ", zf " + fmt("%.4g", zf) +
                ", mrt " + fmt("%.4g", mrt) + (order ? " (ordered)" : " (order violated)") +
                "; proposed > random-phase on " + std::to_string(beats) + "/" + std::to_string(seeds) + " seeds"};
}

Verdict user_count_trend()
{
    const auto recs = sweep("sweep = k_users\nvalues = 2, 4\nn_rx = 5\nm_elements = 60\n"
                            "schemes = proposed, uca-mimo-mmse\ntrials = 20\n");
    const double p2 = mean_rate(recs, "proposed", 2);
    const double p4 = mean_rate(recs, "proposed", 4);
    const double m2 = mean_rate(recs, "uca-mimo-mmse", 2);
    const double m4 = mean_rate(recs, "uca-mimo-mmse", 4);
    const bool decreasing = p4 < p2 && m4 < m2;
    const bool widening = (p4 - m4) > (p2 - m2);
    return {decreasing && widening, "proposed K=2/4: " + fmt("%.4g", p2) + "/" + fmt("%.4g", p4) + ", mmse K=2/4: " +
                                        fmt("%.4g", m2) + "/" + fmt("%.4g", m4) + ", gap K=2 " +
                                        fmt("%.4g", p2 - m2) + " vs K=4 " + fmt("%.4g", p4 - m4)};
}

Verdict determinism()
{
    const std::string a = format_csv(sweep(ordering_config()));
    const std::string b = format_csv(sweep(ordering_config()));
    return {a == b && !a.empty(), a == b ? "repeated sweeps byte-identical (" + std::to_string(a.size()) + " bytes)"
                                         : std::string("repeated sweeps differ")};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria = {
        {"interference nulling", interference_nulling},
        {"water-filling optimality", waterfilling_optimality},
        {"per-element update optimality", element_update_optimality},
        {"monotone convergence", monotone_convergence},
        {"trend: reflecting elements", reflecting_elements_trend},
        {"trend: transmit antennas", transmit_antennas_trend},
        {"scheme ordering", scheme_ordering},
        {"trend: user count", user_count_trend},
        {"determinism", determinism},
    };
    int failed = 0;
    int index = 0;
    for (const auto &[name, run] : criteria)
    {
        ++index;
        Verdict v;
        try
        {
            v = run();
        }
        catch (const std::exception &e)
        {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
