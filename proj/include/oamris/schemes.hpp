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
#include "oamris/geometry.hpp"
#include "oamris/metrics.hpp"
#include "oamris/precoder.hpp"
#include "oamris/random.hpp"
#include "oamris/ris_opt.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace oamris
{

enum class SchemeName
{
    proposed,
    uca_mimo_mrt,
    uca_mimo_zf,
    uca_mimo_mmse,
    random_phase_oam
};

enum class RisMode
{
    optimized,
    random_fixed
};

enum class PrecoderMode
{
    three_layer,
    mrt,
    zf,
    mmse
};

struct SchemeDescriptor
{
    SchemeName name = SchemeName::proposed;
    RisMode ris_mode = RisMode::optimized;
    PrecoderMode precoder_mode = PrecoderMode::three_layer;
};

inline constexpr std::array<SchemeName, 5> kAllSchemes = {SchemeName::proposed, SchemeName::uca_mimo_mrt,
                                                          SchemeName::uca_mimo_zf, SchemeName::uca_mimo_mmse,
                                                          SchemeName::random_phase_oam};

inline SchemeDescriptor describe(SchemeName name)
{
    switch (name)
    {
    case SchemeName::proposed:
        return {name, RisMode::optimized, PrecoderMode::three_layer};
    case SchemeName::uca_mimo_mrt:
        return {name, RisMode::optimized, PrecoderMode::mrt};
    case SchemeName::uca_mimo_zf:
        return {name, RisMode::optimized, PrecoderMode::zf};
    case SchemeName::uca_mimo_mmse:
        return {name, RisMode::optimized, PrecoderMode::mmse};
    case SchemeName::random_phase_oam:
        return {name, RisMode::random_fixed, PrecoderMode::three_layer};
    }
    throw std::invalid_argument("describe: unknown scheme");
}

inline std::string_view scheme_label(SchemeName name)
{
    switch (name)
    {
    case SchemeName::proposed:
        return "proposed";
    case SchemeName::uca_mimo_mrt:
        return "uca-mimo-mrt";
    case SchemeName::uca_mimo_zf:
        return "uca-mimo-zf";
    case SchemeName::uca_mimo_mmse:
        return "uca-mimo-mmse";
    case SchemeName::random_phase_oam:
        return "random-phase-oam";
    }
    return "unknown";
}

inline SchemeName parse_scheme(std::string_view label)
{
    for (SchemeName s : kAllSchemes)
        if (scheme_label(s) == label)
            return s;
    throw std::invalid_argument("unknown scheme '" + std::string(label) +
                                "' (expected proposed, uca-mimo-mrt, uca-mimo-zf, uca-mimo-mmse or random-phase-oam)");
}

struct SchemeOutcome
{
    RateReport report;
    ConvergenceTrace trace;
    ReflectionPattern pattern;
    CMatrix gamma; // effective channel under the final pattern
    CMatrix w;
    std::string warning;
};

struct BaselineDesign
{
    CMatrix w;
};

// Runs one scheme on prepared channels from `initial` (the random start of the
// alternation, or the fixed pattern of random-phase-oam).
inline SchemeOutcome run_scheme_on(const SchemeDescriptor &desc, const SystemConfig &config,
                                   const ChannelSet &channels, const ReflectionPattern &initial)
{
    AlternationOptions opt = alternation_options(config);
    SchemeOutcome out;
    auto finish = [&](auto &&result) {
        out.report = std::move(result.report);
        out.trace = std::move(result.trace);
        out.pattern = std::move(result.pattern);
        out.w = std::move(result.w);
        out.gamma = effective_channel(channels, out.pattern);
    };

    if (desc.precoder_mode == PrecoderMode::three_layer)
    {
        opt.optimize_ris = desc.ris_mode == RisMode::optimized;
        finish(alternate_with(channels, initial, opt,
                              ThreeLayerDesigner{config.n_users, config.streams_per_user, config.sigma2, config.p_t}));
        return out;
    }

    if (desc.ris_mode != RisMode::optimized)
        throw std::invalid_argument("run_scheme: baseline precoders are paired with the optimized RIS");
    const BaselineKind kind = desc.precoder_mode == PrecoderMode::mrt  ? BaselineKind::mrt
                              : desc.precoder_mode == PrecoderMode::zf ? BaselineKind::zf
                                                                       : BaselineKind::mmse;
    std::string warning;
    auto designer = [&](const CMatrix &gamma) {
        std::string w_msg;
        BaselineDesign d{baseline_precoder(kind, gamma, config.p_t, config.sigma2, &w_msg)};
        if (!w_msg.empty())
            warning = w_msg;
        return d;
    };
    finish(alternate_with(channels, initial, opt, designer));
    out.warning = warning;
    return out;
}

// Builds the channels for `geometry` and draws the starting pattern from `rng`.
inline SchemeOutcome run_scheme(const SchemeDescriptor &desc, const SystemConfig &config,
                                const ScenarioGeometry &geometry, Rng &rng)
{
    const ChannelSet channels = assemble_links(geometry, config);
    const ReflectionPattern initial = ReflectionPattern::random(channels.elements(), rng);
    return run_scheme_on(desc, config, channels, initial);
}

} // namespace oamris
