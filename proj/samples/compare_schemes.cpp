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

// Runs every scheme once on one seeded scenario and prints the per-user rates.

#include "oamris/harness.hpp"

#include <cstdio>

int main()
{
    const oamris::LoadedConfig cfg = oamris::parse_config_text("");
    const std::uint64_t seed = oamris::scenario_seed(cfg.system.seed, 0, 0, 0);

    std::printf("N_T=%d K=%d N_R=%d S=%d M=%d P_T=%.1f dBW sigma2=%.3g W\n", cfg.system.n_tx, cfg.system.n_users,
                cfg.system.n_rx, cfg.system.streams_per_user, cfg.system.m_elements(),
                oamris::linear_to_db(cfg.system.p_t), cfg.system.sigma2);
    for (oamris::SchemeName s : oamris::kAllSchemes)
    {
        const oamris::SchemeOutcome out = oamris::run_cell(cfg.system, s, seed);
        std::printf("%-17s sum %8.3f bit/s/Hz  iters %2d  users", std::string(oamris::scheme_label(s)).c_str(),
                    out.report.sum_rate, out.trace.iterations);
        for (oamris::Index k = 0; k < out.report.per_user_rate.size(); ++k)
            std::printf(" %7.3f", out.report.per_user_rate(k));
        std::printf("\n");
    }
    return 0;
}
