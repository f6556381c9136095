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

// simulate: seeded Monte Carlo sweeps of the RIS-assisted OAM downlink, written as CSV.

#include "oamris/harness.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char **argv)
{
    CLI::App app{"RIS-assisted multi-user OAM downlink sweep runner"};
    app.set_version_flag("--version", "oamris 0.1.0");

    std::string config_path;
    std::optional<std::string> sweep;
    std::optional<std::string> values;
    std::optional<std::string> schemes;
    std::optional<int> trials;
    std::string out_path;
    std::string trace_dir;
    std::optional<std::string> seed_text;
    unsigned jobs = 1;
    bool timing = false;
    bool quiet = false;

    app.add_option("--config", config_path, "Config file (key = value lines); omit for defaults")
        ->check(CLI::ExistingFile);
    app.add_option("--sweep", sweep, "Swept variable: p_t_db, m_elements, n_tx or k_users");
    app.add_option("--values", values, "Comma-separated, strictly increasing values");
    app.add_option("--schemes", schemes,
                   "Comma-separated schemes: proposed, uca-mimo-mrt, uca-mimo-zf, uca-mimo-mmse, random-phase-oam");
    app.add_option("--trials", trials, "Seeds per point")->check(CLI::PositiveNumber);
    app.add_option("--out", out_path, "Output CSV path")->required();
    app.add_option("--trace-dir", trace_dir, "Directory for per-cell convergence traces");
    app.add_option("--seed", seed_text, "Master seed (overrides OAM_SIM_SEED and the config)");
    app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--timing", timing, "Write measured wall_ms instead of 0");
    app.add_flag("-q,--quiet", quiet, "Suppress the summary");
    CLI11_PARSE(app, argc, argv);

    try
    {
        oamris::LoadedConfig cfg =
            config_path.empty() ? oamris::parse_config_text("") : oamris::load_config(config_path);

        if (const char *env = std::getenv("OAM_SIM_SEED"); env && *env)
            cfg.system.seed = oamris::detail::parse_u64("OAM_SIM_SEED", env);
        if (seed_text)
            cfg.system.seed = oamris::detail::parse_u64("--seed", *seed_text);
        if (sweep)
            cfg.sweep.variable = oamris::parse_variable(*sweep);
        if (values)
            cfg.sweep.values = oamris::parse_value_list(*values);
        if (schemes)
            cfg.sweep.schemes = oamris::parse_scheme_list(*schemes);
        if (trials)
            cfg.sweep.trials = *trials;
        cfg.sweep.validate();

        oamris::SweepOptions options;
        options.trace_dir = trace_dir;
        options.jobs = jobs;
        options.log = &std::cerr;
        const auto records = oamris::run_sweep(cfg, options);
        oamris::write_csv(records, out_path, timing);

        if (!quiet)
        {
            std::size_t failed = 0;
            for (const auto &r : records)
                failed += r.failed ? 1 : 0;
            std::cerr << "wrote " << records.size() << " records to " << out_path;
            if (failed)
                std::cerr << " (" << failed << " failed)";
            std::cerr << "\n";
        }
    }
    catch (const oamris::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
