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
#include "oamris/random.hpp"
#include "oamris/schemes.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

// Config ingestion, seeded Monte Carlo sweeps and CSV output.
//
// Config files are flat "key = value" text, one entry per line, '#' starts a comment.
// Points are written "x, y, z". An empty file yields the default system.

namespace oamris
{

enum class SweepVariable
{
    p_t_db,
    m_elements,
    n_tx,
    k_users
};

inline std::string_view variable_label(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::p_t_db:
        return "p_t_db";
    case SweepVariable::m_elements:
        return "m_elements";
    case SweepVariable::n_tx:
        return "n_tx";
    case SweepVariable::k_users:
        return "k_users";
    }
    return "unknown";
}

inline SweepVariable parse_variable(std::string_view s)
{
    for (auto v : {SweepVariable::p_t_db, SweepVariable::m_elements, SweepVariable::n_tx, SweepVariable::k_users})
        if (variable_label(v) == s)
            return v;
    throw ConfigError("sweep", "unknown variable '" + std::string(s) + "' (expected p_t_db, m_elements, n_tx or k_users)");
}

struct SweepSpec
{
    SweepVariable variable = SweepVariable::p_t_db;
    std::vector<double> values{10.0};
    std::vector<SchemeName> schemes{SchemeName::proposed};
    int trials = 1;

    void validate() const
    {
        if (values.empty())
            throw ConfigError("values", "must not be empty");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (!(values[i] > values[i - 1]))
                throw ConfigError("values", "must be strictly increasing");
        if (schemes.empty())
            throw ConfigError("schemes", "must not be empty");
        if (trials < 1)
            throw ConfigError("trials", "must be >= 1");
    }
};

// A validated base system plus how it reacts to sweep overrides.
struct LoadedConfig
{
    SystemConfig system;
    SweepSpec sweep;
    bool streams_auto = true; // S = min(K, N_R) whenever K or N_R changes
};

namespace detail
{
inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

inline double parse_double(const std::string &key, const std::string &text)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument("trailing characters");
        return v;
    }
    catch (const std::exception &)
    {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
}

inline long long parse_int(const std::string &key, const std::string &text)
{
    const double v = parse_double(key, text);
    if (v != std::floor(v) || std::abs(v) > 9e15)
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    return static_cast<long long>(v);
}

inline std::uint64_t parse_u64(const std::string &key, const std::string &text)
{
    try
    {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used, 0);
        if (used != text.size() || text.front() == '-')
            throw std::invalid_argument("bad");
        return v;
    }
    catch (const std::exception &)
    {
        throw ConfigError(key, "expected an unsigned 64-bit integer, got '" + text + "'");
    }
}

inline Point3 parse_point(const std::string &key, const std::string &text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 3)
        throw ConfigError(key, "expected three comma-separated coordinates, got '" + text + "'");
    return {parse_double(key, parts[0]), parse_double(key, parts[1]), parse_double(key, parts[2])};
}
} // namespace detail

inline std::vector<double> parse_value_list(const std::string &text)
{
    std::vector<double> out;
    for (const auto &p : detail::split(text, ','))
        out.push_back(detail::parse_double("values", p));
    return out;
}

inline std::vector<SchemeName> parse_scheme_list(const std::string &text)
{
    std::vector<SchemeName> out;
    for (const auto &p : detail::split(text, ','))
    {
        try
        {
            out.push_back(parse_scheme(p));
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError("schemes", e.what());
        }
    }
    return out;
}

// Applies K / N_R / M derived quantities and validates.
inline void finalize_system(SystemConfig &sys, bool streams_auto)
{
    if (streams_auto)
        sys.streams_per_user = std::min(sys.n_users, sys.n_rx);
    sys.validate();
}

inline LoadedConfig parse_config_text(const std::string &text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        if (!kv.emplace(key, value).second)
            throw ConfigError(key, "specified more than once");
    }

    LoadedConfig cfg;
    SystemConfig &s = cfg.system;
    auto take = [&](const char *key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end())
            return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_int = [&](const char *key, int &dst) {
        if (auto v = take(key))
        {
            const long long x = detail::parse_int(key, *v);
            if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
                throw ConfigError(key, "out of range");
            dst = static_cast<int>(x);
        }
    };
    auto take_double = [&](const char *key, double &dst) {
        if (auto v = take(key))
            dst = detail::parse_double(key, *v);
    };

    take_int("n_tx", s.n_tx);
    take_int("n_users", s.n_users);
    take_int("n_rx", s.n_rx);
    if (auto v = take("streams_per_user"))
    {
        if (*v != "auto")
        {
            const long long x = detail::parse_int("streams_per_user", *v);
            s.streams_per_user = static_cast<int>(x);
            cfg.streams_auto = false;
        }
    }

    const auto m_total = take("m_elements");
    const bool has_mz = kv.count("m_z") > 0;
    take_int("m_y", s.m_y);
    take_int("m_z", s.m_z);
    if (m_total)
    {
        const long long m = detail::parse_int("m_elements", *m_total);
        if (m < 1)
            throw ConfigError("m_elements", "must be >= 1");
        if (s.m_y < 1 || m % s.m_y != 0)
            throw ConfigError("m_elements", "must be divisible by m_y (" + std::to_string(m) + " % " +
                                                std::to_string(s.m_y) + " != 0)");
        const int inferred = static_cast<int>(m / s.m_y);
        if (has_mz && inferred != s.m_z)
            throw ConfigError("m_z", "inconsistent with m_elements / m_y");
        s.m_z = inferred;
    }

    take_double("r_t", s.r_t);
    take_double("r_r", s.r_r);
    take_double("wavelength", s.wavelength);
    s.d_y = s.d_z = s.wavelength / 2.0;
    take_double("beta", s.beta);
    take_double("d_y", s.d_y);
    take_double("d_z", s.d_z);

    const auto pt_db = take("p_t_db");
    const auto pt_w = take("p_t");
    if (pt_db && pt_w)
        throw ConfigError("p_t", "give either p_t (W) or p_t_db (dBW), not both");
    if (pt_db)
        s.p_t = db_to_linear(detail::parse_double("p_t_db", *pt_db));
    if (pt_w)
        s.p_t = detail::parse_double("p_t", *pt_w);
    take_double("sigma2", s.sigma2);

    if (auto v = take("ris_center"))
        s.ris_center = detail::parse_point("ris_center", *v);
    if (auto v = take("user_region_center"))
        s.user_region_center = detail::parse_point("user_region_center", *v);
    take_double("user_region_radius", s.user_region_radius);
    if (auto v = take("seed"))
        s.seed = detail::parse_u64("seed", *v);
    take_int("max_iters", s.max_iters);
    take_double("eps", s.eps);

    if (auto v = take("sweep"))
        cfg.sweep.variable = parse_variable(*v);
    if (auto v = take("values"))
        cfg.sweep.values = parse_value_list(*v);
    if (auto v = take("schemes"))
        cfg.sweep.schemes = parse_scheme_list(*v);
    take_int("trials", cfg.sweep.trials);

    if (!kv.empty())
        throw ConfigError(kv.begin()->first, "unknown key");

    finalize_system(s, cfg.streams_auto);
    cfg.sweep.validate();
    return cfg;
}

inline LoadedConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_config: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// System for one swept value. N_T sweeps keep K and set N_R = N_T / K; K sweeps keep
// N_R and set N_T = K N_R; M sweeps keep m_y and set m_z = M / m_y.
inline SystemConfig apply_sweep_value(const LoadedConfig &base, SweepVariable var, double value)
{
    SystemConfig s = base.system;
    auto as_int = [&](const char *field) {
        if (value != std::floor(value) || value < 1.0)
            throw ConfigError(field, "sweep value must be a positive integer");
        return static_cast<int>(value);
    };
    switch (var)
    {
    case SweepVariable::p_t_db:
        s.p_t = db_to_linear(value);
        break;
    case SweepVariable::m_elements: {
        const int m = as_int("m_elements");
        if (m % s.m_y != 0)
            throw ConfigError("m_elements", "sweep value " + std::to_string(m) + " not divisible by m_y");
        s.m_z = m / s.m_y;
        break;
    }
    case SweepVariable::n_tx: {
        const int n = as_int("n_tx");
        if (n % s.n_users != 0)
            throw ConfigError("n_tx", "sweep value " + std::to_string(n) + " not divisible by n_users");
        s.n_tx = n;
        s.n_rx = n / s.n_users;
        break;
    }
    case SweepVariable::k_users:
        s.n_users = as_int("k_users");
        s.n_tx = s.n_users * s.n_rx;
        break;
    }
    finalize_system(s, base.streams_auto);
    return s;
}

struct ResultRecord
{
    std::string scheme;
    std::uint64_t seed = 0; // scenario seed actually used
    SweepVariable variable = SweepVariable::p_t_db;
    double value = 0.0;
    double sum_rate = 0.0;
    std::vector<double> per_user_rates;
    int iterations = 0;
    bool converged = false;
    double wall_ms = 0.0;
    // Not part of the CSV.
    int trial = 0;
    int resamples = 0;
    bool failed = false;
    std::vector<double> trace;
};

inline constexpr int kMaxResamples = 10;
inline constexpr std::uint64_t kPatternStream = 0x5249535048415345ULL;

inline std::uint64_t scenario_seed(std::uint64_t master, std::size_t value_index, int trial, int attempt)
{
    return mix_seed({master, static_cast<std::uint64_t>(value_index), static_cast<std::uint64_t>(trial),
                     static_cast<std::uint64_t>(attempt)});
}

// Geometry from Rng(seed); starting RIS pattern from Rng(mix_seed({seed, kPatternStream})).
// Every scheme of one trial therefore sees the same users and the same start.
inline SchemeOutcome run_cell(const SystemConfig &system, SchemeName scheme, std::uint64_t seed)
{
    Rng geo_rng(seed);
    const ScenarioGeometry geometry = build_geometry(system, sample_user_poses(system, geo_rng));
    Rng pattern_rng(mix_seed({seed, kPatternStream}));
    return run_scheme(describe(scheme), system, geometry, pattern_rng);
}

struct SweepOptions
{
    std::filesystem::path trace_dir; // empty: no traces
    unsigned jobs = 1;
    std::ostream *log = nullptr;
};

inline std::string trace_file_name(const ResultRecord &r)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", r.value);
    return std::string(r.scheme) + "_" + std::string(variable_label(r.variable)) + "-" + buf + "_t" +
           std::to_string(r.trial) + ".csv";
}

inline void write_trace(const std::filesystem::path &dir, const ResultRecord &r)
{
    std::filesystem::create_directories(dir);
    const auto path = dir / trace_file_name(r);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_trace: cannot open " + path.string());
    out << "iteration,sum_rate\n";
    char buf[64];
    for (std::size_t i = 0; i < r.trace.size(); ++i)
    {
        std::snprintf(buf, sizeof buf, "%zu,%.9g\n", i + 1, r.trace[i]);
        out << buf;
    }
    if (!out)
        throw std::runtime_error("write_trace: write failed for " + path.string());
}

inline std::vector<ResultRecord> run_sweep(const LoadedConfig &cfg, const SweepOptions &options = {})
{
    const SweepSpec &spec = cfg.sweep;
    spec.validate();
    std::vector<SystemConfig> systems;
    for (double v : spec.values)
        systems.push_back(apply_sweep_value(cfg, spec.variable, v));

    struct Cell
    {
        std::size_t value_index;
        SchemeName scheme;
        int trial;
    };
    std::vector<Cell> cells;
    for (std::size_t vi = 0; vi < spec.values.size(); ++vi)
        for (SchemeName s : spec.schemes)
            for (int t = 0; t < spec.trials; ++t)
                cells.push_back({vi, s, t});

    std::vector<ResultRecord> records(cells.size());
    std::mutex log_mutex;
    auto run_one = [&](std::size_t idx) {
        const Cell &c = cells[idx];
        ResultRecord r;
        r.scheme = std::string(scheme_label(c.scheme));
        r.variable = spec.variable;
        r.value = spec.values[c.value_index];
        r.trial = c.trial;
        const auto t0 = std::chrono::steady_clock::now();
        for (int attempt = 0; attempt <= kMaxResamples; ++attempt)
        {
            r.seed = scenario_seed(cfg.system.seed, c.value_index, c.trial, attempt);
            r.resamples = attempt;
            try
            {
                const SchemeOutcome out = run_cell(systems[c.value_index], c.scheme, r.seed);
                r.sum_rate = out.report.sum_rate;
                r.per_user_rates.assign(out.report.per_user_rate.data(),
                                        out.report.per_user_rate.data() + out.report.per_user_rate.size());
                r.iterations = out.trace.iterations;
                r.converged = out.trace.converged();
                r.trace = out.trace.sum_rates;
                r.failed = false;
                break;
            }
            catch (const DegenerateChannel &e)
            {
                r.failed = true;
                if (options.log)
                {
                    std::lock_guard lock(log_mutex);
                    *options.log << "resample: " << r.scheme << " " << variable_label(r.variable) << "=" << r.value
                                 << " trial " << r.trial << " attempt " << attempt << ": " << e.what() << "\n";
                }
            }
        }
        if (r.failed)
        {
            r.sum_rate = std::numeric_limits<double>::quiet_NaN();
            r.per_user_rates.assign(static_cast<std::size_t>(systems[c.value_index].n_users),
                                    std::numeric_limits<double>::quiet_NaN());
            r.iterations = 0;
            r.converged = false;
            if (options.log)
            {
                std::lock_guard lock(log_mutex);
                *options.log << "failed: " << r.scheme << " " << variable_label(r.variable) << "=" << r.value
                             << " trial " << r.trial << " after " << kMaxResamples << " resamples\n";
            }
        }
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        records[idx] = std::move(r);
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(cells.size())));
    if (jobs <= 1)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
            run_one(i);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back([&, j] {
                try
                {
                    for (std::size_t i = next++; i < cells.size(); i = next++)
                        run_one(i);
                }
                catch (...)
                {
                    errors[j] = std::current_exception();
                }
            });
        for (auto &t : pool)
            t.join();
        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    if (!options.trace_dir.empty())
        for (const auto &r : records)
            if (!r.failed)
                write_trace(options.trace_dir, r);
    return records;
}

inline void sort_records(std::vector<ResultRecord> &records)
{
    std::stable_sort(records.begin(), records.end(), [](const ResultRecord &a, const ResultRecord &b) {
        if (a.value != b.value)
            return a.value < b.value;
        if (a.scheme != b.scheme)
            return a.scheme < b.scheme;
        return a.seed < b.seed;
    });
}

// Header: scheme,seed,variable,value,sum_rate,rate_user_1..K,iterations,converged,wall_ms
// with K the largest user count present. Reals use 9 significant digits. wall_ms is
// written as 0 unless include_timing is set, which keeps the file a pure function of
// the inputs.
inline std::string format_csv(std::vector<ResultRecord> records, bool include_timing = false)
{
    sort_records(records);
    std::size_t users = 0;
    for (const auto &r : records)
        users = std::max(users, r.per_user_rates.size());

    std::string out = "scheme,seed,variable,value,sum_rate";
    for (std::size_t k = 1; k <= users; ++k)
        out += ",rate_user_" + std::to_string(k);
    out += ",iterations,converged,wall_ms\n";

    char buf[64];
    auto real = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.9g", x);
        return std::string(buf);
    };
    for (const auto &r : records)
    {
        out += r.scheme;
        out += "," + std::to_string(r.seed);
        out += "," + std::string(variable_label(r.variable));
        out += "," + real(r.value);
        out += "," + real(r.sum_rate);
        for (std::size_t k = 0; k < users; ++k)
            out += "," + (k < r.per_user_rates.size() ? real(r.per_user_rates[k]) : std::string());
        out += "," + std::to_string(r.iterations);
        out += std::string(",") + (r.converged ? "1" : "0");
        out += "," + real(include_timing ? r.wall_ms : 0.0);
        out += "\n";
    }
    return out;
}

inline void write_csv(const std::vector<ResultRecord> &records, const std::filesystem::path &path,
                      bool include_timing = false)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_csv: cannot open " + path.string());
    out << format_csv(records, include_timing);
    if (!out)
        throw std::runtime_error("write_csv: write failed for " + path.string());
}

inline std::vector<ResultRecord> parse_csv(const std::string &text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("parse_csv: missing header");
    const auto header = detail::split(line, ',');
    if (header.size() < 8 || header[0] != "scheme" || header[4] != "sum_rate")
        throw std::runtime_error("parse_csv: unexpected header");
    const std::size_t users = header.size() - 8;

    auto num = [](const std::string &s) {
        return s.empty() ? std::numeric_limits<double>::quiet_NaN() : std::strtod(s.c_str(), nullptr);
    };
    std::vector<ResultRecord> records;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        const auto f = detail::split(line, ',');
        if (f.size() != header.size())
            throw std::runtime_error("parse_csv: wrong field count in '" + line + "'");
        ResultRecord r;
        r.scheme = f[0];
        r.seed = std::stoull(f[1]);
        r.variable = parse_variable(f[2]);
        r.value = num(f[3]);
        r.sum_rate = num(f[4]);
        for (std::size_t k = 0; k < users; ++k)
            if (!f[5 + k].empty())
                r.per_user_rates.push_back(num(f[5 + k]));
        r.iterations = std::stoi(f[5 + users]);
        r.converged = f[6 + users] == "1";
        r.wall_ms = num(f[7 + users]);
        r.failed = std::isnan(r.sum_rate);
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace oamris
