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

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace oamris
{

using Point3 = Eigen::Vector3d;

class ConfigError : public std::invalid_argument
{
  public:
    ConfigError(const std::string &field, const std::string &constraint)
        : std::invalid_argument(field + ": " + constraint), field_(field)
    {
    }
    const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// All scalar parameters of one simulated system. Lengths in meters, powers in watts.
struct SystemConfig
{
    int n_tx = 20;            // transmit UCA elements
    int n_users = 4;          // K
    int n_rx = 5;             // per-user UCA elements
    int streams_per_user = 4; // S, one OAM mode per stream
    int m_y = 10;             // RIS columns
    int m_z = 6;              // RIS rows

    double r_t = 1.0;
    double r_r = 0.2;
    double wavelength = 0.06;
    double beta = 1.0;
    double d_y = 0.03;
    double d_z = 0.03;

    double p_t = 10.0;    // 10 dBW
    double sigma2 = 1e-13; // -100 dBm, roughly kTB over 20 MHz at 290 K

    Point3 ris_center{5.0, 2.0, 1.0};
    Point3 user_region_center{10.0, 2.0, 1.0};
    double user_region_radius = 2.0;

    std::uint64_t seed = 1;
    int max_iters = 50;
    double eps = 1e-3; // bits/s/Hz

    int m_elements() const { return m_y * m_z; }
    int total_streams() const { return n_users * streams_per_user; }

    void validate() const
    {
        auto positive_int = [](int v, const char *name) {
            if (v < 1)
                throw ConfigError(name, "must be >= 1 (got " + std::to_string(v) + ")");
        };
        auto positive = [](double v, const char *name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(name, "must be finite and > 0 (got " + std::to_string(v) + ")");
        };
        positive_int(n_tx, "n_tx");
        positive_int(n_users, "n_users");
        positive_int(n_rx, "n_rx");
        positive_int(streams_per_user, "streams_per_user");
        positive_int(m_y, "m_y");
        positive_int(m_z, "m_z");
        positive_int(max_iters, "max_iters");
        if (n_tx != n_users * n_rx)
            throw ConfigError("n_tx", "must equal n_users * n_rx (" + std::to_string(n_tx) +
                                          " != " + std::to_string(n_users) + " * " + std::to_string(n_rx) + ")");
        if (streams_per_user > n_rx)
            throw ConfigError("streams_per_user", "must not exceed n_rx (" + std::to_string(streams_per_user) +
                                                      " > " + std::to_string(n_rx) + ")");
        positive(r_t, "r_t");
        positive(r_r, "r_r");
        positive(wavelength, "wavelength");
        positive(beta, "beta");
        positive(d_y, "d_y");
        positive(d_z, "d_z");
        positive(p_t, "p_t");
        positive(sigma2, "sigma2");
        positive(user_region_radius, "user_region_radius");
        if (!(eps >= 0.0))
            throw ConfigError("eps", "must be >= 0");
        if (!ris_center.allFinite())
            throw ConfigError("ris_center", "must be finite");
        if (!user_region_center.allFinite())
            throw ConfigError("user_region_center", "must be finite");
    }
};

} // namespace oamris
