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
#include "oamris/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

// Element positions of the transmit UCA (xy-plane, centered at the origin), the
// tilted receive UCAs and the RIS panel (a UPA in a plane of constant x).

namespace oamris
{

struct UserPose
{
    Point3 center{0.0, 0.0, 0.0};
    double theta_x = 0.0; // deflection about x, [0, pi/2)
    double theta_y = 0.0; // deflection about y, [0, pi/2)
};

struct ScenarioGeometry
{
    std::vector<Point3> tx_positions;
    std::vector<std::vector<Point3>> user_positions; // K rings of N_R points
    std::vector<Point3> ris_positions;               // z-index fastest
    std::vector<double> deflections;                 // per-user deflection angle
};

inline std::vector<Point3> transmit_uca_positions(int n_tx, double r_t)
{
    if (n_tx < 1 || !(r_t > 0.0))
        throw std::invalid_argument("transmit_uca_positions: need n_tx >= 1 and r_t > 0");
    std::vector<Point3> pts;
    pts.reserve(static_cast<std::size_t>(n_tx));
    for (int n = 0; n < n_tx; ++n)
    {
        const double a = 2.0 * std::numbers::pi * n / n_tx;
        pts.emplace_back(r_t * std::cos(a), r_t * std::sin(a), 0.0);
    }
    return pts;
}

inline double deflection_angle(double theta_x, double theta_y)
{
    const double tx = std::tan(theta_x);
    const double ty = std::tan(theta_y);
    return std::atan(std::sqrt(tx * tx + ty * ty));
}

// Ring of n_rx points around pose.center. The ring normal is (tan tx, tan ty, 1);
// point l sits at -cos(2 pi l / N_R) along b = normal x e_x and +sin(...) along c = normal x b.
inline std::vector<Point3> receiver_uca_positions(const UserPose &pose, int n_rx, double r_r)
{
    if (n_rx < 1 || !(r_r > 0.0))
        throw std::invalid_argument("receiver_uca_positions: need n_rx >= 1 and r_r > 0");
    const double half_pi = std::numbers::pi / 2.0;
    auto bad_angle = [&](double t) { return !(t >= 0.0) || !(t < half_pi); };
    if (bad_angle(pose.theta_x) || bad_angle(pose.theta_y))
        throw std::invalid_argument("receiver_uca_positions: deflection angles must lie in [0, pi/2)");

    const Point3 normal{std::tan(pose.theta_x), std::tan(pose.theta_y), 1.0};
    const Point3 b = normal.cross(Point3::UnitX());
    const Point3 c = normal.cross(b);
    const Point3 b_hat = b.normalized();
    const Point3 c_hat = c.normalized();

    std::vector<Point3> pts;
    pts.reserve(static_cast<std::size_t>(n_rx));
    for (int l = 0; l < n_rx; ++l)
    {
        const double a = 2.0 * std::numbers::pi * l / n_rx;
        pts.emplace_back(pose.center - r_r * std::cos(a) * b_hat + r_r * std::sin(a) * c_hat);
    }
    return pts;
}

inline std::vector<Point3> ris_upa_positions(const Point3 &center, int m_y, int m_z, double d_y, double d_z)
{
    if (m_y < 1 || m_z < 1 || !(d_y > 0.0) || !(d_z > 0.0))
        throw std::invalid_argument("ris_upa_positions: need m_y, m_z >= 1 and positive spacings");
    std::vector<Point3> pts;
    pts.reserve(static_cast<std::size_t>(m_y * m_z));
    for (int iy = 0; iy < m_y; ++iy)
        for (int iz = 0; iz < m_z; ++iz)
            pts.emplace_back(center.x(), center.y() + d_y * (iy + (1.0 - m_y) / 2.0),
                             center.z() + d_z * (iz + (1.0 - m_z) / 2.0));
    return pts;
}

// Centers uniform in the user sphere (rejection from the bounding cube), deflections
// uniform on [0, pi/4].
inline std::vector<UserPose> sample_user_poses(const SystemConfig &config, Rng &rng)
{
    if (!(config.user_region_radius > 0.0))
        throw std::invalid_argument("sample_user_poses: user_region_radius must be > 0");
    const double r = config.user_region_radius;
    std::vector<UserPose> poses;
    poses.reserve(static_cast<std::size_t>(config.n_users));
    for (int k = 0; k < config.n_users; ++k)
    {
        Point3 offset;
        do
        {
            offset = Point3(rng.uniform(-r, r), rng.uniform(-r, r), rng.uniform(-r, r));
        } while (offset.squaredNorm() > r * r);
        UserPose pose;
        pose.center = config.user_region_center + offset;
        pose.theta_x = rng.uniform(0.0, std::numbers::pi / 4.0);
        pose.theta_y = rng.uniform(0.0, std::numbers::pi / 4.0);
        poses.push_back(pose);
    }
    return poses;
}

inline ScenarioGeometry build_geometry(const SystemConfig &config, const std::vector<UserPose> &poses)
{
    if (static_cast<int>(poses.size()) != config.n_users)
        throw std::invalid_argument("build_geometry: pose count does not match n_users");
    ScenarioGeometry g;
    g.tx_positions = transmit_uca_positions(config.n_tx, config.r_t);
    g.ris_positions = ris_upa_positions(config.ris_center, config.m_y, config.m_z, config.d_y, config.d_z);
    for (const auto &pose : poses)
    {
        g.user_positions.push_back(receiver_uca_positions(pose, config.n_rx, config.r_r));
        g.deflections.push_back(deflection_angle(pose.theta_x, pose.theta_y));
    }
    return g;
}

} // namespace oamris
