// SPDX-License-Identifier: Apache-2.0

#include "uavmm/deployment.hpp"
#include "uavmm/sdma.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace uavmm {

double distance(const Vec3 &a, const Vec3 &b)
{
    return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

EnvironmentProfile EnvironmentProfile::urban()
{
    return {};
}

EnvironmentProfile EnvironmentProfile::rural()
{
    EnvironmentProfile e;
    e.los_sigmoid_a = 4.88;
    e.los_sigmoid_b = 0.43;
    return e;
}

void validate(const EnvironmentProfile &env)
{
    if (!(env.reflection_amp_coeff > 0.0 && env.reflection_amp_coeff <= 1.0))
        throw std::domain_error("env.reflection_amp_coeff must be in (0, 1]");
    if (!(env.los_sigmoid_a > 0.0) || !(env.los_sigmoid_b > 0.0))
        throw std::domain_error("env.los_sigmoid_a and env.los_sigmoid_b must be > 0");
    if (!(env.excess_loss_per_bounce_db >= 0.0))
        throw std::domain_error("env.excess_loss_per_bounce_db must be >= 0");
    if (!(env.outage_range_m > 0.0))
        throw std::domain_error("env.outage_range_m must be > 0");
}

void validate(const DeploymentScene &scene)
{
    validate(scene.env);
    if (!(scene.uav[2] > 0.0))
        throw std::domain_error("uav altitude must be > 0");
    if (!(scene.discovery_range_m > 0.0))
        throw std::domain_error("discovery_range_m must be > 0");
    if (!(scene.signaling_cost >= 0.0))
        throw std::domain_error("signaling_cost must be >= 0");
    if (scene.sweep_sectors < 1)
        throw std::domain_error("sweep_sectors must be >= 1");
    std::set<int> ids;
    for (const auto &u : scene.users) {
        if (!ids.insert(u.id).second)
            throw std::domain_error("users: duplicate id " + std::to_string(u.id));
        if (u.pos[2] >= scene.uav[2])
            throw std::domain_error("users: user " + std::to_string(u.id) + " is not below the uav");
    }
}

std::string to_string(LinkKind k)
{
    switch (k) {
    case LinkKind::los:
        return "LOS";
    case LinkKind::nlos:
        return "NLOS";
    case LinkKind::outage:
        return "OUTAGE";
    }
    return "?";
}

double los_probability(double elevation_rad, const EnvironmentProfile &env)
{
    if (!(elevation_rad > 0.0 && elevation_rad <= std::numbers::pi / 2 + 1e-12))
        throw std::domain_error("elevation must be in (0, pi/2]");
    const double deg = elevation_rad * 180.0 / std::numbers::pi;
    return 1.0 / (1.0 + env.los_sigmoid_a * std::exp(-env.los_sigmoid_b * (deg - env.los_sigmoid_a)));
}

namespace {

const GroundUser &find_user(const DeploymentScene &scene, int id)
{
    for (const auto &u : scene.users)
        if (u.id == id)
            return u;
    throw std::out_of_range("no user with id " + std::to_string(id));
}

} // namespace

LinkState link_state(const DeploymentScene &scene, int user_id, Rng &rng)
{
    const GroundUser &u = find_user(scene, user_id);
    const double d = distance(scene.uav, u.pos);
    if (d > scene.env.outage_range_m)
        return {LinkKind::outage, 0};
    const double elevation = std::asin(std::clamp((scene.uav[2] - u.pos[2]) / d, 0.0, 1.0));
    if (rng.uniform() < los_probability(elevation, scene.env))
        return {LinkKind::los, 0};
    return {LinkKind::nlos, rng.uniform() < 0.5 ? 1 : 2};
}

double nlos_penalty_db(int order, const EnvironmentProfile &env)
{
    if (order < 1)
        throw std::domain_error("nlos order must be >= 1");
    validate(env);
    return -20.0 * order * std::log10(env.reflection_amp_coeff) + order * env.excess_loss_per_bounce_db;
}

Discovery discover(const DeploymentScene &scene)
{
    validate(scene);
    Discovery out;
    out.slots_used = scene.sweep_sectors;
    for (const auto &u : scene.users) {
        const double d = distance(scene.uav, u.pos);
        if (d <= scene.discovery_range_m && d <= scene.env.outage_range_m)
            out.found.push_back(u.id);
    }
    std::sort(out.found.begin(), out.found.end());
    return out;
}

double positioning_utility(const DeploymentScene &scene, const Vec3 &pos, const std::vector<int> &user_ids)
{
    double total = 0.0;
    for (int id : user_ids) {
        LinkBudget lb = scene.link;
        lb.distance_m = distance(pos, find_user(scene, id).pos);
        CapacityParams cp;
        cp.bandwidth_hz = lb.bandwidth_hz;
        cp.snr_linear = db_to_linear(friis_rx_snr_db(lb));
        total += capacity_mm(cp);
    }
    return total;
}

RepositionResult reposition_step(const DeploymentScene &scene, const std::vector<int> &found_users)
{
    if (found_users.empty())
        throw std::domain_error("reposition_step needs at least one found user");
    Vec3 candidate{0.0, 0.0, scene.uav[2]};
    for (int id : found_users) {
        const auto &p = find_user(scene, id).pos;
        candidate[0] += p[0];
        candidate[1] += p[1];
    }
    candidate[0] /= static_cast<double>(found_users.size());
    candidate[1] /= static_cast<double>(found_users.size());

    RepositionResult r;
    r.utility_before = positioning_utility(scene, scene.uav, found_users);
    const double after = positioning_utility(scene, candidate, found_users);
    if (after - r.utility_before > scene.signaling_cost) {
        r.position = candidate;
        r.moved = true;
        r.utility_after = after;
    } else {
        r.position = scene.uav;
        r.utility_after = r.utility_before;
    }
    return r;
}

std::vector<TrajectoryRow> iterate_positioning(const DeploymentScene &scene, int max_iters)
{
    if (max_iters < 1)
        throw std::domain_error("max_iters must be >= 1");
    validate(scene);
    DeploymentScene s = scene;
    std::set<int> known;
    std::vector<TrajectoryRow> rows;
    for (int it = 0; it < max_iters; ++it) {
        for (int id : discover(s).found)
            known.insert(id);
        TrajectoryRow row;
        row.iter = it;
        row.position = s.uav;
        row.n_found = static_cast<int>(known.size());
        if (known.empty()) {
            rows.push_back(row);
            break;
        }
        const std::vector<int> ids(known.begin(), known.end());
        const RepositionResult step = reposition_step(s, ids);
        row.utility = step.utility_before;
        row.moved = step.moved;
        rows.push_back(row);
        if (!step.moved)
            break;
        s.uav = step.position;
    }
    return rows;
}

} // namespace uavmm
