// SPDX-License-Identifier: Apache-2.0

#ifndef UAVMM_DEPLOYMENT_HPP
#define UAVMM_DEPLOYMENT_HPP

#include "uavmm/array_channel.hpp"
#include "uavmm/rng.hpp"

#include <array>
#include <limits>
#include <string>
#include <vector>

namespace uavmm {

using Vec3 = std::array<double, 3>;

double distance(const Vec3 &a, const Vec3 &b);

// LOS probability shape: 1 / (1 + a exp(-b (elevation_deg - a))).
// The presets are modelling choices, not measured values.
struct EnvironmentProfile {
    double los_sigmoid_a = 9.61;
    double los_sigmoid_b = 0.16;
    double reflection_amp_coeff = 0.896;
    double excess_loss_per_bounce_db = 0.0;
    double outage_range_m = 1000.0;

    static EnvironmentProfile urban();
    static EnvironmentProfile rural();
};

void validate(const EnvironmentProfile &env);

struct GroundUser {
    int id = 0;
    Vec3 pos{};
};

struct DeploymentScene {
    Vec3 uav{0.0, 0.0, 100.0};
    std::vector<GroundUser> users;
    EnvironmentProfile env;
    double discovery_range_m = 200.0;
    double signaling_cost = 0.0; // bits/s per move, may be +inf
    int sweep_sectors = 8;
    LinkBudget link; // distance_m is ignored, taken from geometry
};

void validate(const DeploymentScene &scene);

enum class LinkKind { los, nlos, outage };
std::string to_string(LinkKind k);

struct LinkState {
    LinkKind kind = LinkKind::los;
    int nlos_order = 0; // 1 or 2 when NLOS, else 0
};

double los_probability(double elevation_rad, const EnvironmentProfile &env);

// Throws std::out_of_range if user_id is not in the scene.
LinkState link_state(const DeploymentScene &scene, int user_id, Rng &rng);

double nlos_penalty_db(int order, const EnvironmentProfile &env);

struct Discovery {
    std::vector<int> found; // ascending ids
    int slots_used = 0;
};

Discovery discover(const DeploymentScene &scene);

// Sum over users of single-user capacity_mm at the Friis SNR for a UAV at pos.
double positioning_utility(const DeploymentScene &scene, const Vec3 &pos, const std::vector<int> &user_ids);

struct RepositionResult {
    Vec3 position{};
    bool moved = false;
    double utility_before = 0.0;
    double utility_after = 0.0; // utility at the returned position
};

RepositionResult reposition_step(const DeploymentScene &scene, const std::vector<int> &found_users);

struct TrajectoryRow {
    int iter = 0;
    Vec3 position{};
    int n_found = 0;
    double utility = 0.0;
    bool moved = false;
};

// Known users accumulate across iterations. Row i describes the UAV at the
// start of iteration i and whether it moved away from there.
std::vector<TrajectoryRow> iterate_positioning(const DeploymentScene &scene, int max_iters);

} // namespace uavmm

#endif
