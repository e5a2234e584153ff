// SPDX-License-Identifier: Apache-2.0

#ifndef UAVMM_SCENE_IO_HPP
#define UAVMM_SCENE_IO_HPP

#include "uavmm/deployment.hpp"

#include <json.hpp>

#include <ostream>
#include <vector>

namespace uavmm {

// {uav: [x, y, z], users: [{id, pos: [x, y, z]}], env: {...},
//  discovery_range_m, signaling_cost, sweep_sectors, link: {...}}
// signaling_cost may be the string "inf". Missing fields keep defaults;
// unknown fields throw std::invalid_argument naming the field path.
nlohmann::json scene_to_json(const DeploymentScene &scene);
DeploymentScene scene_from_json(const nlohmann::json &j);

// Three ground users where the third is out of discovery range from the
// starting point and comes into range after the first move.
DeploymentScene three_user_scene();

// Header `iter,x,y,z,n_found,utility,moved`.
void write_trajectory_csv(std::ostream &os, const std::vector<TrajectoryRow> &rows);

} // namespace uavmm

#endif
