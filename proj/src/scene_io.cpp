// SPDX-License-Identifier: Apache-2.0

#include "uavmm/scene_io.hpp"
#include "uavmm/codebook_io.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uavmm {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string &path, const std::string &what)
{
    throw std::invalid_argument(path + ": " + what);
}

void check_keys(const json &j, const std::string &path, std::initializer_list<const char *> allowed)
{
    if (!j.is_object())
        bad(path, "expected an object");
    for (const auto &[key, _] : j.items()) {
        bool ok = false;
        for (const char *a : allowed)
            ok = ok || key == a;
        if (!ok)
            bad(path + "." + key, "unknown field");
    }
}

double read_number(const json &j, const std::string &path)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        bad(path, "expected a number");
    }
    if (!j.is_number())
        bad(path, "expected a number");
    return j.get<double>();
}

json write_number(double x)
{
    if (std::isfinite(x))
        return x;
    return format_number(x);
}

void read_into(const json &j, const char *key, const std::string &path, double &dst)
{
    if (j.contains(key))
        dst = read_number(j.at(key), path + "." + key);
}

Vec3 read_vec3(const json &j, const std::string &path)
{
    if (!j.is_array() || j.size() != 3)
        bad(path, "expected [x, y, z]");
    Vec3 v{};
    for (std::size_t i = 0; i < 3; ++i)
        v[i] = read_number(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

json vec3_json(const Vec3 &v)
{
    return json::array({v[0], v[1], v[2]});
}

} // namespace

json scene_to_json(const DeploymentScene &s)
{
    json users = json::array();
    for (const auto &u : s.users)
        users.push_back({{"id", u.id}, {"pos", vec3_json(u.pos)}});
    return {
        {"uav", vec3_json(s.uav)},
        {"users", users},
        {"env",
         {{"los_sigmoid_a", s.env.los_sigmoid_a},
          {"los_sigmoid_b", s.env.los_sigmoid_b},
          {"reflection_amp_coeff", s.env.reflection_amp_coeff},
          {"excess_loss_per_bounce_db", s.env.excess_loss_per_bounce_db},
          {"outage_range_m", write_number(s.env.outage_range_m)}}},
        {"discovery_range_m", s.discovery_range_m},
        {"signaling_cost", write_number(s.signaling_cost)},
        {"sweep_sectors", s.sweep_sectors},
        {"link",
         {{"carrier_hz", s.link.carrier_hz},
          {"tx_array_gain_db", s.link.tx_array_gain_db},
          {"rx_array_gain_db", s.link.rx_array_gain_db},
          {"tx_power_dbm", s.link.tx_power_dbm},
          {"bandwidth_hz", s.link.bandwidth_hz},
          {"noise_figure_db", s.link.noise_figure_db}}},
    };
}

DeploymentScene scene_from_json(const json &j)
{
    const std::string root = "scene";
    check_keys(j, root,
               {"uav", "users", "env", "discovery_range_m", "signaling_cost", "sweep_sectors", "link"});
    DeploymentScene s;
    if (j.contains("uav"))
        s.uav = read_vec3(j.at("uav"), root + ".uav");
    if (j.contains("users")) {
        const json &us = j.at("users");
        if (!us.is_array())
            bad(root + ".users", "expected an array");
        s.users.clear();
        for (std::size_t i = 0; i < us.size(); ++i) {
            const std::string p = root + ".users[" + std::to_string(i) + "]";
            check_keys(us[i], p, {"id", "pos"});
            if (!us[i].contains("id") || !us[i].at("id").is_number_integer())
                bad(p + ".id", "expected an integer");
            if (!us[i].contains("pos"))
                bad(p + ".pos", "missing");
            s.users.push_back({us[i].at("id").get<int>(), read_vec3(us[i].at("pos"), p + ".pos")});
        }
    }
    if (j.contains("env")) {
        const json &e = j.at("env");
        const std::string p = root + ".env";
        check_keys(e, p,
                   {"preset", "los_sigmoid_a", "los_sigmoid_b", "reflection_amp_coeff",
                    "excess_loss_per_bounce_db", "outage_range_m"});
        if (e.contains("preset")) {
            const auto name = e.at("preset").is_string() ? e.at("preset").get<std::string>() : "";
            if (name == "urban")
                s.env = EnvironmentProfile::urban();
            else if (name == "rural")
                s.env = EnvironmentProfile::rural();
            else
                bad(p + ".preset", "expected \"urban\" or \"rural\"");
        }
        read_into(e, "los_sigmoid_a", p, s.env.los_sigmoid_a);
        read_into(e, "los_sigmoid_b", p, s.env.los_sigmoid_b);
        read_into(e, "reflection_amp_coeff", p, s.env.reflection_amp_coeff);
        read_into(e, "excess_loss_per_bounce_db", p, s.env.excess_loss_per_bounce_db);
        read_into(e, "outage_range_m", p, s.env.outage_range_m);
    }
    read_into(j, "discovery_range_m", root, s.discovery_range_m);
    read_into(j, "signaling_cost", root, s.signaling_cost);
    if (j.contains("sweep_sectors")) {
        if (!j.at("sweep_sectors").is_number_integer())
            bad(root + ".sweep_sectors", "expected an integer");
        s.sweep_sectors = j.at("sweep_sectors").get<int>();
    }
    if (j.contains("link")) {
        const json &l = j.at("link");
        const std::string p = root + ".link";
        check_keys(l, p,
                   {"carrier_hz", "tx_array_gain_db", "rx_array_gain_db", "tx_power_dbm", "bandwidth_hz",
                    "noise_figure_db"});
        read_into(l, "carrier_hz", p, s.link.carrier_hz);
        read_into(l, "tx_array_gain_db", p, s.link.tx_array_gain_db);
        read_into(l, "rx_array_gain_db", p, s.link.rx_array_gain_db);
        read_into(l, "tx_power_dbm", p, s.link.tx_power_dbm);
        read_into(l, "bandwidth_hz", p, s.link.bandwidth_hz);
        read_into(l, "noise_figure_db", p, s.link.noise_figure_db);
    }
    try {
        validate(s);
    } catch (const std::domain_error &e) {
        bad(root, e.what());
    }
    return s;
}

DeploymentScene three_user_scene()
{
    DeploymentScene s;
    s.uav = {-50.0, -50.0, 100.0};
    s.users = {{1, {-100.0, 0.0, 0.0}}, {2, {100.0, 0.0, 0.0}}, {3, {0.0, 150.0, 0.0}}};
    s.discovery_range_m = 200.0;
    s.signaling_cost = 0.0;
    s.sweep_sectors = 8;
    return s;
}

void write_trajectory_csv(std::ostream &os, const std::vector<TrajectoryRow> &rows)
{
    os << "iter,x,y,z,n_found,utility,moved\n";
    for (const auto &r : rows)
        os << r.iter << ',' << format_number(r.position[0]) << ',' << format_number(r.position[1]) << ','
           << format_number(r.position[2]) << ',' << r.n_found << ',' << format_number(r.utility) << ','
           << (r.moved ? 1 : 0) << '\n';
}

} // namespace uavmm
