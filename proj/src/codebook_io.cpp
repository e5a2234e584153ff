// SPDX-License-Identifier: Apache-2.0

#include "uavmm/codebook_io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uavmm {

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

nlohmann::json codebook_to_json(const HierCodebook &cb)
{
    nlohmann::json layers = nlohmann::json::array();
    for (int k = 0; k <= cb.depth(); ++k) {
        nlohmann::json layer = nlohmann::json::array();
        for (const auto &cw : cb.layer(k)) {
            nlohmann::json weights = nlohmann::json::array();
            for (Eigen::Index i = 0; i < cw.weights.size(); ++i)
                weights.push_back({cw.weights[i].real(), cw.weights[i].imag()});
            layer.push_back({{"layer", cw.layer}, {"index", cw.index}, {"weights", std::move(weights)}});
        }
        layers.push_back(std::move(layer));
    }
    return {{"n_antennas", cb.n_antennas()}, {"branching", cb.branching()}, {"layers", std::move(layers)}};
}

HierCodebook codebook_from_json(const nlohmann::json &j, CodebookKind kind)
{
    const int n = j.at("n_antennas").get<int>();
    const int m = j.at("branching").get<int>();
    std::vector<std::vector<Codeword>> layers;
    for (const auto &jl : j.at("layers")) {
        std::vector<Codeword> layer;
        for (const auto &jc : jl) {
            Codeword cw;
            cw.layer = jc.at("layer").get<int>();
            cw.index = jc.at("index").get<int>();
            const auto &jw = jc.at("weights");
            if (static_cast<int>(jw.size()) != n)
                throw std::domain_error("codebook json: codeword (" + std::to_string(cw.layer) + "," +
                                        std::to_string(cw.index) + ") has wrong length");
            cw.weights.resize(n);
            cw.active_mask.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                cw.weights[i] = {jw[static_cast<std::size_t>(i)].at(0).get<double>(),
                                 jw[static_cast<std::size_t>(i)].at(1).get<double>()};
                cw.active_mask[static_cast<std::size_t>(i)] = cw.weights[i] != cplx(0.0, 0.0);
            }
            layer.push_back(std::move(cw));
        }
        layers.push_back(std::move(layer));
    }
    return HierCodebook(n, m, kind, std::move(layers));
}

void write_pattern_csv(std::ostream &os, const BeamPattern &p)
{
    os << "omega,gain_db\n";
    for (std::size_t i = 0; i < p.omega.size(); ++i)
        os << format_number(p.omega[i]) << ',' << format_number(p.gain_db[i]) << '\n';
}

} // namespace uavmm
