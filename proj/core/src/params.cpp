// SPDX-License-Identifier: Apache-2.0
//
// ris_fim — Fisher-information and error-bound toolkit for RIS-aided
// downlink localization under position and orientation offsets
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

#include "risfim/params.hpp"

#include <algorithm>
#include <stdexcept>

namespace risfim
{

const char *to_string(ParamName name)
{
    switch (name)
    {
    case ParamName::theta_bu: return "theta_bu";
    case ParamName::phi_bu: return "phi_bu";
    case ParamName::tau_bu: return "tau_bu";
    case ParamName::theta_ru: return "theta_ru";
    case ParamName::phi_ru: return "phi_ru";
    case ParamName::theta_br: return "theta_br";
    case ParamName::phi_br: return "phi_br";
    case ParamName::tau_ru: return "tau_ru";
    case ParamName::tau_br: return "tau_br";
    case ParamName::ris_yaw: return "ris_yaw";
    case ParamName::ris_pitch: return "ris_pitch";
    case ParamName::ris_roll: return "ris_roll";
    case ParamName::ue_yaw: return "ue_yaw";
    case ParamName::ue_pitch: return "ue_pitch";
    case ParamName::ue_roll: return "ue_roll";
    case ParamName::sync_error: return "sync_error";
    case ParamName::gain_re: return "gain_re";
    case ParamName::gain_im: return "gain_im";
    }
    return "?";
}

bool is_geometric(ParamName name)
{
    return name != ParamName::sync_error && name != ParamName::gain_re &&
           name != ParamName::gain_im;
}

std::string to_string(const ParamIndex &index)
{
    return std::string(to_string(index.name)) + "[" + std::to_string(index.path) + "]";
}

int ParamLayout::find(const ParamIndex &index) const
{
    const auto it = std::find(entries.begin(), entries.end(), index);
    return it == entries.end() ? -1 : static_cast<int>(it - entries.begin());
}

std::vector<int> ParamLayout::indices_of_path(int path) const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].path == path)
            out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> ParamLayout::geometric_indices() const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (is_geometric(entries[i].name))
            out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> ParamLayout::nuisance_indices() const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (!is_geometric(entries[i].name))
            out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> ParamLayout::indices_of(ParamName name) const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].name == name)
            out.push_back(static_cast<int>(i));
    return out;
}

ParamLayout full_layout(const Scenario &scenario)
{
    ParamLayout layout;
    if (scenario.include_los)
    {
        layout.entries.push_back({0, ParamName::theta_bu});
        layout.entries.push_back({0, ParamName::phi_bu});
        layout.entries.push_back({0, ParamName::tau_bu});
        if (scenario.estimate_sync)
            layout.entries.push_back({0, ParamName::sync_error});
        layout.entries.push_back({0, ParamName::gain_re});
        layout.entries.push_back({0, ParamName::gain_im});
    }
    for (int m = 1; m <= static_cast<int>(scenario.ris_count()); ++m)
    {
        layout.entries.push_back({m, ParamName::theta_ru});
        layout.entries.push_back({m, ParamName::phi_ru});
        layout.entries.push_back({m, ParamName::theta_br});
        layout.entries.push_back({m, ParamName::phi_br});
        layout.entries.push_back({m, ParamName::tau_ru});
        layout.entries.push_back({m, ParamName::tau_br});
        layout.entries.push_back({m, ParamName::ris_yaw});
        layout.entries.push_back({m, ParamName::ris_pitch});
        layout.entries.push_back({m, ParamName::ris_roll});
        layout.entries.push_back({m, ParamName::ue_yaw});
        layout.entries.push_back({m, ParamName::ue_pitch});
        layout.entries.push_back({m, ParamName::ue_roll});
        if (scenario.estimate_sync)
            layout.entries.push_back({m, ParamName::sync_error});
        layout.entries.push_back({m, ParamName::gain_re});
        layout.entries.push_back({m, ParamName::gain_im});
    }
    return layout;
}

ParamVector channel_params(const Scenario &scenario, const ParamLayout &layout)
{
    const Eigen::Vector3d pb = scenario.bs.pose.centroid();
    const Eigen::Vector3d pu = scenario.ue.pose.centroid();

    ParamVector out;
    out.layout = layout;
    out.values.resize(static_cast<Eigen::Index>(layout.size()));

    for (std::size_t i = 0; i < layout.size(); ++i)
    {
        const ParamIndex &p = layout.entries[i];
        double value = 0.0;
        if (p.path == 0)
        {
            const auto bu = direction_angles(pb, pu);
            switch (p.name)
            {
            case ParamName::theta_bu: value = bu.theta; break;
            case ParamName::phi_bu: value = bu.phi; break;
            case ParamName::tau_bu: value = bu.distance / kSpeedOfLight; break;
            case ParamName::sync_error: value = scenario.los_sync_error_s; break;
            case ParamName::gain_re: value = scenario.los_gain.real(); break;
            case ParamName::gain_im: value = scenario.los_gain.imag(); break;
            default:
                throw std::invalid_argument("channel_params: " + to_string(p) +
                                            " is not a direct-path parameter");
            }
        }
        else
        {
            const RisPath &path = scenario.paths.at(static_cast<std::size_t>(p.path - 1));
            const Eigen::Vector3d pr = path.entity.pose.centroid();
            const auto ru = direction_angles(pr, pu);
            const auto br = direction_angles(pb, pr);
            switch (p.name)
            {
            case ParamName::theta_ru: value = ru.theta; break;
            case ParamName::phi_ru: value = ru.phi; break;
            case ParamName::tau_ru: value = ru.distance / kSpeedOfLight; break;
            case ParamName::theta_br: value = br.theta; break;
            case ParamName::phi_br: value = br.phi; break;
            case ParamName::tau_br: value = br.distance / kSpeedOfLight; break;
            case ParamName::ris_yaw: value = path.entity.pose.orientation.alpha; break;
            case ParamName::ris_pitch: value = path.entity.pose.orientation.psi; break;
            case ParamName::ris_roll: value = path.entity.pose.orientation.phi; break;
            case ParamName::ue_yaw: value = scenario.ue.pose.orientation.alpha; break;
            case ParamName::ue_pitch: value = scenario.ue.pose.orientation.psi; break;
            case ParamName::ue_roll: value = scenario.ue.pose.orientation.phi; break;
            case ParamName::sync_error: value = path.sync_error_s; break;
            case ParamName::gain_re: value = path.gain.real(); break;
            case ParamName::gain_im: value = path.gain.imag(); break;
            default:
                throw std::invalid_argument("channel_params: " + to_string(p) +
                                            " is not a reflected-path parameter");
            }
        }
        out.values[static_cast<Eigen::Index>(i)] = value;
    }
    return out;
}

ParamVector true_channel_params(const Scenario &scenario)
{
    return channel_params(scenario, full_layout(scenario));
}

const char *to_string(CaseLabel label)
{
    switch (label)
    {
    case CaseLabel::A: return "a";
    case CaseLabel::B: return "b";
    case CaseLabel::C: return "c";
    case CaseLabel::D: return "d";
    case CaseLabel::E: return "e";
    case CaseLabel::Full: return "full";
    }
    return "?";
}

CaseLabel case_from_string(const std::string &text)
{
    if (text == "a") return CaseLabel::A;
    if (text == "b") return CaseLabel::B;
    if (text == "c") return CaseLabel::C;
    if (text == "d") return CaseLabel::D;
    if (text == "e") return CaseLabel::E;
    if (text == "full") return CaseLabel::Full;
    throw std::invalid_argument("unknown case label: " + text);
}

ParamLayout case_layout(const Scenario &scenario, CaseLabel label)
{
    auto require_paths = [&](std::size_t n) {
        if (scenario.ris_count() < n)
            throw std::invalid_argument("case_layout: scenario lacks the required reflected paths");
    };

    ParamLayout layout;
    switch (label)
    {
    case CaseLabel::A:
        require_paths(1);
        layout.entries = {{1, ParamName::ris_yaw}, {1, ParamName::ris_pitch},
                          {1, ParamName::ris_roll}, {1, ParamName::gain_re},
                          {1, ParamName::gain_im}};
        break;
    case CaseLabel::B:
        require_paths(1);
        layout.entries = {{1, ParamName::ris_yaw}, {1, ParamName::ris_pitch},
                          {1, ParamName::ris_roll}, {1, ParamName::theta_ru},
                          {1, ParamName::phi_ru}, {1, ParamName::gain_re},
                          {1, ParamName::gain_im}};
        break;
    case CaseLabel::C:
        require_paths(1);
        layout.entries = {{1, ParamName::tau_ru}, {1, ParamName::theta_ru},
                          {1, ParamName::phi_ru}, {1, ParamName::ris_yaw},
                          {1, ParamName::ris_pitch}, {1, ParamName::ris_roll},
                          {1, ParamName::gain_re}, {1, ParamName::gain_im}};
        break;
    case CaseLabel::D:
        require_paths(2);
        layout.entries = {{2, ParamName::tau_ru}, {2, ParamName::theta_ru},
                          {2, ParamName::phi_ru}, {2, ParamName::gain_re},
                          {2, ParamName::gain_im}};
        break;
    case CaseLabel::E:
        require_paths(2);
        layout.entries = {{1, ParamName::tau_ru}, {1, ParamName::theta_ru},
                          {1, ParamName::phi_ru}, {1, ParamName::ris_yaw},
                          {1, ParamName::ris_pitch}, {1, ParamName::ris_roll},
                          {1, ParamName::gain_re}, {1, ParamName::gain_im},
                          {2, ParamName::tau_ru}, {2, ParamName::theta_ru},
                          {2, ParamName::phi_ru}, {2, ParamName::gain_re},
                          {2, ParamName::gain_im}};
        break;
    case CaseLabel::Full:
        return full_layout(scenario);
    }
    return layout;
}

} // namespace risfim
