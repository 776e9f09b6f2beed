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

#ifndef RISFIM_PARAMS_HPP
#define RISFIM_PARAMS_HPP

#include "risfim/scenario.hpp"

#include <string>
#include <vector>

namespace risfim
{

// Channel parameters. The bu names belong to the direct path (path id 0),
// the others to reflected paths (path ids 1..M1). The UE orientation appears
// as a per-path copy in every reflected-path block; the location-domain
// transformation maps all copies onto the one physical orientation.
enum class ParamName
{
    theta_bu,
    phi_bu,
    tau_bu,
    theta_ru,
    phi_ru,
    theta_br,
    phi_br,
    tau_ru,
    tau_br,
    ris_yaw,
    ris_pitch,
    ris_roll,
    ue_yaw,
    ue_pitch,
    ue_roll,
    sync_error,
    gain_re,
    gain_im
};

const char *to_string(ParamName name);
bool is_geometric(ParamName name); // everything except sync_error / gain_re / gain_im

struct ParamIndex
{
    int path = 0; // 0 = line of sight, 1..M1 = reflected paths
    ParamName name = ParamName::theta_bu;

    bool operator==(const ParamIndex &other) const
    {
        return path == other.path && name == other.name;
    }
};

std::string to_string(const ParamIndex &index);

// Ordered channel-parameter list. The flat offset of an entry is its
// position. The canonical full ordering is the direct-path block
// [theta_bu, phi_bu, tau_bu, (sync), gain_re, gain_im] followed by one block
// per reflected path
// [theta_ru, phi_ru, theta_br, phi_br, tau_ru, tau_br,
//  ris_yaw, ris_pitch, ris_roll, ue_yaw, ue_pitch, ue_roll,
//  (sync), gain_re, gain_im].
struct ParamLayout
{
    std::vector<ParamIndex> entries;

    std::size_t size() const { return entries.size(); }
    int find(const ParamIndex &index) const; // -1 when absent
    bool contains(const ParamIndex &index) const { return find(index) >= 0; }

    std::vector<int> indices_of_path(int path) const;
    std::vector<int> geometric_indices() const;
    std::vector<int> nuisance_indices() const;
    std::vector<int> indices_of(ParamName name) const;
};

struct ParamVector
{
    ParamLayout layout;
    Eigen::VectorXd values;
};

// Full layout for the scenario (direct path when enabled plus one block per
// reflected path; sync errors only when scenario.estimate_sync is set).
ParamLayout full_layout(const Scenario &scenario);

// True values of the requested parameters from the scenario geometry.
ParamVector channel_params(const Scenario &scenario, const ParamLayout &layout);

// Full parameter vector in the canonical ordering.
ParamVector true_channel_params(const Scenario &scenario);

// The five experiment parameterizations plus the full vector:
//   A: orientation offset + complex gain of path 1
//   B: A plus the reflected-path arrival angles of path 1
//   C: arrival delay/angles + orientation offset + gain of path 1
//   D: arrival delay/angles + gain of path 2
//   E: C and D together
enum class CaseLabel
{
    A,
    B,
    C,
    D,
    E,
    Full
};

const char *to_string(CaseLabel label);
CaseLabel case_from_string(const std::string &text);

ParamLayout case_layout(const Scenario &scenario, CaseLabel label);

} // namespace risfim

#endif
