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

#ifndef RISFIM_BOUNDS_HPP
#define RISFIM_BOUNDS_HPP

#include "risfim/fim.hpp"

#include <string>
#include <vector>

namespace risfim
{

// How the uncertain surfaces enter the location parameter vector: through
// their absolute pose or through their misalignment offset. Both carry the
// same Jacobian (the offset enters the position additively), so the schemes
// differ only in labeling and in where prior information is attached.
enum class RisScheme
{
    AbsolutePosition,
    MisalignmentOffset
};

enum class LocName
{
    pos_x,
    pos_y,
    pos_z,
    yaw,
    pitch,
    roll
};

// path 0 = UE, path m >= 1 = surface m.
struct LocationIndex
{
    int path = 0;
    LocName name = LocName::pos_x;

    bool operator==(const LocationIndex &other) const
    {
        return path == other.path && name == other.name;
    }
};

std::string to_string(const LocationIndex &index, RisScheme scheme);

struct LocationLayout
{
    std::vector<LocationIndex> entries;

    std::size_t size() const { return entries.size(); }
    int find(const LocationIndex &index) const;
    std::vector<int> indices_of_path(int path) const;
    std::vector<int> position_indices(int path) const;
    std::vector<int> orientation_indices(int path) const;
};

// UE position+orientation followed by position+orientation of every surface.
LocationLayout location_layout_full(const Scenario &scenario);

// Location parameters exercised by an experiment case (UE position always;
// the misoriented surface's orientation for cases with that offset unknown).
LocationLayout location_layout_for_case(CaseLabel label);

// Jacobian of the geometric channel parameters with respect to the location
// parameters: rows = location entries, cols = channel entries.
// `legacy_azimuth` switches the azimuth gradient to the legacy printed form
// (kept for comparison; the default is the exact arctan gradient).
struct TransformMatrix
{
    Eigen::MatrixXd mat;
    LocationLayout rows;
    ParamLayout cols;
};

TransformMatrix location_jacobian(const Scenario &scenario, const ParamLayout &channel_params,
                                  const LocationLayout &location_params,
                                  RisScheme scheme = RisScheme::AbsolutePosition,
                                  bool legacy_azimuth = false);

// Prior information about the location parameters, as fractions of the
// reference SNR. The assembled matrix has the arrow structure: one UE block,
// one diagonal block per surface, optional UE-surface cross blocks, no
// surface-surface coupling.
struct LocationPrior
{
    double ue_position = 0.0;
    double ue_orientation = 0.0;
    struct RisPrior
    {
        double position = 0.0;
        double orientation = 0.0;
    };
    std::vector<RisPrior> ris; // indexed by path-1; missing entries mean zero
    // Optional cross information between the UE block and surface block m,
    // in absolute units, sized (UE entries of the layout) x (entries of m).
    std::vector<Eigen::MatrixXd> cross;

    RisPrior ris_prior(int path) const
    {
        const std::size_t i = static_cast<std::size_t>(path - 1);
        return i < ris.size() ? ris[i] : RisPrior{};
    }
};

Eigen::MatrixXd location_prior_fim(const LocationPrior &prior, const LocationLayout &layout,
                                   double snr_reference);

// Equivalent information of the UE location parameters: the per-path channel
// EFIMs mapped through the transformation, the UE prior block added, and one
// Schur subtraction per uncertain surface.
struct LocationEfim
{
    Eigen::MatrixXd efim; // over the UE entries of `ue_layout`
    LocationLayout ue_layout;
    bool ris_usable = true;
    std::string note;
};

LocationEfim ue_location_efim(const Scenario &scenario, CaseLabel label, RisScheme scheme,
                              const LocationPrior &prior, bool legacy_azimuth = false);

// Full joint location information matrix (UE block plus every uncertain
// surface block) for the same inputs; reducing it to the UE block in one
// Schur step is the cross-check for ue_location_efim.
struct JointLocationFim
{
    Eigen::MatrixXd mat;
    LocationLayout layout;
};

JointLocationFim joint_location_fim(const Scenario &scenario, CaseLabel label, RisScheme scheme,
                                    const LocationPrior &prior, bool legacy_azimuth = false);

// Position / orientation error bounds from an information matrix: square
// roots of the traces of the corresponding blocks of the inverse. A matrix
// that fails the positive-definiteness test reports undefined bounds with
// the offending direction, never pseudo-inverted numbers.
struct BoundReport
{
    bool defined = false;
    double peb_m = 0.0;
    double oeb_rad = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::string verdict;
    Eigen::VectorXd null_direction;
};

BoundReport peb_oeb(const Eigen::MatrixXd &j_e, const std::vector<int> &position_indices,
                    const std::vector<int> &orientation_indices, double tol = 1e-10);

} // namespace risfim

#endif
