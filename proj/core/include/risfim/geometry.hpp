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

#ifndef RISFIM_GEOMETRY_HPP
#define RISFIM_GEOMETRY_HPP

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace risfim
{

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

// Wraps an angle to the canonical interval (-pi, pi].
double wrap_angle(double radians);

// Orientation of an entity as intrinsic ZYX Tait-Bryan angles:
// yaw `alpha` about z, then pitch `psi` about y, then roll `phi` about x.
// All angles in radians, canonicalized to (-pi, pi].
struct EulerAngles
{
    double alpha = 0.0;
    double psi = 0.0;
    double phi = 0.0;

    EulerAngles() = default;
    EulerAngles(double a, double p, double r);

    Eigen::Vector3d vec() const { return {alpha, psi, phi}; }
    static EulerAngles from_vec(const Eigen::Vector3d &v) { return {v[0], v[1], v[2]}; }
};

// Proper rotation matrix Q = Rz(alpha) * Ry(psi) * Rx(phi).
// Q'Q = I, det Q = +1.
Eigen::Matrix3d rotation_matrix(const EulerAngles &angles);

// Partial derivatives of rotation_matrix with respect to (alpha, psi, phi),
// in that order.
std::array<Eigen::Matrix3d, 3> rotation_gradient(const EulerAngles &angles);

// Deployed pose of a communication entity. The effective centroid is the
// nominal (deployment-time) position plus the misalignment offset.
struct Pose
{
    Eigen::Vector3d nominal_position = Eigen::Vector3d::Zero(); // m
    Eigen::Vector3d misalignment = Eigen::Vector3d::Zero();     // m
    EulerAngles orientation;

    Eigen::Vector3d centroid() const { return nominal_position + misalignment; }
    Eigen::Matrix3d rotation() const { return rotation_matrix(orientation); }
};

// Local element offsets of an antenna array / reflecting surface, defined
// relative to the entity centroid.
struct ArrayLayout
{
    std::vector<Eigen::Vector3d> local_offsets; // m, in the local frame

    std::size_t count() const { return local_offsets.size(); }

    // Largest pairwise element separation; the aperture diameter D.
    double aperture_diameter() const;
};

// Uniform rectangular array on the local z=0 plane, centered so the offsets
// sum to the zero vector. The nominal broadside normal is local +z.
ArrayLayout ura_layout(int rows, int cols, double spacing_m);

// Pose + layout + active-face normal of one entity. `broadside_normal` is
// expressed in the local frame (a URA built by ura_layout has its surface in
// the local xy-plane, so the active face is +z or -z).
struct EntityGeometry
{
    Pose pose;
    ArrayLayout layout;
    Eigen::Vector3d broadside_normal = Eigen::Vector3d::UnitZ();

    // Global position of element v: centroid + Q * local_offset[v].
    Eigen::Vector3d element_position(std::size_t v) const;

    // Deployed-face normal in global coordinates, Q * broadside_normal.
    Eigen::Vector3d rotated_normal() const;
};

double inter_element_distance(const Eigen::Vector3d &g, const Eigen::Vector3d &v);

// Spherical direction of the segment from -> to.
//   theta in [0, pi] (polar, measured from +z), phi in (-pi, pi] (azimuth),
//   unit_vector = [cos phi sin theta, sin phi sin theta, cos theta]'.
// At the poles (sin theta == 0) phi is fixed to 0; the azimuth is undefined
// there and pose Jacobians must not be evaluated at such links.
struct DirectionAngles
{
    double theta = 0.0;
    double phi = 0.0;
    double distance = 0.0;
    Eigen::Vector3d unit_vector = Eigen::Vector3d::UnitZ();

    bool at_pole() const;
};

DirectionAngles direction_angles(const Eigen::Vector3d &from, const Eigen::Vector3d &to);

// Inverse of the (theta, phi) parameterization and its angle derivatives.
Eigen::Vector3d unit_from_angles(double theta, double phi);
Eigen::Vector3d unit_dtheta(double theta, double phi);
Eigen::Vector3d unit_dphi(double theta, double phi);

// First-order element-pair distance: centroid distance plus the projection
// of the element offset difference onto the centroid direction.
double far_field_distance(const EntityGeometry &from, const EntityGeometry &to,
                          std::size_t g, std::size_t v);

// exp(-j 2 pi d_approx / lambda) with d_approx from far_field_distance.
std::complex<double> far_field_phase(const EntityGeometry &from, const EntityGeometry &to,
                                     std::size_t g, std::size_t v, double wavelength_m);

// 2 D^2 / lambda.
double fraunhofer_distance(double aperture_diameter_m, double wavelength_m);

enum class FieldRegion
{
    NearField,
    FarField
};

// Distances up to and including the Fraunhofer distance classify as near field.
FieldRegion classify_field_region(double distance_m, double fraunhofer_m);

} // namespace risfim

#endif
