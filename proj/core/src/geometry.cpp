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

#include "risfim/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace risfim
{

double wrap_angle(double radians)
{
    if (!std::isfinite(radians))
        throw std::invalid_argument("wrap_angle: non-finite angle");
    double r = std::remainder(radians, 2.0 * M_PI);
    if (r <= -M_PI)
        r += 2.0 * M_PI;
    return r;
}

EulerAngles::EulerAngles(double a, double p, double r)
    : alpha(wrap_angle(a)), psi(wrap_angle(p)), phi(wrap_angle(r))
{
}

namespace
{

Eigen::Matrix3d rot_z(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d m;
    m << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
    return m;
}

Eigen::Matrix3d rot_y(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d m;
    m << c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c;
    return m;
}

Eigen::Matrix3d rot_x(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d m;
    m << 1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c;
    return m;
}

Eigen::Matrix3d drot_z(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d m;
    m << -s, -c, 0.0, c, -s, 0.0, 0.0, 0.0, 0.0;
    return m;
}

Eigen::Matrix3d drot_y(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d m;
    m << -s, 0.0, c, 0.0, 0.0, 0.0, -c, 0.0, -s;
    return m;
}

Eigen::Matrix3d drot_x(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d m;
    m << 0.0, 0.0, 0.0, 0.0, -s, -c, 0.0, c, -s;
    return m;
}

} // namespace

Eigen::Matrix3d rotation_matrix(const EulerAngles &angles)
{
    return rot_z(angles.alpha) * rot_y(angles.psi) * rot_x(angles.phi);
}

std::array<Eigen::Matrix3d, 3> rotation_gradient(const EulerAngles &angles)
{
    const Eigen::Matrix3d rz = rot_z(angles.alpha);
    const Eigen::Matrix3d ry = rot_y(angles.psi);
    const Eigen::Matrix3d rx = rot_x(angles.phi);
    return {drot_z(angles.alpha) * ry * rx,
            rz * drot_y(angles.psi) * rx,
            rz * ry * drot_x(angles.phi)};
}

double ArrayLayout::aperture_diameter() const
{
    double best = 0.0;
    for (std::size_t i = 0; i < local_offsets.size(); ++i)
        for (std::size_t j = i + 1; j < local_offsets.size(); ++j)
            best = std::max(best, (local_offsets[i] - local_offsets[j]).norm());
    return best;
}

ArrayLayout ura_layout(int rows, int cols, double spacing_m)
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("ura_layout: rows/cols must be >= 1");
    if (!(spacing_m > 0.0))
        throw std::invalid_argument("ura_layout: spacing must be positive");

    ArrayLayout layout;
    layout.local_offsets.reserve(static_cast<std::size_t>(rows) * cols);
    const double x0 = 0.5 * (rows - 1), y0 = 0.5 * (cols - 1);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            layout.local_offsets.emplace_back((i - x0) * spacing_m, (j - y0) * spacing_m, 0.0);
    return layout;
}

Eigen::Vector3d EntityGeometry::element_position(std::size_t v) const
{
    if (v >= layout.count())
        throw std::out_of_range("element_position: element index out of range");
    return pose.centroid() + pose.rotation() * layout.local_offsets[v];
}

Eigen::Vector3d EntityGeometry::rotated_normal() const
{
    return pose.rotation() * broadside_normal;
}

double inter_element_distance(const Eigen::Vector3d &g, const Eigen::Vector3d &v)
{
    return (v - g).norm();
}

bool DirectionAngles::at_pole() const
{
    return std::sin(theta) < 1e-12;
}

DirectionAngles direction_angles(const Eigen::Vector3d &from, const Eigen::Vector3d &to)
{
    const Eigen::Vector3d v = to - from;
    const double d = v.norm();
    if (!(d > 0.0))
        throw std::invalid_argument("direction_angles: coincident points give a degenerate direction");

    DirectionAngles out;
    out.distance = d;
    out.unit_vector = v / d;
    const double rxy = std::hypot(v.x(), v.y());
    out.theta = std::atan2(rxy, v.z()); // in [0, pi]
    out.phi = (rxy < 1e-15 * d) ? 0.0 : wrap_angle(std::atan2(v.y(), v.x()));
    return out;
}

Eigen::Vector3d unit_from_angles(double theta, double phi)
{
    return {std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta), std::cos(theta)};
}

Eigen::Vector3d unit_dtheta(double theta, double phi)
{
    return {std::cos(phi) * std::cos(theta), std::sin(phi) * std::cos(theta), -std::sin(theta)};
}

Eigen::Vector3d unit_dphi(double theta, double phi)
{
    return {-std::sin(phi) * std::sin(theta), std::cos(phi) * std::sin(theta), 0.0};
}

double far_field_distance(const EntityGeometry &from, const EntityGeometry &to,
                          std::size_t g, std::size_t v)
{
    const auto dir = direction_angles(from.pose.centroid(), to.pose.centroid());
    const Eigen::Vector3d sg = from.pose.rotation() * from.layout.local_offsets.at(g);
    const Eigen::Vector3d sv = to.pose.rotation() * to.layout.local_offsets.at(v);
    return dir.distance + dir.unit_vector.dot(sv - sg);
}

std::complex<double> far_field_phase(const EntityGeometry &from, const EntityGeometry &to,
                                     std::size_t g, std::size_t v, double wavelength_m)
{
    const double d = far_field_distance(from, to, g, v);
    return std::polar(1.0, -2.0 * M_PI * d / wavelength_m);
}

double fraunhofer_distance(double aperture_diameter_m, double wavelength_m)
{
    if (aperture_diameter_m < 0.0 || !(wavelength_m > 0.0))
        throw std::invalid_argument("fraunhofer_distance: invalid aperture or wavelength");
    return 2.0 * aperture_diameter_m * aperture_diameter_m / wavelength_m;
}

FieldRegion classify_field_region(double distance_m, double fraunhofer_m)
{
    return distance_m <= fraunhofer_m ? FieldRegion::NearField : FieldRegion::FarField;
}

} // namespace risfim
