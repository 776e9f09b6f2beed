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

#include "risfim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace risfim
{

std::vector<Eigen::VectorXcd> temporal_codes(int symbol_count, int surface_count)
{
    if (surface_count < 0)
        throw std::invalid_argument("temporal_codes: negative surface count");
    if (symbol_count < surface_count + 1)
        throw std::invalid_argument("temporal_codes: need symbol_count >= surface_count + 1 "
                                    "(the DC column is reserved)");

    std::vector<Eigen::VectorXcd> codes;
    codes.reserve(static_cast<std::size_t>(surface_count));
    const double scale = 1.0 / std::sqrt(static_cast<double>(symbol_count));
    for (int m = 1; m <= surface_count; ++m)
    {
        Eigen::VectorXcd col(symbol_count);
        for (int t = 0; t < symbol_count; ++t)
            col[t] = std::polar(scale, -2.0 * M_PI * m * t / symbol_count);
        codes.push_back(std::move(col));
    }
    return codes;
}

GainResult ris_element_gain(const EntityGeometry &ris, std::size_t r,
                            const Eigen::Vector3d &target, double q0)
{
    const Eigen::Vector3d pr = ris.element_position(r);
    const Eigen::Vector3d v = target - pr;
    const double d = v.norm();
    if (!(d > 0.0))
        throw std::invalid_argument("ris_element_gain: target coincides with the element");

    const double proj = v.dot(ris.rotated_normal()) / d;
    if (proj <= 0.0)
        return {0.0, true};
    return {M_PI * std::pow(proj, 2.0 * q0), false};
}

PathlossResult ris_pathloss(const Eigen::Vector3d &bs_elem,
                            const EntityGeometry &ris, std::size_t r,
                            const Eigen::Vector3d &ue_elem,
                            double q0, double efficiency, double wavelength_m)
{
    const Eigen::Vector3d pr = ris.element_position(r);
    const Eigen::Vector3d n_hat = ris.rotated_normal();

    const Eigen::Vector3d to_bs = bs_elem - pr;
    const Eigen::Vector3d to_ue = ue_elem - pr;
    const double d_br = to_bs.norm();
    const double d_ru = to_ue.norm();
    if (!(d_br > 0.0) || !(d_ru > 0.0))
        throw std::invalid_argument("ris_pathloss: degenerate geometry");

    const double p_rb = to_bs.dot(n_hat);
    const double p_ru = to_ue.dot(n_hat);
    if (p_rb <= 0.0 || p_ru <= 0.0)
        return {0.0, true};

    const double amplitude = wavelength_m * wavelength_m * efficiency *
                             std::pow(p_rb, q0) * std::pow(p_ru, q0) /
                             (16.0 * M_PI * std::pow(d_br, q0 + 1.0) * std::pow(d_ru, q0 + 1.0));
    return {amplitude, false};
}

double los_pathloss(double distance_m, double wavelength_m)
{
    if (!(distance_m > 0.0))
        throw std::invalid_argument("los_pathloss: distance must be positive");
    return wavelength_m / (4.0 * M_PI) / distance_m;
}

Eigen::MatrixXcd precoder(const std::vector<Eigen::Vector3d> &beam_targets,
                          const EntityGeometry &bs, const Waveform &waveform,
                          int n_one_based)
{
    const std::size_t nb = bs.layout.count();
    const std::size_t nd = beam_targets.size();
    if (nd == 0)
        throw std::invalid_argument("precoder: at least one beam target required");

    const double fn = waveform.subcarrier_frequency(n_one_based);
    const double scale = 1.0 / std::sqrt(static_cast<double>(nb * nd));
    Eigen::MatrixXcd f(nb, nd);
    for (std::size_t d = 0; d < nd; ++d)
    {
        for (std::size_t b = 0; b < nb; ++b)
        {
            const double dist = (beam_targets[d] - bs.element_position(b)).norm();
            if (!(dist > 0.0))
                throw std::invalid_argument("precoder: beam target coincides with a transmit element");
            // conjugate of the steering entry e^{-j 2 pi f_n d / c}
            f(b, d) = std::polar(scale, 2.0 * M_PI * fn * dist / kSpeedOfLight);
        }
    }
    return f;
}

} // namespace risfim
