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

#ifndef RISFIM_CHANNEL_HPP
#define RISFIM_CHANNEL_HPP

#include "risfim/geometry.hpp"

#include <complex>
#include <vector>

namespace risfim
{

// OFDM waveform description. Subcarrier n (1-based, n = 1..N) sits at
// f_n = f_c + n*df - B/2 with B = N*df. In narrowband mode the element-level
// relative phases are evaluated at the carrier; the common centroid-delay
// phase always keeps its subcarrier dependence.
struct Waveform
{
    double carrier_frequency_hz = 1e10;
    int subcarrier_count = 256;
    double subcarrier_spacing_hz = 120e3;
    int symbol_count = 4;
    bool narrowband = true;

    double wavelength() const { return kSpeedOfLight / carrier_frequency_hz; }
    double bandwidth() const { return subcarrier_count * subcarrier_spacing_hz; }
    double subcarrier_frequency(int n_one_based) const
    {
        return carrier_frequency_hz + n_one_based * subcarrier_spacing_hz - 0.5 * bandwidth();
    }
    // Frequency used for element-relative phase terms.
    double relative_phase_frequency(int n_one_based) const
    {
        return narrowband ? carrier_frequency_hz : subcarrier_frequency(n_one_based);
    }
};

// Per-symbol modulation scalars for M1 surfaces: non-DC DFT columns of length
// T scaled by 1/sqrt(T). The returned vectors satisfy, each to machine
// precision: zero sum, unit energy, and pairwise orthogonality.
std::vector<Eigen::VectorXcd> temporal_codes(int symbol_count, int surface_count);

struct GainResult
{
    double gain = 0.0;          // dimensionless
    bool behind_surface = false; // target projects onto the back of the face
};

// Element gain pi * (a' n_hat)^(2 q0) toward `target`, with a the unit vector
// from element r to the target and n_hat the rotated face normal. Negative
// projections clamp to zero gain with the behind_surface flag set.
GainResult ris_element_gain(const EntityGeometry &ris, std::size_t r,
                            const Eigen::Vector3d &target, double q0);

struct PathlossResult
{
    double amplitude = 0.0;      // dimensionless amplitude
    bool behind_surface = false;
};

// Orientation-aware amplitude pathloss of the bs_elem -> element r -> ue_elem
// hop:
//   lambda^2 * eff * P_rb^q0 * P_ru^q0 / (16 pi * d_br^(q0+1) * d_ru^(q0+1))
// where P_rb, P_ru are the projections of the element->endpoint vectors onto
// the rotated face normal. A non-positive projection means the endpoint sits
// behind the face: amplitude 0, flag set.
PathlossResult ris_pathloss(const Eigen::Vector3d &bs_elem,
                            const EntityGeometry &ris, std::size_t r,
                            const Eigen::Vector3d &ue_elem,
                            double q0, double efficiency, double wavelength_m);

// Free-space line-of-sight amplitude (lambda / 4 pi) / d.
double los_pathloss(double distance_m, double wavelength_m);

// Downlink precoding matrix for subcarrier n: column d is the conjugated
// steering vector of the transmit array toward beam target d, scaled so that
// trace(F^H F) = 1.
Eigen::MatrixXcd precoder(const std::vector<Eigen::Vector3d> &beam_targets,
                          const EntityGeometry &bs, const Waveform &waveform,
                          int n_one_based);

} // namespace risfim

#endif
