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

#ifndef RISFIM_SCENARIO_HPP
#define RISFIM_SCENARIO_HPP

#include "risfim/channel.hpp"
#include "risfim/geometry.hpp"

#include <complex>
#include <string>
#include <vector>

namespace risfim
{

enum class Regime
{
    Near, // exact spherical-wavefront element distances
    Far   // first-order (planar-wavefront) element distances
};

// How the reflection pathloss enters the signal model.
//   None:       unit per-element amplitudes (pathloss folded into the
//               composite noise; the SNR knob carries the scale).
//   Centroid:   one orientation-aware amplitude per path, evaluated at the
//               entity centroids, normalized by its true value.
//   PerElement: full per-hop amplitude, normalized by the true centroid
//               value so the SNR knob still carries the absolute scale.
enum class PathlossModel
{
    None,
    Centroid,
    PerElement
};

// One reflecting surface and the state of its reflected path.
struct RisPath
{
    EntityGeometry entity;
    Eigen::VectorXd element_phases;  // applied phase per element, radians
    Eigen::VectorXcd temporal_code;  // per-symbol modulation scalar, length T
    std::complex<double> gain{1.0, 0.0}; // complex path gain
    double sync_error_s = 0.0;
};

struct SnrSpec
{
    enum class Mode
    {
        Direct,  // one SNR for every path
        Physical // derived from power, noise PSD, antenna gains, pathloss
    };

    Mode mode = Mode::Direct;
    double snr_db = 20.0;
    double tx_power_dbm = 23.0;
    double noise_psd_dbm_hz = -174.0;
    double gain_bs_db = 2.0;
    double gain_ue_db = 2.0;
};

struct Scenario
{
    EntityGeometry bs;
    EntityGeometry ue;
    std::vector<RisPath> paths;

    Waveform waveform;
    std::vector<Eigen::Vector3d> beam_targets;

    double q0 = 0.285;
    double element_efficiency = 0.5;
    PathlossModel pathloss = PathlossModel::PerElement;
    Regime regime = Regime::Near;

    bool include_los = true;
    std::complex<double> los_gain{1.0, 0.0};
    double los_sync_error_s = 0.0;

    // When false (the default), synchronization is treated as perfect and the
    // sync errors are excluded from every parameter vector.
    bool estimate_sync = false;

    SnrSpec snr;

    std::size_t ris_count() const { return paths.size(); }

    // Centroid amplitude of path m (m = 0 line of sight, 1..M1 reflections).
    double centroid_pathloss(int m) const;

    // Linear per-path SNR used to scale that path's information.
    double path_snr(int m) const;

    // Scale for priors quantified as fractions of the SNR (first reflected
    // path when present, line of sight otherwise).
    double snr_reference() const;

    // Rejects inconsistent dimensions, degenerate links, pole-aligned links
    // and back-side illumination.
    void validate() const;
};

// The default experiment: BS at the origin (single antenna, no transmit
// beamforming), a misoriented but aligned 11x11 surface at [10,8,4] with
// orientation offset [0.1,0.2,0.1], a perfectly located 11x11 surface at
// [10,8.5,4], UE 2x2 array at [12,10,3]; 3 cm carrier, 1.5 cm element pitch,
// 256 subcarriers, 23 dBm transmit power, -174 dBm/Hz noise PSD, 2 dB
// transmit/receive gains, q0 = 0.285, efficiency 0.5. Surface faces point
// toward -z so the BS and UE below the surfaces are on the active side, and
// element phases focus the BS->UE hop using the nominal (pre-offset) poses.
Scenario paper_v_scenario();

// Rebuilds the UE array as a near-square URA with `count` elements.
void set_ue_antennas(Scenario &scenario, int count);

// Rebuilds the array of path `m` (0-based) as a near-square URA with `count`
// elements, refreshing its focused element phases.
void set_ris_elements(Scenario &scenario, int m, int count);

// Focused element phases: cancel the nominal-pose carrier phase of the
// bs -> element -> ue_target hop.
Eigen::VectorXd focused_element_phases(const EntityGeometry &bs,
                                       const EntityGeometry &ris,
                                       const Eigen::Vector3d &ue_target,
                                       double wavelength_m);

// Scales every centroid position by `factor`, keeping layouts fixed.
Scenario scale_distances(const Scenario &scenario, double factor);

} // namespace risfim

#endif
