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

#include "risfim/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace risfim
{

namespace
{

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double dbm_to_watts(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

void near_square_grid(int count, int &rows, int &cols)
{
    if (count < 1)
        throw std::invalid_argument("near_square_grid: count must be >= 1");
    rows = static_cast<int>(std::round(std::sqrt(static_cast<double>(count))));
    while (rows > 1 && count % rows != 0)
        --rows;
    cols = count / rows;
    if (rows < cols)
        std::swap(rows, cols);
}

} // namespace

double Scenario::centroid_pathloss(int m) const
{
    const double lambda = waveform.wavelength();
    if (m == 0)
    {
        const double d = (ue.pose.centroid() - bs.pose.centroid()).norm();
        return los_pathloss(d, lambda);
    }
    const RisPath &path = paths.at(static_cast<std::size_t>(m - 1));
    EntityGeometry centroid_only = path.entity;
    centroid_only.layout.local_offsets = {Eigen::Vector3d::Zero()};
    const auto res = ris_pathloss(bs.pose.centroid(), centroid_only, 0, ue.pose.centroid(),
                                  q0, element_efficiency, lambda);
    if (res.behind_surface)
        throw std::runtime_error("centroid_pathloss: endpoint behind surface of path " + std::to_string(m));
    return res.amplitude;
}

double Scenario::path_snr(int m) const
{
    if (snr.mode == SnrSpec::Mode::Direct)
        return db_to_linear(snr.snr_db);

    const double p = dbm_to_watts(snr.tx_power_dbm) * db_to_linear(snr.gain_bs_db) *
                     db_to_linear(snr.gain_ue_db);
    const double noise = dbm_to_watts(snr.noise_psd_dbm_hz) * waveform.subcarrier_spacing_hz;
    const double rho = centroid_pathloss(m);
    return p * rho * rho / noise;
}

double Scenario::snr_reference() const
{
    return paths.empty() ? path_snr(0) : path_snr(1);
}

void Scenario::validate() const
{
    if (bs.layout.count() == 0 || ue.layout.count() == 0)
        throw std::invalid_argument("scenario: BS and UE need at least one element");
    if (waveform.subcarrier_count < 1 || waveform.symbol_count < 1)
        throw std::invalid_argument("scenario: subcarrier and symbol counts must be >= 1");
    if (!(waveform.carrier_frequency_hz > 0.0) || !(waveform.subcarrier_spacing_hz > 0.0))
        throw std::invalid_argument("scenario: carrier frequency and spacing must be positive");
    if (beam_targets.empty())
        throw std::invalid_argument("scenario: at least one beam target required");
    if (waveform.symbol_count < static_cast<int>(paths.size()) + 1 && !paths.empty())
        throw std::invalid_argument("scenario: symbol count too small for the temporal codes");

    auto check_link = [](const Eigen::Vector3d &a, const Eigen::Vector3d &b, const char *name) {
        const auto dir = direction_angles(a, b);
        if (dir.at_pole())
            throw std::invalid_argument(std::string("scenario: link ") + name +
                                        " is pole-aligned; azimuth undefined");
    };

    if (include_los)
        check_link(bs.pose.centroid(), ue.pose.centroid(), "bs-ue");

    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        const RisPath &path = paths[i];
        const std::string label = "ris[" + std::to_string(i) + "]";
        if (path.element_phases.size() != static_cast<Eigen::Index>(path.entity.layout.count()))
            throw std::invalid_argument("scenario: " + label + " phase count mismatch");
        if (path.temporal_code.size() != waveform.symbol_count)
            throw std::invalid_argument("scenario: " + label + " temporal code length mismatch");

        check_link(bs.pose.centroid(), path.entity.pose.centroid(), (label + " bs-ris").c_str());
        check_link(path.entity.pose.centroid(), ue.pose.centroid(), (label + " ris-ue").c_str());

        const Eigen::Vector3d n_hat = path.entity.rotated_normal();
        const Eigen::Vector3d pr = path.entity.pose.centroid();
        if ((bs.pose.centroid() - pr).dot(n_hat) <= 0.0)
            throw std::invalid_argument("scenario: BS behind the face of " + label);
        if ((ue.pose.centroid() - pr).dot(n_hat) <= 0.0)
            throw std::invalid_argument("scenario: UE behind the face of " + label);
    }
}

Eigen::VectorXd focused_element_phases(const EntityGeometry &bs,
                                       const EntityGeometry &ris,
                                       const Eigen::Vector3d &ue_target,
                                       double wavelength_m)
{
    // Nominal poses: deployment-time configuration ignores the offsets.
    EntityGeometry nominal = ris;
    nominal.pose.misalignment.setZero();
    nominal.pose.orientation = EulerAngles{};

    Eigen::VectorXd phases(static_cast<Eigen::Index>(ris.layout.count()));
    const Eigen::Vector3d b = bs.pose.nominal_position;
    for (std::size_t r = 0; r < ris.layout.count(); ++r)
    {
        const Eigen::Vector3d pr = nominal.element_position(r);
        const double path_len = (pr - b).norm() + (ue_target - pr).norm();
        phases[static_cast<Eigen::Index>(r)] =
            wrap_angle(2.0 * M_PI * path_len / wavelength_m);
    }
    return phases;
}

Scenario paper_v_scenario()
{
    Scenario s;

    s.waveform.carrier_frequency_hz = kSpeedOfLight / 0.03; // 3 cm carrier
    s.waveform.subcarrier_count = 256;
    s.waveform.subcarrier_spacing_hz = 120e3;
    s.waveform.symbol_count = 4;
    s.waveform.narrowband = true;

    const double pitch = 0.015;

    s.bs.pose = Pose{};
    s.bs.layout = ura_layout(1, 1, pitch);
    s.bs.broadside_normal = Eigen::Vector3d::UnitZ();

    s.ue.pose.nominal_position = {12.0, 10.0, 3.0};
    s.ue.layout = ura_layout(2, 2, pitch);
    s.ue.broadside_normal = Eigen::Vector3d::UnitZ();

    RisPath ris1;
    ris1.entity.pose.nominal_position = {10.0, 8.0, 4.0};
    ris1.entity.pose.orientation = EulerAngles{0.1, 0.2, 0.1};
    ris1.entity.layout = ura_layout(11, 11, pitch);
    ris1.entity.broadside_normal = -Eigen::Vector3d::UnitZ();

    RisPath ris2;
    ris2.entity.pose.nominal_position = {10.0, 8.5, 4.0};
    ris2.entity.layout = ura_layout(11, 11, pitch);
    ris2.entity.broadside_normal = -Eigen::Vector3d::UnitZ();

    s.paths = {ris1, ris2};

    s.beam_targets = {s.ue.pose.nominal_position};

    const auto codes = temporal_codes(s.waveform.symbol_count, static_cast<int>(s.paths.size()));
    for (std::size_t m = 0; m < s.paths.size(); ++m)
    {
        s.paths[m].temporal_code = codes[m];
        s.paths[m].element_phases = focused_element_phases(
            s.bs, s.paths[m].entity, s.ue.pose.nominal_position, s.waveform.wavelength());
    }

    s.q0 = 0.285;
    s.element_efficiency = 0.5;
    s.pathloss = PathlossModel::PerElement;
    s.regime = Regime::Near;
    s.include_los = true;

    s.snr.mode = SnrSpec::Mode::Physical;
    s.snr.tx_power_dbm = 23.0;
    s.snr.noise_psd_dbm_hz = -174.0;
    s.snr.gain_bs_db = 2.0;
    s.snr.gain_ue_db = 2.0;

    return s;
}

void set_ue_antennas(Scenario &scenario, int count)
{
    int rows = 0, cols = 0;
    near_square_grid(count, rows, cols);
    scenario.ue.layout = ura_layout(rows, cols, 0.015);
}

void set_ris_elements(Scenario &scenario, int m, int count)
{
    int rows = 0, cols = 0;
    near_square_grid(count, rows, cols);
    RisPath &path = scenario.paths.at(static_cast<std::size_t>(m));
    path.entity.layout = ura_layout(rows, cols, 0.015);
    path.element_phases = focused_element_phases(scenario.bs, path.entity,
                                                 scenario.ue.pose.nominal_position,
                                                 scenario.waveform.wavelength());
}

Scenario scale_distances(const Scenario &scenario, double factor)
{
    Scenario out = scenario;
    out.ue.pose.nominal_position *= factor;
    out.ue.pose.misalignment *= factor;
    for (auto &path : out.paths)
    {
        path.entity.pose.nominal_position *= factor;
        path.entity.pose.misalignment *= factor;
    }
    for (auto &target : out.beam_targets)
        target *= factor;
    return out;
}

} // namespace risfim
