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

#include "risfim/config.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace risfim
{

namespace
{

using nlohmann::json;

json vec3_to_json(const Eigen::Vector3d &v)
{
    return json::array({v.x(), v.y(), v.z()});
}

Eigen::Vector3d vec3_from_json(const json &j, const std::string &field)
{
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("config: field '" + field + "' must be a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json entity_to_json(const EntityGeometry &e, int rows, int cols, double spacing)
{
    json j;
    j["position"] = vec3_to_json(e.pose.nominal_position);
    j["misalignment"] = vec3_to_json(e.pose.misalignment);
    j["orientation"] = json::array(
        {e.pose.orientation.alpha, e.pose.orientation.psi, e.pose.orientation.phi});
    j["rows"] = rows;
    j["cols"] = cols;
    j["spacing_m"] = spacing;
    j["normal"] = vec3_to_json(e.broadside_normal);
    return j;
}

// Layout shape is stored explicitly so emit/parse round-trips exactly.
struct EntityShape
{
    int rows = 1, cols = 1;
    double spacing = 0.015;
};

EntityShape infer_shape(const ArrayLayout &layout)
{
    EntityShape shape;
    const int n = static_cast<int>(layout.count());
    if (n <= 1)
        return shape;
    // Offsets are generated row-major by ura_layout; recover the grid from
    // the y-stride.
    int cols = 1;
    for (int i = 1; i < n; ++i)
    {
        if (layout.local_offsets[static_cast<std::size_t>(i)].x() ==
            layout.local_offsets[0].x())
            cols = i + 1;
        else
            break;
    }
    shape.cols = cols;
    shape.rows = n / cols;
    if (shape.rows * shape.cols != n)
    {
        shape.rows = n;
        shape.cols = 1;
    }
    if (n > 1)
    {
        const Eigen::Vector3d d =
            layout.local_offsets[1] - layout.local_offsets[0];
        shape.spacing = std::max(std::abs(d.x()), std::abs(d.y()));
    }
    return shape;
}

void entity_from_json(const json &j, const std::string &field, EntityGeometry &e)
{
    const auto pos = vec3_from_json(j.at("position"), field + ".position");
    e.pose.nominal_position = pos;
    e.pose.misalignment = vec3_from_json(j.at("misalignment"), field + ".misalignment");
    const json &orient = j.at("orientation");
    e.pose.orientation = EulerAngles{orient[0].get<double>(), orient[1].get<double>(),
                                     orient[2].get<double>()};
    e.layout = ura_layout(j.at("rows").get<int>(), j.at("cols").get<int>(),
                          j.at("spacing_m").get<double>());
    e.broadside_normal = vec3_from_json(j.at("normal"), field + ".normal");
}

std::string pathloss_to_string(PathlossModel m)
{
    switch (m)
    {
    case PathlossModel::None: return "none";
    case PathlossModel::Centroid: return "centroid";
    case PathlossModel::PerElement: return "per_element";
    }
    return "?";
}

PathlossModel pathloss_from_string(const std::string &text)
{
    if (text == "none") return PathlossModel::None;
    if (text == "centroid") return PathlossModel::Centroid;
    if (text == "per_element") return PathlossModel::PerElement;
    throw std::invalid_argument("config: unknown pathloss model '" + text + "'");
}

} // namespace

ExperimentConfig preset_paper_v()
{
    ExperimentConfig config;
    config.preset = "paper-v";
    config.sweep.scenario = paper_v_scenario();
    config.sweep.label = CaseLabel::A;
    config.sweep.axis = SweepAxis::UeAntennas;
    config.sweep.grid = {1, 2, 4, 8, 16, 32, 64};
    config.sweep.orientation_prior_fraction = 0.0;
    config.sweep.seed = 0;
    return config;
}

ExperimentConfig parse_config(const std::string &json_text)
{
    json j;
    try
    {
        j = json::parse(json_text);
    }
    catch (const json::parse_error &err)
    {
        throw std::invalid_argument(std::string("config: parse error: ") + err.what());
    }

    ExperimentConfig config;
    if (j.contains("preset"))
    {
        const std::string name = j.at("preset").get<std::string>();
        if (name != "paper-v")
            throw std::invalid_argument("config: unknown preset '" + name + "'");
        config = preset_paper_v();
    }

    Scenario &s = config.sweep.scenario;

    try
    {
        if (j.contains("bs"))
            entity_from_json(j.at("bs"), "bs", s.bs);
        if (j.contains("ue"))
            entity_from_json(j.at("ue"), "ue", s.ue);

        if (j.contains("ris"))
        {
            s.paths.clear();
            for (std::size_t i = 0; i < j.at("ris").size(); ++i)
            {
                const json &rj = j.at("ris")[i];
                RisPath path;
                entity_from_json(rj, "ris[" + std::to_string(i) + "]", path.entity);
                if (rj.contains("gain"))
                    path.gain = {rj.at("gain")[0].get<double>(), rj.at("gain")[1].get<double>()};
                if (rj.contains("sync_error_s"))
                    path.sync_error_s = rj.at("sync_error_s").get<double>();
                if (rj.contains("element_phases"))
                {
                    const json &ph = rj.at("element_phases");
                    path.element_phases.resize(static_cast<Eigen::Index>(ph.size()));
                    for (std::size_t k = 0; k < ph.size(); ++k)
                        path.element_phases[static_cast<Eigen::Index>(k)] = ph[k].get<double>();
                }
                s.paths.push_back(std::move(path));
            }
        }

        if (j.contains("waveform"))
        {
            const json &w = j.at("waveform");
            if (w.contains("carrier_frequency_hz"))
                s.waveform.carrier_frequency_hz = w.at("carrier_frequency_hz").get<double>();
            if (w.contains("subcarriers"))
                s.waveform.subcarrier_count = w.at("subcarriers").get<int>();
            if (w.contains("spacing_hz"))
                s.waveform.subcarrier_spacing_hz = w.at("spacing_hz").get<double>();
            if (w.contains("symbols"))
                s.waveform.symbol_count = w.at("symbols").get<int>();
            if (w.contains("narrowband"))
                s.waveform.narrowband = w.at("narrowband").get<bool>();
        }

        if (j.contains("beam_targets"))
        {
            s.beam_targets.clear();
            for (std::size_t i = 0; i < j.at("beam_targets").size(); ++i)
                s.beam_targets.push_back(
                    vec3_from_json(j.at("beam_targets")[i], "beam_targets"));
        }

        if (j.contains("model"))
        {
            const json &m = j.at("model");
            if (m.contains("q0"))
                s.q0 = m.at("q0").get<double>();
            if (m.contains("efficiency"))
                s.element_efficiency = m.at("efficiency").get<double>();
            if (m.contains("pathloss"))
                s.pathloss = pathloss_from_string(m.at("pathloss").get<std::string>());
            if (m.contains("regime"))
                s.regime = m.at("regime").get<std::string>() == "far" ? Regime::Far : Regime::Near;
            if (m.contains("include_los"))
                s.include_los = m.at("include_los").get<bool>();
            if (m.contains("estimate_sync"))
                s.estimate_sync = m.at("estimate_sync").get<bool>();
        }

        if (j.contains("snr"))
        {
            const json &n = j.at("snr");
            const std::string mode = n.value("mode", "direct");
            if (mode == "direct")
            {
                s.snr.mode = SnrSpec::Mode::Direct;
                s.snr.snr_db = n.value("snr_db", s.snr.snr_db);
            }
            else if (mode == "physical")
            {
                s.snr.mode = SnrSpec::Mode::Physical;
                s.snr.tx_power_dbm = n.value("tx_power_dbm", s.snr.tx_power_dbm);
                s.snr.noise_psd_dbm_hz = n.value("noise_psd_dbm_hz", s.snr.noise_psd_dbm_hz);
                s.snr.gain_bs_db = n.value("gain_bs_db", s.snr.gain_bs_db);
                s.snr.gain_ue_db = n.value("gain_ue_db", s.snr.gain_ue_db);
            }
            else
            {
                throw std::invalid_argument("config: unknown snr mode '" + mode + "'");
            }
        }

        if (s.beam_targets.empty())
            s.beam_targets = {s.ue.pose.nominal_position};

        // Default modulation: focused phases and DFT temporal codes.
        const auto codes =
            temporal_codes(s.waveform.symbol_count, static_cast<int>(s.paths.size()));
        for (std::size_t m = 0; m < s.paths.size(); ++m)
        {
            auto &path = s.paths[m];
            if (path.temporal_code.size() != s.waveform.symbol_count)
                path.temporal_code = codes[m];
            if (path.element_phases.size() !=
                static_cast<Eigen::Index>(path.entity.layout.count()))
                path.element_phases = focused_element_phases(
                    s.bs, path.entity, s.ue.pose.nominal_position, s.waveform.wavelength());
        }

        if (j.contains("case"))
            config.sweep.label = case_from_string(j.at("case").get<std::string>());
        if (j.contains("sweep"))
        {
            const json &sw = j.at("sweep");
            if (sw.contains("axis"))
                config.sweep.axis = sweep_axis_from_string(sw.at("axis").get<std::string>());
            if (sw.contains("grid"))
            {
                config.sweep.grid.clear();
                for (const auto &g : sw.at("grid"))
                    config.sweep.grid.push_back(g.get<double>());
            }
        }
        if (j.contains("priors"))
            config.sweep.orientation_prior_fraction =
                j.at("priors").value("ris_orientation_fraction", 0.0);
        if (j.contains("seed"))
            config.sweep.seed = j.at("seed").get<std::uint64_t>();
    }
    catch (const json::exception &err)
    {
        throw std::invalid_argument(std::string("config: ") + err.what());
    }

    config.sweep.scenario.validate();
    return config;
}

std::string emit_config(const ExperimentConfig &config)
{
    const Scenario &s = config.sweep.scenario;
    json j;
    if (!config.preset.empty())
        j["preset"] = config.preset;

    {
        const auto shape = infer_shape(s.bs.layout);
        j["bs"] = entity_to_json(s.bs, shape.rows, shape.cols, shape.spacing);
    }
    {
        const auto shape = infer_shape(s.ue.layout);
        j["ue"] = entity_to_json(s.ue, shape.rows, shape.cols, shape.spacing);
    }
    j["ris"] = json::array();
    for (const auto &path : s.paths)
    {
        const auto shape = infer_shape(path.entity.layout);
        json rj = entity_to_json(path.entity, shape.rows, shape.cols, shape.spacing);
        rj["gain"] = json::array({path.gain.real(), path.gain.imag()});
        rj["sync_error_s"] = path.sync_error_s;
        j["ris"].push_back(std::move(rj));
    }

    j["waveform"] = {{"carrier_frequency_hz", s.waveform.carrier_frequency_hz},
                     {"subcarriers", s.waveform.subcarrier_count},
                     {"spacing_hz", s.waveform.subcarrier_spacing_hz},
                     {"symbols", s.waveform.symbol_count},
                     {"narrowband", s.waveform.narrowband}};

    j["beam_targets"] = json::array();
    for (const auto &t : s.beam_targets)
        j["beam_targets"].push_back(vec3_to_json(t));

    j["model"] = {{"q0", s.q0},
                  {"efficiency", s.element_efficiency},
                  {"pathloss", pathloss_to_string(s.pathloss)},
                  {"regime", s.regime == Regime::Far ? "far" : "near"},
                  {"include_los", s.include_los},
                  {"estimate_sync", s.estimate_sync}};

    if (s.snr.mode == SnrSpec::Mode::Direct)
        j["snr"] = {{"mode", "direct"}, {"snr_db", s.snr.snr_db}};
    else
        j["snr"] = {{"mode", "physical"},
                    {"tx_power_dbm", s.snr.tx_power_dbm},
                    {"noise_psd_dbm_hz", s.snr.noise_psd_dbm_hz},
                    {"gain_bs_db", s.snr.gain_bs_db},
                    {"gain_ue_db", s.snr.gain_ue_db}};

    j["case"] = to_string(config.sweep.label);
    j["sweep"] = {{"axis", to_string(config.sweep.axis)}, {"grid", config.sweep.grid}};
    j["priors"] = {{"ris_orientation_fraction", config.sweep.orientation_prior_fraction}};
    j["seed"] = config.sweep.seed;

    return j.dump(2) + "\n";
}

ExperimentConfig load_config_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void save_config_file(const ExperimentConfig &config, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("config: cannot write '" + path + "'");
    out << emit_config(config);
}

std::string describe(const ExperimentConfig &config)
{
    const Scenario &s = config.sweep.scenario;
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);

    os << "entities\n";
    auto entity_line = [&](const std::string &name, const EntityGeometry &e) {
        const Eigen::Vector3d p = e.pose.centroid();
        os << "  " << name << ": centroid [" << p.x() << ", " << p.y() << ", " << p.z()
           << "], elements " << e.layout.count() << ", orientation ["
           << e.pose.orientation.alpha << ", " << e.pose.orientation.psi << ", "
           << e.pose.orientation.phi << "]\n";
    };
    entity_line("bs", s.bs);
    entity_line("ue", s.ue);
    for (std::size_t m = 0; m < s.paths.size(); ++m)
        entity_line("ris" + std::to_string(m + 1), s.paths[m].entity);

    os << "links\n";
    auto link_line = [&](const std::string &name, const Eigen::Vector3d &a,
                         const Eigen::Vector3d &b) {
        const auto dir = direction_angles(a, b);
        os << "  " << name << ": distance " << dir.distance << " m, theta " << dir.theta
           << ", phi " << dir.phi << "\n";
    };
    link_line("bs-ue", s.bs.pose.centroid(), s.ue.pose.centroid());
    for (std::size_t m = 0; m < s.paths.size(); ++m)
    {
        const auto &e = s.paths[m].entity;
        link_line("bs-ris" + std::to_string(m + 1), s.bs.pose.centroid(), e.pose.centroid());
        link_line("ris" + std::to_string(m + 1) + "-ue", e.pose.centroid(), s.ue.pose.centroid());
    }

    os << "field regions (boundary distances at 2 D^2 / lambda)\n";
    for (std::size_t m = 0; m < s.paths.size(); ++m)
    {
        const auto &e = s.paths[m].entity;
        const double d_f =
            fraunhofer_distance(e.layout.aperture_diameter(), s.waveform.wavelength());
        const double d = (s.ue.pose.centroid() - e.pose.centroid()).norm();
        const auto region = classify_field_region(d, d_f);
        os << "  ris" << (m + 1) << ": fraunhofer " << d_f << " m, ue at " << d << " m -> "
           << (region == FieldRegion::NearField ? "near-field" : "far-field") << "\n";
    }

    os << "parameter layout (case " << to_string(config.sweep.label) << ")\n";
    const auto layout = case_layout(s, config.sweep.label);
    for (std::size_t i = 0; i < layout.size(); ++i)
        os << "  [" << i << "] " << to_string(layout.entries[i]) << "\n";
    return os.str();
}

} // namespace risfim
