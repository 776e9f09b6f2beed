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

#include "risfim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace risfim
{

const char *to_string(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::UeAntennas: return "ue_antennas";
    case SweepAxis::RisElements: return "ris_elements";
    case SweepAxis::PriorFraction: return "prior_fraction";
    }
    return "?";
}

SweepAxis sweep_axis_from_string(const std::string &text)
{
    if (text == "ue_antennas") return SweepAxis::UeAntennas;
    if (text == "ris_elements") return SweepAxis::RisElements;
    if (text == "prior_fraction") return SweepAxis::PriorFraction;
    throw std::invalid_argument("unknown sweep axis: " + text);
}

SweepRow evaluate_point(const SweepConfig &config, double axis_value)
{
    Scenario s = config.scenario;
    double prior_fraction = config.orientation_prior_fraction;

    switch (config.axis)
    {
    case SweepAxis::UeAntennas:
        set_ue_antennas(s, static_cast<int>(std::lround(axis_value)));
        break;
    case SweepAxis::RisElements:
        set_ris_elements(s, 0, static_cast<int>(std::lround(axis_value)));
        break;
    case SweepAxis::PriorFraction:
        prior_fraction = axis_value;
        break;
    }

    SweepRow row;
    row.axis = axis_value;
    row.regime = s.regime == Regime::Near ? "near" : "far";
    row.case_label = to_string(config.label);
    const double snr_ref = s.snr_reference();

    if (config.label == CaseLabel::A || config.label == CaseLabel::B)
    {
        const Fim obs = observation_fim(s, channel_params(s, case_layout(s, config.label)));
        PriorSpec prior;
        prior.set({1, ParamName::ris_yaw}, prior_fraction);
        prior.set({1, ParamName::ris_pitch}, prior_fraction);
        prior.set({1, ParamName::ris_roll}, prior_fraction);
        const Fim j = bayesian_fim(obs, prior, snr_ref);
        const std::vector<ParamIndex> orient = {{1, ParamName::ris_yaw},
                                                {1, ParamName::ris_pitch},
                                                {1, ParamName::ris_roll}};
        Eigen::MatrixXd je;
        try
        {
            je = efim(j, orient).mat;
        }
        catch (const NuisanceSingular &)
        {
            je = efim(j, orient, /*allow_pseudo_inverse=*/true).mat;
        }
        const auto report = peb_oeb(je, {}, {0, 1, 2});
        row.peb_m = std::numeric_limits<double>::quiet_NaN();
        row.oeb_rad = report.oeb_rad;
        row.lambda_min_norm = report.lambda_min / snr_ref;
        row.verdict = report.verdict;
        return row;
    }

    LocationPrior prior;
    prior.ris.resize(s.ris_count());
    if (!prior.ris.empty())
        prior.ris[0].orientation = prior_fraction;
    const auto loc = ue_location_efim(s, config.label, RisScheme::AbsolutePosition, prior);
    const auto pos = loc.ue_layout.position_indices(0);
    std::vector<int> orient;
    for (std::size_t i = 0; i < loc.ue_layout.size(); ++i)
        if (loc.ue_layout.entries[i].path != 0)
            orient.push_back(static_cast<int>(i));

    // The UE-block EFIM covers only kappa_0 entries; orientation bounds for
    // cases c/e come from the first surface's block of the joint matrix.
    const auto joint = joint_location_fim(s, config.label, RisScheme::AbsolutePosition, prior);
    const auto report = peb_oeb(loc.efim, pos, {});
    row.peb_m = report.peb_m;
    row.lambda_min_norm = report.lambda_min / snr_ref;
    row.verdict = loc.ris_usable ? report.verdict : (report.verdict + ";ris-unusable");

    const auto ris_orient = joint.layout.orientation_indices(1);
    if (!ris_orient.empty())
    {
        std::vector<int> interest = ris_orient;
        try
        {
            const Eigen::MatrixXd je_orient = schur_complement(joint.mat, interest);
            const auto orient_report = peb_oeb(je_orient, {}, {0, 1, 2});
            row.oeb_rad = orient_report.oeb_rad;
        }
        catch (const NuisanceSingular &)
        {
            row.oeb_rad = std::numeric_limits<double>::quiet_NaN();
        }
    }
    else
    {
        row.oeb_rad = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig &config, int threads)
{
    if (config.grid.empty())
        throw std::invalid_argument("run_sweep: empty grid");
    config.scenario.validate();

    std::vector<SweepRow> rows(config.grid.size());
    if (threads < 1)
        threads = 1;
    threads = std::min<int>(threads, static_cast<int>(config.grid.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= config.grid.size())
                return;
            rows[i] = evaluate_point(config, config.grid[i]);
        }
    };

    if (threads == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    return rows;
}

namespace
{

std::string format_value(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

} // namespace

void write_csv(const std::vector<SweepRow> &rows, std::ostream &os)
{
    os << "axis,peb_m,oeb_rad,lambda_min_norm,verdict,regime,case\n";
    for (const auto &row : rows)
    {
        os << format_value(row.axis) << ',' << format_value(row.peb_m) << ','
           << format_value(row.oeb_rad) << ',' << format_value(row.lambda_min_norm) << ','
           << row.verdict << ',' << row.regime << ',' << row.case_label << '\n';
    }
}

std::string csv_string(const std::vector<SweepRow> &rows)
{
    std::ostringstream os;
    write_csv(rows, os);
    return os.str();
}

} // namespace risfim
