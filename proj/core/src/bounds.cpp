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

#include "risfim/bounds.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace risfim
{

namespace
{

const char *loc_name(LocName name)
{
    switch (name)
    {
    case LocName::pos_x: return "pos_x";
    case LocName::pos_y: return "pos_y";
    case LocName::pos_z: return "pos_z";
    case LocName::yaw: return "yaw";
    case LocName::pitch: return "pitch";
    case LocName::roll: return "roll";
    }
    return "?";
}

bool is_position(LocName name)
{
    return name == LocName::pos_x || name == LocName::pos_y || name == LocName::pos_z;
}

int axis_of(LocName name)
{
    switch (name)
    {
    case LocName::pos_x: return 0;
    case LocName::pos_y: return 1;
    case LocName::pos_z: return 2;
    case LocName::yaw: return 0;
    case LocName::pitch: return 1;
    case LocName::roll: return 2;
    }
    return 0;
}

} // namespace

std::string to_string(const LocationIndex &index, RisScheme scheme)
{
    std::string entity = index.path == 0 ? "ue" : ("ris" + std::to_string(index.path));
    std::string name = loc_name(index.name);
    if (index.path > 0 && is_position(index.name) && scheme == RisScheme::MisalignmentOffset)
        name = "offset_" + name.substr(4);
    return entity + "." + name;
}

int LocationLayout::find(const LocationIndex &index) const
{
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i] == index)
            return static_cast<int>(i);
    return -1;
}

std::vector<int> LocationLayout::indices_of_path(int path) const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].path == path)
            out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> LocationLayout::position_indices(int path) const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].path == path && is_position(entries[i].name))
            out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> LocationLayout::orientation_indices(int path) const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].path == path && !is_position(entries[i].name))
            out.push_back(static_cast<int>(i));
    return out;
}

LocationLayout location_layout_full(const Scenario &scenario)
{
    LocationLayout layout;
    auto push_block = [&](int path) {
        layout.entries.push_back({path, LocName::pos_x});
        layout.entries.push_back({path, LocName::pos_y});
        layout.entries.push_back({path, LocName::pos_z});
        layout.entries.push_back({path, LocName::yaw});
        layout.entries.push_back({path, LocName::pitch});
        layout.entries.push_back({path, LocName::roll});
    };
    push_block(0);
    for (int m = 1; m <= static_cast<int>(scenario.ris_count()); ++m)
        push_block(m);
    return layout;
}

LocationLayout location_layout_for_case(CaseLabel label)
{
    LocationLayout layout;
    layout.entries = {{0, LocName::pos_x}, {0, LocName::pos_y}, {0, LocName::pos_z}};
    switch (label)
    {
    case CaseLabel::C:
    case CaseLabel::E:
        layout.entries.push_back({1, LocName::yaw});
        layout.entries.push_back({1, LocName::pitch});
        layout.entries.push_back({1, LocName::roll});
        break;
    case CaseLabel::D:
        break;
    default:
        throw std::invalid_argument("location_layout_for_case: case has no location stage");
    }
    return layout;
}

namespace
{

struct LinkGradients
{
    Eigen::Vector3d theta_to, phi_to, tau_to; // gradients w.r.t. the target centroid
};

LinkGradients link_gradients(const Eigen::Vector3d &from, const Eigen::Vector3d &to,
                             bool legacy_azimuth)
{
    const auto dir = direction_angles(from, to);
    if (dir.at_pole())
        throw std::domain_error("location_jacobian: pole-aligned link, azimuth gradient undefined");

    const double d = dir.distance;
    const Eigen::Vector3d u = dir.unit_vector;
    const double sin_theta = std::sin(dir.theta);

    LinkGradients g;
    g.tau_to = u / kSpeedOfLight;
    g.theta_to = (std::cos(dir.theta) * u - Eigen::Vector3d::UnitZ()) / (d * sin_theta);
    if (!legacy_azimuth)
    {
        g.phi_to = Eigen::Vector3d(-std::sin(dir.phi), std::cos(dir.phi), 0.0) / (d * sin_theta);
    }
    else
    {
        const Eigen::Vector3d v = to - from;
        const double c2 = std::cos(dir.theta) * std::cos(dir.theta);
        g.phi_to = c2 * Eigen::Vector3d(-v.y() / (v.x() * v.x()), 1.0 / v.x(), 0.0);
    }
    return g;
}

} // namespace

TransformMatrix location_jacobian(const Scenario &scenario, const ParamLayout &channel_params,
                                  const LocationLayout &location_params, RisScheme,
                                  bool legacy_azimuth)
{
    const Eigen::Vector3d pb = scenario.bs.pose.centroid();
    const Eigen::Vector3d pu = scenario.ue.pose.centroid();

    TransformMatrix out;
    out.rows = location_params;
    out.cols = channel_params;
    out.mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(location_params.size()),
                                    static_cast<Eigen::Index>(channel_params.size()));

    for (std::size_t c = 0; c < channel_params.size(); ++c)
    {
        const ParamIndex &cp = channel_params.entries[c];
        if (!is_geometric(cp.name))
            throw std::invalid_argument("location_jacobian: nuisance parameter " + to_string(cp) +
                                        " has no location dependence; reduce it first");

        // Orientation channel parameters map one-to-one onto the matching
        // location parameters.
        if (cp.name == ParamName::ris_yaw || cp.name == ParamName::ris_pitch ||
            cp.name == ParamName::ris_roll)
        {
            const LocName names[3] = {LocName::yaw, LocName::pitch, LocName::roll};
            const int k = static_cast<int>(cp.name) - static_cast<int>(ParamName::ris_yaw);
            const int row = location_params.find({cp.path, names[k]});
            if (row >= 0)
                out.mat(row, static_cast<Eigen::Index>(c)) = 1.0;
            continue;
        }
        if (cp.name == ParamName::ue_yaw || cp.name == ParamName::ue_pitch ||
            cp.name == ParamName::ue_roll)
        {
            const LocName names[3] = {LocName::yaw, LocName::pitch, LocName::roll};
            const int k = static_cast<int>(cp.name) - static_cast<int>(ParamName::ue_yaw);
            const int row = location_params.find({0, names[k]});
            if (row >= 0)
                out.mat(row, static_cast<Eigen::Index>(c)) = 1.0;
            continue;
        }

        // Link parameters: identify endpoints and which location parameters
        // move them.
        Eigen::Vector3d from, to;
        int from_path = -1, to_path = -1; // -1: fixed BS
        switch (cp.name)
        {
        case ParamName::theta_bu:
        case ParamName::phi_bu:
        case ParamName::tau_bu:
            from = pb;
            to = pu;
            to_path = 0;
            break;
        case ParamName::theta_ru:
        case ParamName::phi_ru:
        case ParamName::tau_ru:
            from = scenario.paths.at(static_cast<std::size_t>(cp.path - 1)).entity.pose.centroid();
            to = pu;
            from_path = cp.path;
            to_path = 0;
            break;
        case ParamName::theta_br:
        case ParamName::phi_br:
        case ParamName::tau_br:
            from = pb;
            to = scenario.paths.at(static_cast<std::size_t>(cp.path - 1)).entity.pose.centroid();
            to_path = cp.path;
            break;
        default:
            throw std::logic_error("location_jacobian: unhandled parameter");
        }

        const auto g = link_gradients(from, to, legacy_azimuth);
        Eigen::Vector3d grad_to;
        if (cp.name == ParamName::theta_bu || cp.name == ParamName::theta_ru ||
            cp.name == ParamName::theta_br)
            grad_to = g.theta_to;
        else if (cp.name == ParamName::phi_bu || cp.name == ParamName::phi_ru ||
                 cp.name == ParamName::phi_br)
            grad_to = g.phi_to;
        else
            grad_to = g.tau_to;

        auto add = [&](int path, double sign) {
            if (path < 0)
                return; // the BS is assumed perfectly located
            for (int axis = 0; axis < 3; ++axis)
            {
                const LocName names[3] = {LocName::pos_x, LocName::pos_y, LocName::pos_z};
                const int row = location_params.find({path, names[axis]});
                if (row >= 0)
                    out.mat(row, static_cast<Eigen::Index>(c)) = sign * grad_to[axis];
            }
        };
        add(to_path, 1.0);
        add(from_path, -1.0);
    }
    return out;
}

Eigen::MatrixXd location_prior_fim(const LocationPrior &prior, const LocationLayout &layout,
                                   double snr_reference)
{
    const Eigen::Index n = static_cast<Eigen::Index>(layout.size());
    Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const LocationIndex &e = layout.entries[static_cast<std::size_t>(i)];
        double fraction = 0.0;
        if (e.path == 0)
            fraction = is_position(e.name) ? prior.ue_position : prior.ue_orientation;
        else
        {
            const auto rp = prior.ris_prior(e.path);
            fraction = is_position(e.name) ? rp.position : rp.orientation;
        }
        if (fraction < 0.0)
            throw std::invalid_argument("location_prior_fim: negative prior information");
        xi(i, i) = fraction * snr_reference;
    }

    for (std::size_t m = 0; m < prior.cross.size(); ++m)
    {
        const Eigen::MatrixXd &block = prior.cross[m];
        if (block.size() == 0)
            continue;
        const auto ue_rows = layout.indices_of_path(0);
        const auto ris_rows = layout.indices_of_path(static_cast<int>(m + 1));
        if (block.rows() != static_cast<Eigen::Index>(ue_rows.size()) ||
            block.cols() != static_cast<Eigen::Index>(ris_rows.size()))
            throw std::invalid_argument("location_prior_fim: cross block dimension mismatch");
        for (std::size_t r = 0; r < ue_rows.size(); ++r)
            for (std::size_t s = 0; s < ris_rows.size(); ++s)
            {
                xi(ue_rows[r], ris_rows[s]) = block(static_cast<Eigen::Index>(r),
                                                    static_cast<Eigen::Index>(s));
                xi(ris_rows[s], ue_rows[r]) = block(static_cast<Eigen::Index>(r),
                                                    static_cast<Eigen::Index>(s));
            }
    }
    return xi;
}

namespace
{

struct PathPieces
{
    int path = 0;
    Eigen::MatrixXd efim_geom;   // channel EFIM of this path's geometric parameters
    ParamLayout geom_layout;     // their indices
};

// Per-path channel EFIM of the geometric parameters, nuisance (gains, sync)
// reduced inside the path block.
std::vector<PathPieces> per_path_channel_efims(const Scenario &scenario, const Fim &obs)
{
    std::vector<PathPieces> out;
    std::vector<int> paths;
    for (const auto &e : obs.layout.entries)
        if (std::find(paths.begin(), paths.end(), e.path) == paths.end())
            paths.push_back(e.path);

    for (int path : paths)
    {
        const auto block_rows = obs.layout.indices_of_path(path);
        Eigen::MatrixXd block(block_rows.size(), block_rows.size());
        for (std::size_t r = 0; r < block_rows.size(); ++r)
            for (std::size_t s = 0; s < block_rows.size(); ++s)
                block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) =
                    obs.mat(block_rows[r], block_rows[s]);

        std::vector<int> geom_local;
        ParamLayout geom_layout;
        for (std::size_t r = 0; r < block_rows.size(); ++r)
        {
            const ParamIndex &e = obs.layout.entries[static_cast<std::size_t>(block_rows[r])];
            if (is_geometric(e.name))
            {
                geom_local.push_back(static_cast<int>(r));
                geom_layout.entries.push_back(e);
            }
        }

        PathPieces pieces;
        pieces.path = path;
        pieces.geom_layout = std::move(geom_layout);
        pieces.efim_geom = schur_complement(block, geom_local);
        out.push_back(std::move(pieces));
    }
    return out;
}

} // namespace

LocationEfim ue_location_efim(const Scenario &scenario, CaseLabel label, RisScheme scheme,
                              const LocationPrior &prior, bool legacy_azimuth)
{
    const LocationLayout layout = label == CaseLabel::Full ? location_layout_full(scenario)
                                                           : location_layout_for_case(label);
    const ParamLayout channel = case_layout(scenario, label);
    const Fim obs = observation_fim(scenario, channel_params(scenario, channel));
    const auto pieces = per_path_channel_efims(scenario, obs);
    const double snr_ref = scenario.snr_reference();
    const Eigen::MatrixXd xi = location_prior_fim(prior, layout, snr_ref);

    const auto ue_rows = layout.indices_of_path(0);
    const Eigen::Index n_ue = static_cast<Eigen::Index>(ue_rows.size());

    LocationEfim result;
    for (int i : ue_rows)
        result.ue_layout.entries.push_back(layout.entries[static_cast<std::size_t>(i)]);

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_ue, n_ue);
    for (Eigen::Index r = 0; r < n_ue; ++r)
        for (Eigen::Index s = 0; s < n_ue; ++s)
            a(r, s) = xi(ue_rows[static_cast<std::size_t>(r)], ue_rows[static_cast<std::size_t>(s)]);

    struct Blocks
    {
        Eigen::MatrixXd b, c;
    };
    std::vector<Blocks> schur_blocks;

    for (const auto &p : pieces)
    {
        LocationLayout ue_only;
        for (int i : ue_rows)
            ue_only.entries.push_back(layout.entries[static_cast<std::size_t>(i)]);
        const auto upsilon_ue =
            location_jacobian(scenario, p.geom_layout, ue_only, scheme, legacy_azimuth);
        a += upsilon_ue.mat * p.efim_geom * upsilon_ue.mat.transpose();

        if (p.path == 0)
            continue;
        const auto ris_rows = layout.indices_of_path(p.path);
        if (ris_rows.empty())
            continue;

        LocationLayout ris_only;
        for (int i : ris_rows)
            ris_only.entries.push_back(layout.entries[static_cast<std::size_t>(i)]);
        const auto upsilon_ris =
            location_jacobian(scenario, p.geom_layout, ris_only, scheme, legacy_azimuth);

        Blocks blk;
        blk.b = upsilon_ue.mat * p.efim_geom * upsilon_ris.mat.transpose();
        blk.c = upsilon_ris.mat * p.efim_geom * upsilon_ris.mat.transpose();
        for (std::size_t r = 0; r < ue_rows.size(); ++r)
            for (std::size_t s = 0; s < ris_rows.size(); ++s)
                blk.b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) +=
                    xi(ue_rows[r], ris_rows[s]);
        for (std::size_t r = 0; r < ris_rows.size(); ++r)
            for (std::size_t s = 0; s < ris_rows.size(); ++s)
                blk.c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) +=
                    xi(ris_rows[r], ris_rows[s]);

        const auto est = estimability(blk.c);
        if (!est.estimatable)
        {
            result.ris_usable = false;
            result.note += "surface " + std::to_string(p.path) +
                           " location block is singular (no prior information); ";
        }
        schur_blocks.push_back(std::move(blk));
    }

    Eigen::MatrixXd je = a;
    for (const auto &blk : schur_blocks)
    {
        // Rank-deficient surface blocks contribute only over their observable
        // subspace; unobservable directions cancel exactly.
        Eigen::MatrixXd full(n_ue + blk.c.rows(), n_ue + blk.c.rows());
        full.topLeftCorner(n_ue, n_ue) = Eigen::MatrixXd::Zero(n_ue, n_ue);
        full.topRightCorner(n_ue, blk.c.cols()) = blk.b;
        full.bottomLeftCorner(blk.c.rows(), n_ue) = blk.b.transpose();
        full.bottomRightCorner(blk.c.rows(), blk.c.cols()) = blk.c;
        std::vector<int> interest;
        for (Eigen::Index i = 0; i < n_ue; ++i)
            interest.push_back(static_cast<int>(i));
        // Schur of [[0, B], [B', C]] onto the top block is -B C^{-1} B'.
        je += schur_complement(full, interest, /*allow_pseudo_inverse=*/true);
    }
    result.efim = 0.5 * (je + je.transpose());
    return result;
}

JointLocationFim joint_location_fim(const Scenario &scenario, CaseLabel label, RisScheme scheme,
                                    const LocationPrior &prior, bool legacy_azimuth)
{
    const LocationLayout layout = label == CaseLabel::Full ? location_layout_full(scenario)
                                                           : location_layout_for_case(label);
    const ParamLayout channel = case_layout(scenario, label);
    const Fim obs = observation_fim(scenario, channel_params(scenario, channel));
    const auto pieces = per_path_channel_efims(scenario, obs);

    JointLocationFim out;
    out.layout = layout;
    out.mat = location_prior_fim(prior, layout, scenario.snr_reference());

    for (const auto &p : pieces)
    {
        const auto upsilon = location_jacobian(scenario, p.geom_layout, layout, scheme,
                                               legacy_azimuth);
        out.mat += upsilon.mat * p.efim_geom * upsilon.mat.transpose();
    }
    out.mat = 0.5 * (out.mat + out.mat.transpose()).eval();
    return out;
}

BoundReport peb_oeb(const Eigen::MatrixXd &j_e, const std::vector<int> &position_indices,
                    const std::vector<int> &orientation_indices, double tol)
{
    BoundReport report;
    const auto est = estimability(j_e, tol);
    report.lambda_min = est.lambda_min;
    report.lambda_max = est.lambda_max;
    if (!est.estimatable)
    {
        report.defined = false;
        report.verdict = "singular";
        report.null_direction = est.min_eigenvector;
        report.peb_m = std::numeric_limits<double>::quiet_NaN();
        report.oeb_rad = std::numeric_limits<double>::quiet_NaN();
        return report;
    }

    const Eigen::MatrixXd inv = stable_inverse(j_e);
    auto block_trace = [&](const std::vector<int> &idx) {
        double tr = 0.0;
        for (int i : idx)
            tr += inv(i, i);
        return tr;
    };

    report.defined = true;
    report.verdict = "estimatable";
    report.peb_m = position_indices.empty()
                       ? std::numeric_limits<double>::quiet_NaN()
                       : std::sqrt(block_trace(position_indices));
    report.oeb_rad = orientation_indices.empty()
                         ? std::numeric_limits<double>::quiet_NaN()
                         : std::sqrt(block_trace(orientation_indices));
    return report;
}

} // namespace risfim
