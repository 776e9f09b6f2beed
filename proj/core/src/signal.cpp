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

#include "risfim/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace risfim
{

namespace
{

using cd = std::complex<double>;

struct LinkVals
{
    double theta = 0.0;
    double phi = 0.0;
    double tau = 0.0;
};

LinkVals link_from_geometry(const Eigen::Vector3d &from, const Eigen::Vector3d &to)
{
    const auto dir = direction_angles(from, to);
    return {dir.theta, dir.phi, dir.distance / kSpeedOfLight};
}

struct ResolvedLos
{
    LinkVals bu;
    double eps = 0.0;
    cd beta{1.0, 0.0};
};

struct ResolvedRis
{
    LinkVals ru, br;
    EulerAngles orient_ris, orient_ue;
    double eps = 0.0;
    cd beta{1.0, 0.0};
};

// Unit direction and its angle derivatives for one link.
struct LinkFrame
{
    Eigen::Vector3d delta, ddelta_theta, ddelta_phi;
    double ctau = 0.0; // centroid distance c*tau

    explicit LinkFrame(const LinkVals &v)
        : delta(unit_from_angles(v.theta, v.phi)),
          ddelta_theta(unit_dtheta(v.theta, v.phi)),
          ddelta_phi(unit_dphi(v.theta, v.phi)),
          ctau(kSpeedOfLight * v.tau)
    {
    }
};

// Element-pair distance of one link under the parameter model, with partial
// derivatives. `s_to`/`s_from` are the rotated element offsets; `ds` slots
// receive the orientation sensitivities when requested.
struct PairDistance
{
    double d = 0.0;
    double d_theta = 0.0, d_phi = 0.0, d_tau = 0.0;
    Eigen::Vector3d d_orient_to = Eigen::Vector3d::Zero();   // per Euler axis of the target entity
    Eigen::Vector3d d_orient_from = Eigen::Vector3d::Zero(); // per Euler axis of the source entity
    Eigen::Vector3d vec = Eigen::Vector3d::Zero();           // near-field displacement vector
};

PairDistance pair_distance(Regime regime, const LinkFrame &f,
                           const Eigen::Vector3d &s_from, const Eigen::Vector3d &s_to,
                           const std::array<Eigen::Vector3d, 3> *ds_from,
                           const std::array<Eigen::Vector3d, 3> *ds_to)
{
    PairDistance out;
    const Eigen::Vector3d rel = s_to - s_from;
    if (regime == Regime::Near)
    {
        out.vec = f.ctau * f.delta + rel;
        out.d = out.vec.norm();
        if (!(out.d > 0.0))
            throw std::runtime_error("pair_distance: coincident elements");
        const Eigen::Vector3d w = out.vec / out.d;
        out.d_theta = f.ctau * f.ddelta_theta.dot(w);
        out.d_phi = f.ctau * f.ddelta_phi.dot(w);
        out.d_tau = kSpeedOfLight * f.delta.dot(w);
        if (ds_to)
            for (int k = 0; k < 3; ++k)
                out.d_orient_to[k] = (*ds_to)[k].dot(w);
        if (ds_from)
            for (int k = 0; k < 3; ++k)
                out.d_orient_from[k] = -(*ds_from)[k].dot(w);
    }
    else
    {
        out.vec = f.ctau * f.delta + rel;
        out.d = f.ctau + f.delta.dot(rel);
        out.d_theta = f.ddelta_theta.dot(rel);
        out.d_phi = f.ddelta_phi.dot(rel);
        out.d_tau = kSpeedOfLight;
        if (ds_to)
            for (int k = 0; k < 3; ++k)
                out.d_orient_to[k] = f.delta.dot((*ds_to)[k]);
        if (ds_from)
            for (int k = 0; k < 3; ++k)
                out.d_orient_from[k] = -f.delta.dot((*ds_from)[k]);
    }
    return out;
}

} // namespace

SignalModel::SignalModel(const Scenario &scenario, const ParamVector &params, bool snr_weighted)
    : waveform_(scenario.waveform), params_(params)
{
    n_u_ = static_cast<int>(scenario.ue.layout.count());
    n_b_ = static_cast<int>(scenario.bs.layout.count());

    if (params_.values.size() != static_cast<Eigen::Index>(params_.layout.size()))
        throw std::invalid_argument("SignalModel: layout / value size mismatch");

    param_path_.resize(params_.layout.size());
    for (std::size_t i = 0; i < params_.layout.size(); ++i)
        param_path_[i] = params_.layout.entries[i].path;

    // Transmit factor per (antenna, subcarrier): the precoded pilot with the
    // conjugated steering phases toward the beam targets.
    const int n_sub = waveform_.subcarrier_count;
    precode_.resize(n_b_, n_sub);
    for (int n = 1; n <= n_sub; ++n)
    {
        const Eigen::MatrixXcd f = precoder(scenario.beam_targets, scenario.bs, waveform_, n);
        for (int b = 0; b < n_b_; ++b)
            precode_(b, n - 1) = f.row(b).sum();
    }

    if (scenario.include_los)
        build_path(scenario, 0, snr_weighted);
    for (int m = 1; m <= static_cast<int>(scenario.ris_count()); ++m)
        build_path(scenario, m, snr_weighted);
}

void SignalModel::build_path(const Scenario &scenario, int path_id, bool snr_weighted)
{
    const double lambda = scenario.waveform.wavelength();
    const double q0 = scenario.q0;

    PathlossModel model = scenario.pathloss;
    if (scenario.regime == Regime::Far && model == PathlossModel::PerElement)
        model = PathlossModel::Centroid; // planar-wavefront model carries one amplitude per path

    PathBlock block;
    block.path_id = path_id;
    block.n_b = n_b_;
    block.weight = snr_weighted ? std::sqrt(scenario.path_snr(path_id)) : 1.0;

    // Local parameter list for this path, in layout order.
    for (std::size_t i = 0; i < params_.layout.size(); ++i)
    {
        const ParamIndex &p = params_.layout.entries[i];
        if (p.path != path_id)
            continue;
        LocalParam lp;
        lp.name = p.name;
        lp.flat = static_cast<int>(i);
        lp.centroid_delay_coeff =
            (p.name == ParamName::tau_bu || p.name == ParamName::tau_ru ||
             p.name == ParamName::tau_br)
                ? 1.0
                : 0.0;
        block.params.push_back(lp);
    }

    auto value_of = [&](ParamName name, double fallback) {
        const int idx = params_.layout.find({path_id, name});
        return idx >= 0 ? params_.values[idx] : fallback;
    };

    const std::size_t npar = block.params.size();
    auto grads_at = [&](std::size_t pair) -> std::pair<double *, double *> {
        return {block.dtau.data() + pair * npar, block.drho.data() + pair * npar};
    };

    // Rotated transmit offsets (the BS is assumed perfectly located).
    std::vector<Eigen::Vector3d> s_b(static_cast<std::size_t>(n_b_));
    {
        const Eigen::Matrix3d qb = scenario.bs.pose.rotation();
        for (int b = 0; b < n_b_; ++b)
            s_b[static_cast<std::size_t>(b)] = qb * scenario.bs.layout.local_offsets[b];
    }

    if (path_id == 0)
    {
        ResolvedLos st;
        st.bu = link_from_geometry(scenario.bs.pose.centroid(), scenario.ue.pose.centroid());
        st.eps = scenario.los_sync_error_s;
        st.beta = scenario.los_gain;
        st.bu.theta = value_of(ParamName::theta_bu, st.bu.theta);
        st.bu.phi = value_of(ParamName::phi_bu, st.bu.phi);
        st.bu.tau = value_of(ParamName::tau_bu, st.bu.tau);
        st.eps = value_of(ParamName::sync_error, st.eps);
        st.beta = cd(value_of(ParamName::gain_re, st.beta.real()),
                     value_of(ParamName::gain_im, st.beta.imag()));

        block.beta = st.beta;
        block.eps = st.eps;
        block.tau_cent = st.bu.tau;
        block.n_r = 1;
        block.code = Eigen::VectorXcd::Ones(waveform_.symbol_count);

        const LinkFrame frame(st.bu);
        const Eigen::Matrix3d qu = scenario.ue.pose.rotation(); // truth; no UE-orientation
                                                                // column in the direct block
        const double rho_ref =
            (snr_weighted && model != PathlossModel::None) ? scenario.centroid_pathloss(0) : 1.0;

        const std::size_t pairs = static_cast<std::size_t>(n_u_) * n_b_;
        block.tau_rel.resize(pairs);
        block.rho.resize(pairs);
        block.mod.assign(pairs, cd(1.0, 0.0));
        block.dtau.assign(pairs * npar, 0.0);
        block.drho.assign(pairs * npar, 0.0);

        for (int u = 0; u < n_u_; ++u)
        {
            const Eigen::Vector3d su = qu * scenario.ue.layout.local_offsets[u];
            for (int b = 0; b < n_b_; ++b)
            {
                const std::size_t pair = static_cast<std::size_t>(u) * n_b_ + b;
                const auto pd = pair_distance(scenario.regime, frame,
                                              s_b[static_cast<std::size_t>(b)], su, nullptr, nullptr);
                block.tau_rel[pair] = pd.d / kSpeedOfLight;

                double rho = 1.0, drho_dtau = 0.0;
                if (model != PathlossModel::None)
                {
                    rho = los_pathloss(kSpeedOfLight * st.bu.tau, lambda) / rho_ref;
                    drho_dtau = -rho / st.bu.tau;
                }
                block.rho[pair] = rho;

                auto [dtau, drho] = grads_at(pair);
                for (std::size_t i = 0; i < npar; ++i)
                {
                    switch (block.params[i].name)
                    {
                    case ParamName::theta_bu: dtau[i] = pd.d_theta / kSpeedOfLight; break;
                    case ParamName::phi_bu: dtau[i] = pd.d_phi / kSpeedOfLight; break;
                    case ParamName::tau_bu:
                        dtau[i] = pd.d_tau / kSpeedOfLight;
                        drho[i] = drho_dtau;
                        break;
                    default: break; // sync / gains carry no delay or amplitude slope
                    }
                }
            }
        }
        blocks_.push_back(std::move(block));
        return;
    }

    const RisPath &path = scenario.paths.at(static_cast<std::size_t>(path_id - 1));
    ResolvedRis st;
    st.ru = link_from_geometry(path.entity.pose.centroid(), scenario.ue.pose.centroid());
    st.br = link_from_geometry(scenario.bs.pose.centroid(), path.entity.pose.centroid());
    st.orient_ris = path.entity.pose.orientation;
    st.orient_ue = scenario.ue.pose.orientation;
    st.eps = path.sync_error_s;
    st.beta = path.gain;

    st.ru.theta = value_of(ParamName::theta_ru, st.ru.theta);
    st.ru.phi = value_of(ParamName::phi_ru, st.ru.phi);
    st.ru.tau = value_of(ParamName::tau_ru, st.ru.tau);
    st.br.theta = value_of(ParamName::theta_br, st.br.theta);
    st.br.phi = value_of(ParamName::phi_br, st.br.phi);
    st.br.tau = value_of(ParamName::tau_br, st.br.tau);
    st.orient_ris = EulerAngles{value_of(ParamName::ris_yaw, st.orient_ris.alpha),
                                value_of(ParamName::ris_pitch, st.orient_ris.psi),
                                value_of(ParamName::ris_roll, st.orient_ris.phi)};
    st.orient_ue = EulerAngles{value_of(ParamName::ue_yaw, st.orient_ue.alpha),
                               value_of(ParamName::ue_pitch, st.orient_ue.psi),
                               value_of(ParamName::ue_roll, st.orient_ue.phi)};
    st.eps = value_of(ParamName::sync_error, st.eps);
    st.beta = cd(value_of(ParamName::gain_re, st.beta.real()),
                 value_of(ParamName::gain_im, st.beta.imag()));

    block.beta = st.beta;
    block.eps = st.eps;
    block.tau_cent = st.ru.tau + st.br.tau;
    block.n_r = static_cast<int>(path.entity.layout.count());
    block.code = path.temporal_code;

    const LinkFrame fru(st.ru);
    const LinkFrame fbr(st.br);

    const Eigen::Matrix3d qr = rotation_matrix(st.orient_ris);
    const auto dqr = rotation_gradient(st.orient_ris);
    const Eigen::Matrix3d qu = rotation_matrix(st.orient_ue);
    const auto dqu = rotation_gradient(st.orient_ue);

    const Eigen::Vector3d n_hat = qr * path.entity.broadside_normal;
    std::array<Eigen::Vector3d, 3> dn_hat;
    for (int k = 0; k < 3; ++k)
        dn_hat[k] = dqr[k] * path.entity.broadside_normal;

    const int n_r = block.n_r;
    std::vector<Eigen::Vector3d> s_r(static_cast<std::size_t>(n_r));
    std::vector<std::array<Eigen::Vector3d, 3>> ds_r(static_cast<std::size_t>(n_r));
    for (int r = 0; r < n_r; ++r)
    {
        const Eigen::Vector3d &tilde = path.entity.layout.local_offsets[r];
        s_r[static_cast<std::size_t>(r)] = qr * tilde;
        for (int k = 0; k < 3; ++k)
            ds_r[static_cast<std::size_t>(r)][k] = dqr[k] * tilde;
    }
    std::vector<Eigen::Vector3d> s_u(static_cast<std::size_t>(n_u_));
    std::vector<std::array<Eigen::Vector3d, 3>> ds_u(static_cast<std::size_t>(n_u_));
    for (int u = 0; u < n_u_; ++u)
    {
        const Eigen::Vector3d &tilde = scenario.ue.layout.local_offsets[u];
        s_u[static_cast<std::size_t>(u)] = qu * tilde;
        for (int k = 0; k < 3; ++k)
            ds_u[static_cast<std::size_t>(u)][k] = dqu[k] * tilde;
    }

    const double rho_scale = lambda * lambda * scenario.element_efficiency / (16.0 * M_PI);
    const double rho_ref =
        (snr_weighted && model != PathlossModel::None) ? scenario.centroid_pathloss(path_id) : 1.0;

    const std::size_t pairs = static_cast<std::size_t>(n_u_) * n_b_ * n_r;
    block.tau_rel.resize(pairs);
    block.rho.resize(pairs);
    block.mod.resize(pairs);
    block.dtau.assign(pairs * npar, 0.0);
    block.drho.assign(pairs * npar, 0.0);

    // Centroid-level pathloss pieces (used by the Centroid model).
    struct Bracket
    {
        double value = 1.0;
        double d_theta = 0.0, d_phi = 0.0, d_tau = 0.0;
        Eigen::Vector3d d_orient_ris = Eigen::Vector3d::Zero();
        Eigen::Vector3d d_orient_ue = Eigen::Vector3d::Zero();
    };
    Bracket cen_ru, cen_rb;
    double cen_rho = 1.0;
    if (model == PathlossModel::Centroid)
    {
        const Eigen::Vector3d vec_ru_c = fru.ctau * fru.delta;  // centroid ris->ue
        const Eigen::Vector3d vec_rb_c = -fbr.ctau * fbr.delta; // centroid ris->bs
        cen_ru.value = vec_ru_c.dot(n_hat);
        cen_rb.value = vec_rb_c.dot(n_hat);
        if (cen_ru.value <= 0.0 || cen_rb.value <= 0.0)
            throw std::runtime_error("SignalModel: endpoint behind the surface at centroid level");
        cen_ru.d_theta = fru.ctau * fru.ddelta_theta.dot(n_hat);
        cen_ru.d_phi = fru.ctau * fru.ddelta_phi.dot(n_hat);
        cen_ru.d_tau = kSpeedOfLight * fru.delta.dot(n_hat);
        cen_rb.d_theta = -fbr.ctau * fbr.ddelta_theta.dot(n_hat);
        cen_rb.d_phi = -fbr.ctau * fbr.ddelta_phi.dot(n_hat);
        cen_rb.d_tau = -kSpeedOfLight * fbr.delta.dot(n_hat);
        for (int k = 0; k < 3; ++k)
        {
            cen_ru.d_orient_ris[k] = vec_ru_c.dot(dn_hat[k]);
            cen_rb.d_orient_ris[k] = vec_rb_c.dot(dn_hat[k]);
        }
        cen_rho = rho_scale * std::pow(cen_rb.value, q0) * std::pow(cen_ru.value, q0) /
                  (std::pow(fbr.ctau, q0 + 1.0) * std::pow(fru.ctau, q0 + 1.0)) / rho_ref;
    }

    for (int u = 0; u < n_u_; ++u)
    {
        for (int b = 0; b < n_b_; ++b)
        {
            for (int r = 0; r < n_r; ++r)
            {
                const std::size_t pair =
                    (static_cast<std::size_t>(u) * n_b_ + b) * n_r + r;
                const auto &sr = s_r[static_cast<std::size_t>(r)];
                const auto &dsr = ds_r[static_cast<std::size_t>(r)];
                const auto &su = s_u[static_cast<std::size_t>(u)];
                const auto &dsu = ds_u[static_cast<std::size_t>(u)];
                const auto &sb = s_b[static_cast<std::size_t>(b)];

                const auto pd_ru =
                    pair_distance(scenario.regime, fru, sr, su, &dsr, &dsu);
                const auto pd_br =
                    pair_distance(scenario.regime, fbr, sb, sr, nullptr, &dsr);

                block.tau_rel[pair] = (pd_ru.d + pd_br.d) / kSpeedOfLight;
                block.mod[pair] = std::polar(1.0, path.element_phases[r]);

                auto [dtau, drho] = grads_at(pair);
                for (std::size_t i = 0; i < npar; ++i)
                {
                    double dd = 0.0;
                    switch (block.params[i].name)
                    {
                    case ParamName::theta_ru: dd = pd_ru.d_theta; break;
                    case ParamName::phi_ru: dd = pd_ru.d_phi; break;
                    case ParamName::tau_ru: dd = pd_ru.d_tau; break;
                    case ParamName::theta_br: dd = pd_br.d_theta; break;
                    case ParamName::phi_br: dd = pd_br.d_phi; break;
                    case ParamName::tau_br: dd = pd_br.d_tau; break;
                    case ParamName::ris_yaw: dd = pd_ru.d_orient_from[0] + pd_br.d_orient_to[0]; break;
                    case ParamName::ris_pitch: dd = pd_ru.d_orient_from[1] + pd_br.d_orient_to[1]; break;
                    case ParamName::ris_roll: dd = pd_ru.d_orient_from[2] + pd_br.d_orient_to[2]; break;
                    case ParamName::ue_yaw: dd = pd_ru.d_orient_to[0]; break;
                    case ParamName::ue_pitch: dd = pd_ru.d_orient_to[1]; break;
                    case ParamName::ue_roll: dd = pd_ru.d_orient_to[2]; break;
                    default: break;
                    }
                    dtau[i] = dd / kSpeedOfLight;
                }

                if (model == PathlossModel::None)
                {
                    block.rho[pair] = 1.0;
                }
                else if (model == PathlossModel::Centroid)
                {
                    block.rho[pair] = cen_rho;
                    for (std::size_t i = 0; i < npar; ++i)
                    {
                        double rel = 0.0; // d log rho
                        switch (block.params[i].name)
                        {
                        case ParamName::theta_ru: rel = q0 * cen_ru.d_theta / cen_ru.value; break;
                        case ParamName::phi_ru: rel = q0 * cen_ru.d_phi / cen_ru.value; break;
                        case ParamName::tau_ru:
                            rel = q0 * cen_ru.d_tau / cen_ru.value -
                                  (q0 + 1.0) * kSpeedOfLight / fru.ctau;
                            break;
                        case ParamName::theta_br: rel = q0 * cen_rb.d_theta / cen_rb.value; break;
                        case ParamName::phi_br: rel = q0 * cen_rb.d_phi / cen_rb.value; break;
                        case ParamName::tau_br:
                            rel = q0 * cen_rb.d_tau / cen_rb.value -
                                  (q0 + 1.0) * kSpeedOfLight / fbr.ctau;
                            break;
                        case ParamName::ris_yaw:
                        case ParamName::ris_pitch:
                        case ParamName::ris_roll:
                        {
                            const int k = static_cast<int>(block.params[i].name) -
                                          static_cast<int>(ParamName::ris_yaw);
                            rel = q0 * cen_ru.d_orient_ris[k] / cen_ru.value +
                                  q0 * cen_rb.d_orient_ris[k] / cen_rb.value;
                            break;
                        }
                        default: break;
                        }
                        drho[i] = cen_rho * rel;
                    }
                }
                else // PerElement
                {
                    const Eigen::Vector3d vec_ru = pd_ru.vec;  // element ris->ue
                    const Eigen::Vector3d vec_rb = -pd_br.vec; // element ris->bs
                    const double p_ru = vec_ru.dot(n_hat);
                    const double p_rb = vec_rb.dot(n_hat);
                    if (p_ru <= 0.0 || p_rb <= 0.0)
                        throw std::runtime_error("SignalModel: endpoint behind the surface");

                    const double rho = rho_scale * std::pow(p_rb, q0) * std::pow(p_ru, q0) /
                                       (std::pow(pd_br.d, q0 + 1.0) * std::pow(pd_ru.d, q0 + 1.0)) /
                                       rho_ref;
                    block.rho[pair] = rho;

                    for (std::size_t i = 0; i < npar; ++i)
                    {
                        double dp_ru = 0.0, dp_rb = 0.0, dd_ru = 0.0, dd_br = 0.0;
                        switch (block.params[i].name)
                        {
                        case ParamName::theta_ru:
                            dp_ru = fru.ctau * fru.ddelta_theta.dot(n_hat);
                            dd_ru = pd_ru.d_theta;
                            break;
                        case ParamName::phi_ru:
                            dp_ru = fru.ctau * fru.ddelta_phi.dot(n_hat);
                            dd_ru = pd_ru.d_phi;
                            break;
                        case ParamName::tau_ru:
                            dp_ru = kSpeedOfLight * fru.delta.dot(n_hat);
                            dd_ru = pd_ru.d_tau;
                            break;
                        case ParamName::theta_br:
                            dp_rb = -fbr.ctau * fbr.ddelta_theta.dot(n_hat);
                            dd_br = pd_br.d_theta;
                            break;
                        case ParamName::phi_br:
                            dp_rb = -fbr.ctau * fbr.ddelta_phi.dot(n_hat);
                            dd_br = pd_br.d_phi;
                            break;
                        case ParamName::tau_br:
                            dp_rb = -kSpeedOfLight * fbr.delta.dot(n_hat);
                            dd_br = pd_br.d_tau;
                            break;
                        case ParamName::ris_yaw:
                        case ParamName::ris_pitch:
                        case ParamName::ris_roll:
                        {
                            const int k = static_cast<int>(block.params[i].name) -
                                          static_cast<int>(ParamName::ris_yaw);
                            dp_ru = -dsr[k].dot(n_hat) + vec_ru.dot(dn_hat[k]);
                            dp_rb = -dsr[k].dot(n_hat) + vec_rb.dot(dn_hat[k]);
                            dd_ru = pd_ru.d_orient_from[k];
                            dd_br = pd_br.d_orient_to[k];
                            break;
                        }
                        case ParamName::ue_yaw:
                        case ParamName::ue_pitch:
                        case ParamName::ue_roll:
                        {
                            const int k = static_cast<int>(block.params[i].name) -
                                          static_cast<int>(ParamName::ue_yaw);
                            dp_ru = dsu[k].dot(n_hat);
                            dd_ru = pd_ru.d_orient_to[k];
                            break;
                        }
                        default: break;
                        }
                        drho[i] = rho * (q0 * dp_ru / p_ru + q0 * dp_rb / p_rb -
                                         (q0 + 1.0) * dd_ru / pd_ru.d -
                                         (q0 + 1.0) * dd_br / pd_br.d);
                    }
                }
            }
        }
    }
    blocks_.push_back(std::move(block));
}

std::complex<double> SignalModel::sample(int t, int u, int n) const
{
    if (t < 0 || t >= waveform_.symbol_count || u < 0 || u >= n_u_ || n < 1 ||
        n > waveform_.subcarrier_count)
        throw std::out_of_range("SignalModel::sample: invalid indices");

    const double fn = waveform_.subcarrier_frequency(n);
    const double frel = waveform_.relative_phase_frequency(n);

    cd acc(0.0, 0.0);
    for (const auto &block : blocks_)
    {
        cd base(0.0, 0.0);
        for (int b = 0; b < block.n_b; ++b)
        {
            const cd fb = precode_(b, n - 1);
            for (int r = 0; r < block.n_r; ++r)
            {
                const std::size_t pair =
                    (static_cast<std::size_t>(u) * block.n_b + b) * block.n_r + r;
                const double psi =
                    2.0 * M_PI * (fn * (block.eps + block.tau_cent) +
                                  frel * (block.tau_rel[pair] - block.tau_cent));
                base += block.rho[pair] * block.mod[pair] * fb * std::polar(1.0, -psi);
            }
        }
        acc += block.weight * block.beta * block.code[t] * base;
    }
    return acc;
}

Eigen::VectorXcd SignalModel::gradient_un(int u, int n) const
{
    if (u < 0 || u >= n_u_ || n < 1 || n > waveform_.subcarrier_count)
        throw std::out_of_range("SignalModel::gradient_un: invalid indices");

    const double fn = waveform_.subcarrier_frequency(n);
    const double frel = waveform_.relative_phase_frequency(n);

    Eigen::VectorXcd row = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(params_.layout.size()));
    std::vector<cd> acc;
    for (const auto &block : blocks_)
    {
        const std::size_t npar = block.params.size();
        if (npar == 0)
            continue;
        acc.assign(npar, cd(0.0, 0.0));
        cd base(0.0, 0.0);

        for (int b = 0; b < block.n_b; ++b)
        {
            const cd fb = precode_(b, n - 1);
            for (int r = 0; r < block.n_r; ++r)
            {
                const std::size_t pair =
                    (static_cast<std::size_t>(u) * block.n_b + b) * block.n_r + r;
                const double psi =
                    2.0 * M_PI * (fn * (block.eps + block.tau_cent) +
                                  frel * (block.tau_rel[pair] - block.tau_cent));
                const cd e0 = block.mod[pair] * fb * std::polar(1.0, -psi);
                base += block.rho[pair] * e0;

                const double *dtau = block.dtau.data() + pair * npar;
                const double *drho = block.drho.data() + pair * npar;
                for (std::size_t i = 0; i < npar; ++i)
                {
                    const LocalParam &lp = block.params[i];
                    if (lp.name == ParamName::gain_re || lp.name == ParamName::gain_im)
                        continue;
                    double c1 = lp.centroid_delay_coeff;
                    double c2 = dtau[i] - lp.centroid_delay_coeff;
                    if (lp.name == ParamName::sync_error)
                    {
                        c1 = 1.0;
                        c2 = 0.0;
                    }
                    const double dpsi = 2.0 * M_PI * (fn * c1 + frel * c2);
                    acc[i] += cd(drho[i], 0.0) * e0 - cd(0.0, dpsi) * block.rho[pair] * e0;
                }
            }
        }

        for (std::size_t i = 0; i < npar; ++i)
        {
            const LocalParam &lp = block.params[i];
            if (lp.name == ParamName::gain_re)
                row[lp.flat] = block.weight * base;
            else if (lp.name == ParamName::gain_im)
                row[lp.flat] = cd(0.0, 1.0) * block.weight * base;
            else
                row[lp.flat] = block.weight * block.beta * acc[i];
        }
    }
    return row;
}

Eigen::VectorXcd SignalModel::gradient(int t, int u, int n) const
{
    Eigen::VectorXcd row = gradient_un(u, n);
    for (Eigen::Index i = 0; i < row.size(); ++i)
        row[i] *= code_weight(param_path_[static_cast<std::size_t>(i)], t);
    return row;
}

std::complex<double> SignalModel::code_weight(int path, int t) const
{
    if (t < 0 || t >= waveform_.symbol_count)
        throw std::out_of_range("SignalModel::code_weight: invalid symbol index");
    for (const auto &block : blocks_)
        if (block.path_id == path)
            return block.code[t];
    throw std::out_of_range("SignalModel::code_weight: unknown path id");
}

Eigen::MatrixXcd SignalModel::code_gram() const
{
    int max_path = 0;
    for (const auto &block : blocks_)
        max_path = std::max(max_path, block.path_id);
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(max_path + 1, max_path + 1);
    for (const auto &a : blocks_)
        for (const auto &b : blocks_)
        {
            cd s(0.0, 0.0);
            for (int t = 0; t < waveform_.symbol_count; ++t)
                s += std::conj(a.code[t]) * b.code[t];
            gram(a.path_id, b.path_id) = s;
        }
    return gram;
}

int SignalModel::path_of_param(int flat) const
{
    return param_path_.at(static_cast<std::size_t>(flat));
}

std::complex<double> signal_nearfield(const Scenario &scenario, int t, int u, int n)
{
    Scenario near = scenario;
    near.regime = Regime::Near;
    ParamVector empty;
    empty.values.resize(0);
    const SignalModel model(near, empty, false);
    return model.sample(t, u, n);
}

Eigen::VectorXcd signal_farfield(const Scenario &scenario, int t, int n)
{
    Scenario far = scenario;
    far.regime = Regime::Far;
    ParamVector empty;
    empty.values.resize(0);
    const SignalModel model(far, empty, false);
    Eigen::VectorXcd out(static_cast<Eigen::Index>(far.ue.layout.count()));
    for (int u = 0; u < static_cast<int>(far.ue.layout.count()); ++u)
        out[u] = model.sample(t, u, n);
    return out;
}

} // namespace risfim
