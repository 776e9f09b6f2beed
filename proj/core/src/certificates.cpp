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

#include "risfim/certificates.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace risfim
{

namespace
{

using cd = std::complex<double>;

Scenario analysis_mode(const Scenario &base, Regime regime)
{
    Scenario s = base;
    s.regime = regime;
    s.pathloss = PathlossModel::None; // pathloss folded into the per-path noise
    s.waveform.narrowband = true;
    return s;
}

std::vector<ParamIndex> orientation_subset(int path)
{
    return {{path, ParamName::ris_yaw}, {path, ParamName::ris_pitch}, {path, ParamName::ris_roll}};
}

Eigen::MatrixXd orientation_block(const Fim &j, int path)
{
    const auto subset = orientation_subset(path);
    Eigen::MatrixXd out(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out(r, c) = j.mat(j.layout.find(subset[r]), j.layout.find(subset[c]));
    return out;
}

} // namespace

FarFieldOrientationCertificate
farfield_orientation_certificate(const Scenario &base, const std::vector<int> &n_ue_grid,
                                 double prior_fraction, double tol)
{
    FarFieldOrientationCertificate cert;
    cert.prior_fraction = prior_fraction;

    const Scenario far = analysis_mode(base, Regime::Far);
    const double snr_ref = far.snr_reference();

    for (int n_ue : n_ue_grid)
    {
        Scenario s = far;
        set_ue_antennas(s, n_ue);
        const Fim j = observation_fim(s, channel_params(s, case_layout(s, CaseLabel::A)));

        FarFieldOrientationCertificate::Point point;
        point.n_ue = n_ue;
        const auto est = estimability(j.mat);
        point.general_ratio = est.lambda_max > 0.0 ? std::abs(est.lambda_min) / est.lambda_max : 0.0;

        const Fim je = efim(j, orientation_subset(1), /*allow_pseudo_inverse=*/false);
        const double raw = estimability(orientation_block(j, 1)).lambda_max;
        point.efim_residual = raw > 0.0 ? estimability(je.mat).lambda_max / raw : 0.0;
        cert.zero_prior.push_back(point);
    }

    // Orientation prior c * SNR: the observation part cancels exactly, so the
    // EFIM must equal the prior itself.
    {
        Scenario s = far;
        set_ue_antennas(s, n_ue_grid.empty() ? 4 : n_ue_grid.front());
        const Fim j = observation_fim(s, channel_params(s, case_layout(s, CaseLabel::A)));
        PriorSpec prior;
        for (const auto &index : orientation_subset(1))
            prior.set(index, prior_fraction);
        const Fim jp = bayesian_fim(j, prior, snr_ref);
        const Fim je = efim(jp, orientation_subset(1));
        const double scale = prior_fraction * snr_ref;
        cert.prior_identity_error =
            (je.mat - scale * Eigen::MatrixXd::Identity(3, 3)).norm() / scale;

        // A gain prior instead: the cancellation breaks and information about
        // the orientation survives (rank-limited by the planar model).
        PriorSpec gain_prior;
        gain_prior.set({1, ParamName::gain_re}, prior_fraction);
        gain_prior.set({1, ParamName::gain_im}, prior_fraction);
        const Fim jg = bayesian_fim(j, gain_prior, snr_ref);
        const Fim jge = efim(jg, orientation_subset(1));
        const double raw = estimability(orientation_block(j, 1)).lambda_max;
        const auto est = estimability(jge.mat);
        cert.gain_prior_efim_norm = raw > 0.0 ? est.lambda_max / raw : 0.0;
        cert.gain_prior_lambda_min = est.lambda_min;
    }

    cert.pass = cert.prior_identity_error < 1e-8;
    for (const auto &point : cert.zero_prior)
        cert.pass = cert.pass && point.general_ratio < tol && point.efim_residual < tol;
    cert.pass = cert.pass && cert.gain_prior_efim_norm > 1e-6 &&
                cert.gain_prior_lambda_min > -1e-9 * std::abs(cert.gain_prior_efim_norm);
    return cert;
}

NearFieldOrientationCertificate
nearfield_orientation_certificate(const Scenario &base, const std::vector<int> &n_ue_grid)
{
    if (base.bs.layout.count() != 1 || base.beam_targets.size() != 1)
        throw std::invalid_argument("nearfield_orientation_certificate: requires a single "
                                    "transmit antenna and a single beam target");

    NearFieldOrientationCertificate cert;
    const Scenario near = analysis_mode(base, Regime::Near);
    const double f_c = near.waveform.carrier_frequency_hz;
    const double snr = near.path_snr(1);
    const int n_sub = near.waveform.subcarrier_count;

    for (int n_ue : n_ue_grid)
    {
        Scenario s = near;
        set_ue_antennas(s, n_ue);
        const Fim j = observation_fim(s, channel_params(s, case_layout(s, CaseLabel::A)));

        Scenario s_exact = s;
        s_exact.waveform.narrowband = false;
        const Fim j_exact =
            observation_fim(s_exact, channel_params(s_exact, case_layout(s_exact, CaseLabel::A)));

        // Independent closed-form construction from steering vectors and
        // delay-gradient diagonals.
        const RisPath &path = s.paths[0];
        const int n_r = static_cast<int>(path.entity.layout.count());
        const int n_u = static_cast<int>(s.ue.layout.count());
        const Eigen::Vector3d p_b = s.bs.element_position(0);
        const cd beta = path.gain;

        const Eigen::Matrix3d q_r = path.entity.pose.rotation();
        const auto dq_r = rotation_gradient(path.entity.pose.orientation);

        Eigen::VectorXcd a_b(n_r);
        Eigen::MatrixXd k_b(3, n_r);
        std::vector<Eigen::Vector3d> p_r(static_cast<std::size_t>(n_r));
        for (int r = 0; r < n_r; ++r)
        {
            p_r[static_cast<std::size_t>(r)] = path.entity.element_position(static_cast<std::size_t>(r));
            const Eigen::Vector3d v = p_b - p_r[static_cast<std::size_t>(r)];
            const double d = v.norm();
            a_b[r] = std::polar(1.0, -2.0 * M_PI * f_c * d / kSpeedOfLight);
            for (int k = 0; k < 3; ++k)
                k_b(k, r) = v.dot(-(dq_r[k] * path.entity.layout.local_offsets[r])) /
                            (kSpeedOfLight * d);
        }

        Eigen::Matrix3d j_phi = Eigen::Matrix3d::Zero();
        Eigen::Vector3d j_phi_br = Eigen::Vector3d::Zero();
        Eigen::Vector3d j_phi_bi = Eigen::Vector3d::Zero();
        double j_beta = 0.0;
        for (int u = 0; u < n_u; ++u)
        {
            const Eigen::Vector3d p_u = s.ue.element_position(static_cast<std::size_t>(u));
            cd s_u(0.0, 0.0);
            Eigen::Vector3cd v_u = Eigen::Vector3cd::Zero();
            for (int r = 0; r < n_r; ++r)
            {
                const Eigen::Vector3d v = p_u - p_r[static_cast<std::size_t>(r)];
                const double d = v.norm();
                const cd a_u = std::polar(1.0, -2.0 * M_PI * f_c * d / kSpeedOfLight);
                const cd gamma_r = std::polar(1.0, path.element_phases[r]);
                const cd chain = a_u * gamma_r * a_b[r];
                s_u += chain;
                for (int k = 0; k < 3; ++k)
                {
                    const double k_u =
                        v.dot(-(dq_r[k] * path.entity.layout.local_offsets[r])) /
                        (kSpeedOfLight * d);
                    v_u[k] += chain * (k_u + k_b(k, r));
                }
            }
            for (int k = 0; k < 3; ++k)
            {
                for (int l = 0; l < 3; ++l)
                    j_phi(k, l) += std::real(std::conj(v_u[k]) * v_u[l]);
                j_phi_br[k] += std::real(cd(0.0, 1.0) * std::conj(beta) * std::conj(v_u[k]) * s_u);
                j_phi_bi[k] -= std::real(std::conj(beta) * std::conj(v_u[k]) * s_u);
            }
            j_beta += std::norm(s_u);
        }

        const double w = 2.0 * snr * n_sub;
        const double two_pi_fc = 2.0 * M_PI * f_c;
        Eigen::MatrixXd oracle(5, 5);
        oracle.setZero();
        oracle.topLeftCorner<3, 3>() = w * two_pi_fc * two_pi_fc * std::norm(beta) * j_phi;
        oracle.block<3, 1>(0, 3) = w * two_pi_fc * j_phi_br;
        oracle.block<3, 1>(0, 4) = w * two_pi_fc * j_phi_bi;
        oracle.block<1, 3>(3, 0) = oracle.block<3, 1>(0, 3).transpose();
        oracle.block<1, 3>(4, 0) = oracle.block<3, 1>(0, 4).transpose();
        oracle(3, 3) = w * j_beta;
        oracle(4, 4) = w * j_beta;

        NearFieldOrientationCertificate::Point point;
        point.n_ue = n_ue;
        point.oracle_rel_error = (j.mat - oracle).norm() / oracle.norm();

        const auto est = estimability(j.mat);
        point.narrowband_general_ratio =
            est.lambda_max > 0.0 ? std::abs(est.lambda_min) / est.lambda_max : 0.0;

        const Fim je = efim(j, orientation_subset(1), /*allow_pseudo_inverse=*/true);
        const auto est_e = estimability(je.mat);
        point.narrowband_efim_ratio =
            est_e.lambda_max > 0.0 ? std::abs(est_e.lambda_min) / est_e.lambda_max : 0.0;
        const double raw = estimability(orientation_block(j, 1)).lambda_max;
        point.narrowband_efim_residual = raw > 0.0 ? est_e.lambda_max / raw : 0.0;

        const Fim je_exact = efim(j_exact, orientation_subset(1), /*allow_pseudo_inverse=*/true);
        const auto est_x = estimability(je_exact.mat);
        point.exact_efim_ratio =
            est_x.lambda_max > 0.0 ? std::abs(est_x.lambda_min) / est_x.lambda_max : 0.0;

        point.singular_expected = n_ue < 2;
        cert.points.push_back(point);
    }

    cert.pass = true;
    for (const auto &point : cert.points)
    {
        cert.pass = cert.pass && point.oracle_rel_error < 1e-8;
        if (point.singular_expected)
            cert.pass = cert.pass && point.narrowband_general_ratio < cert.singular_tol &&
                        point.narrowband_efim_residual < cert.singular_tol;
        else
            cert.pass = cert.pass && point.exact_efim_ratio > cert.definite_tol;
    }
    return cert;
}

SchemeEquivalenceCertificate scheme_equivalence_certificate(const Scenario &scenario,
                                                            std::uint64_t seed, int trials)
{
    SchemeEquivalenceCertificate cert;

    auto jacobian_gap = [](const Scenario &s) {
        ParamLayout geom;
        for (const auto &e : full_layout(s).entries)
            if (is_geometric(e.name))
                geom.entries.push_back(e);
        const LocationLayout loc = location_layout_full(s);
        const auto upsilon_pose =
            location_jacobian(s, geom, loc, RisScheme::AbsolutePosition);
        const auto upsilon_offset =
            location_jacobian(s, geom, loc, RisScheme::MisalignmentOffset);
        return (upsilon_pose.mat - upsilon_offset.mat).norm();
    };

    cert.jacobian_difference = jacobian_gap(scenario);

    LocationPrior prior;
    prior.ue_position = 0.3;
    prior.ue_orientation = 0.2;
    prior.ris.resize(scenario.ris_count(), {0.5, 0.4});
    const auto efim_pose =
        ue_location_efim(scenario, CaseLabel::Full, RisScheme::AbsolutePosition, prior);
    const auto efim_offset =
        ue_location_efim(scenario, CaseLabel::Full, RisScheme::MisalignmentOffset, prior);
    cert.efim_relative_difference =
        (efim_pose.efim - efim_offset.efim).norm() / efim_pose.efim.norm();

    cert.random_trials = trials;
    for (int i = 0; i < trials; ++i)
    {
        const Scenario s = random_scenario(seed + static_cast<std::uint64_t>(i));
        cert.max_random_difference = std::max(cert.max_random_difference, jacobian_gap(s));
    }

    cert.pass = cert.jacobian_difference == 0.0 && cert.max_random_difference == 0.0 &&
                cert.efim_relative_difference < 1e-12;
    return cert;
}

DerivativeCheck check_signal_derivatives(const Scenario &scenario, const ParamVector &params,
                                         const std::vector<std::array<int, 3>> &samples,
                                         double threshold)
{
    const SignalModel model(scenario, params, true);

    DerivativeCheck check;
    const int p = static_cast<int>(params.layout.size());
    Eigen::MatrixXcd analytic(static_cast<Eigen::Index>(samples.size()), p);
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        const auto &[t, u, n] = samples[i];
        analytic.row(static_cast<Eigen::Index>(i)) = model.gradient(t, u, n).transpose();
    }

    for (int flat = 0; flat < p; ++flat)
    {
        const Eigen::VectorXcd fd = fd_signal_derivative(scenario, params, flat, samples);
        const double scale = std::max(fd.norm(), 1e-300);
        const double err = (analytic.col(flat) - fd).norm() / scale;
        if (err > check.max_rel_error)
        {
            check.max_rel_error = err;
            check.worst_param = to_string(params.layout.entries[static_cast<std::size_t>(flat)]);
        }
    }
    check.pass = check.max_rel_error < threshold;
    return check;
}

double schur_identity_error(const Eigen::MatrixXd &j, const std::vector<int> &interest)
{
    const Eigen::MatrixXd je = schur_complement(j, interest);
    const Eigen::MatrixXd je_inv = stable_inverse(je);
    const Eigen::MatrixXd j_inv = stable_inverse(j);
    Eigen::MatrixXd sub(interest.size(), interest.size());
    for (std::size_t r = 0; r < interest.size(); ++r)
        for (std::size_t c = 0; c < interest.size(); ++c)
            sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                j_inv(interest[r], interest[c]);
    return (je_inv - sub).norm() / sub.norm();
}

Scenario random_scenario(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    Scenario s;
    s.waveform.carrier_frequency_hz = kSpeedOfLight / 0.03;
    s.waveform.subcarrier_count = 4 + 4 * static_cast<int>(rng() % 2);
    s.waveform.subcarrier_spacing_hz = 120e3;
    s.waveform.symbol_count = 4;
    s.waveform.narrowband = true;

    s.bs.pose = Pose{};
    s.bs.layout = ura_layout(1, 1, 0.015);

    s.ue.pose.nominal_position = {uniform(10.0, 14.0), uniform(8.0, 12.0), uniform(2.0, 3.2)};
    s.ue.pose.misalignment = {uniform(-0.05, 0.05), uniform(-0.05, 0.05), uniform(-0.05, 0.05)};
    s.ue.pose.orientation = EulerAngles{uniform(-0.2, 0.2), uniform(-0.2, 0.2), uniform(-0.2, 0.2)};
    s.ue.layout = ura_layout(2, rng() % 2 ? 2 : 1, 0.015);

    const int m1 = 1 + static_cast<int>(rng() % 2);
    for (int m = 0; m < m1; ++m)
    {
        RisPath path;
        path.entity.pose.nominal_position = {uniform(8.0, 12.0), uniform(7.0, 10.0),
                                             uniform(3.6, 4.6)};
        path.entity.pose.misalignment = {uniform(-0.1, 0.1), uniform(-0.1, 0.1),
                                         uniform(-0.1, 0.1)};
        path.entity.pose.orientation =
            EulerAngles{uniform(-0.25, 0.25), uniform(-0.25, 0.25), uniform(-0.25, 0.25)};
        path.entity.layout = ura_layout(2 + static_cast<int>(rng() % 2), 2, 0.015);
        path.entity.broadside_normal = -Eigen::Vector3d::UnitZ();
        path.gain = std::polar(uniform(0.5, 2.0), uniform(-M_PI, M_PI));
        s.paths.push_back(std::move(path));
    }

    s.beam_targets = {s.ue.pose.nominal_position};
    const auto codes = temporal_codes(s.waveform.symbol_count, m1);
    for (int m = 0; m < m1; ++m)
    {
        auto &path = s.paths[static_cast<std::size_t>(m)];
        path.temporal_code = codes[static_cast<std::size_t>(m)];
        path.element_phases.resize(static_cast<Eigen::Index>(path.entity.layout.count()));
        for (Eigen::Index r = 0; r < path.element_phases.size(); ++r)
            path.element_phases[r] = uniform(-M_PI, M_PI);
    }

    s.q0 = uniform(0.15, 0.45);
    s.element_efficiency = 0.5;
    s.pathloss = PathlossModel::PerElement;
    s.regime = Regime::Near;
    s.include_los = true;
    s.los_gain = std::polar(uniform(0.5, 2.0), uniform(-M_PI, M_PI));
    s.snr.mode = SnrSpec::Mode::Direct;
    s.snr.snr_db = uniform(10.0, 30.0);

    try
    {
        s.validate();
    }
    catch (const std::exception &)
    {
        return random_scenario(seed + 0x9e3779b97f4a7c15ull);
    }
    return s;
}

Eigen::MatrixXd random_spd(std::uint64_t seed, int dim)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            m(r, c) = gauss(rng);
    Eigen::MatrixXd spd = m.transpose() * m + 0.5 * dim * Eigen::MatrixXd::Identity(dim, dim);
    return spd;
}

ValidationOutcome run_validation(const Scenario &scenario, const std::string &mode,
                                 std::uint64_t seed)
{
    ValidationOutcome out;
    out.mode = mode;
    std::ostringstream line;

    if (mode == "derivatives")
    {
        Scenario s = scenario;
        const ParamVector params = true_channel_params(s);
        std::vector<std::array<int, 3>> samples;
        const int n_sub = s.waveform.subcarrier_count;
        const int n_u = static_cast<int>(s.ue.layout.count());
        for (int t = 0; t < s.waveform.symbol_count; ++t)
            for (int u = 0; u < std::min(n_u, 4); ++u)
                for (int n : {1, (n_sub + 1) / 2, n_sub})
                    samples.push_back({t, u, n});
        const auto check = check_signal_derivatives(s, params, samples);
        out.pass = check.pass;
        out.max_error = check.max_rel_error;
        line << "max relative derivative error " << check.max_rel_error << " (worst "
             << check.worst_param << ")";
        out.lines.push_back(line.str());
        return out;
    }

    if (mode == "lemma3")
    {
        // The prior-identity check runs at a prior large enough that the
        // double-precision cancellation residual of the observation part is
        // far below the identity tolerance.
        const auto cert = farfield_orientation_certificate(scenario, {1, 4, 16, 64}, 100.0);
        out.pass = cert.pass;
        for (const auto &p : cert.zero_prior)
        {
            std::ostringstream l;
            l << "n_ue=" << p.n_ue << " general-degeneracy " << p.general_ratio
              << " efim-residual " << p.efim_residual;
            out.lines.push_back(l.str());
            out.max_error = std::max({out.max_error, p.general_ratio, p.efim_residual});
        }
        line << "prior identity error " << cert.prior_identity_error;
        out.lines.push_back(line.str());
        out.max_error = std::max(out.max_error, cert.prior_identity_error);
        return out;
    }

    if (mode == "lemma4")
    {
        const auto cert = nearfield_orientation_certificate(scenario, {1, 2, 4, 16});
        out.pass = cert.pass;
        for (const auto &p : cert.points)
        {
            std::ostringstream l;
            l << "n_ue=" << p.n_ue << (p.singular ? " singular-as-predicted " : " definite ")
              << "ratio " << p.general_ratio << " oracle-error " << p.oracle_rel_error;
            out.lines.push_back(l.str());
            out.max_error = std::max(out.max_error, p.oracle_rel_error);
        }
        return out;
    }

    if (mode == "theorem2")
    {
        const auto cert = scheme_equivalence_certificate(scenario, seed, 20);
        out.pass = cert.pass;
        out.max_error = std::max(cert.jacobian_difference, cert.efim_relative_difference);
        line << "jacobian gap " << cert.jacobian_difference << ", efim gap "
             << cert.efim_relative_difference << ", random trials " << cert.random_trials
             << " max gap " << cert.max_random_difference;
        out.lines.push_back(line.str());
        return out;
    }

    if (mode == "schur")
    {
        std::mt19937_64 rng(seed);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial)
        {
            const int dim = 5 + static_cast<int>(rng() % 56);
            const int ni = 1 + static_cast<int>(rng() % (dim - 1));
            const Eigen::MatrixXd j = random_spd(seed + 1000 + trial, dim);
            std::vector<int> interest;
            for (int i = 0; i < ni; ++i)
                interest.push_back(i);
            worst = std::max(worst, schur_identity_error(j, interest));
        }
        const Fim j = observation_fim(scenario,
                                      channel_params(scenario, full_layout(scenario)));
        PriorSpec ridge; // keep the scenario matrix invertible for the identity check
        for (const auto &e : j.layout.entries)
            ridge.set(e, 1e-6);
        const Fim jr = bayesian_fim(j, ridge, scenario.snr_reference());
        std::vector<int> geom = j.layout.geometric_indices();
        worst = std::max(worst, schur_identity_error(jr.mat, geom));
        out.pass = worst < 1e-8;
        out.max_error = worst;
        line << "max inverse-submatrix identity error " << worst;
        out.lines.push_back(line.str());
        return out;
    }

    throw std::invalid_argument("run_validation: unknown mode '" + mode + "'");
}

} // namespace risfim
