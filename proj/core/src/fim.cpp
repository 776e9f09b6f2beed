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

#include "risfim/fim.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace risfim
{

Eigen::VectorXcd signal_derivatives(const Scenario &scenario, const ParamVector &params,
                                    int t, int u, int n)
{
    const SignalModel model(scenario, params, true);
    return model.gradient(t, u, n);
}

Fim observation_fim(const Scenario &scenario, const ParamVector &params)
{
    scenario.validate();
    const SignalModel model(scenario, params, true);

    const int p = static_cast<int>(params.layout.size());
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(p, p);
    const Eigen::MatrixXcd gram = model.code_gram();

    for (int u = 0; u < model.n_ue(); ++u)
    {
        for (int n = 1; n <= model.n_subcarriers(); ++n)
        {
            const Eigen::VectorXcd row = model.gradient_un(u, n);
            for (int v = 0; v < p; ++v)
            {
                const std::complex<double> lhs = std::conj(row[v]);
                const int path_v = model.path_of_param(v);
                for (int g = v; g < p; ++g)
                {
                    const std::complex<double> w = gram(path_v, model.path_of_param(g));
                    j(v, g) += 2.0 * std::real(w * lhs * row[g]);
                }
            }
        }
    }
    for (int v = 0; v < p; ++v)
        for (int g = 0; g < v; ++g)
            j(v, g) = j(g, v);

    return {std::move(j), params.layout};
}

void PriorSpec::set(const ParamIndex &index, double fraction)
{
    for (auto &entry : fractions)
    {
        if (entry.first == index)
        {
            entry.second = fraction;
            return;
        }
    }
    fractions.emplace_back(index, fraction);
}

double PriorSpec::fraction(const ParamIndex &index) const
{
    for (const auto &entry : fractions)
        if (entry.first == index)
            return entry.second;
    return 0.0;
}

Fim bayesian_fim(const Fim &obs, const PriorSpec &prior, double snr_reference)
{
    Fim out = obs;
    for (const auto &[index, fraction] : prior.fractions)
    {
        if (fraction < 0.0)
            throw std::invalid_argument("bayesian_fim: negative prior information for " +
                                        to_string(index));
        const int flat = obs.layout.find(index);
        if (flat < 0)
            throw std::invalid_argument("bayesian_fim: prior parameter " + to_string(index) +
                                        " is not in the matrix layout");
        out.mat(flat, flat) += fraction * snr_reference;
    }
    return out;
}

namespace
{

Eigen::VectorXd equilibration_scale(const Eigen::MatrixXd &m)
{
    Eigen::VectorXd d(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        const double v = m(i, i);
        d[i] = v > 0.0 ? 1.0 / std::sqrt(v) : 1.0;
    }
    return d;
}

} // namespace

Eigen::MatrixXd schur_complement(const Eigen::MatrixXd &j, const std::vector<int> &interest,
                                 bool allow_pseudo_inverse, double tol)
{
    const Eigen::Index n = j.rows();
    std::vector<bool> keep(static_cast<std::size_t>(n), false);
    for (int idx : interest)
    {
        if (idx < 0 || idx >= n)
            throw std::out_of_range("schur_complement: interest index out of range");
        keep[static_cast<std::size_t>(idx)] = true;
    }
    std::vector<int> nuisance;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!keep[static_cast<std::size_t>(i)])
            nuisance.push_back(static_cast<int>(i));

    const Eigen::Index ni = static_cast<Eigen::Index>(interest.size());
    const Eigen::Index nn = static_cast<Eigen::Index>(nuisance.size());

    Eigen::MatrixXd a(ni, ni), b(ni, nn), c(nn, nn);
    for (Eigen::Index r = 0; r < ni; ++r)
        for (Eigen::Index s = 0; s < ni; ++s)
            a(r, s) = j(interest[r], interest[s]);
    for (Eigen::Index r = 0; r < ni; ++r)
        for (Eigen::Index s = 0; s < nn; ++s)
            b(r, s) = j(interest[r], nuisance[s]);
    for (Eigen::Index r = 0; r < nn; ++r)
        for (Eigen::Index s = 0; s < nn; ++s)
            c(r, s) = j(nuisance[r], nuisance[s]);

    if (nn == 0)
        return a;

    const Eigen::VectorXd d = equilibration_scale(c);
    const Eigen::MatrixXd c_eq = d.asDiagonal() * c * d.asDiagonal();
    const Eigen::MatrixXd b_eq = b * d.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c_eq);
    const double lmax = eig.eigenvalues().cwiseAbs().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    const double ratio = lmax > 0.0 ? lmin / lmax : 0.0;

    Eigen::MatrixXd reduced;
    if (lmax <= 0.0 || ratio <= tol)
    {
        if (!allow_pseudo_inverse)
            throw NuisanceSingular("schur_complement: nuisance block is numerically singular "
                                   "(eigenvalue ratio " +
                                       std::to_string(ratio) + ")",
                                   ratio);
        Eigen::VectorXd inv = Eigen::VectorXd::Zero(nn);
        for (Eigen::Index i = 0; i < nn; ++i)
            if (eig.eigenvalues()[i] > tol * lmax)
                inv[i] = 1.0 / eig.eigenvalues()[i];
        const Eigen::MatrixXd pinv =
            eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
        reduced = a - b_eq * pinv * b_eq.transpose();
    }
    else
    {
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(c_eq);
        reduced = a - b_eq * ldlt.solve(b_eq.transpose());
    }
    return 0.5 * (reduced + reduced.transpose());
}

Fim efim(const Fim &j, const std::vector<ParamIndex> &interest, bool allow_pseudo_inverse)
{
    std::vector<int> rows;
    ParamLayout layout;
    for (const auto &index : interest)
    {
        const int flat = j.layout.find(index);
        if (flat < 0)
            throw std::invalid_argument("efim: parameter " + to_string(index) +
                                        " is not in the matrix layout");
        rows.push_back(flat);
        layout.entries.push_back(index);
    }
    return {schur_complement(j.mat, rows, allow_pseudo_inverse), std::move(layout)};
}

Estimability estimability(const Eigen::MatrixXd &j, double tol)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (j + j.transpose()));
    Estimability out;
    out.lambda_min = eig.eigenvalues().minCoeff();
    out.lambda_max = eig.eigenvalues().maxCoeff();
    out.min_eigenvector = eig.eigenvectors().col(0);
    out.estimatable = out.lambda_max > 0.0 && out.lambda_min > tol * out.lambda_max;
    return out;
}

Eigen::MatrixXd stable_inverse(const Eigen::MatrixXd &j)
{
    const Eigen::VectorXd d = equilibration_scale(j);
    const Eigen::MatrixXd j_eq = d.asDiagonal() * j * d.asDiagonal();
    const Eigen::MatrixXd inv_eq =
        Eigen::LDLT<Eigen::MatrixXd>(j_eq).solve(Eigen::MatrixXd::Identity(j.rows(), j.cols()));
    return d.asDiagonal() * inv_eq * d.asDiagonal();
}

double fd_step_for(ParamName name, double value)
{
    if (name == ParamName::tau_bu || name == ParamName::tau_ru || name == ParamName::tau_br ||
        name == ParamName::sync_error)
        return 1e-13;
    return std::max(1e-7, 1e-7 * std::abs(value));
}

Eigen::VectorXcd fd_signal_derivative(const Scenario &scenario, const ParamVector &params,
                                      int flat, const std::vector<std::array<int, 3>> &samples)
{
    if (flat < 0 || flat >= static_cast<int>(params.layout.size()))
        throw std::out_of_range("fd_signal_derivative: parameter index out of range");

    const ParamName name = params.layout.entries[static_cast<std::size_t>(flat)].name;
    const double base = fd_step_for(name, params.values[flat]);
    const bool is_delay = name == ParamName::tau_bu || name == ParamName::tau_ru ||
                          name == ParamName::tau_br || name == ParamName::sync_error;

    auto central = [&](double step) {
        ParamVector plus = params;
        plus.values[flat] += step;
        ParamVector minus = params;
        minus.values[flat] -= step;
        const SignalModel hi(scenario, plus, true);
        const SignalModel lo(scenario, minus, true);
        Eigen::VectorXcd out(static_cast<Eigen::Index>(samples.size()));
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            const auto &[t, u, n] = samples[i];
            out[static_cast<Eigen::Index>(i)] =
                (hi.sample(t, u, n) - lo.sample(t, u, n)) / (2.0 * step);
        }
        return out;
    };

    // Adaptive step: angle and gain differences are roundoff-limited at the
    // base step (the worst case is a focused, perfectly aligned surface whose
    // yaw derivative nearly cancels), delay differences truncation-limited.
    // Walk a step ladder and keep the pair of neighbors that agree best;
    // the selection never looks at the analytic value.
    const double factor = is_delay ? 0.125 : 8.0;
    const std::array<double, 3> steps = {base, base * factor, base * factor * factor};
    std::array<Eigen::VectorXcd, 3> fd;
    for (std::size_t i = 0; i < steps.size(); ++i)
        fd[i] = central(steps[i]);

    double best_gap = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i)
    {
        const double scale = std::max(fd[i + 1].norm(), 1e-300);
        const double gap = (fd[i] - fd[i + 1]).norm() / scale;
        if (gap < best_gap)
        {
            best_gap = gap;
            best = i;
        }
    }
    return 0.5 * (fd[best] + fd[best + 1]);
}

} // namespace risfim
