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

#ifndef RISFIM_FIM_HPP
#define RISFIM_FIM_HPP

#include "risfim/params.hpp"
#include "risfim/signal.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace risfim
{

// Real symmetric information matrix labeled by channel-parameter indices.
struct Fim
{
    Eigen::MatrixXd mat;
    ParamLayout layout;

    Eigen::Index size() const { return mat.rows(); }
};

// Thrown when the nuisance block of a Schur reduction is numerically
// singular; carries the offending eigenvalue ratio.
class NuisanceSingular : public std::runtime_error
{
  public:
    NuisanceSingular(const std::string &what, double ratio)
        : std::runtime_error(what), eigenvalue_ratio(ratio)
    {
    }
    double eigenvalue_ratio;
};

// Analytic per-sample derivative row of the weighted signal with respect to
// the supplied parameters (symbol t, antenna u, subcarrier n).
Eigen::VectorXcd signal_derivatives(const Scenario &scenario, const ParamVector &params,
                                    int t, int u, int n);

// Observation information: J[v,g] = 2 sum_{u,n,t} Re{ d_mu_v^* d_mu_g } with
// each path scaled by its SNR (per-path noise normalization).
Fim observation_fim(const Scenario &scenario, const ParamVector &params);

// Per-parameter prior information, quantified as fractions of the reference
// SNR; entries absent from a matrix's layout are ignored by value lookups.
struct PriorSpec
{
    std::vector<std::pair<ParamIndex, double>> fractions;

    void set(const ParamIndex &index, double fraction);
    double fraction(const ParamIndex &index) const;
};

// Observation plus diagonal prior information.
Fim bayesian_fim(const Fim &obs, const PriorSpec &prior, double snr_reference);

// Schur complement onto `interest` (row indices of J): A - B C^{-1} B'.
// The nuisance block is symmetrically equilibrated before factorization.
// A numerically singular nuisance block throws NuisanceSingular unless
// `allow_pseudo_inverse` is set, in which case rank-deficient directions are
// dropped.
Eigen::MatrixXd schur_complement(const Eigen::MatrixXd &j, const std::vector<int> &interest,
                                 bool allow_pseudo_inverse = false, double tol = 1e-10);

// EFIM of the named subset of parameters.
Fim efim(const Fim &j, const std::vector<ParamIndex> &interest,
         bool allow_pseudo_inverse = false);

struct Estimability
{
    bool estimatable = false;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    Eigen::VectorXd min_eigenvector;
};

// Positive definite iff lambda_min > tol * lambda_max.
Estimability estimability(const Eigen::MatrixXd &j, double tol = 1e-10);

// Inverse through symmetric equilibration (the information matrices mix
// units of seconds and radians; raw inversion is numerically hopeless).
Eigen::MatrixXd stable_inverse(const Eigen::MatrixXd &j);

// Central finite-difference derivative of the weighted signal with respect
// to flat parameter `flat`, for cross-checking signal_derivatives. Steps:
// max(1e-7, 1e-7 |value|) generally, 1e-13 s for delays and sync errors.
Eigen::VectorXcd fd_signal_derivative(const Scenario &scenario, const ParamVector &params,
                                      int flat, const std::vector<std::array<int, 3>> &samples);

double fd_step_for(ParamName name, double value);

} // namespace risfim

#endif
