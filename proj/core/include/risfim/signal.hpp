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

#ifndef RISFIM_SIGNAL_HPP
#define RISFIM_SIGNAL_HPP

#include "risfim/params.hpp"
#include "risfim/scenario.hpp"

#include <complex>
#include <vector>

namespace risfim
{

// Noise-free received-signal model, evaluated as a function of the channel
// parameter vector. Parameters present in the supplied vector override the
// scenario truth; everything else is held at its true value. Sample indices:
// t (symbol, 0-based), u (receive antenna, 0-based), n (subcarrier, 1-based).
//
// Distances are reconstructed from the link parameters:
//   near field: d = || c tau Delta(theta,phi) + s_to - s_from ||
//   far field:  d =    c tau + Delta(theta,phi)' (s_to - s_from)
// with s_* the rotated element offsets, so the model and its derivatives are
// exact functions of the parameter vector.
//
// With `snr_weighted` set, each path is scaled by sqrt(path SNR) and its
// amplitude is normalized by the true centroid pathloss, which makes the
// observation information per path proportional to that path's SNR. Unset,
// the evaluation returns the raw physical signal.
class SignalModel
{
  public:
    SignalModel(const Scenario &scenario, const ParamVector &params, bool snr_weighted);

    // mu_{t,u}[n]
    std::complex<double> sample(int t, int u, int n) const;

    // d mu_{t,u}[n] / d eta, ordered as the parameter layout.
    Eigen::VectorXcd gradient(int t, int u, int n) const;

    // Symbol-independent gradient factor: gradient(t,u,n) equals
    // code_weight(path, t) * gradient_un(u, n) entry-wise.
    Eigen::VectorXcd gradient_un(int u, int n) const;

    std::complex<double> code_weight(int path, int t) const;

    // C(m, m') = sum_t conj(gamma_t^m) gamma_t^m' over path ids 0..M1.
    Eigen::MatrixXcd code_gram() const;

    int path_of_param(int flat) const;
    const ParamLayout &layout() const { return params_.layout; }
    int n_ue() const { return n_u_; }
    int n_subcarriers() const { return waveform_.subcarrier_count; }
    int n_symbols() const { return waveform_.symbol_count; }

  private:
    struct LocalParam
    {
        ParamName name;
        int flat;
        double centroid_delay_coeff; // d(eps + tau_centroid)/d param
    };

    struct PathBlock
    {
        int path_id = 0; // 0 = line of sight
        std::complex<double> beta{1.0, 0.0};
        double eps = 0.0;
        double weight = 1.0;   // sqrt(path SNR) in weighted mode
        double tau_cent = 0.0; // centroid delay sum of the path
        int n_b = 1, n_r = 1;
        std::vector<LocalParam> params;
        Eigen::VectorXcd code; // per-symbol scalar (all-ones for the direct path)
        // flattened per (u, b, r); npar() entries per pair in grads
        std::vector<double> tau_rel;           // per-element delay sum, s
        std::vector<double> rho;               // amplitude (normalized in weighted mode)
        std::vector<std::complex<double>> mod; // e^{j theta_r} element modulation
        std::vector<double> dtau;              // d tau_rel / d param, [pair][param]
        std::vector<double> drho;              // d rho / d param,     [pair][param]
    };

    void build_path(const Scenario &scenario, int path_id, bool snr_weighted);

    Waveform waveform_;
    ParamVector params_;
    int n_u_ = 1, n_b_ = 1;
    Eigen::MatrixXcd precode_; // (b, n-1): per-antenna transmit factor
    std::vector<PathBlock> blocks_;
    std::vector<int> param_path_; // flat -> path id
};

// Raw near-field signal sample of the scenario (exact element distances).
std::complex<double> signal_nearfield(const Scenario &scenario, int t, int u, int n);

// Raw far-field signal across all receive antennas (first-order distances,
// centroid pathloss).
Eigen::VectorXcd signal_farfield(const Scenario &scenario, int t, int n);

} // namespace risfim

#endif
