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

#ifndef RISFIM_SWEEP_HPP
#define RISFIM_SWEEP_HPP

#include "risfim/certificates.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace risfim
{

enum class SweepAxis
{
    UeAntennas,
    RisElements,   // elements of the first surface
    PriorFraction, // orientation prior of the first surface, fraction of SNR
};

const char *to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string &text);

struct SweepConfig
{
    Scenario scenario;
    CaseLabel label = CaseLabel::A;
    SweepAxis axis = SweepAxis::UeAntennas;
    std::vector<double> grid;
    // Orientation prior on the first surface as a fraction of the SNR;
    // overridden per grid point when the axis is PriorFraction.
    double orientation_prior_fraction = 0.0;
    std::uint64_t seed = 0;
};

struct SweepRow
{
    double axis = 0.0;
    double peb_m = 0.0;
    double oeb_rad = 0.0;
    double lambda_min_norm = 0.0;
    std::string verdict;
    std::string regime;
    std::string case_label;
};

// One bound evaluation. Cases a/b work at the channel level (orientation
// EFIM of the first surface); cases c/d/e run the location pipeline for the
// UE position.
SweepRow evaluate_point(const SweepConfig &config, double axis_value);

// Grid evaluation on a worker pool; rows come back in grid order regardless
// of the thread count.
std::vector<SweepRow> run_sweep(const SweepConfig &config, int threads);

void write_csv(const std::vector<SweepRow> &rows, std::ostream &os);
std::string csv_string(const std::vector<SweepRow> &rows);

} // namespace risfim

#endif
