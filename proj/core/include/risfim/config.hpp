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

#ifndef RISFIM_CONFIG_HPP
#define RISFIM_CONFIG_HPP

#include "risfim/sweep.hpp"

#include <string>

namespace risfim
{

// One experiment: a scenario, a parameterization case, and a sweep.
struct ExperimentConfig
{
    SweepConfig sweep;
    std::string preset; // non-empty when built from a named preset
};

// The named "paper-v" preset: the default experiment scenario with the
// orientation-offset case and an antenna-count sweep.
ExperimentConfig preset_paper_v();

// JSON scenario files. parse(emit(c)) reproduces the configuration exactly;
// emission is canonical (sorted keys, round-trip number formatting).
ExperimentConfig parse_config(const std::string &json_text);
std::string emit_config(const ExperimentConfig &config);

ExperimentConfig load_config_file(const std::string &path);
void save_config_file(const ExperimentConfig &config, const std::string &path);

// Human-readable scenario summary: entity table, link geometry, field-region
// classification per surface, and the channel-parameter layout.
std::string describe(const ExperimentConfig &config);

} // namespace risfim

#endif
