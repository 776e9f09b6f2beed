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
#include "risfim/config.hpp"

#include <benchmark/benchmark.h>

namespace
{

risfim::Scenario bench_scenario(int n_ue)
{
    risfim::Scenario s = risfim::paper_v_scenario();
    risfim::set_ue_antennas(s, n_ue);
    return s;
}

void BM_SignalSample(benchmark::State &state)
{
    const auto s = bench_scenario(4);
    const risfim::SignalModel model(s, risfim::true_channel_params(s), true);
    int n = 1;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(model.sample(0, 0, n));
        n = n % s.waveform.subcarrier_count + 1;
    }
}
BENCHMARK(BM_SignalSample);

void BM_ObservationFim(benchmark::State &state)
{
    const auto s = bench_scenario(static_cast<int>(state.range(0)));
    const auto params = risfim::channel_params(s, risfim::case_layout(s, risfim::CaseLabel::A));
    for (auto _ : state)
        benchmark::DoNotOptimize(risfim::observation_fim(s, params));
}
BENCHMARK(BM_ObservationFim)->Arg(4)->Arg(16);

void BM_UeLocationEfim(benchmark::State &state)
{
    const auto s = bench_scenario(8);
    risfim::LocationPrior prior;
    prior.ris.resize(s.ris_count());
    prior.ris[0].orientation = 0.1;
    for (auto _ : state)
        benchmark::DoNotOptimize(risfim::ue_location_efim(s, risfim::CaseLabel::E,
                                                          risfim::RisScheme::AbsolutePosition,
                                                          prior));
}
BENCHMARK(BM_UeLocationEfim);

} // namespace

BENCHMARK_MAIN();
