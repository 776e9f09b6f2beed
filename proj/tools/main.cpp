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

#include "risfim/config.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace
{

int worker_threads()
{
    if (const char *env = std::getenv("RIS_FIM_THREADS"))
    {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return 1;
}

risfim::ExperimentConfig load(const std::string &config_path, const std::string &preset,
                              const std::string &regime, const std::string &case_label,
                              std::uint64_t seed, bool seed_set)
{
    risfim::ExperimentConfig config;
    if (!config_path.empty())
        config = risfim::load_config_file(config_path);
    else if (preset == "paper-v")
        config = risfim::preset_paper_v();
    else
        throw std::runtime_error("either --config or --preset paper-v is required");

    if (!regime.empty())
        config.sweep.scenario.regime =
            regime == "far" ? risfim::Regime::Far : risfim::Regime::Near;
    if (!case_label.empty())
        config.sweep.label = risfim::case_from_string(case_label);
    if (seed_set)
        config.sweep.seed = seed;
    return config;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Fisher-information and error bounds for RIS-aided downlink localization"};
    app.require_subcommand(1);

    std::string config_path, preset, regime, case_label, out_path;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_path, "scenario configuration file (JSON)");
        cmd->add_option("--preset", preset, "named preset (paper-v)");
        cmd->add_option("--seed", seed, "seed for randomized checks");
        cmd->add_option("--regime", regime, "propagation regime override")
            ->check(CLI::IsMember({"near", "far"}));
        cmd->add_option("--case", case_label, "parameterization case override")
            ->check(CLI::IsMember({"a", "b", "c", "d", "e", "full"}));
    };

    CLI::App *sweep = app.add_subcommand("sweep", "run the configured sweep and emit CSV");
    add_common(sweep);
    sweep->add_option("--out", out_path, "CSV output path (default stdout)");

    std::string mode;
    CLI::App *validate = app.add_subcommand("validate", "run a numerical certification");
    add_common(validate);
    validate
        ->add_option("mode", mode,
                     "check to run: derivatives | lemma3 | lemma4 | theorem2 | schur")
        ->required()
        ->check(CLI::IsMember({"derivatives", "lemma3", "lemma4", "theorem2", "schur"}));

    CLI::App *describe_cmd = app.add_subcommand("describe", "print a scenario summary");
    add_common(describe_cmd);

    CLI11_PARSE(app, argc, argv);

    try
    {
        const bool seed_set = sweep->count("--seed") || validate->count("--seed") ||
                              describe_cmd->count("--seed");
        auto config = load(config_path, preset, regime, case_label, seed, seed_set);

        if (app.got_subcommand(sweep))
        {
            const auto rows = risfim::run_sweep(config.sweep, worker_threads());
            const std::string csv = risfim::csv_string(rows);
            if (out_path.empty())
            {
                std::cout << csv;
            }
            else
            {
                std::ofstream out(out_path, std::ios::binary);
                if (!out)
                    throw std::runtime_error("cannot write '" + out_path + "'");
                out << csv;
            }
            return 0;
        }

        if (app.got_subcommand(validate))
        {
            const auto outcome =
                risfim::run_validation(config.sweep.scenario, mode, config.sweep.seed);
            nlohmann::json report;
            report["mode"] = outcome.mode;
            report["pass"] = outcome.pass;
            report["max_error"] = outcome.max_error;
            report["detail"] = outcome.lines;
            std::cout << report.dump(2) << "\n";
            return outcome.pass ? 0 : 1;
        }

        if (app.got_subcommand(describe_cmd))
        {
            std::cout << risfim::describe(config);
            return 0;
        }
    }
    catch (const std::exception &err)
    {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
