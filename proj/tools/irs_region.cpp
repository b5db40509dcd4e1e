// SPDX-License-Identifier: Apache-2.0
//
// irscap: capacity and rate regions of IRS-assisted multi-user downlinks
// Copyright (C) 2026 The irscap authors
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

// irs_region: rate-region sweeps and common-rate studies from the command line.

#include "irscap/config_file.hpp"
#include "irscap/experiment.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace
{
// "0,3,5-9" -> {0, 3, 5, 6, 7, 8, 9}
std::vector<std::uint64_t> parse_seed_list(const std::vector<std::string> &items)
{
    std::vector<std::uint64_t> out;
    for (const std::string &item : items)
    {
        const auto dash = item.find('-');
        if (dash == std::string::npos)
        {
            out.push_back(std::stoull(item));
            continue;
        }
        const std::uint64_t lo = std::stoull(item.substr(0, dash)), hi = std::stoull(item.substr(dash + 1));
        if (hi < lo)
            throw std::invalid_argument("empty seed range '" + item + "'");
        for (std::uint64_t s = lo; s <= hi; ++s)
            out.push_back(s);
    }
    return out;
}
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Rate regions and common rates of IRS-assisted NOMA/OMA downlinks"};
    app.set_version_flag("--version", "irs_region 1.0");

    std::vector<std::string> modes{"noma-inf"};
    int alpha_steps = 11;
    std::vector<std::string> seeds{"0"};
    std::vector<int> blocks;
    std::vector<double> pmax_dbm;
    std::vector<int> mr;
    int bits = -1;
    std::string config_path, out_path = "-", format = "csv";
    std::uint64_t budget = 0;
    int workers = 0;
    bool timing = false, study = false;

    app.add_option("--mode", modes, "Engines: noma-inf, noma-finite, oma-inf, oma-finite, baseline-noma, "
                                    "baseline-oma, no-irs-noma, no-irs-oma, oma-continuous")
        ->delimiter(',');
    app.add_option("--alpha-steps", alpha_steps, "Rate-profile grid size S (alpha_1 = 0, 1/(S-1), ..., 1)")
        ->check(CLI::Range(2, 1 << 20));
    app.add_option("--seeds", seeds, "Channel seeds, comma list with lo-hi ranges")->delimiter(',');
    app.add_option("--n-blocks", blocks, "Block counts N for finite and baseline modes")->delimiter(',');
    app.add_option("--pmax-dbm", pmax_dbm, "Transmit power budget in dBm (a list only with --study)")
        ->delimiter(',');
    app.add_option("--mr", mr, "IRS element counts M_R (a list only with --study)")->delimiter(',');
    app.add_option("--bits", bits, "Phase-shift resolution b")->check(CLI::Range(1, 16));
    app.add_option("--config", config_path, "key = value scenario file")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "Output path, - for stdout");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--budget", budget, "Largest exhaustive enumeration allowed");
    app.add_option("--workers", workers, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    app.add_flag("--timing", timing, "Record wall time per row (output is then not reproducible)");
    app.add_flag("--study", study, "Mean common rate at alpha = (1/2, 1/2) over seeds per grid point");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try
    {
        irscap::Scenario scenario;
        if (!config_path.empty())
            scenario = irscap::load_config_file(config_path, scenario);

        irscap::ExperimentSpec spec;
        spec.system = scenario.system;
        spec.channel = scenario.channel;
        spec.modes.clear();
        for (const auto &m : modes)
            spec.modes.push_back(irscap::parse_mode(m));
        spec.alpha_steps = alpha_steps;
        spec.seeds = parse_seed_list(seeds);
        spec.blocks = blocks.empty() ? std::vector<int>{spec.system.num_blocks} : blocks;
        if (bits > 0)
            spec.system.phase_bits = bits;
        if (budget > 0)
            spec.system.enumeration_budget = budget;
        spec.workers = workers;
        spec.timing = timing;
        if (!study && (pmax_dbm.size() > 1 || mr.size() > 1))
            throw std::invalid_argument("--pmax-dbm and --mr take a single value unless --study is given");
        if (pmax_dbm.size() == 1)
            spec.system.max_power = irscap::dbm_to_watts(pmax_dbm.front());
        if (mr.size() == 1)
            spec.system.irs_elements = mr.front();

        const auto fmt = irscap::parse_format(format);
        std::string text;
        bool partial = false;
        if (study)
        {
            irscap::StudySpec s;
            s.base = spec;
            s.max_power_dbm = pmax_dbm;
            s.irs_elements = mr;
            const auto rows = irscap::common_rate_study(s);
            for (const auto &r : rows)
                partial = partial || r.failures > 0;
            text = fmt == irscap::OutputFormat::csv ? irscap::format_study_csv(rows) : irscap::format_study_json(rows);
        }
        else
        {
            const auto rows = irscap::sweep_region(spec);
            for (const auto &r : rows)
                if (!r.ok())
                {
                    partial = true;
                    std::cerr << "irs_region: " << irscap::to_string(r.mode) << " seed " << r.seed << " alpha_1 "
                              << r.alpha.front() << ": " << r.error << '\n';
                }
            text = fmt == irscap::OutputFormat::csv ? irscap::format_csv(rows, spec.system.num_users)
                                                    : irscap::format_json(rows);
        }

        if (out_path == "-")
            std::cout << text;
        else
            irscap::write_text(out_path, text);
        return partial ? 2 : 0;
    }
    catch (const std::exception &e)
    {
        std::cerr << "irs_region: " << e.what() << '\n';
        return 1;
    }
}
