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


#include "irscap/experiment.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace irscap;
using doctest::Approx;

namespace
{
ExperimentSpec small_spec(std::vector<Mode> modes, int steps = 5)
{
    ExperimentSpec s;
    s.modes = std::move(modes);
    s.alpha_steps = steps;
    s.seeds = {0, 1};
    s.system.irs_elements = 8;
    s.workers = 2;
    return s;
}

std::map<std::pair<std::uint64_t, double>, double> by_seed_alpha(const std::vector<RegionPoint> &rows, Mode mode)
{
    std::map<std::pair<std::uint64_t, double>, double> out;
    for (const auto &r : rows)
        if (r.mode == mode)
            out[{r.seed, r.alpha[0]}] = r.common_rate;
    return out;
}
} // namespace

TEST_CASE("mode names")
{
    for (Mode m : {Mode::noma_inf, Mode::noma_finite, Mode::oma_inf, Mode::oma_finite, Mode::baseline_noma,
                   Mode::baseline_oma, Mode::no_irs_noma, Mode::no_irs_oma, Mode::oma_continuous})
        CHECK(parse_mode(to_string(m)) == m);
    CHECK(to_string(Mode::no_irs_noma) == "no-irs-noma");
    CHECK_THROWS_AS(parse_mode("noma"), std::invalid_argument);
    CHECK(uses_blocks(Mode::baseline_oma));
    CHECK_FALSE(uses_blocks(Mode::oma_continuous));
    CHECK(parse_format("json") == OutputFormat::json);
    CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("spec validation")
{
    ExperimentSpec s;
    CHECK_NOTHROW(s.validate());
    s.alpha_steps = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.seeds.clear();
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.modes.clear();
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("sweeps: endpoints, row accounting and rate-profile feasibility")
{
    auto spec = small_spec({Mode::noma_inf, Mode::oma_inf}, 2);
    auto rows = sweep_region(spec);
    REQUIRE(rows.size() == 2 * 2 * 2);
    CHECK(rows[0].alpha == std::vector<double>{0.0, 1.0});
    CHECK(rows[1].alpha == std::vector<double>{1.0, 0.0});
    for (const auto &r : rows)
    {
        REQUIRE(r.ok());
        // single-user endpoints
        CHECK(r.rates[r.alpha[0] == 1.0 ? 1 : 0] == 0.0);
        CHECK(r.blocks == 0);
    }

    spec = small_spec({Mode::noma_inf, Mode::noma_finite, Mode::oma_finite}, 6);
    spec.blocks = {1, 3};
    rows = sweep_region(spec);
    CHECK(rows.size() == 6 * 2 * (1 + 2 + 2));
    for (const auto &r : rows)
    {
        REQUIRE(r.ok());
        for (std::size_t k = 0; k < 2; ++k)
            CHECK(r.rates[k] >= r.alpha[k] * r.common_rate - 1e-6);
    }
    // ordered by mode, seed, N, alpha
    CHECK(rows[0].mode == Mode::noma_inf);
    CHECK(rows[12].mode == Mode::noma_finite);
    CHECK(rows[12].blocks == 1);
    CHECK(rows[18].blocks == 3);
    CHECK(rows[13].alpha[0] > rows[12].alpha[0]);
}

TEST_CASE("Pareto sanity")
{
    const auto rows = sweep_region(small_spec({Mode::noma_inf, Mode::oma_inf}, 11));
    for (const auto &a : rows)
        for (const auto &b : rows)
        {
            if (a.mode != b.mode || a.seed != b.seed)
                continue;
            const bool dominates = a.rates[0] > b.rates[0] + 1e-6 && a.rates[1] > b.rates[1] + 1e-6;
            CHECK_FALSE(dominates);
        }
}

TEST_CASE("region comparisons")
{
    auto spec = small_spec({Mode::noma_inf, Mode::no_irs_noma, Mode::oma_inf, Mode::no_irs_oma, Mode::oma_continuous}, 5);
    spec.system.irs_elements = 32;
    const auto rows = sweep_region(spec);
    const auto noma = by_seed_alpha(rows, Mode::noma_inf), bare = by_seed_alpha(rows, Mode::no_irs_noma);
    const auto oma = by_seed_alpha(rows, Mode::oma_inf), bare_oma = by_seed_alpha(rows, Mode::no_irs_oma);
    const auto cont = by_seed_alpha(rows, Mode::oma_continuous);
    for (const auto &[key, value] : noma)
    {
        CHECK(value > bare.at(key));
        CHECK(oma.at(key) > bare_oma.at(key));
        CHECK(cont.at(key) >= oma.at(key));
        CHECK(value >= oma.at(key) - 1e-6);
    }
}

TEST_CASE("per-row failures are recorded")
{
    SystemConfig system;
    system.irs_elements = 32;
    system.enumeration_budget = 16;
    const auto p = evaluate_point(Mode::baseline_oma, RateProfile::two_user(0.5), 0, 2, system, ChannelParams{});
    CHECK_FALSE(p.ok());
    CHECK(std::isnan(p.common_rate));
    CHECK(p.error.find("budget") != std::string::npos);
    const auto csv = format_csv({p});
    CHECK(csv.find("nan") != std::string::npos);
    const auto json = nlohmann::json::parse(format_json({p}));
    CHECK(json[0]["common_rate"].is_null());
    CHECK(json[0].contains("error"));
}

TEST_CASE("output formats")
{
    CHECK(format_csv({}) == "mode,seed,N,alpha_1,alpha_2,rate_1,rate_2,common_rate,wall_ms\n");
    CHECK(format_csv({}, 3) == "mode,seed,N,alpha_1,alpha_2,alpha_3,rate_1,rate_2,rate_3,common_rate,wall_ms\n");

    auto spec = small_spec({Mode::noma_inf, Mode::oma_finite}, 4);
    spec.blocks = {2};
    const auto rows = sweep_region(spec);
    const auto csv = format_csv(rows);
    const auto parsed = parse_csv(csv);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        CHECK(parsed[i].mode == rows[i].mode);
        CHECK(parsed[i].seed == rows[i].seed);
        CHECK(parsed[i].blocks == rows[i].blocks);
        CHECK(parsed[i].common_rate == Approx(rows[i].common_rate).epsilon(1e-11));
        for (int k = 0; k < 2; ++k)
        {
            CHECK(parsed[i].alpha[k] == Approx(rows[i].alpha[k]).epsilon(1e-11));
            CHECK(parsed[i].rates[k] == Approx(rows[i].rates[k]).epsilon(1e-11));
        }
    }
    CHECK(format_csv(parsed) == csv);

    const auto json = nlohmann::json::parse(format_json(rows));
    REQUIRE(json.size() == rows.size());
    CHECK(json[0]["mode"] == "noma-inf");
    CHECK(json[0]["N"] == "inf");
    CHECK(json.back()["N"] == 2);
    CHECK(json[1]["rates"].size() == 2);
    CHECK(json[1]["common_rate"].get<double>() == Approx(rows[1].common_rate).epsilon(1e-11));

    const auto dir = std::filesystem::temp_directory_path() / "irscap_output_test";
    std::filesystem::create_directories(dir);
    emit_output(rows, OutputFormat::csv, dir / "a.csv");
    std::ifstream in(dir / "a.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == csv);
    try
    {
        write_text(dir / "missing" / "x.csv", csv);
        FAIL("write into a missing directory succeeded");
    }
    catch (const std::runtime_error &e)
    {
        CHECK(std::string(e.what()).find("missing") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("identical specs give byte-identical output")
{
    auto spec = small_spec({Mode::noma_inf, Mode::noma_finite, Mode::oma_finite, Mode::baseline_oma}, 4);
    spec.blocks = {1, 2};
    const auto a = sweep_region(spec);
    spec.workers = 1;
    const auto b = sweep_region(spec);
    CHECK(format_csv(a) == format_csv(b));
    CHECK(format_json(a) == format_json(b));
}

TEST_CASE("common-rate study")
{
    StudySpec s;
    s.base = small_spec({Mode::noma_inf, Mode::oma_inf, Mode::no_irs_noma}, 2);
    s.base.seeds = {3};
    auto points = common_rate_study(s);
    REQUIRE(points.size() == 3);
    const auto direct = evaluate_point(Mode::noma_inf, RateProfile::two_user(0.5), 3, 0, s.base.system, s.base.channel);
    CHECK(points[0].mean_rate == direct.common_rate);
    CHECK(points[0].samples == 1);
    CHECK(points[0].failures == 0);

    s.base.seeds = {0, 1, 2, 3};
    s.max_power_dbm = {0.0, 10.0, 20.0};
    points = common_rate_study(s);
    REQUIRE(points.size() == 9);
    std::map<Mode, std::vector<double>> curve;
    std::map<double, std::map<Mode, double>> at;
    for (const auto &p : points)
    {
        curve[p.mode].push_back(p.mean_rate);
        at[p.max_power_dbm][p.mode] = p.mean_rate;
        CHECK(p.samples == 4);
    }
    for (const auto &[mode, values] : curve)
        for (std::size_t i = 1; i < values.size(); ++i)
            CHECK(values[i] >= values[i - 1]);
    for (const auto &[pmax, m] : at)
        CHECK(m.at(Mode::noma_inf) >= m.at(Mode::oma_inf));

    const auto csv = format_study_csv(points);
    CHECK(csv.rfind("mode,N,pmax_dbm,M_R,mean_common_rate,samples,failures\n", 0) == 0);
    CHECK(nlohmann::json::parse(format_study_json(points)).size() == 9);
}
