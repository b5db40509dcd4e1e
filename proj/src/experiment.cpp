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

#include "irscap/baseline.hpp"
#include "irscap/noma.hpp"
#include "irscap/oma.hpp"
#include "irscap/parallel.hpp"

#include <json.hpp>

#include <array>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace irscap
{

namespace
{
constexpr std::array<std::pair<Mode, std::string_view>, 9> mode_names{{
    {Mode::noma_inf, "noma-inf"},
    {Mode::noma_finite, "noma-finite"},
    {Mode::oma_inf, "oma-inf"},
    {Mode::oma_finite, "oma-finite"},
    {Mode::baseline_noma, "baseline-noma"},
    {Mode::baseline_oma, "baseline-oma"},
    {Mode::no_irs_noma, "no-irs-noma"},
    {Mode::no_irs_oma, "no-irs-oma"},
    {Mode::oma_continuous, "oma-continuous"},
}};

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round12(double v) { return std::isnan(v) ? v : std::strtod(format_number(v).c_str(), nullptr); }

nlohmann::ordered_json json_number(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return round12(v);
}

std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;)
    {
        const std::size_t pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

double parse_double(const std::string &field, std::size_t line)
{
    char *end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || *end != '\0')
        throw std::invalid_argument("parse_csv: line " + std::to_string(line) + ": bad number '" + field + "'");
    return v;
}
} // namespace

std::string_view to_string(Mode mode)
{
    for (const auto &[m, name] : mode_names)
        if (m == mode)
            return name;
    return "unknown";
}

Mode parse_mode(std::string_view name)
{
    for (const auto &[m, n] : mode_names)
        if (n == name)
            return m;
    throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

bool uses_blocks(Mode mode)
{
    return mode == Mode::noma_finite || mode == Mode::oma_finite || mode == Mode::baseline_noma ||
           mode == Mode::baseline_oma;
}

void ExperimentSpec::validate() const
{
    if (modes.empty())
        throw std::invalid_argument("ExperimentSpec: at least one mode is required");
    if (alpha_steps < 2)
        throw std::invalid_argument("ExperimentSpec: alpha steps must be at least 2");
    if (seeds.empty())
        throw std::invalid_argument("ExperimentSpec: at least one seed is required");
    if (blocks.empty())
        throw std::invalid_argument("ExperimentSpec: at least one block count is required");
    for (int n : blocks)
        if (n < 1)
            throw std::invalid_argument("ExperimentSpec: block counts must be positive");
    if (system.num_users != 2)
        throw std::invalid_argument("ExperimentSpec: rate-region sweeps are two-user only");
    system.validate();
    channel.validate();
}

RegionPoint evaluate_point(Mode mode, const RateProfile &alpha, std::uint64_t seed, int blocks,
                           const SystemConfig &system, const ChannelParams &channel, bool timing)
{
    RegionPoint pt;
    pt.mode = mode;
    pt.seed = seed;
    pt.blocks = uses_blocks(mode) ? blocks : 0;
    pt.alpha = alpha.alpha;
    const auto start = std::chrono::steady_clock::now();
    try
    {
        SystemConfig cfg = system;
        if (mode == Mode::no_irs_noma || mode == Mode::no_irs_oma)
            cfg.irs_elements = 0;
        cfg.num_blocks = pt.blocks > 0 ? pt.blocks : cfg.num_blocks;
        cfg.validate();
        const ChannelRealization ch = sample_channels(cfg, channel, seed);
        BaselineOptions bopt;
        bopt.workers = 1;

        bool feasible = true;
        switch (mode)
        {
        case Mode::noma_inf:
        case Mode::no_irs_noma: {
            const auto r = solve_noma_infinite(alpha, ch, cfg);
            pt.rates = r.rates;
            pt.common_rate = r.common_rate;
            feasible = r.feasible;
            break;
        }
        case Mode::oma_inf:
        case Mode::no_irs_oma:
        case Mode::oma_continuous: {
            const auto r = solve_oma_infinite(alpha, ch, cfg,
                                              mode == Mode::oma_continuous ? PhaseMode::continuous
                                                                           : PhaseMode::discrete);
            pt.rates = r.rates;
            pt.common_rate = r.common_rate;
            feasible = r.feasible;
            break;
        }
        case Mode::noma_finite: {
            const auto r = solve_noma_finite(alpha, ch, cfg, blocks);
            pt.rates = r.rates;
            pt.common_rate = r.common_rate;
            feasible = r.feasible;
            break;
        }
        case Mode::oma_finite: {
            const auto r = solve_oma_finite(alpha, ch, cfg, blocks);
            pt.rates = r.rates;
            pt.common_rate = r.common_rate;
            feasible = r.feasible;
            break;
        }
        case Mode::baseline_noma:
        case Mode::baseline_oma: {
            const auto r = mode == Mode::baseline_noma ? baseline_noma(alpha, ch, cfg, blocks, bopt)
                                                       : baseline_oma(alpha, ch, cfg, blocks, bopt);
            pt.rates = r.rates;
            pt.common_rate = r.common_rate;
            feasible = r.feasible;
            break;
        }
        }
        if (!feasible)
            pt.error = "engine reported an infeasible instance";
    }
    catch (const std::exception &e)
    {
        pt.error = e.what();
    }
    if (!pt.ok())
    {
        pt.rates.assign(alpha.users(), nan);
        pt.common_rate = nan;
    }
    if (timing)
        pt.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return pt;
}

std::vector<RegionPoint> sweep_region(const ExperimentSpec &spec)
{
    spec.validate();
    struct Task
    {
        Mode mode;
        std::uint64_t seed;
        int blocks;
        int step;
    };
    std::vector<Task> tasks;
    for (Mode mode : spec.modes)
        for (std::uint64_t seed : spec.seeds)
        {
            const std::vector<int> ns = uses_blocks(mode) ? spec.blocks : std::vector<int>{0};
            for (int n : ns)
                for (int s = 0; s < spec.alpha_steps; ++s)
                    tasks.push_back({mode, seed, n, s});
        }

    std::vector<RegionPoint> out(tasks.size());
    parallel_for(tasks.size(), spec.workers, [&](std::size_t i) {
        const Task &t = tasks[i];
        const double a1 = static_cast<double>(t.step) / static_cast<double>(spec.alpha_steps - 1);
        out[i] = evaluate_point(t.mode, RateProfile::two_user(a1), t.seed, t.blocks, spec.system, spec.channel,
                                spec.timing);
    });
    return out;
}

std::vector<StudyPoint> common_rate_study(const StudySpec &spec)
{
    ExperimentSpec base = spec.base;
    base.alpha_steps = std::max(base.alpha_steps, 2);
    base.validate();
    const std::vector<double> powers =
        spec.max_power_dbm.empty() ? std::vector<double>{watts_to_dbm(base.system.max_power)} : spec.max_power_dbm;
    const std::vector<int> sizes =
        spec.irs_elements.empty() ? std::vector<int>{base.system.irs_elements} : spec.irs_elements;

    std::vector<StudyPoint> grid;
    for (Mode mode : base.modes)
    {
        const std::vector<int> ns = uses_blocks(mode) ? base.blocks : std::vector<int>{0};
        for (int n : ns)
            for (double p : powers)
                for (int mr : sizes)
                {
                    StudyPoint sp;
                    sp.mode = mode;
                    sp.blocks = n;
                    sp.max_power_dbm = p;
                    sp.irs_elements = mr;
                    grid.push_back(sp);
                }
    }

    const std::size_t S = base.seeds.size();
    std::vector<double> values(grid.size() * S);
    parallel_for(values.size(), base.workers, [&](std::size_t i) {
        const StudyPoint &g = grid[i / S];
        SystemConfig cfg = base.system;
        cfg.max_power = dbm_to_watts(g.max_power_dbm);
        cfg.irs_elements = g.irs_elements;
        const RegionPoint pt =
            evaluate_point(g.mode, RateProfile::two_user(0.5), base.seeds[i % S], g.blocks, cfg, base.channel);
        values[i] = pt.ok() ? pt.common_rate : nan;
    });

    for (std::size_t g = 0; g < grid.size(); ++g)
    {
        double sum = 0.0;
        for (std::size_t s = 0; s < S; ++s)
        {
            const double v = values[g * S + s];
            if (std::isnan(v))
                ++grid[g].failures;
            else
            {
                sum += v;
                ++grid[g].samples;
            }
        }
        grid[g].mean_rate = grid[g].samples > 0 ? sum / grid[g].samples : nan;
    }
    return grid;
}

OutputFormat parse_format(std::string_view name)
{
    if (name == "csv")
        return OutputFormat::csv;
    if (name == "json")
        return OutputFormat::json;
    throw std::invalid_argument("unknown output format '" + std::string(name) + "'");
}

std::string format_csv(const std::vector<RegionPoint> &points, int users)
{
    const std::size_t K = points.empty() ? static_cast<std::size_t>(users) : points.front().alpha.size();
    std::ostringstream os;
    os << "mode,seed,N";
    for (std::size_t k = 1; k <= K; ++k)
        os << ",alpha_" << k;
    for (std::size_t k = 1; k <= K; ++k)
        os << ",rate_" << k;
    os << ",common_rate,wall_ms\n";
    for (const RegionPoint &p : points)
    {
        if (p.alpha.size() != K || p.rates.size() != K)
            throw std::invalid_argument("format_csv: rows disagree on the number of users");
        os << to_string(p.mode) << ',' << p.seed << ',' << (p.blocks > 0 ? std::to_string(p.blocks) : "inf");
        for (double a : p.alpha)
            os << ',' << format_number(a);
        for (double r : p.rates)
            os << ',' << format_number(r);
        os << ',' << format_number(p.common_rate) << ',' << format_number(p.wall_ms) << '\n';
    }
    return os.str();
}

std::string format_json(const std::vector<RegionPoint> &points)
{
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const RegionPoint &p : points)
    {
        nlohmann::ordered_json row;
        row["mode"] = to_string(p.mode);
        row["seed"] = p.seed;
        if (p.blocks > 0)
            row["N"] = p.blocks;
        else
            row["N"] = "inf";
        row["alpha"] = nlohmann::ordered_json::array();
        for (double a : p.alpha)
            row["alpha"].push_back(json_number(a));
        row["rates"] = nlohmann::ordered_json::array();
        for (double r : p.rates)
            row["rates"].push_back(json_number(r));
        row["common_rate"] = json_number(p.common_rate);
        row["wall_ms"] = json_number(p.wall_ms);
        if (!p.ok())
            row["error"] = p.error;
        rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
}

std::vector<RegionPoint> parse_csv(std::string_view text)
{
    std::vector<std::string> lines;
    for (auto &line : split(text, '\n'))
        if (!line.empty())
            lines.push_back(std::move(line));
    if (lines.empty())
        throw std::invalid_argument("parse_csv: missing header");
    const auto header = split(lines.front(), ',');
    std::size_t K = 0;
    for (const auto &h : header)
        K += h.rfind("alpha_", 0) == 0;
    if (header.size() != 2 * K + 5 || header[0] != "mode" || header[1] != "seed" || header[2] != "N")
        throw std::invalid_argument("parse_csv: unexpected header");

    std::vector<RegionPoint> out;
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        const auto f = split(lines[i], ',');
        if (f.size() != header.size())
            throw std::invalid_argument("parse_csv: line " + std::to_string(i + 1) + " has the wrong field count");
        RegionPoint p;
        p.mode = parse_mode(f[0]);
        p.seed = std::stoull(f[1]);
        p.blocks = f[2] == "inf" ? 0 : std::stoi(f[2]);
        for (std::size_t k = 0; k < K; ++k)
        {
            p.alpha.push_back(parse_double(f[3 + k], i + 1));
            p.rates.push_back(parse_double(f[3 + K + k], i + 1));
        }
        p.common_rate = parse_double(f[3 + 2 * K], i + 1);
        p.wall_ms = parse_double(f[4 + 2 * K], i + 1);
        if (std::isnan(p.common_rate))
            p.error = "failed";
        out.push_back(std::move(p));
    }
    return out;
}

std::string format_study_csv(const std::vector<StudyPoint> &points)
{
    std::ostringstream os;
    os << "mode,N,pmax_dbm,M_R,mean_common_rate,samples,failures\n";
    for (const StudyPoint &p : points)
        os << to_string(p.mode) << ',' << (p.blocks > 0 ? std::to_string(p.blocks) : "inf") << ','
           << format_number(p.max_power_dbm) << ',' << p.irs_elements << ',' << format_number(p.mean_rate) << ','
           << p.samples << ',' << p.failures << '\n';
    return os.str();
}

std::string format_study_json(const std::vector<StudyPoint> &points)
{
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const StudyPoint &p : points)
    {
        nlohmann::ordered_json row;
        row["mode"] = to_string(p.mode);
        if (p.blocks > 0)
            row["N"] = p.blocks;
        else
            row["N"] = "inf";
        row["pmax_dbm"] = json_number(p.max_power_dbm);
        row["M_R"] = p.irs_elements;
        row["mean_common_rate"] = json_number(p.mean_rate);
        row["samples"] = p.samples;
        row["failures"] = p.failures;
        rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing: " + std::strerror(errno));
    os << text;
    os.flush();
    if (!os)
        throw std::runtime_error("failed writing " + path.string() + ": " + std::strerror(errno));
}

void emit_output(const std::vector<RegionPoint> &points, OutputFormat format, const std::filesystem::path &path,
                 int users)
{
    write_text(path, format == OutputFormat::csv ? format_csv(points, users) : format_json(points));
}

} // namespace irscap
