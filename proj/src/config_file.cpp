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

#include "irscap/config_file.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace irscap
{

namespace
{
std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view s)
{
    // std::from_chars for double is unreliable on older toolchains; strtod on a copy is fine here.
    const std::string copy(s);
    char *end = nullptr;
    const double value = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size())
        throw std::invalid_argument("not a number: '" + copy + "'");
    return value;
}

long long parse_integer(std::string_view s)
{
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    return value;
}

std::vector<double> parse_list(std::string_view s)
{
    std::vector<double> out;
    while (true)
    {
        const auto comma = s.find(',');
        out.push_back(parse_double(trim(s.substr(0, comma))));
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

using Setter = std::function<void(Scenario &, std::string_view)>;

const std::map<std::string, Setter, std::less<>> &setters()
{
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        auto add = [&t](std::initializer_list<const char *> names, Setter fn) {
            for (const char *n : names)
                t.emplace(n, fn);
        };
        auto as_int = [](std::string_view v) { return static_cast<int>(parse_integer(v)); };
        add({"num_users", "K"}, [=](Scenario &s, std::string_view v) { s.system.num_users = as_int(v); });
        add({"irs_elements", "M_R"}, [=](Scenario &s, std::string_view v) { s.system.irs_elements = as_int(v); });
        add({"subsurface_size", "B"}, [=](Scenario &s, std::string_view v) { s.system.subsurface_size = as_int(v); });
        add({"phase_bits", "b"}, [=](Scenario &s, std::string_view v) { s.system.phase_bits = as_int(v); });
        add({"num_blocks", "N"}, [=](Scenario &s, std::string_view v) { s.system.num_blocks = as_int(v); });
        add({"enumeration_budget"}, [](Scenario &s, std::string_view v) {
            const long long n = parse_integer(v);
            if (n < 1)
                throw std::invalid_argument("budget must be positive");
            s.system.enumeration_budget = static_cast<std::uint64_t>(n);
        });
        add({"max_power_dbm", "P_max_dbm"},
            [](Scenario &s, std::string_view v) { s.system.max_power = dbm_to_watts(parse_double(v)); });
        add({"noise_power_dbm", "sigma2_dbm"},
            [](Scenario &s, std::string_view v) { s.system.noise_power = dbm_to_watts(parse_double(v)); });
        add({"ref_path_loss_db", "rho0_db"},
            [](Scenario &s, std::string_view v) { s.channel.ref_path_loss = db_to_linear(parse_double(v)); });
        add({"ref_distance", "d0"}, [](Scenario &s, std::string_view v) { s.channel.ref_distance = parse_double(v); });
        add({"exponent_ap_user", "alpha_AU"},
            [](Scenario &s, std::string_view v) { s.channel.exponent_ap_user = parse_double(v); });
        add({"exponent_ap_irs", "alpha_AI"},
            [](Scenario &s, std::string_view v) { s.channel.exponent_ap_irs = parse_double(v); });
        add({"exponent_irs_user", "alpha_IU"},
            [](Scenario &s, std::string_view v) { s.channel.exponent_irs_user = parse_double(v); });
        add({"rician_ap_irs_db", "K_AI_db"},
            [](Scenario &s, std::string_view v) { s.channel.rician_ap_irs = db_to_linear(parse_double(v)); });
        add({"rician_irs_user_db", "K_IU_db"},
            [](Scenario &s, std::string_view v) { s.channel.rician_irs_user = db_to_linear(parse_double(v)); });
        add({"ap_x"}, [](Scenario &s, std::string_view v) { s.channel.ap.x = parse_double(v); });
        add({"ap_y"}, [](Scenario &s, std::string_view v) { s.channel.ap.y = parse_double(v); });
        add({"ap_z"}, [](Scenario &s, std::string_view v) { s.channel.ap.z = parse_double(v); });
        add({"irs_x", "d_R"}, [](Scenario &s, std::string_view v) { s.channel.irs.x = parse_double(v); });
        add({"irs_y", "d_V"}, [](Scenario &s, std::string_view v) { s.channel.irs.y = parse_double(v); });
        add({"irs_z"}, [](Scenario &s, std::string_view v) { s.channel.irs.z = parse_double(v); });
        add({"user_x", "d_k"}, [](Scenario &s, std::string_view v) { s.channel.user_x = parse_list(v); });
        return t;
    }();
    return table;
}
} // namespace

void apply_config_text(std::string_view text, Scenario &scenario, const std::string &source)
{
    int line_no = 0;
    while (!text.empty())
    {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto where = source + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument(where + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw std::invalid_argument(where + ": unknown key '" + std::string(key) + "'");
        try
        {
            it->second(scenario, value);
        }
        catch (const std::invalid_argument &e)
        {
            throw std::invalid_argument(where + ": " + std::string(key) + ": " + e.what());
        }
    }
}

Scenario load_config_file(const std::filesystem::path &path, Scenario base)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    apply_config_text(buffer.str(), base, path.string());
    return base;
}

} // namespace irscap
