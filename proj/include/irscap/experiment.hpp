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

#ifndef IRSCAP_EXPERIMENT_HPP
#define IRSCAP_EXPERIMENT_HPP

#include "irscap/channel.hpp"
#include "irscap/schedule.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace irscap
{

enum class Mode
{
    noma_inf,
    noma_finite,
    oma_inf,
    oma_finite,
    baseline_noma,
    baseline_oma,
    no_irs_noma,
    no_irs_oma,
    oma_continuous
};

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);            // throws std::invalid_argument
bool uses_blocks(Mode mode);                        // finite-N and baseline modes

struct ExperimentSpec
{
    std::vector<Mode> modes{Mode::noma_inf};
    int alpha_steps = 11;
    std::vector<std::uint64_t> seeds{0};
    std::vector<int> blocks{1};                     // N values, used by modes with uses_blocks()
    SystemConfig system;
    ChannelParams channel;
    int workers = 0;                                // 0 = hardware concurrency
    bool timing = false;                            // record wall time per row, otherwise 0

    void validate() const;
};

struct RegionPoint
{
    Mode mode = Mode::noma_inf;
    std::uint64_t seed = 0;
    int blocks = 0;                                 // 0 means N -> infinity
    std::vector<double> alpha;
    std::vector<double> rates;                      // NaN on failure
    double common_rate = 0.0;                       // NaN on failure
    double wall_ms = 0.0;
    std::string error;                              // empty on success

    bool ok() const { return error.empty(); }
};

// One engine call; failures are reported in the returned point instead of thrown.
RegionPoint evaluate_point(Mode mode, const RateProfile &alpha, std::uint64_t seed, int blocks,
                           const SystemConfig &system, const ChannelParams &channel, bool timing = false);

// Two-user sweep alpha_1 = 0, 1/(S-1), ..., 1. Rows are ordered by mode, seed, N, then alpha.
std::vector<RegionPoint> sweep_region(const ExperimentSpec &spec);

struct StudySpec
{
    ExperimentSpec base;                            // alpha_steps is ignored, alpha = (1/2, 1/2)
    std::vector<double> max_power_dbm;              // empty = base.system.max_power only
    std::vector<int> irs_elements;                  // empty = base.system.irs_elements only
};

struct StudyPoint
{
    Mode mode = Mode::noma_inf;
    int blocks = 0;
    double max_power_dbm = 0.0;
    int irs_elements = 0;
    double mean_rate = 0.0;                         // NaN when every seed failed
    int samples = 0;
    int failures = 0;
};

// Mean common rate over seeds per (mode, N, P_max, M_R) grid point, failed seeds excluded.
std::vector<StudyPoint> common_rate_study(const StudySpec &spec);

enum class OutputFormat
{
    csv,
    json
};

OutputFormat parse_format(std::string_view name);

// Columns: mode,seed,N,alpha_1..alpha_K,rate_1..rate_K,common_rate,wall_ms; 12 significant digits.
// `users` fixes K for the header when the list is empty.
std::string format_csv(const std::vector<RegionPoint> &points, int users = 2);
std::string format_json(const std::vector<RegionPoint> &points);
std::vector<RegionPoint> parse_csv(std::string_view text);
std::string format_study_csv(const std::vector<StudyPoint> &points);
std::string format_study_json(const std::vector<StudyPoint> &points);

// Writes text to path; I/O errors throw std::runtime_error naming the path.
void write_text(const std::filesystem::path &path, const std::string &text);
void emit_output(const std::vector<RegionPoint> &points, OutputFormat format, const std::filesystem::path &path,
                 int users = 2);

} // namespace irscap

#endif
