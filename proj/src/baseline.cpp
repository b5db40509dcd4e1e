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

#include "irscap/baseline.hpp"

#include "irscap/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace irscap
{

ScheduleEnumeration::ScheduleEnumeration(const SystemConfig &config, int blocks)
    : space_(config.subsurfaces(), config.phase_levels()), blocks_(blocks)
{
    if (blocks < 1)
        throw std::invalid_argument("ScheduleEnumeration: at least one block is required");
    exact_size_ = std::pow(static_cast<double>(space_.levels()), static_cast<double>(space_.subsurfaces()) * blocks);
    if (exact_size_ < 0x1p63)
    {
        size_ = 1;
        for (int n = 0; n < blocks; ++n)
            size_ *= space_.size();
    }
    else
        size_ = UINT64_MAX;
}

void ScheduleEnumeration::require_within(std::uint64_t budget) const
{
    if (exact_size_ > static_cast<double>(budget) || size_ > budget)
        throw BudgetExceeded(exact_size_, budget);
}

std::vector<std::uint64_t> ScheduleEnumeration::decode(std::uint64_t index) const
{
    if (index >= size_)
        throw std::out_of_range("ScheduleEnumeration::decode: index beyond the enumeration");
    std::vector<std::uint64_t> out(static_cast<std::size_t>(blocks_));
    for (int n = blocks_ - 1; n >= 0; --n)
    {
        out[static_cast<std::size_t>(n)] = index % space_.size();
        index /= space_.size();
    }
    return out;
}

namespace
{

struct Best
{
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t index = UINT64_MAX;

    void offer(double v, std::uint64_t i)
    {
        // std::isnan guards against a failed solve winning the reduction
        if (std::isnan(v))
            return;
        if (v > value || (v == value && i < index))
        {
            value = v;
            index = i;
        }
    }
};

template <class Solve>
std::uint64_t search(const ScheduleEnumeration &sched, const GainTable &table, const SystemConfig &config,
                     const BaselineOptions &options, Solve &&solve, std::uint64_t &evaluated)
{
    sched.require_within(options.budget ? options.budget : config.enumeration_budget);
    const std::uint64_t first = options.first;
    const std::uint64_t last = std::min(options.last, sched.size());
    if (first >= last)
        throw std::invalid_argument("baseline: empty schedule index range");

    const std::uint64_t total = last - first;
    const std::uint64_t chunks = (total + progress_interval - 1) / progress_interval;
    std::vector<Best> best(static_cast<std::size_t>(chunks));
    std::atomic<std::uint64_t> done{0};
    std::mutex report;

    parallel_for(static_cast<std::size_t>(chunks), options.workers, [&](std::size_t c) {
        const std::uint64_t lo = first + c * progress_interval;
        const std::uint64_t hi = std::min(last, lo + progress_interval);
        std::vector<std::vector<double>> gains(static_cast<std::size_t>(sched.blocks()));
        for (std::uint64_t i = lo; i < hi; ++i)
        {
            const auto idx = sched.decode(i);
            for (std::size_t n = 0; n < idx.size(); ++n)
            {
                const auto g = table.gains(idx[n]);
                gains[n].assign(g.begin(), g.end());
            }
            best[c].offer(solve(gains), i);
        }
        const std::uint64_t now = done += hi - lo;
        if (options.progress)
        {
            std::lock_guard lock(report);
            options.progress(now, total);
        }
    });

    Best overall;
    for (const Best &b : best)
        overall.offer(b.value, b.index);
    evaluated = total;
    if (overall.index == UINT64_MAX)
        throw std::runtime_error("baseline: every schedule failed to produce a finite rate");
    return overall.index;
}

std::vector<std::vector<double>> gains_of(const GainTable &table, const std::vector<std::uint64_t> &idx)
{
    std::vector<std::vector<double>> out;
    for (std::uint64_t i : idx)
    {
        const auto g = table.gains(i);
        out.emplace_back(g.begin(), g.end());
    }
    return out;
}

std::vector<std::vector<double>> equal_split(std::size_t blocks, int users, double max_power)
{
    return std::vector<std::vector<double>>(blocks, std::vector<double>(static_cast<std::size_t>(users),
                                                                         max_power / users));
}

void fill_schedule(BaselineResult &out, const ScheduleEnumeration &sched, std::uint64_t index)
{
    out.schedule_index = index;
    out.theta_indices = sched.decode(index);
    for (std::uint64_t i : out.theta_indices)
        out.thetas.push_back(sched.space().at(i));
}

} // namespace

BaselineResult baseline_noma(const RateProfile &alpha, const ChannelRealization &ch, const SystemConfig &config,
                             int blocks, const BaselineOptions &options)
{
    const ScheduleEnumeration sched(config, blocks);
    sched.require_within(options.budget ? options.budget : config.enumeration_budget);
    const GainTable table(ch, config);
    const int K = table.users();
    const auto solve = [&](const std::vector<std::vector<double>> &gains) {
        return solve_noma_blocks(alpha, gains, config.max_power, config.noise_power,
                                 equal_split(gains.size(), K, config.max_power), options.noma)
            .common_rate;
    };

    BaselineResult out;
    const std::uint64_t index = search(sched, table, config, options, solve, out.evaluated);
    fill_schedule(out, sched, index);
    const auto gains = gains_of(table, out.theta_indices);
    const NomaFiniteResult r = solve_noma_blocks(alpha, gains, config.max_power, config.noise_power,
                                                 equal_split(gains.size(), K, config.max_power), options.noma);
    out.common_rate = r.common_rate;
    out.rates = r.rates;
    out.power = r.powers;
    out.feasible = r.feasible;
    return out;
}

BaselineResult baseline_oma(const RateProfile &alpha, const ChannelRealization &ch, const SystemConfig &config,
                            int blocks, const BaselineOptions &options)
{
    const ScheduleEnumeration sched(config, blocks);
    sched.require_within(options.budget ? options.budget : config.enumeration_budget);
    const GainTable table(ch, config);
    const auto solve = [&](const std::vector<std::vector<double>> &gains) {
        return solve_oma_blocks(alpha, gains, config.max_power, config.noise_power, options.oma).common_rate;
    };

    BaselineResult out;
    const std::uint64_t index = search(sched, table, config, options, solve, out.evaluated);
    fill_schedule(out, sched, index);
    const OmaFiniteResult r =
        solve_oma_blocks(alpha, gains_of(table, out.theta_indices), config.max_power, config.noise_power, options.oma);
    out.common_rate = r.common_rate;
    out.rates = r.rates;
    out.power = r.allocation.power;
    out.omega = r.allocation.omega;
    out.feasible = r.feasible;
    return out;
}

} // namespace irscap
