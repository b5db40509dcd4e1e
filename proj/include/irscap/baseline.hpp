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

#ifndef IRSCAP_BASELINE_HPP
#define IRSCAP_BASELINE_HPP

#include "irscap/channel.hpp"
#include "irscap/noma.hpp"
#include "irscap/oma.hpp"
#include "irscap/schedule.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace irscap
{

// All assignments of one phase configuration to each of N blocks. Index decoding treats block 0
// as the most significant digit, so consecutive indices differ in the last block first.
class ScheduleEnumeration
{
  public:
    ScheduleEnumeration(const SystemConfig &config, int blocks);

    std::uint64_t size() const { return size_; }
    double exact_size() const { return exact_size_; }
    int blocks() const { return blocks_; }
    const PhaseSpace &space() const { return space_; }

    std::vector<std::uint64_t> decode(std::uint64_t index) const;
    void require_within(std::uint64_t budget) const;

  private:
    PhaseSpace space_;
    int blocks_;
    std::uint64_t size_ = 0;
    double exact_size_ = 0.0;
};

inline constexpr std::uint64_t progress_interval = std::uint64_t{1} << 12;

struct BaselineOptions
{
    std::uint64_t budget = 0;                 // 0 = SystemConfig::enumeration_budget
    int workers = 0;                          // 0 = hardware concurrency
    std::uint64_t first = 0;                  // half-open index range [first, last)
    std::uint64_t last = UINT64_MAX;          // clipped to the enumeration size
    std::function<void(std::uint64_t done, std::uint64_t total)> progress;
    NomaOptions noma;
    OmaOptions oma;
};

struct BaselineResult
{
    double common_rate = 0.0;
    std::vector<double> rates;
    std::uint64_t schedule_index = 0;
    std::vector<std::uint64_t> theta_indices; // per block
    std::vector<PhaseConfig> thetas;
    std::vector<std::vector<double>> power;   // [n][k], watts
    std::vector<std::vector<double>> omega;   // [n][k], OMA only
    std::uint64_t evaluated = 0;
    bool feasible = true;
};

// Best SCA inner bound over every schedule; SCA starts from an equal power split in each block.
BaselineResult baseline_noma(const RateProfile &alpha, const ChannelRealization &ch, const SystemConfig &config,
                             int blocks, const BaselineOptions &options = {});

// Best convex share/power solution over every schedule.
BaselineResult baseline_oma(const RateProfile &alpha, const ChannelRealization &ch, const SystemConfig &config,
                            int blocks, const BaselineOptions &options = {});

} // namespace irscap

#endif
