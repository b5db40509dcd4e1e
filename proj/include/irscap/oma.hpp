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

#ifndef IRSCAP_OMA_HPP
#define IRSCAP_OMA_HPP

#include "irscap/channel.hpp"
#include "irscap/schedule.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace irscap
{

enum class PhaseMode
{
    discrete,
    continuous
};

inline constexpr double min_share = 1e-9;     // solver-side floor on omega
inline constexpr double share_snap = 1e-6;    // reported shares below this are zero

// omega * log2(1 + H p / (omega sigma^2)), zero at omega = 0.
double oma_rate(double gain, double power, double omega, double sigma2);

struct BestPhase
{
    PhaseConfig theta;                        // discrete mode only
    std::uint64_t theta_index = 0;
    std::vector<double> phases;               // radians, per sub-surface
    double gain = 0.0;
};

BestPhase best_phase_for_user(int k, const ChannelRealization &ch, const SystemConfig &config, PhaseMode mode);
BestPhase best_phase_for_user(int k, const GainTable &table);

struct GammaSolution
{
    int user = 0;
    PhaseConfig theta;
    std::uint64_t theta_index = 0;
    std::vector<double> phases;
    double gain = 0.0;
    std::vector<double> power;                // P_max at `user`, zero elsewhere
    std::vector<double> share;                // one at `user`, zero elsewhere
    std::vector<double> rates;
};

struct OmaInfiniteResult
{
    double common_rate = 0.0;                 // LP value
    double closed_form_rate = 0.0;            // 1 / sum_k alpha_k / r_k
    TimeSharingSchedule<GammaSolution> schedule;
    std::vector<double> rates;
    std::vector<double> dual;                 // lambda_k = R / r_k on active users, zero elsewhere
    bool feasible = true;
};

OmaInfiniteResult solve_oma_infinite(const RateProfile &alpha, const ChannelRealization &ch,
                                     const SystemConfig &config, PhaseMode mode = PhaseMode::discrete);

// Water-filling level (lambda / (delta ln 2) - sigma^2 / H)^+ for unit block duration.
double water_fill_check(double lambda, double delta, double gain, double sigma2);

struct WaterFillOutcome
{
    bool single_user = false;                 // one user served with full power and full share
    int user = -1;
    double delta = 0.0;
    std::vector<double> power;
    std::vector<double> share;
};

// Scans the power price until the selected user's level exhausts P_max and checks that this user
// alone maximizes the per-share Lagrangian, i.e. the block serves one user with p = P_max, omega = 1.
WaterFillOutcome water_fill_structure(std::span<const double> lambda, std::span<const double> gains,
                                      double max_power, double sigma2);

struct ResourceAllocation
{
    std::vector<std::vector<double>> omega;   // [n][k]
    std::vector<std::vector<double>> power;   // [n][k], watts
};

struct OmaFiniteResult
{
    double common_rate = 0.0;
    std::vector<double> rates;
    ResourceAllocation allocation;
    std::vector<PhaseConfig> thetas;          // discrete mode
    std::vector<std::vector<double>> phases;  // per block, radians
    std::vector<int> block_users;             // Gamma_k behind each block
    int newton_steps = 0;
    bool feasible = true;
};

struct OmaOptions
{
    double tolerance = 1e-10;                 // relative duality gap of the barrier method
    int newton_iterations = 100;              // per centering step
};

// Joint power/share allocation for fixed per-block gains (log-barrier Newton method started from an
// equal split).
OmaFiniteResult solve_oma_blocks(const RateProfile &alpha, const std::vector<std::vector<double>> &block_gains,
                                 double max_power, double sigma2, const OmaOptions &options = {});

OmaFiniteResult solve_oma_finite(const RateProfile &alpha, const ChannelRealization &ch, const SystemConfig &config,
                                 int blocks, PhaseMode mode = PhaseMode::discrete, const OmaOptions &options = {});

} // namespace irscap

#endif
