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

#ifndef IRSCAP_NOMA_HPP
#define IRSCAP_NOMA_HPP

#include "irscap/channel.hpp"
#include "irscap/schedule.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace irscap
{

inline constexpr int max_noma_users = 6;

// Powers of one superposition atom. q is indexed by decoding position (q[j] sums the powers of
// the users decoded at positions >= j), p by user.
struct PowerCandidate
{
    std::vector<double> q;
    std::vector<double> p;
    std::vector<bool> active;                 // positions that may carry positive power

    static PowerCandidate from_cumulative(std::vector<double> q, const DecodingOrder &order);
};

struct SolutionAtom
{
    PhaseConfig theta;
    std::uint64_t theta_index = 0;
    PowerCandidate candidate;
    DecodingOrder order;
    std::vector<double> gains;
    std::vector<double> rates;
    double weighted_value = 0.0;
    unsigned pattern = 0;                     // bit j set when position j is active
};

struct DualStateN
{
    std::vector<double> lambda;
};

double noma_rate(double gain, const PowerCandidate &candidate, const DecodingOrder &order, int k, double sigma2);
std::vector<double> noma_rates(std::span<const double> gains, const PowerCandidate &candidate,
                               const DecodingOrder &order, double sigma2);

// Weighted sum rate written in cumulative powers (telescoped form).
double phi_weighted(const DualStateN &dual, std::span<const double> gains, const DecodingOrder &order,
                    std::span<const double> q, double sigma2);
double phi_weighted(const DualStateN &dual, const PhaseConfig &theta, std::span<const double> q,
                    const ChannelRealization &ch, const SystemConfig &config);

// Root of d(phi)/dq for the bracketing pair (prev decoded before cur), clipped to [0, P_max].
// Empty when lambda_prev == lambda_k. sigma2 = 1 gives the noise-normalized form.
std::optional<double> stationary_q(double lambda_prev, double lambda_k, double gain_prev, double gain_k,
                                   double max_power, double sigma2 = 1.0);

// One candidate per nonempty set of active decoding positions (2^K - 1 in general).
std::vector<PowerCandidate> power_candidates(const DualStateN &dual, std::span<const double> gains,
                                             const DecodingOrder &order, double max_power, double sigma2);
std::vector<PowerCandidate> enumerate_power_candidates(const DualStateN &dual, const PhaseConfig &theta,
                                                       const ChannelRealization &ch, const SystemConfig &config);

// Per-configuration data reused across dual evaluations.
class NomaTable
{
  public:
    NomaTable(const ChannelRealization &ch, const SystemConfig &config);
    const GainTable &gains() const { return gains_; }
    std::uint64_t size() const { return gains_.size(); }
    int users() const { return gains_.users(); }
    double max_power() const { return max_power_; }
    double noise() const { return noise_; }
    std::span<const int> sequence(std::uint64_t i) const
    {
        return {sequence_.data() + i * users(), static_cast<std::size_t>(users())};
    }
    // log2(1 + H P / sigma^2) per decoding position
    std::span<const double> full_power_rate(std::uint64_t i) const
    {
        return {full_rate_.data() + i * users(), static_cast<std::size_t>(users())};
    }
    SolutionAtom make_atom(const DualStateN &dual, std::uint64_t index, unsigned pattern) const;

  private:
    GainTable gains_;
    double max_power_, noise_;
    std::vector<int> sequence_;
    std::vector<double> full_rate_;
};

struct DualEvaluation
{
    double value = 0.0;
    SolutionAtom best;
    std::vector<SolutionAtom> near_optimal;
};

DualEvaluation dual_eval(const DualStateN &dual, const NomaTable &table, double tol_atom = 1e-6);
DualEvaluation dual_eval(const DualStateN &dual, const ChannelRealization &ch, const SystemConfig &config,
                         double tol_atom = 1e-6);

struct NomaOptions
{
    double ellipsoid_eps = 1e-4;
    double tol_atom = 1e-6;
    int max_ellipsoid_iterations = 0;         // 0 = automatic cap
    double sca_tolerance = 1e-5;
    int sca_iterations = 100;
    double bisection_tolerance = 1e-6;
    double polish_tolerance = 1e-9;           // relative LP-to-dual-bound gap after the ellipsoid
    int polish_iterations = 500;
};

struct NomaInfiniteResult
{
    double common_rate = 0.0;                 // LP value over the collected atoms
    double dual_value = 0.0;                  // best dual objective seen by the ellipsoid
    double dual_bound = 0.0;                  // smallest dual objective seen overall
    TimeSharingSchedule<SolutionAtom> schedule;
    DualStateN dual;
    std::vector<double> rates;                // tau-weighted per-user rates
    int ellipsoid_iterations = 0;
    int polish_iterations = 0;
    std::size_t atom_pool = 0;
    bool degraded = false;
    bool feasible = true;
};

NomaInfiniteResult solve_noma_infinite(const RateProfile &alpha, const ChannelRealization &ch,
                                       const SystemConfig &config, const NomaOptions &options = {});
NomaInfiniteResult solve_noma_infinite(const RateProfile &alpha, const NomaTable &table,
                                       const NomaOptions &options = {});

// Phase configuration (as an atom index into the schedule) for every one of the N blocks.
std::vector<std::size_t> build_theta_schedule(const TimeSharingSchedule<SolutionAtom> &schedule, int blocks);

// Linearised interference term: log2(1 + H P_ik / s2) - log2(1 + H Q_l / s2) - H log2(e) (Q - Q_l) / (s2 + H Q_l)
double sca_lower_bound(double gain, double interference, double local_interference, double received,
                       double sigma2);

struct ScaState
{
    std::vector<std::vector<double>> powers;  // [n][k], watts
    int iteration = 0;
};

struct NomaFiniteResult
{
    double common_rate = 0.0;
    std::vector<double> rates;                // block-averaged per-user rates
    std::vector<std::vector<double>> powers;  // [n][k], watts
    std::vector<PhaseConfig> thetas;          // per block
    std::vector<std::uint64_t> theta_indices;
    std::vector<double> trace;                // true common rate after every SCA iteration
    int iterations = 0;
    bool feasible = true;
};

// SCA over fixed per-block gains; init_powers is [n][k] in watts.
NomaFiniteResult solve_noma_blocks(const RateProfile &alpha, const std::vector<std::vector<double>> &block_gains,
                                   double max_power, double sigma2, std::vector<std::vector<double>> init_powers,
                                   const NomaOptions &options = {});

NomaFiniteResult solve_noma_finite(const RateProfile &alpha, const ChannelRealization &ch, const SystemConfig &config,
                                   int blocks, const NomaOptions &options = {});

} // namespace irscap

#endif
