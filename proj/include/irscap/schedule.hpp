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

#ifndef IRSCAP_SCHEDULE_HPP
#define IRSCAP_SCHEDULE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace irscap
{

// Target rate ratios; normalized to sum to one on construction.
struct RateProfile
{
    std::vector<double> alpha;

    RateProfile() = default;
    explicit RateProfile(std::vector<double> weights);
    static RateProfile two_user(double alpha1) { return RateProfile({alpha1, 1.0 - alpha1}); }

    std::size_t users() const { return alpha.size(); }
    std::vector<int> active_users() const;
};

// Largest-remainder apportionment of `total` slots by `shares`; ties go to the lower index.
std::vector<int> apportion(const std::vector<double> &shares, int total);

// Atoms realizing a rate tuple by time sharing. Atom must expose `std::vector<double> rates`.
template <class Atom> struct TimeSharingSchedule
{
    std::vector<Atom> atoms;
    std::vector<double> tau;

    std::vector<double> average_rates(std::size_t users) const
    {
        std::vector<double> out(users, 0.0);
        for (std::size_t a = 0; a < atoms.size(); ++a)
            for (std::size_t k = 0; k < users; ++k)
                out[k] += tau[a] * atoms[a].rates[k];
        return out;
    }

    void validate(double tol = 1e-9) const
    {
        if (atoms.size() != tau.size())
            throw std::invalid_argument("TimeSharingSchedule: one duration per atom is required");
        double sum = 0.0;
        for (double t : tau)
        {
            if (t < -tol)
                throw std::invalid_argument("TimeSharingSchedule: negative duration");
            sum += t;
        }
        if (std::abs(sum - 1.0) > tol)
            throw std::invalid_argument("TimeSharingSchedule: durations do not sum to one");
    }
};

// Runs x for a fraction nu of the time and y for the rest.
template <class Atom>
TimeSharingSchedule<Atom> mix_schedules(const TimeSharingSchedule<Atom> &x, const TimeSharingSchedule<Atom> &y,
                                        double nu)
{
    if (!(nu >= 0.0 && nu <= 1.0))
        throw std::invalid_argument("mix_schedules: nu must lie in [0, 1]");
    TimeSharingSchedule<Atom> out;
    for (std::size_t a = 0; a < x.atoms.size(); ++a)
    {
        out.atoms.push_back(x.atoms[a]);
        out.tau.push_back(nu * x.tau[a]);
    }
    for (std::size_t a = 0; a < y.atoms.size(); ++a)
    {
        out.atoms.push_back(y.atoms[a]);
        out.tau.push_back((1.0 - nu) * y.tau[a]);
    }
    return out;
}

// Block-to-atom map for N blocks: contiguous runs in atom order, zero-count atoms dropped.
std::vector<std::size_t> blocks_from_durations(const std::vector<double> &tau, int blocks);

} // namespace irscap

#endif
