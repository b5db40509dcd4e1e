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

#include "irscap/schedule.hpp"

#include <algorithm>
#include <numeric>

namespace irscap
{

RateProfile::RateProfile(std::vector<double> weights) : alpha(std::move(weights))
{
    if (alpha.empty())
        throw std::invalid_argument("RateProfile: at least one user is required");
    double sum = 0.0;
    for (double a : alpha)
    {
        if (!(a >= 0.0) || !std::isfinite(a))
            throw std::invalid_argument("RateProfile: entries must be finite and non-negative");
        sum += a;
    }
    if (!(sum > 0.0))
        throw std::invalid_argument("RateProfile: at least one entry must be positive");
    for (double &a : alpha)
        a /= sum;
}

std::vector<int> RateProfile::active_users() const
{
    std::vector<int> out;
    for (std::size_t k = 0; k < alpha.size(); ++k)
        if (alpha[k] > 0.0)
            out.push_back(static_cast<int>(k));
    return out;
}

std::vector<int> apportion(const std::vector<double> &shares, int total)
{
    if (total < 0)
        throw std::invalid_argument("apportion: negative total");
    double sum = 0.0;
    for (double s : shares)
    {
        if (!(s >= 0.0))
            throw std::invalid_argument("apportion: shares must be non-negative");
        sum += s;
    }
    if (!(sum > 0.0))
        throw std::invalid_argument("apportion: shares sum to zero");

    const std::size_t n = shares.size();
    std::vector<int> counts(n);
    std::vector<double> remainder(n);
    int assigned = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double quota = total * shares[i] / sum;
        counts[i] = static_cast<int>(std::floor(quota));
        remainder[i] = quota - counts[i];
        assigned += counts[i];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t j = 0; assigned < total; ++j, ++assigned)
        ++counts[order[j % n]];
    return counts;
}

std::vector<std::size_t> blocks_from_durations(const std::vector<double> &tau, int blocks)
{
    const auto counts = apportion(tau, blocks);
    std::vector<std::size_t> out;
    out.reserve(static_cast<std::size_t>(blocks));
    for (std::size_t a = 0; a < counts.size(); ++a)
        out.insert(out.end(), static_cast<std::size_t>(counts[a]), a);
    return out;
}

} // namespace irscap
