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

#include "irscap/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace irscap
{

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

void SystemConfig::validate() const
{
    if (num_users < 1)
        throw std::invalid_argument("SystemConfig: at least one user is required");
    if (irs_elements < 0)
        throw std::invalid_argument("SystemConfig: IRS element count must be non-negative");
    if (subsurface_size < 1)
        throw std::invalid_argument("SystemConfig: sub-surface size must be at least 1");
    if (irs_elements % subsurface_size != 0)
        throw std::invalid_argument("SystemConfig: IRS element count " + std::to_string(irs_elements) +
                                    " is not a multiple of the sub-surface size " + std::to_string(subsurface_size));
    if (phase_bits < 0 || phase_bits > 16)
        throw std::invalid_argument("SystemConfig: phase bits must lie in [0, 16]");
    if (!(max_power > 0.0) || !std::isfinite(max_power))
        throw std::invalid_argument("SystemConfig: maximum power must be positive");
    if (!(noise_power > 0.0) || !std::isfinite(noise_power))
        throw std::invalid_argument("SystemConfig: noise power must be positive");
    if (num_blocks < 1)
        throw std::invalid_argument("SystemConfig: at least one time block is required");
    if (!(block_duration > 0.0))
        throw std::invalid_argument("SystemConfig: block duration must be positive");
    if (enumeration_budget < 1)
        throw std::invalid_argument("SystemConfig: enumeration budget must be positive");
}

double distance(const Point3 &a, const Point3 &b)
{
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

void ChannelParams::validate() const
{
    if (!(ref_path_loss > 0.0))
        throw std::invalid_argument("ChannelParams: reference path loss must be positive");
    if (!(ref_distance > 0.0))
        throw std::invalid_argument("ChannelParams: reference distance must be positive");
    if (!(exponent_ap_user > 0.0) || !(exponent_ap_irs > 0.0) || !(exponent_irs_user > 0.0))
        throw std::invalid_argument("ChannelParams: path-loss exponents must be positive");
    if (!(rician_ap_irs >= 0.0) || !(rician_irs_user >= 0.0))
        throw std::invalid_argument("ChannelParams: Rician factors must be non-negative");
    if (user_x.empty())
        throw std::invalid_argument("ChannelParams: no user positions given");
    if (!(distance(ap, irs) > 0.0))
        throw std::invalid_argument("ChannelParams: AP and IRS coincide");
    for (int k = 0; k < static_cast<int>(user_x.size()); ++k)
        if (!(distance(ap, user_position(k)) > 0.0) || !(distance(irs, user_position(k)) > 0.0))
            throw std::invalid_argument("ChannelParams: user " + std::to_string(k) + " coincides with the AP or IRS");
}

double path_loss(double d, double exponent, const ChannelParams &params)
{
    if (!(d > 0.0))
        throw std::domain_error("path_loss: distance must be positive");
    return params.ref_path_loss * std::pow(d / params.ref_distance, -exponent);
}

void ChannelRealization::validate() const
{
    if (g.size() != h.size())
        throw std::invalid_argument("ChannelRealization: one IRS-user vector per user is required");
    for (const auto &gk : g)
        if (gk.size() != v.size())
            throw std::invalid_argument("ChannelRealization: IRS-user vector length differs from AP-IRS length");
    auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    if (!std::all_of(h.begin(), h.end(), finite) || !std::all_of(v.begin(), v.end(), finite))
        throw std::invalid_argument("ChannelRealization: non-finite entry");
    for (const auto &gk : g)
        if (!std::all_of(gk.begin(), gk.end(), finite))
            throw std::invalid_argument("ChannelRealization: non-finite entry");
}

namespace
{
cplx rician(double kfac, cplx los, cplx nlos)
{
    if (std::isinf(kfac))
        return los;
    return std::sqrt(kfac / (kfac + 1.0)) * los + std::sqrt(1.0 / (kfac + 1.0)) * nlos;
}

// Half-wavelength ULA along the x-axis; cos_angle is the direction cosine w.r.t. that axis.
cplx steering(int m, double cos_angle)
{
    return std::polar(1.0, -std::numbers::pi * m * cos_angle);
}
} // namespace

ChannelRealization sample_channels(const SystemConfig &config, const ChannelParams &params, std::uint64_t seed)
{
    config.validate();
    params.validate();
    const int K = config.num_users;
    if (static_cast<int>(params.user_x.size()) != K)
        throw std::invalid_argument("sample_channels: " + std::to_string(params.user_x.size()) +
                                    " user positions given for " + std::to_string(K) + " users");
    const int M = config.subsurfaces();
    const double aperture = static_cast<double>(config.subsurface_size);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    auto cn = [&] {
        const double re = normal(rng);
        const double im = normal(rng);
        return cplx(re, im);
    };

    ChannelRealization ch;
    ch.h.resize(K);
    ch.v.resize(M);
    ch.g.assign(K, std::vector<cplx>(M));

    for (int k = 0; k < K; ++k)
    {
        const double d = distance(params.ap, params.user_position(k));
        ch.h[k] = std::sqrt(path_loss(d, params.exponent_ap_user, params)) * cn();
    }

    const double d_ai = distance(params.ap, params.irs);
    const double amp_ai = std::sqrt(path_loss(d_ai, params.exponent_ap_irs, params));
    const double cos_ai = (params.irs.x - params.ap.x) / d_ai;
    std::vector<double> amp_iu(K), cos_iu(K);
    for (int k = 0; k < K; ++k)
    {
        const Point3 u = params.user_position(k);
        const double d = distance(params.irs, u);
        amp_iu[k] = std::sqrt(path_loss(d, params.exponent_irs_user, params));
        cos_iu[k] = (u.x - params.irs.x) / d;
    }

    for (int m = 0; m < M; ++m)
    {
        ch.v[m] = amp_ai * rician(params.rician_ap_irs, steering(m, cos_ai), cn());
        for (int k = 0; k < K; ++k)
            ch.g[k][m] = aperture * amp_iu[k] * rician(params.rician_irs_user, steering(m, cos_iu[k]), cn());
    }
    return ch;
}

double PhaseConfig::phase(int m) const
{
    return 2.0 * std::numbers::pi * static_cast<double>(idx[m]) / static_cast<double>(levels);
}

namespace
{
std::string describe_count(double n)
{
    std::ostringstream os;
    if (n < 1e18)
        os << static_cast<std::uint64_t>(n);
    else
        os << n;
    return os.str();
}
} // namespace

BudgetExceeded::BudgetExceeded(double required, std::uint64_t budget)
    : std::runtime_error("enumeration requires " + describe_count(required) + " configurations, budget is " +
                         std::to_string(budget)),
      required_(required), budget_(budget)
{
}

PhaseSpace::PhaseSpace(int subsurfaces, int levels) : subsurfaces_(subsurfaces), levels_(levels)
{
    if (subsurfaces < 0 || levels < 1)
        throw std::invalid_argument("PhaseSpace: invalid dimensions");
    exact_size_ = std::pow(static_cast<double>(levels), subsurfaces);
    if (exact_size_ >= 9.2e18)
        size_ = UINT64_MAX;
    else
    {
        size_ = 1;
        for (int m = 0; m < subsurfaces; ++m)
            size_ *= static_cast<std::uint64_t>(levels);
    }
}

PhaseConfig PhaseSpace::at(std::uint64_t index) const
{
    if (index >= size_)
        throw std::out_of_range("PhaseSpace: configuration index out of range");
    PhaseConfig theta;
    theta.levels = levels_;
    theta.idx.resize(subsurfaces_);
    for (int m = subsurfaces_ - 1; m >= 0; --m)
    {
        theta.idx[m] = static_cast<int>(index % static_cast<std::uint64_t>(levels_));
        index /= static_cast<std::uint64_t>(levels_);
    }
    return theta;
}

void PhaseSpace::require_within(std::uint64_t budget) const
{
    if (exact_size_ > static_cast<double>(budget))
        throw BudgetExceeded(exact_size_, budget);
}

std::vector<PhaseConfig> enumerate_phase_configs(const SystemConfig &config)
{
    config.validate();
    const PhaseSpace space(config.subsurfaces(), config.phase_levels());
    space.require_within(config.enumeration_budget);
    std::vector<PhaseConfig> out;
    out.reserve(space.size());
    for (std::uint64_t i = 0; i < space.size(); ++i)
        out.push_back(space.at(i));
    return out;
}

double effective_gain(const ChannelRealization &ch, const PhaseConfig &theta, int k)
{
    if (static_cast<int>(theta.idx.size()) != ch.subsurfaces())
        throw std::invalid_argument("effective_gain: phase configuration length differs from sub-surface count");
    cplx total = ch.h.at(k);
    for (int m = 0; m < ch.subsurfaces(); ++m)
    {
        if (theta.idx[m] < 0 || theta.idx[m] >= theta.levels)
            throw std::invalid_argument("effective_gain: phase index out of range");
        total += ch.cascade(k, m) * std::polar(1.0, theta.phase(m));
    }
    return std::norm(total);
}

double effective_gain(const ChannelRealization &ch, std::span<const double> phases, int k)
{
    if (static_cast<int>(phases.size()) != ch.subsurfaces())
        throw std::invalid_argument("effective_gain: phase vector length differs from sub-surface count");
    cplx total = ch.h.at(k);
    for (int m = 0; m < ch.subsurfaces(); ++m)
        total += ch.cascade(k, m) * std::polar(1.0, phases[m]);
    return std::norm(total);
}

DecodingOrder decoding_order(std::span<const double> gains)
{
    const int K = static_cast<int>(gains.size());
    DecodingOrder order;
    order.sequence.resize(K);
    std::iota(order.sequence.begin(), order.sequence.end(), 0);
    std::stable_sort(order.sequence.begin(), order.sequence.end(),
                     [&](int a, int b) { return gains[a] < gains[b]; });
    order.mu.resize(K);
    for (int j = 0; j < K; ++j)
        order.mu[order.sequence[j]] = j;
    return order;
}

GainTable::GainTable(const ChannelRealization &ch, const SystemConfig &config)
    : space_(ch.subsurfaces(), config.phase_levels()), users_(ch.users())
{
    ch.validate();
    space_.require_within(config.enumeration_budget);
    const int M = ch.subsurfaces();
    const int L = config.phase_levels();

    // rotated[(k*M + m)*L + l] = cascade(k, m) * exp(j 2 pi l / L)
    std::vector<cplx> rotated(static_cast<std::size_t>(users_) * M * L);
    for (int k = 0; k < users_; ++k)
        for (int m = 0; m < M; ++m)
            for (int l = 0; l < L; ++l)
                rotated[(static_cast<std::size_t>(k) * M + m) * L + l] =
                    ch.cascade(k, m) * std::polar(1.0, 2.0 * std::numbers::pi * l / L);

    gains_.resize(space_.size() * static_cast<std::size_t>(users_));
    std::vector<int> digits(M, 0);
    for (std::uint64_t i = 0; i < space_.size(); ++i)
    {
        for (int k = 0; k < users_; ++k)
        {
            cplx total = ch.h[k];
            for (int m = 0; m < M; ++m)
                total += rotated[(static_cast<std::size_t>(k) * M + m) * L + digits[m]];
            gains_[i * users_ + k] = std::norm(total);
        }
        for (int m = M - 1; m >= 0; --m)
        {
            if (++digits[m] < L)
                break;
            digits[m] = 0;
        }
    }
}

} // namespace irscap
