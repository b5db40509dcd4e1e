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

#ifndef IRSCAP_CHANNEL_HPP
#define IRSCAP_CHANNEL_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace irscap
{

using cplx = std::complex<double>;

inline constexpr std::uint64_t default_enumeration_budget = std::uint64_t{1} << 20;

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Scalar system parameters. Powers are linear watts; the config loader takes dBm.
struct SystemConfig
{
    int num_users = 2;                        // K
    int irs_elements = 32;                    // M_R, 0 disables the IRS
    int subsurface_size = 4;                  // B, elements sharing one coefficient
    int phase_bits = 1;                       // b
    double max_power = 1e-2;                  // P_max [W], 10 dBm
    double noise_power = 1e-11;               // sigma^2 [W], -80 dBm
    int num_blocks = 1;                       // N
    double block_duration = 1.0;              // T, fixed to 1
    std::uint64_t enumeration_budget = default_enumeration_budget;

    int subsurfaces() const { return irs_elements / subsurface_size; }
    int phase_levels() const { return 1 << phase_bits; }

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

struct Point3
{
    double x = 0.0, y = 0.0, z = 0.0;
};

double distance(const Point3 &a, const Point3 &b);

struct ChannelParams
{
    double ref_path_loss = 1e-3;              // rho0, linear (-30 dB)
    double ref_distance = 1.0;                // d0 [m]
    double exponent_ap_user = 3.5;            // alpha_AU
    double exponent_ap_irs = 2.2;             // alpha_AI
    double exponent_irs_user = 2.8;           // alpha_IU
    double rician_ap_irs = 1.9952623149688795; // K_AI, linear (3 dB); +inf means pure LoS
    double rician_irs_user = 1.9952623149688795;
    Point3 ap{0.0, 0.0, 0.0};
    Point3 irs{49.0, 1.0, 0.0};               // (d_R, d_V)
    std::vector<double> user_x{43.0, 50.0};   // users sit on the x-axis

    Point3 user_position(int k) const { return {user_x.at(static_cast<std::size_t>(k)), 0.0, 0.0}; }
    void validate() const;
};

double path_loss(double d, double exponent, const ChannelParams &params);

// Channels of one coherence block. g[k][m] already includes the B-element aperture gain of sub-surface m.
struct ChannelRealization
{
    std::vector<cplx> h;                      // AP -> user k
    std::vector<cplx> v;                      // AP -> sub-surface m
    std::vector<std::vector<cplx>> g;         // sub-surface m -> user k, indexed g[k][m]

    int users() const { return static_cast<int>(h.size()); }
    int subsurfaces() const { return static_cast<int>(v.size()); }
    cplx cascade(int k, int m) const { return std::conj(g[k][m]) * v[m]; }
    void validate() const;
};

ChannelRealization sample_channels(const SystemConfig &config, const ChannelParams &params, std::uint64_t seed);

struct PhaseConfig
{
    std::vector<int> idx;                     // one index in [0, L) per sub-surface
    int levels = 2;                           // L

    double phase(int m) const;
    bool operator==(const PhaseConfig &) const = default;
};

// Thrown when an exhaustive enumeration would exceed the configured budget.
class BudgetExceeded : public std::runtime_error
{
  public:
    BudgetExceeded(double required, std::uint64_t budget);
    double required() const { return required_; }
    std::uint64_t budget() const { return budget_; }

  private:
    double required_;
    std::uint64_t budget_;
};

// L^M configurations in lexicographic order, first sub-surface most significant.
class PhaseSpace
{
  public:
    PhaseSpace(int subsurfaces, int levels);
    std::uint64_t size() const { return size_; }
    int subsurfaces() const { return subsurfaces_; }
    int levels() const { return levels_; }
    PhaseConfig at(std::uint64_t index) const;
    void require_within(std::uint64_t budget) const;

  private:
    int subsurfaces_, levels_;
    std::uint64_t size_;
    double exact_size_;
};

std::vector<PhaseConfig> enumerate_phase_configs(const SystemConfig &config);

double effective_gain(const ChannelRealization &ch, const PhaseConfig &theta, int k);
double effective_gain(const ChannelRealization &ch, std::span<const double> phases, int k);

// mu[k] is the 0-based position at which user k is decoded; sequence[j] is the user decoded j-th.
struct DecodingOrder
{
    std::vector<int> mu;
    std::vector<int> sequence;
    bool operator==(const DecodingOrder &) const = default;
};

DecodingOrder decoding_order(std::span<const double> gains);

// Effective gains of every discrete configuration, laid out row-major (config, user).
class GainTable
{
  public:
    GainTable(const ChannelRealization &ch, const SystemConfig &config);
    std::uint64_t size() const { return space_.size(); }
    int users() const { return users_; }
    const PhaseSpace &space() const { return space_; }
    std::span<const double> gains(std::uint64_t index) const
    {
        return {gains_.data() + index * static_cast<std::size_t>(users_), static_cast<std::size_t>(users_)};
    }

  private:
    PhaseSpace space_;
    int users_;
    std::vector<double> gains_;
};

} // namespace irscap

#endif
