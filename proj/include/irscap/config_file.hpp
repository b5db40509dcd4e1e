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

#ifndef IRSCAP_CONFIG_FILE_HPP
#define IRSCAP_CONFIG_FILE_HPP

#include "irscap/channel.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace irscap
{

struct Scenario
{
    SystemConfig system;
    ChannelParams channel;
};

// Plain-text "key = value" lines; '#' starts a comment. Power-like keys are given in dB/dBm and
// converted to linear once here. Recognized keys (short aliases in parentheses):
//
//   num_users (K)                 irs_elements (M_R)           subsurface_size (B)
//   phase_bits (b)                num_blocks (N)               enumeration_budget
//   max_power_dbm (P_max_dbm)     noise_power_dbm (sigma2_dbm)
//   ref_path_loss_db (rho0_db)    ref_distance (d0)
//   exponent_ap_user (alpha_AU)   exponent_ap_irs (alpha_AI)   exponent_irs_user (alpha_IU)
//   rician_ap_irs_db (K_AI_db)    rician_irs_user_db (K_IU_db)
//   ap_x ap_y ap_z                irs_x (d_R) irs_y (d_V) irs_z
//   user_x (d_k)                  comma-separated list, one entry per user
//
// Unknown keys and malformed values throw std::invalid_argument naming the source and line.
void apply_config_text(std::string_view text, Scenario &scenario, const std::string &source = "<config>");
Scenario load_config_file(const std::filesystem::path &path, Scenario base = {});

} // namespace irscap

#endif
