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

#ifndef IRSCAP_LP_HPP
#define IRSCAP_LP_HPP

#include <string_view>
#include <vector>

namespace irscap
{

// maximize c'x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= lower (entries may be -inf for free variables)
struct LinearProgram
{
    std::vector<double> objective;
    std::vector<std::vector<double>> ineq_lhs;
    std::vector<double> ineq_rhs;
    std::vector<std::vector<double>> eq_lhs;
    std::vector<double> eq_rhs;
    std::vector<double> lower;                // empty means all zero

    std::size_t variables() const { return objective.size(); }
    void validate() const;
};

enum class LpStatus
{
    optimal,
    infeasible,
    unbounded
};

std::string_view to_string(LpStatus status);

struct LpResult
{
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    std::vector<double> x;
    int pivots = 0;
};

// Dense two-phase simplex with Bland's rule.
LpResult lp_solve(const LinearProgram &lp);

} // namespace irscap

#endif
