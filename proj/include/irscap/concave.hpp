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

#ifndef IRSCAP_CONCAVE_HPP
#define IRSCAP_CONCAVE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace irscap
{

// Objective value; the supergradient is written to grad (same length as x).
using ConcaveObjective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct ConcaveProgramSpec
{
    std::size_t dimension = 0;
    ConcaveObjective evaluate;
    std::function<void(std::span<double>)> project;   // exact Euclidean projection, in place
    double tolerance = 1e-10;                           // relative improvement over one sweep
    int sweep = 10;                                     // accepted iterates per convergence sweep
    int max_iterations = 5000;
    double initial_step = 1.0;
    // Optional: return true to stop as soon as an accepted iterate is good enough.
    std::function<bool(std::span<const double> x, double value, std::span<const double> grad)> stop_early;

    void validate() const;
};

struct ConcaveResult
{
    double value = 0.0;
    std::vector<double> argmax;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    bool stopped_early = false;
    std::vector<double> trace;                // objective of every accepted iterate
};

// Projected supergradient ascent. Steps start from a Barzilai-Borwein estimate and are halved until
// an Armijo-type ascent condition holds, so accepted iterates never decrease the objective. A final
// bisection line search along the last ascent direction refines the point. Throws std::runtime_error
// on a non-finite objective.
ConcaveResult concave_maximize(const ConcaveProgramSpec &spec, std::vector<double> x0);

// Largest |analytic - central difference| / max(1, |central difference|) over all coordinates.
double gradient_check(const ConcaveObjective &f, std::span<const double> x, double h = 1e-6);

// Projection onto { z : z_i >= lower, sum z <= cap }.
void project_capped_simplex(std::span<double> z, double cap, double lower = 0.0);

struct SimplexBlock
{
    std::size_t offset = 0;
    std::size_t size = 0;
    double cap = 1.0;
    double lower = 0.0;
};

// Cartesian product of capped simplices over disjoint coordinate ranges.
class BlockSimplexDomain
{
  public:
    BlockSimplexDomain() = default;
    explicit BlockSimplexDomain(std::vector<SimplexBlock> blocks);

    std::size_t dimension() const { return dimension_; }
    const std::vector<SimplexBlock> &blocks() const { return blocks_; }
    void project(std::span<double> x) const;
    double linear_max(std::span<const double> c) const;
    bool contains(std::span<const double> x, double tol = 1e-12) const;

  private:
    std::vector<SimplexBlock> blocks_;
    std::size_t dimension_ = 0;
};

// max_x min_{k: weight_k > 0} rate_k(x) / weight_k over a block-simplex domain, rates concave.
struct CommonRateProblem
{
    std::vector<double> weights;
    // Writes K rates and the K x dimension Jacobian (row-major).
    std::function<void(std::span<const double> x, std::span<double> rates, std::span<double> jacobian)> rates;
    // Optional: adds the K dense dimension x dimension rate Hessians (user-major, row-major) into a
    // zeroed buffer. When present the problem is solved by a log-barrier Newton method instead of
    // bisection with first-order feasibility checks.
    std::function<void(std::span<const double> x, std::span<double> hessians)> hessians;
    BlockSimplexDomain domain;
};

struct CommonRateOptions
{
    double tolerance = 1e-6;                  // relative bisection width
    double upper = 0.0;                       // initial upper bound on the common rate (required)
    int feasibility_iterations = 3000;
    double barrier_tolerance = 1e-10;         // relative duality gap, second-order path
    int newton_iterations = 100;              // per centering step, second-order path
};

struct CommonRateResult
{
    double rate = 0.0;                        // min_k rate_k(x) / weight_k at the returned x
    double upper_bound = 0.0;                 // best certified or bisection upper bound
    std::vector<double> x;
    std::vector<double> rates;
    int bisection_steps = 0;
    int undecided_checks = 0;                 // checks that ran out of iterations (treated as infeasible)
    int newton_steps = 0;                     // second-order path only
};

// Bisection on the common rate; each step is a concave feasibility problem that either reaches a
// point meeting the level or certifies infeasibility through a Lagrangian bound. Problems that
// supply Hessians take the barrier path, where upper_bound is the central-path gap bound.
CommonRateResult maximize_common_rate(const CommonRateProblem &problem, std::vector<double> x0,
                                      const CommonRateOptions &options);

} // namespace irscap

#endif
