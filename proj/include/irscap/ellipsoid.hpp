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

#ifndef IRSCAP_ELLIPSOID_HPP
#define IRSCAP_ELLIPSOID_HPP

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace irscap
{

// E = { x : (x - c)' A^-1 (x - c) <= 1 }
struct EllipsoidState
{
    Eigen::VectorXd center;
    Eigen::MatrixXd shape;
    int iterations = 0;
    double log_volume = 0.0;                  // 0.5 * log det A, volume up to the unit-ball constant

    static EllipsoidState ball(const Eigen::VectorXd &center, double radius);
    int dimension() const { return static_cast<int>(center.size()); }
    bool positive_definite() const;
    void refresh_volume();

    // Keeps { x : a'(x - c) + depth <= 0 }. depth >= 0 is a deep cut, 0 a central cut.
    // Returns false when the cut leaves (numerically) nothing of the ellipsoid.
    bool cut(const Eigen::VectorXd &a, double depth);
};

struct OracleAnswer
{
    double value = 0.0;                       // objective at the queried point
    Eigen::VectorXd subgradient;
    // Objective of a strictly feasible point derived from the query (e.g. after rescaling onto the
    // equality constraint). Used to maintain the incumbent; falls back to value when absent.
    std::optional<double> feasible_value;
    std::optional<Eigen::VectorXd> feasible_point;
};

using SubgradientOracle = std::function<OracleAnswer(const Eigen::VectorXd &)>;

struct LinearEquality
{
    Eigen::VectorXd coeffs;
    double rhs = 0.0;
};

struct EllipsoidOptions
{
    double eps = 1e-4;
    int max_iterations = 0;                   // 0 selects 10 K^2 / eps
    double equality_tolerance = 1e-7;
    // Called after every update; handy for structural tests.
    std::function<void(const EllipsoidState &)> observer;
};

struct EllipsoidResult
{
    Eigen::VectorXd argmin;
    double value = 0.0;
    int iterations = 0;
    int objective_cuts = 0;
    bool degraded = false;                    // iteration cap hit or numerical breakdown
    EllipsoidState final_state;
};

// Minimizes a convex function over { x >= 0, a'x = c } by deep-cut ellipsoid iterations.
// Equality violations are cut with -a or +a, negativity with -e_i, and objective cuts use the
// oracle's subgradient at depth value - incumbent.
EllipsoidResult ellipsoid_minimize(int dim, const SubgradientOracle &oracle, const LinearEquality &equality,
                                   EllipsoidState init, const EllipsoidOptions &options = {});

} // namespace irscap

#endif
