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

#include "irscap/ellipsoid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace irscap
{

EllipsoidState EllipsoidState::ball(const Eigen::VectorXd &center, double radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("EllipsoidState::ball: radius must be positive and finite");
    EllipsoidState s;
    s.center = center;
    s.shape = Eigen::MatrixXd::Identity(center.size(), center.size()) * radius * radius;
    s.refresh_volume();
    return s;
}

bool EllipsoidState::positive_definite() const
{
    if (!center.allFinite() || !shape.allFinite())
        return false;
    Eigen::LLT<Eigen::MatrixXd> llt(shape);
    return llt.info() == Eigen::Success;
}

void EllipsoidState::refresh_volume()
{
    Eigen::LLT<Eigen::MatrixXd> llt(shape);
    if (llt.info() != Eigen::Success)
    {
        log_volume = -std::numeric_limits<double>::infinity();
        return;
    }
    log_volume = llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

bool EllipsoidState::cut(const Eigen::VectorXd &a, double depth)
{
    const int n = dimension();
    const Eigen::VectorXd Aa = shape * a;
    const double aAa = a.dot(Aa);
    if (!(aAa > 0.0) || !std::isfinite(aAa))
        return false;
    const double s = std::sqrt(aAa);
    const double alpha = depth / s;
    if (alpha >= 1.0)
        return false;
    ++iterations;
    if (alpha <= -1.0 / n)
        return true; // the half-space contains the whole ellipsoid

    const Eigen::VectorXd b = Aa / s;
    if (n == 1)
    {
        center -= 0.5 * (1.0 + alpha) * b;
        const double f = 0.5 * (1.0 - alpha);
        shape *= f * f;
        log_volume += std::log(f);
        return true;
    }

    const double nn = static_cast<double>(n);
    const double tau = (1.0 + nn * alpha) / (nn + 1.0);
    const double sigma = 2.0 * (1.0 + nn * alpha) / ((nn + 1.0) * (1.0 + alpha));
    const double delta = nn * nn * (1.0 - alpha * alpha) / (nn * nn - 1.0);
    center -= tau * b;
    shape = delta * (shape - sigma * b * b.transpose());
    shape = 0.5 * (shape + shape.transpose());
    // det(A - sigma b b') = det(A) (1 - sigma) because b' A^-1 b = 1
    log_volume += 0.5 * (nn * std::log(delta) + std::log(1.0 - sigma));
    return true;
}

EllipsoidResult ellipsoid_minimize(int dim, const SubgradientOracle &oracle, const LinearEquality &equality,
                                   EllipsoidState init, const EllipsoidOptions &options)
{
    if (dim < 1 || init.dimension() != dim || equality.coeffs.size() != dim)
        throw std::invalid_argument("ellipsoid_minimize: dimension mismatch");
    if (!(options.eps > 0.0) || !(options.equality_tolerance > 0.0))
        throw std::invalid_argument("ellipsoid_minimize: tolerances must be positive");

    const long long cap = options.max_iterations > 0
                              ? options.max_iterations
                              : static_cast<long long>(std::ceil(10.0 * dim * dim / options.eps));
    const double eq_scale = std::max(1.0, std::abs(equality.rhs));

    EllipsoidResult out;
    EllipsoidState state = std::move(init);
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_point = state.center;
    bool converged = false;
    bool broken = false;

    for (long long it = 0; it < cap; ++it)
    {
        const Eigen::VectorXd &c = state.center;
        bool ok = true;

        const double residual = equality.coeffs.dot(c) - equality.rhs;
        Eigen::Index neg = 0;
        const double most_negative = c.minCoeff(&neg);
        if (std::abs(residual) > options.equality_tolerance * eq_scale)
        {
            ok = state.cut(residual > 0.0 ? Eigen::VectorXd(equality.coeffs) : Eigen::VectorXd(-equality.coeffs),
                           std::abs(residual));
        }
        else if (most_negative < 0.0)
        {
            ok = state.cut(-Eigen::VectorXd::Unit(dim, neg), -most_negative);
        }
        else
        {
            OracleAnswer ans = oracle(c);
            if (!std::isfinite(ans.value) || ans.subgradient.size() != dim || !ans.subgradient.allFinite())
                throw std::runtime_error("ellipsoid_minimize: oracle returned a non-finite answer");
            ++out.objective_cuts;
            const double incumbent = ans.feasible_value.value_or(ans.value);
            if (incumbent < best)
            {
                best = incumbent;
                best_point = ans.feasible_point.value_or(c);
            }
            const double gap = std::sqrt(std::max(0.0, ans.subgradient.dot(state.shape * ans.subgradient)));
            if (gap <= options.eps * std::max(1.0, std::abs(best)))
            {
                converged = true;
                break;
            }
            // A deep cut that removes the whole ellipsoid proves the incumbent optimal.
            if (!state.cut(ans.subgradient, std::max(0.0, ans.value - best)))
            {
                converged = true;
                break;
            }
        }
        if (!ok)
        {
            broken = true;
            break;
        }
        if (options.observer)
            options.observer(state);
    }

    out.argmin = best_point;
    out.value = best;
    out.iterations = state.iterations;
    out.degraded = !converged || broken || !std::isfinite(best);
    out.final_state = std::move(state);
    return out;
}

} // namespace irscap
