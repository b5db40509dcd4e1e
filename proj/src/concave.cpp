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

#include "irscap/concave.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace irscap
{

void ConcaveProgramSpec::validate() const
{
    if (dimension == 0)
        throw std::invalid_argument("ConcaveProgramSpec: dimension must be positive");
    if (!evaluate || !project)
        throw std::invalid_argument("ConcaveProgramSpec: objective and projection are required");
    if (!(tolerance > 0.0) || !(initial_step > 0.0) || sweep < 1 || max_iterations < 0)
        throw std::invalid_argument("ConcaveProgramSpec: tolerances and step sizes must be positive");
}

namespace
{
double dot(std::span<const double> a, std::span<const double> b)
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double checked(double value, int evaluations)
{
    if (!std::isfinite(value))
        throw std::runtime_error("concave_maximize: non-finite objective at evaluation " + std::to_string(evaluations));
    return value;
}
} // namespace

ConcaveResult concave_maximize(const ConcaveProgramSpec &spec, std::vector<double> x0)
{
    spec.validate();
    const std::size_t n = spec.dimension;
    if (x0.size() != n)
        throw std::invalid_argument("concave_maximize: start point has wrong dimension");

    ConcaveResult out;
    std::vector<double> x = std::move(x0), g(n), y(n), gy(n), d(n), x_prev, g_prev;
    spec.project(x);
    double f = checked(spec.evaluate(x, g), ++out.evaluations);
    out.trace.push_back(f);

    if (spec.stop_early && spec.stop_early(x, f, g))
    {
        out.stopped_early = true;
        out.value = f;
        out.argmax = std::move(x);
        return out;
    }

    double step = spec.initial_step;
    double window_start = f;
    int window = 0;
    bool have_direction = false;

    for (int it = 0; it < spec.max_iterations; ++it)
    {
        if (!x_prev.empty())
        {
            // Barzilai-Borwein estimate for the ascent of a concave function.
            double ss = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < n; ++i)
            {
                const double s = x[i] - x_prev[i];
                ss += s * s;
                sy += s * (g_prev[i] - g[i]);
            }
            step = sy > 0.0 ? std::clamp(ss / sy, 1e-14, 1e14) : std::min(2.0 * step, 1e14);
        }

        bool accepted = false;
        bool stationary = false;
        double fy = 0.0;
        for (int halving = 0; halving < 80; ++halving, step *= 0.5)
        {
            for (std::size_t i = 0; i < n; ++i)
                y[i] = x[i] + step * g[i];
            spec.project(y);
            double dd = 0.0, xx = 0.0;
            for (std::size_t i = 0; i < n; ++i)
            {
                d[i] = y[i] - x[i];
                dd += d[i] * d[i];
                xx += x[i] * x[i];
            }
            if (dd <= 1e-30 * (1.0 + xx))
            {
                stationary = true;
                break;
            }
            fy = checked(spec.evaluate(y, gy), ++out.evaluations);
            if (fy >= f + 1e-4 * dot(g, d) && fy >= f)
            {
                accepted = true;
                break;
            }
        }
        if (!accepted)
        {
            out.converged = true;
            (void)stationary;
            break;
        }

        x_prev = x;
        g_prev = g;
        x.swap(y);
        g.swap(gy);
        f = fy;
        have_direction = true;
        ++out.iterations;
        out.trace.push_back(f);

        if (spec.stop_early && spec.stop_early(x, f, g))
        {
            out.stopped_early = true;
            break;
        }
        if (++window == spec.sweep)
        {
            if (f - window_start <= spec.tolerance * std::max(1.0, std::abs(f)))
            {
                out.converged = true;
                break;
            }
            window = 0;
            window_start = f;
        }
    }

    // Bisection on the sign of the directional derivative along the projected ascent direction.
    if (!out.stopped_early && have_direction)
    {
        for (std::size_t i = 0; i < n; ++i)
            y[i] = x[i] + step * g[i];
        spec.project(y);
        for (std::size_t i = 0; i < n; ++i)
            d[i] = y[i] - x[i];
        if (dot(d, d) > 0.0)
        {
            auto slope = [&](double s, double &value) {
                for (std::size_t i = 0; i < n; ++i)
                    y[i] = x[i] + s * d[i];
                value = checked(spec.evaluate(y, gy), ++out.evaluations);
                return dot(gy, d);
            };
            double lo = 0.0, hi = 1.0, value = 0.0;
            if (slope(1.0, value) >= 0.0)
                lo = 1.0;
            else
                for (int k = 0; k < 40; ++k)
                {
                    const double mid = 0.5 * (lo + hi);
                    (slope(mid, value) >= 0.0 ? lo : hi) = mid;
                }
            if (lo > 0.0)
            {
                std::vector<double> z(n);
                for (std::size_t i = 0; i < n; ++i)
                    z[i] = x[i] + lo * d[i];
                const double fz = checked(spec.evaluate(z, gy), ++out.evaluations);
                if (fz > f)
                {
                    x.swap(z);
                    f = fz;
                    out.trace.push_back(f);
                }
            }
        }
    }

    out.value = f;
    out.argmax = std::move(x);
    return out;
}

double gradient_check(const ConcaveObjective &f, std::span<const double> x, double h)
{
    const std::size_t n = x.size();
    std::vector<double> grad(n), scratch(n), probe(x.begin(), x.end());
    f(x, grad);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double step = h * std::max(1.0, std::abs(x[i]));
        probe[i] = x[i] + step;
        const double up = f(probe, scratch);
        probe[i] = x[i] - step;
        const double down = f(probe, scratch);
        probe[i] = x[i];
        const double fd = (up - down) / (2.0 * step);
        worst = std::max(worst, std::abs(grad[i] - fd) / std::max(1.0, std::abs(fd)));
    }
    return worst;
}

void project_capped_simplex(std::span<double> z, double cap, double lower)
{
    const double n = static_cast<double>(z.size());
    if (cap < n * lower)
        throw std::invalid_argument("project_capped_simplex: cap below the sum of lower bounds");
    double sum = 0.0;
    for (double v : z)
        sum += std::max(v, lower);
    if (sum <= cap)
    {
        for (double &v : z)
            v = std::max(v, lower);
        return;
    }
    // Project onto { z >= lower, sum z = cap } by the sort-and-threshold rule.
    std::vector<double> u(z.begin(), z.end());
    for (double &v : u)
        v -= lower;
    const double budget = cap - n * lower;
    std::sort(u.begin(), u.end(), std::greater<>());
    double prefix = 0.0, theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
    {
        prefix += u[j];
        const double t = (prefix - budget) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0)
            theta = t;
    }
    for (double &v : z)
        v = std::max(v - lower - theta, 0.0) + lower;
}

BlockSimplexDomain::BlockSimplexDomain(std::vector<SimplexBlock> blocks) : blocks_(std::move(blocks))
{
    std::vector<bool> used;
    for (const auto &b : blocks_)
    {
        if (b.size == 0 || b.cap < static_cast<double>(b.size) * b.lower || b.lower < 0.0)
            throw std::invalid_argument("BlockSimplexDomain: malformed block");
        dimension_ = std::max(dimension_, b.offset + b.size);
        if (used.size() < dimension_)
            used.resize(dimension_, false);
        for (std::size_t i = b.offset; i < b.offset + b.size; ++i)
        {
            if (used[i])
                throw std::invalid_argument("BlockSimplexDomain: overlapping blocks");
            used[i] = true;
        }
    }
    if (!std::all_of(used.begin(), used.end(), [](bool u) { return u; }))
        throw std::invalid_argument("BlockSimplexDomain: blocks must cover every coordinate");
}

void BlockSimplexDomain::project(std::span<double> x) const
{
    for (const auto &b : blocks_)
        project_capped_simplex(x.subspan(b.offset, b.size), b.cap, b.lower);
}

double BlockSimplexDomain::linear_max(std::span<const double> c) const
{
    double total = 0.0;
    for (const auto &b : blocks_)
    {
        double sum = 0.0, best = 0.0;
        for (std::size_t i = b.offset; i < b.offset + b.size; ++i)
        {
            sum += c[i];
            best = std::max(best, c[i]);
        }
        total += b.lower * sum + (b.cap - static_cast<double>(b.size) * b.lower) * best;
    }
    return total;
}

bool BlockSimplexDomain::contains(std::span<const double> x, double tol) const
{
    for (const auto &b : blocks_)
    {
        double sum = 0.0;
        for (std::size_t i = b.offset; i < b.offset + b.size; ++i)
        {
            if (x[i] < b.lower - tol)
                return false;
            sum += x[i];
        }
        if (sum > b.cap + tol)
            return false;
    }
    return true;
}

namespace
{
// Caches the normalized rates h_k = r_k / w_k and their gradients at the last evaluated point.
class RateEvaluator
{
  public:
    explicit RateEvaluator(const CommonRateProblem &p)
        : p_(p), K_(p.weights.size()), n_(p.domain.dimension()), r_(K_), jac_(K_ * n_)
    {
        for (std::size_t k = 0; k < K_; ++k)
            if (p.weights[k] > 0.0)
                active_.push_back(k);
    }

    void evaluate(std::span<const double> x)
    {
        std::fill(jac_.begin(), jac_.end(), 0.0);
        p_.rates(x, r_, jac_);
        for (double v : r_)
            if (!std::isfinite(v))
                throw std::runtime_error("maximize_common_rate: non-finite rate");
    }

    double h(std::size_t k) const { return r_[k] / p_.weights[k]; }
    double dh(std::size_t k, std::size_t i) const { return jac_[k * n_ + i] / p_.weights[k]; }
    double min_h() const
    {
        double m = std::numeric_limits<double>::infinity();
        for (auto k : active_)
            m = std::min(m, h(k));
        return m;
    }
    const std::vector<std::size_t> &active() const { return active_; }
    const std::vector<double> &rates() const { return r_; }
    std::size_t dimension() const { return n_; }

  private:
    const CommonRateProblem &p_;
    std::size_t K_, n_;
    std::vector<double> r_, jac_;
    std::vector<std::size_t> active_;
};

CommonRateResult bisect_common_rate(const CommonRateProblem &problem, std::vector<double> x0,
                                    const CommonRateOptions &options)
{
    if (!problem.rates)
        throw std::invalid_argument("maximize_common_rate: rate callback is required");
    for (double w : problem.weights)
        if (!(w >= 0.0))
            throw std::invalid_argument("maximize_common_rate: weights must be non-negative");
    if (!(options.tolerance > 0.0) || !(options.upper > 0.0))
        throw std::invalid_argument("maximize_common_rate: tolerance and upper bound must be positive");

    RateEvaluator ev(problem);
    if (ev.active().empty())
        throw std::invalid_argument("maximize_common_rate: no user has a positive weight");
    const std::size_t n = ev.dimension();
    if (x0.size() != n)
        throw std::invalid_argument("maximize_common_rate: start point has wrong dimension");

    problem.domain.project(x0);
    ev.evaluate(x0);
    double lo = ev.min_h();
    double hi = std::max(options.upper, lo);
    std::vector<double> best = x0;
    std::vector<double> c(n);

    CommonRateResult out;
    int stalls = 0;
    for (int step = 0; step < 100 && hi - lo > options.tolerance * std::max(hi, 1e-300); ++step)
    {
        const double level = 0.5 * (lo + hi);
        const double lo_before = lo, hi_before = hi;

        // A target above the optimum can pull the penalty maximizer below the level, so an
        // undecided check is retried once with a target just above the level.
        for (double margin : {0.5, 0.01})
        {
            const double target = level + margin * (hi - level);
            std::vector<double> best_here;

            ConcaveProgramSpec spec;
            spec.dimension = n;
            spec.max_iterations = options.feasibility_iterations;
            spec.project = [&](std::span<double> x) { problem.domain.project(x); };
            // Squared shortfall below the target; zero exactly when every user reaches it.
            spec.evaluate = [&](std::span<const double> x, std::span<double> grad) {
                ev.evaluate(x);
                std::fill(grad.begin(), grad.end(), 0.0);
                double value = 0.0;
                for (auto k : ev.active())
                {
                    const double gap = target - ev.h(k);
                    if (gap <= 0.0)
                        continue;
                    value -= gap * gap;
                    for (std::size_t i = 0; i < n; ++i)
                        grad[i] += 2.0 * gap * ev.dh(k, i);
                }
                return value;
            };
            spec.stop_early = [&](std::span<const double> x, double, std::span<const double>) {
                const double m = ev.min_h();
                if (m > lo)
                {
                    lo = m;
                    best_here.assign(x.begin(), x.end());
                }
                if (lo >= level)
                    return true;
                // Lagrangian bound with multipliers proportional to the shortfalls.
                double total = 0.0;
                for (auto k : ev.active())
                    total += std::max(target - ev.h(k), 0.0);
                if (total <= 0.0)
                    return false;
                std::fill(c.begin(), c.end(), 0.0);
                double bound = 0.0;
                for (auto k : ev.active())
                {
                    const double pi = std::max(target - ev.h(k), 0.0) / total;
                    if (pi == 0.0)
                        continue;
                    bound += pi * ev.h(k);
                    for (std::size_t i = 0; i < n; ++i)
                        c[i] += pi * ev.dh(k, i);
                }
                bound += problem.domain.linear_max(c) - std::inner_product(c.begin(), c.end(), x.begin(), 0.0);
                hi = std::min(hi, std::max(bound, lo));
                return hi < level;
            };

            const ConcaveResult res = concave_maximize(spec, best);
            if (!best_here.empty())
                best = std::move(best_here);
            else if (res.argmax.size() == n)
            {
                ev.evaluate(res.argmax);
                if (ev.min_h() > lo)
                {
                    lo = ev.min_h();
                    best = res.argmax;
                }
            }
            if (lo >= level || hi < level)
                break;
        }
        ++out.bisection_steps;
        if (lo < level && hi >= level)
        {
            // Neither reached nor certified: the level is not provably feasible, so shrink from above.
            ++out.undecided_checks;
            hi = level;
        }
        if (lo == lo_before && hi == hi_before && ++stalls >= 3)
            break;
    }

    ev.evaluate(best);
    out.rate = ev.min_h();
    out.upper_bound = hi;
    out.rates = ev.rates();
    out.x = std::move(best);
    return out;
}

// Variables z = (x, R). Maximizes t R + sum_k log(r_k(x) - w_k R) + sum_b log(cap_b - sum_b x)
// + sum_i log(x_i - lower_b) along the central path.
class CommonRateBarrier
{
  public:
    CommonRateBarrier(const CommonRateProblem &p) : p_(p), n_(p.domain.dimension()), K_(p.weights.size())
    {
        for (std::size_t k = 0; k < K_; ++k)
            if (p.weights[k] > 0.0)
                active_.push_back(k);
        r_.resize(K_);
        jac_.resize(K_ * n_);
        hess_.resize(K_ * n_ * n_);
    }

    std::size_t constraints() const
    {
        return active_.size() + p_.domain.blocks().size() + n_;
    }

    double min_h(std::span<const double> x)
    {
        p_.rates(x, r_, jac_);
        double m = std::numeric_limits<double>::infinity();
        for (auto k : active_)
            m = std::min(m, r_[k] / p_.weights[k]);
        return m;
    }

    double value(const Eigen::VectorXd &z, double t)
    {
        const std::span<const double> x(z.data(), n_);
        const double R = z[static_cast<Eigen::Index>(n_)];
        double v = t * R;
        for (const auto &b : p_.domain.blocks())
        {
            double sum = 0.0;
            for (std::size_t i = b.offset; i < b.offset + b.size; ++i)
            {
                const double s = x[i] - b.lower;
                if (!(s > 0.0))
                    return -std::numeric_limits<double>::infinity();
                v += std::log(s);
                sum += x[i];
            }
            const double slack = b.cap - sum;
            if (!(slack > 0.0))
                return -std::numeric_limits<double>::infinity();
            v += std::log(slack);
        }
        std::fill(jac_.begin(), jac_.end(), 0.0);
        p_.rates(x, r_, jac_);
        for (auto k : active_)
        {
            const double c = r_[k] - p_.weights[k] * R;
            if (!(c > 0.0) || !std::isfinite(c))
                return -std::numeric_limits<double>::infinity();
            v += std::log(c);
        }
        return v;
    }

    void derivatives(const Eigen::VectorXd &z, double t, Eigen::VectorXd &g, Eigen::MatrixXd &H)
    {
        const Eigen::Index dim = static_cast<Eigen::Index>(n_ + 1);
        const Eigen::Index iR = static_cast<Eigen::Index>(n_);
        const std::span<const double> x(z.data(), n_);
        g = Eigen::VectorXd::Zero(dim);
        H = Eigen::MatrixXd::Zero(dim, dim);
        g[iR] = t;

        std::fill(jac_.begin(), jac_.end(), 0.0);
        std::fill(hess_.begin(), hess_.end(), 0.0);
        p_.rates(x, r_, jac_);
        p_.hessians(x, hess_);
        Eigen::VectorXd grad_c(dim);
        for (auto k : active_)
        {
            const double c = r_[k] - p_.weights[k] * z[iR];
            for (std::size_t i = 0; i < n_; ++i)
                grad_c[static_cast<Eigen::Index>(i)] = jac_[k * n_ + i];
            grad_c[iR] = -p_.weights[k];
            g += grad_c / c;
            H.noalias() -= grad_c * grad_c.transpose() / (c * c);
            const Eigen::Map<const Eigen::MatrixXd> hk(hess_.data() + k * n_ * n_, static_cast<Eigen::Index>(n_),
                                                      static_cast<Eigen::Index>(n_));
            H.topLeftCorner(iR, iR) += hk / c;
        }
        for (const auto &b : p_.domain.blocks())
        {
            const auto lo = static_cast<Eigen::Index>(b.offset), len = static_cast<Eigen::Index>(b.size);
            const double slack = b.cap - z.segment(lo, len).sum();
            for (Eigen::Index i = lo; i < lo + len; ++i)
            {
                const double s = z[i] - b.lower;
                g[i] += 1.0 / s - 1.0 / slack;
                H(i, i) -= 1.0 / (s * s);
            }
            H.block(lo, lo, len, len).array() -= 1.0 / (slack * slack);
        }
    }

  private:
    const CommonRateProblem &p_;
    std::size_t n_, K_;
    std::vector<std::size_t> active_;
    std::vector<double> r_, jac_, hess_;
};

CommonRateResult barrier_common_rate(const CommonRateProblem &problem, std::vector<double> x0,
                                     const CommonRateOptions &options)
{
    const std::size_t n = problem.domain.dimension();
    CommonRateBarrier bar(problem);

    // Pull the start strictly inside every block; R starts below the smallest normalized rate so the
    // initial point is feasible even when some rate is zero.
    problem.domain.project(x0);
    constexpr double pull = 1e-3;
    for (const auto &b : problem.domain.blocks())
    {
        const double centre = (b.cap - static_cast<double>(b.size) * b.lower) / static_cast<double>(b.size + 1);
        for (std::size_t i = b.offset; i < b.offset + b.size; ++i)
            x0[i] = b.lower + (1.0 - pull) * (x0[i] - b.lower) + pull * centre;
    }
    Eigen::VectorXd z(static_cast<Eigen::Index>(n + 1));
    for (std::size_t i = 0; i < n; ++i)
        z[static_cast<Eigen::Index>(i)] = x0[i];
    const double m0 = bar.min_h(x0);
    if (!std::isfinite(m0))
        throw std::runtime_error("maximize_common_rate: non-finite rate at the start point");
    z[static_cast<Eigen::Index>(n)] = m0 - std::max(1.0, std::abs(m0));

    CommonRateResult out;
    const double m = static_cast<double>(bar.constraints());
    Eigen::VectorXd g, step;
    Eigen::MatrixXd H;
    double t = 1.0;
    for (int outer = 0; outer < 200; ++outer)
    {
        for (int it = 0; it < options.newton_iterations; ++it)
        {
            bar.derivatives(z, t, g, H);
            const Eigen::LDLT<Eigen::MatrixXd> ldlt(-H);
            step = ldlt.solve(g);
            if (ldlt.info() != Eigen::Success || !step.allFinite())
                throw std::runtime_error("maximize_common_rate: singular Newton system");
            const double decrement = g.dot(step);
            if (!(decrement > 1e-12))
                break;
            ++out.newton_steps;
            const double f0 = bar.value(z, t);
            double s = 1.0;
            while (bar.value(z + s * step, t) < f0 + 0.25 * s * decrement && s >= 1e-16)
                s *= 0.5;
            if (s < 1e-16)
                break;
            z += s * step;
        }
        const double R = z[static_cast<Eigen::Index>(n)];
        out.upper_bound = R + m / t;
        if (m / t <= options.barrier_tolerance * std::max(1.0, std::abs(R)))
            break;
        t *= 20.0;
    }

    out.x.assign(z.data(), z.data() + n);
    out.rate = bar.min_h(out.x);
    out.rates.resize(problem.weights.size());
    std::vector<double> jac(problem.weights.size() * n);
    problem.rates(out.x, out.rates, jac);
    return out;
}
} // namespace

CommonRateResult maximize_common_rate(const CommonRateProblem &problem, std::vector<double> x0,
                                      const CommonRateOptions &options)
{
    if (!problem.rates)
        throw std::invalid_argument("maximize_common_rate: rate callback is required");
    for (double w : problem.weights)
        if (!(w >= 0.0))
            throw std::invalid_argument("maximize_common_rate: weights must be non-negative");
    if (std::none_of(problem.weights.begin(), problem.weights.end(), [](double w) { return w > 0.0; }))
        throw std::invalid_argument("maximize_common_rate: no user has a positive weight");
    if (x0.size() != problem.domain.dimension())
        throw std::invalid_argument("maximize_common_rate: start point has wrong dimension");
    if (problem.hessians)
        return barrier_common_rate(problem, std::move(x0), options);
    return bisect_common_rate(problem, std::move(x0), options);
}

} // namespace irscap
