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

#include "irscap/oma.hpp"

#include "irscap/concave.hpp"
#include "irscap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace irscap
{

namespace
{
constexpr double inv_ln2 = 1.0 / std::numbers::ln2;
double log2_1p(double x) { return std::log1p(x) * inv_ln2; }
} // namespace

double oma_rate(double gain, double power, double omega, double sigma2)
{
    if (omega <= 0.0)
        return 0.0;
    return omega * log2_1p(gain * power / (omega * sigma2));
}

BestPhase best_phase_for_user(int k, const GainTable &table)
{
    if (k < 0 || k >= table.users())
        throw std::invalid_argument("best_phase_for_user: user index out of range");
    std::uint64_t best = 0;
    for (std::uint64_t i = 1; i < table.size(); ++i)
        if (table.gains(i)[k] > table.gains(best)[k])
            best = i;
    BestPhase out;
    out.theta = table.space().at(best);
    out.theta_index = best;
    out.gain = table.gains(best)[k];
    out.phases.resize(out.theta.idx.size());
    for (std::size_t m = 0; m < out.phases.size(); ++m)
        out.phases[m] = out.theta.phase(static_cast<int>(m));
    return out;
}

BestPhase best_phase_for_user(int k, const ChannelRealization &ch, const SystemConfig &config, PhaseMode mode)
{
    if (mode == PhaseMode::discrete)
        return best_phase_for_user(k, GainTable(ch, config));
    if (k < 0 || k >= ch.users())
        throw std::invalid_argument("best_phase_for_user: user index out of range");
    BestPhase out;
    out.phases.resize(ch.subsurfaces());
    for (int m = 0; m < ch.subsurfaces(); ++m)
        out.phases[m] = std::arg(ch.h[k]) - std::arg(ch.cascade(k, m));
    out.gain = effective_gain(ch, out.phases, k);
    return out;
}

namespace
{
std::vector<double> gains_under(const ChannelRealization &ch, const BestPhase &bp, const GainTable *table)
{
    if (table)
    {
        const auto g = table->gains(bp.theta_index);
        return {g.begin(), g.end()};
    }
    std::vector<double> g(ch.users());
    for (int j = 0; j < ch.users(); ++j)
        g[j] = effective_gain(ch, bp.phases, j);
    return g;
}
} // namespace

OmaInfiniteResult solve_oma_infinite(const RateProfile &alpha, const ChannelRealization &ch,
                                     const SystemConfig &config, PhaseMode mode)
{
    config.validate();
    const int K = ch.users();
    if (static_cast<int>(alpha.users()) != K || config.num_users != K)
        throw std::invalid_argument("solve_oma_infinite: rate profile, config and channel disagree on user count");
    const auto active = alpha.active_users();

    std::optional<GainTable> table;
    if (mode == PhaseMode::discrete)
        table.emplace(ch, config);

    OmaInfiniteResult out;
    std::vector<GammaSolution> gammas;
    for (int k : active)
    {
        const BestPhase bp = mode == PhaseMode::discrete ? best_phase_for_user(k, *table)
                                                         : best_phase_for_user(k, ch, config, mode);
        GammaSolution g;
        g.user = k;
        g.theta = bp.theta;
        g.theta_index = bp.theta_index;
        g.phases = bp.phases;
        g.gain = bp.gain;
        g.power.assign(K, 0.0);
        g.power[k] = config.max_power;
        g.share.assign(K, 0.0);
        g.share[k] = 1.0;
        g.rates.assign(K, 0.0);
        g.rates[k] = log2_1p(bp.gain * config.max_power / config.noise_power);
        if (!(g.rates[k] > 0.0))
            out.feasible = false;
        gammas.push_back(std::move(g));
    }
    out.dual.assign(K, 0.0);
    out.rates.assign(K, 0.0);
    if (!out.feasible)
        return out;

    double inv = 0.0;
    for (const auto &g : gammas)
        inv += alpha.alpha[g.user] / g.rates[g.user];
    out.closed_form_rate = 1.0 / inv;

    const std::size_t n = gammas.size();
    LinearProgram lp;
    lp.objective.assign(n + 1, 0.0);
    lp.objective[n] = 1.0;
    for (int k : active)
    {
        std::vector<double> row(n + 1, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            row[a] = -gammas[a].rates[k];
        row[n] = alpha.alpha[k];
        lp.ineq_lhs.push_back(std::move(row));
        lp.ineq_rhs.push_back(0.0);
    }
    std::vector<double> ones(n + 1, 1.0);
    ones[n] = 0.0;
    lp.eq_lhs.push_back(std::move(ones));
    lp.eq_rhs.push_back(1.0);
    const LpResult res = lp_solve(lp);
    if (res.status != LpStatus::optimal)
        throw std::runtime_error("solve_oma_infinite: LP is " + std::string(to_string(res.status)));

    out.common_rate = res.value;
    out.schedule.atoms = std::move(gammas);
    out.schedule.tau.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(n));
    out.rates = out.schedule.average_rates(K);
    for (const auto &g : out.schedule.atoms)
        out.dual[g.user] = out.common_rate / g.rates[g.user];
    return out;
}

double water_fill_check(double lambda, double delta, double gain, double sigma2)
{
    if (lambda <= 0.0 || gain <= 0.0)
        return 0.0;
    return std::max(lambda / (delta * std::numbers::ln2) - sigma2 / gain, 0.0);
}

WaterFillOutcome water_fill_structure(std::span<const double> lambda, std::span<const double> gains,
                                      double max_power, double sigma2)
{
    const std::size_t K = gains.size();
    if (lambda.size() != K)
        throw std::invalid_argument("water_fill_structure: dimension mismatch");
    double best_single = 0.0;
    for (std::size_t k = 0; k < K; ++k)
        best_single = std::max(best_single, lambda[k] * log2_1p(gains[k] * max_power / sigma2));

    WaterFillOutcome out;
    std::vector<double> level(K), value(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        if (lambda[k] <= 0.0 || gains[k] <= 0.0)
            continue;
        // Power price at which user k alone would spend exactly P_max.
        const double delta = lambda[k] / (std::numbers::ln2 * (max_power + sigma2 / gains[k]));
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < K; ++j)
        {
            level[j] = water_fill_check(lambda[j], delta, gains[j], sigma2);
            value[j] = lambda[j] * log2_1p(gains[j] * level[j] / sigma2) - delta * level[j];
            top = std::max(top, value[j]);
        }
        const double scale = std::max(1.0, std::abs(top));
        const bool selected = value[k] >= top - 1e-12 * scale;
        const bool full_power = std::abs(level[k] - max_power) <= 1e-9 * max_power;
        const bool dominant = lambda[k] * log2_1p(gains[k] * max_power / sigma2) >= best_single * (1.0 - 1e-9);
        if (selected && full_power && dominant)
        {
            out.single_user = true;
            out.user = static_cast<int>(k);
            out.delta = delta;
            out.power.assign(K, 0.0);
            out.power[k] = level[k];
            out.share.assign(K, 0.0);
            out.share[k] = 1.0;
            return out;
        }
    }
    return out;
}

OmaFiniteResult solve_oma_blocks(const RateProfile &alpha, const std::vector<std::vector<double>> &block_gains,
                                 double max_power, double sigma2, const OmaOptions &options)
{
    const std::size_t N = block_gains.size();
    const std::size_t K = alpha.users();
    if (N == 0)
        throw std::invalid_argument("solve_oma_blocks: at least one block is required");
    if (!(max_power > 0.0) || !(sigma2 > 0.0))
        throw std::invalid_argument("solve_oma_blocks: power and noise must be positive");

    std::vector<std::vector<double>> snr(N, std::vector<double>(K));
    for (std::size_t n = 0; n < N; ++n)
    {
        if (block_gains[n].size() != K)
            throw std::invalid_argument("solve_oma_blocks: per-block gains must have one entry per user");
        for (std::size_t k = 0; k < K; ++k)
            snr[n][k] = block_gains[n][k] * max_power / sigma2;
    }

    OmaFiniteResult out;
    const std::vector<int> users = alpha.active_users();
    for (int k : users)
    {
        bool any = false;
        for (std::size_t n = 0; n < N; ++n)
            any = any || snr[n][k] > 0.0;
        if (!any)
            out.feasible = false;
    }

    out.allocation.omega.assign(N, std::vector<double>(K, 0.0));
    out.allocation.power.assign(N, std::vector<double>(K, 0.0));
    out.rates.assign(K, 0.0);
    if (!out.feasible)
        return out;

    // Layout per block n: normalized powers at [2Kn, 2Kn + K), shares at [2Kn + K, 2Kn + 2K).
    std::vector<SimplexBlock> blocks;
    for (std::size_t n = 0; n < N; ++n)
    {
        blocks.push_back({2 * K * n, K, 1.0, 0.0});
        blocks.push_back({2 * K * n + K, K, 1.0, 0.0});
    }
    const std::size_t dim = 2 * K * N;
    const double inv_n = 1.0 / static_cast<double>(N);

    CommonRateProblem prob;
    prob.weights = alpha.alpha;
    prob.domain = BlockSimplexDomain(blocks);
    prob.rates = [&](std::span<const double> y, std::span<double> r, std::span<double> jac) {
        std::fill(r.begin(), r.end(), 0.0);
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t k = 0; k < K; ++k)
            {
                const std::size_t ip = 2 * K * n + k, iw = ip + K;
                const double s = snr[n][k], p = y[ip], w = y[iw];
                const double q = w + s * p;
                r[k] += w * log2_1p(s * p / w) * inv_n;
                jac[k * dim + ip] += inv_ln2 * w * s / q * inv_n;
                jac[k * dim + iw] += inv_ln2 * (std::log(q / w) - s * p / q) * inv_n;
            }
    };
    // The perspective w log(1 + s p / w) has Hessian -(s^2 / q^2) [w, -p; -p, p^2 / w], q = w + s p.
    prob.hessians = [&](std::span<const double> y, std::span<double> hess) {
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t k = 0; k < K; ++k)
            {
                const std::size_t ip = 2 * K * n + k, iw = ip + K;
                const double s = snr[n][k], p = y[ip], w = y[iw];
                const double q = w + s * p;
                const double c = inv_ln2 * s * s / (q * q) * inv_n;
                double *h = hess.data() + k * dim * dim;
                h[ip * dim + ip] -= c * w;
                h[ip * dim + iw] += c * p;
                h[iw * dim + ip] += c * p;
                h[iw * dim + iw] -= c * p * p / w;
            }
    };
    CommonRateOptions copt;
    copt.upper = 1.0;
    copt.barrier_tolerance = options.tolerance;
    copt.newton_iterations = options.newton_iterations;
    const CommonRateResult res =
        maximize_common_rate(prob, std::vector<double>(dim, 1.0 / static_cast<double>(K)), copt);
    out.newton_steps = res.newton_steps;

    for (std::size_t n = 0; n < N; ++n)
        for (int k : users)
        {
            const std::size_t ip = 2 * K * n + static_cast<std::size_t>(k);
            double w = res.x[ip + K];
            double p = res.x[ip];
            if (w < share_snap)
                w = p = 0.0;
            out.allocation.omega[n][k] = w;
            out.allocation.power[n][k] = p * max_power;
            out.rates[k] += oma_rate(snr[n][k], p, w, 1.0) * inv_n;
        }
    out.common_rate = std::numeric_limits<double>::infinity();
    for (int k : users)
        out.common_rate = std::min(out.common_rate, out.rates[k] / alpha.alpha[k]);
    return out;
}

OmaFiniteResult solve_oma_finite(const RateProfile &alpha, const ChannelRealization &ch, const SystemConfig &config,
                                 int blocks, PhaseMode mode, const OmaOptions &options)
{
    const OmaInfiniteResult inf = solve_oma_infinite(alpha, ch, config, mode);
    if (!inf.feasible)
    {
        OmaFiniteResult out;
        out.feasible = false;
        out.rates.assign(ch.users(), 0.0);
        return out;
    }
    std::optional<GainTable> table;
    if (mode == PhaseMode::discrete)
        table.emplace(ch, config);

    const auto map = blocks_from_durations(inf.schedule.tau, blocks);
    std::vector<std::vector<double>> gains;
    for (std::size_t a : map)
    {
        const auto &g = inf.schedule.atoms[a];
        BestPhase bp;
        bp.theta_index = g.theta_index;
        bp.phases = g.phases;
        gains.push_back(gains_under(ch, bp, table ? &*table : nullptr));
    }
    OmaFiniteResult out = solve_oma_blocks(alpha, gains, config.max_power, config.noise_power, options);
    for (std::size_t a : map)
    {
        const auto &g = inf.schedule.atoms[a];
        out.thetas.push_back(g.theta);
        out.phases.push_back(g.phases);
        out.block_users.push_back(g.user);
    }
    return out;
}

} // namespace irscap
