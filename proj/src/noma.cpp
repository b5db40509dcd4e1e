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

#include "irscap/noma.hpp"

#include "irscap/concave.hpp"
#include "irscap/ellipsoid.hpp"
#include "irscap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace irscap
{

namespace
{
constexpr double inv_ln2 = 1.0 / std::numbers::ln2;

double log2_1p(double x) { return std::log1p(x) * inv_ln2; }

void check_users(int K)
{
    if (K < 1 || K > max_noma_users)
        throw std::invalid_argument("NOMA engine supports 1.." + std::to_string(max_noma_users) + " users, got " +
                                    std::to_string(K));
}

// Chain of one activity pattern in noise- and power-normalized units. lam[j], snr[j] and full[j]
// refer to decoding position j; snr[j] = H P / sigma^2 and full[j] = log2(1 + snr[j]).
// Returns false when the pattern hits the lambda_prev == lambda_k singularity.
template <class Lam, class Snr, class Full>
bool evaluate_pattern(unsigned mask, int K, const Lam &lam, const Snr &snr, const Full &full, double &phi,
                      double *q, bool *degenerate)
{
    int prev = -1;
    double prev_q = 1.0;
    phi = 0.0;
    bool merged = false;
    for (int j = 0; j < K; ++j)
    {
        if (!(mask >> j & 1u))
            continue;
        if (prev < 0)
        {
            phi = lam[j] * full[j];
            if (q)
                for (int i = 0; i <= j; ++i)
                    q[i] = 1.0;
        }
        else
        {
            if (lam[j] == lam[prev])
                return false;
            double root = (lam[prev] / snr[j] - lam[j] / snr[prev]) / (lam[j] - lam[prev]);
            if (std::isnan(root))
                root = 0.0;
            const double Q = std::min(std::clamp(root, 0.0, 1.0), prev_q);
            if (Q <= 0.0 || Q >= prev_q)
                merged = true;
            phi += lam[j] * log2_1p(snr[j] * Q) - lam[prev] * log2_1p(snr[prev] * Q);
            if (q)
                for (int i = prev + 1; i <= j; ++i)
                    q[i] = Q;
            prev_q = Q;
        }
        prev = j;
    }
    if (q)
        for (int i = prev + 1; i < K; ++i)
            q[i] = 0.0;
    if (degenerate)
        *degenerate = merged;
    return true;
}
} // namespace

PowerCandidate PowerCandidate::from_cumulative(std::vector<double> q, const DecodingOrder &order)
{
    const std::size_t K = q.size();
    if (order.sequence.size() != K)
        throw std::invalid_argument("PowerCandidate: decoding order length differs from chain length");
    PowerCandidate c;
    c.p.assign(K, 0.0);
    c.active.assign(K, false);
    for (std::size_t j = 0; j < K; ++j)
    {
        const double next = j + 1 < K ? q[j + 1] : 0.0;
        c.p[order.sequence[j]] = std::max(q[j] - next, 0.0);
        c.active[j] = q[j] > next;
    }
    c.q = std::move(q);
    return c;
}

double noma_rate(double gain, const PowerCandidate &candidate, const DecodingOrder &order, int k, double sigma2)
{
    const int pos = order.mu.at(k);
    const double interference = pos + 1 < static_cast<int>(candidate.q.size()) ? candidate.q[pos + 1] : 0.0;
    const double p = candidate.p.at(k);
    if (p <= 0.0)
        return 0.0;
    return log2_1p(gain * p / (gain * interference + sigma2));
}

std::vector<double> noma_rates(std::span<const double> gains, const PowerCandidate &candidate,
                               const DecodingOrder &order, double sigma2)
{
    std::vector<double> r(gains.size());
    for (std::size_t k = 0; k < gains.size(); ++k)
        r[k] = noma_rate(gains[k], candidate, order, static_cast<int>(k), sigma2);
    return r;
}

double phi_weighted(const DualStateN &dual, std::span<const double> gains, const DecodingOrder &order,
                    std::span<const double> q, double sigma2)
{
    const std::size_t K = gains.size();
    if (q.size() != K || dual.lambda.size() != K)
        throw std::invalid_argument("phi_weighted: dimension mismatch");
    double phi = 0.0;
    for (std::size_t j = 0; j < K; ++j)
    {
        const int u = order.sequence[j];
        const double next = j + 1 < K ? q[j + 1] : 0.0;
        phi += dual.lambda[u] * (log2_1p(gains[u] * q[j] / sigma2) - log2_1p(gains[u] * next / sigma2));
    }
    return phi;
}

double phi_weighted(const DualStateN &dual, const PhaseConfig &theta, std::span<const double> q,
                    const ChannelRealization &ch, const SystemConfig &config)
{
    std::vector<double> gains(ch.users());
    for (int k = 0; k < ch.users(); ++k)
        gains[k] = effective_gain(ch, theta, k);
    return phi_weighted(dual, gains, decoding_order(gains), q, config.noise_power);
}

std::optional<double> stationary_q(double lambda_prev, double lambda_k, double gain_prev, double gain_k,
                                   double max_power, double sigma2)
{
    if (lambda_k == lambda_prev)
        return std::nullopt;
    double q = sigma2 * (lambda_prev / gain_k - lambda_k / gain_prev) / (lambda_k - lambda_prev);
    if (std::isnan(q))
        q = 0.0;
    return std::clamp(q, 0.0, max_power);
}

std::vector<PowerCandidate> power_candidates(const DualStateN &dual, std::span<const double> gains,
                                             const DecodingOrder &order, double max_power, double sigma2)
{
    const int K = static_cast<int>(gains.size());
    check_users(K);
    std::vector<double> lam(K), snr(K), full(K);
    for (int j = 0; j < K; ++j)
    {
        const int u = order.sequence[j];
        lam[j] = dual.lambda.at(u);
        snr[j] = gains[u] * max_power / sigma2;
        full[j] = log2_1p(snr[j]);
    }
    std::vector<PowerCandidate> out;
    std::vector<double> q(K);
    for (unsigned mask = 1; mask < (1u << K); ++mask)
    {
        double phi = 0.0;
        if (!evaluate_pattern(mask, K, lam, snr, full, phi, q.data(), nullptr))
            continue;
        std::vector<double> watts(K);
        for (int j = 0; j < K; ++j)
            watts[j] = q[j] * max_power;
        PowerCandidate c = PowerCandidate::from_cumulative(std::move(watts), order);
        for (int j = 0; j < K; ++j)
            c.active[j] = mask >> j & 1u;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<PowerCandidate> enumerate_power_candidates(const DualStateN &dual, const PhaseConfig &theta,
                                                       const ChannelRealization &ch, const SystemConfig &config)
{
    std::vector<double> gains(ch.users());
    for (int k = 0; k < ch.users(); ++k)
        gains[k] = effective_gain(ch, theta, k);
    return power_candidates(dual, gains, decoding_order(gains), config.max_power, config.noise_power);
}

NomaTable::NomaTable(const ChannelRealization &ch, const SystemConfig &config)
    : gains_(ch, config), max_power_(config.max_power), noise_(config.noise_power)
{
    config.validate();
    const int K = gains_.users();
    check_users(K);
    sequence_.resize(gains_.size() * K);
    full_rate_.resize(gains_.size() * K);
    for (std::uint64_t i = 0; i < gains_.size(); ++i)
    {
        const auto order = decoding_order(gains_.gains(i));
        for (int j = 0; j < K; ++j)
        {
            const int u = order.sequence[j];
            sequence_[i * K + j] = u;
            full_rate_[i * K + j] = log2_1p(gains_.gains(i)[u] * max_power_ / noise_);
        }
    }
}

SolutionAtom NomaTable::make_atom(const DualStateN &dual, std::uint64_t index, unsigned pattern) const
{
    const int K = users();
    const auto g = gains_.gains(index);
    const auto seq = sequence(index);
    const auto full = full_power_rate(index);
    std::vector<double> lam(K), snr(K), q(K);
    for (int j = 0; j < K; ++j)
    {
        lam[j] = dual.lambda[seq[j]];
        snr[j] = g[seq[j]] * max_power_ / noise_;
    }
    double phi = 0.0;
    if (!evaluate_pattern(pattern, K, lam, snr, full, phi, q.data(), nullptr))
        throw std::logic_error("NomaTable::make_atom: singular pattern requested");

    SolutionAtom atom;
    atom.theta = gains_.space().at(index);
    atom.theta_index = index;
    atom.gains.assign(g.begin(), g.end());
    atom.order = decoding_order(atom.gains);
    for (double &v : q)
        v *= max_power_;
    atom.candidate = PowerCandidate::from_cumulative(std::move(q), atom.order);
    for (int j = 0; j < K; ++j)
        atom.candidate.active[j] = pattern >> j & 1u;
    atom.rates = noma_rates(atom.gains, atom.candidate, atom.order, noise_);
    atom.pattern = pattern;
    atom.weighted_value = 0.0;
    for (int k = 0; k < K; ++k)
        atom.weighted_value += dual.lambda[k] * atom.rates[k];
    return atom;
}

DualEvaluation dual_eval(const DualStateN &dual, const NomaTable &table, double tol_atom)
{
    const int K = table.users();
    if (static_cast<int>(dual.lambda.size()) != K)
        throw std::invalid_argument("dual_eval: dual vector length differs from user count");

    struct Hit
    {
        double value;
        std::uint64_t index;
        unsigned mask;
    };
    std::vector<Hit> hits;
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t best_index = 0;
    unsigned best_mask = 1;

    std::vector<double> lam(K), snr(K);
    for (std::uint64_t i = 0; i < table.size(); ++i)
    {
        const auto g = table.gains().gains(i);
        const auto seq = table.sequence(i);
        const auto full = table.full_power_rate(i);
        for (int j = 0; j < K; ++j)
        {
            lam[j] = dual.lambda[seq[j]];
            snr[j] = g[seq[j]] * table.max_power() / table.noise();
        }
        for (unsigned mask = 1; mask < (1u << K); ++mask)
        {
            double phi = 0.0;
            bool degenerate = false;
            if (!evaluate_pattern(mask, K, lam, snr, full, phi, nullptr, &degenerate) || degenerate)
                continue; // a degenerate chain repeats a smaller pattern's powers
            if (phi > best)
            {
                best = phi;
                best_index = i;
                best_mask = mask;
            }
            if (phi >= best - tol_atom * std::abs(best))
                hits.push_back({phi, i, mask});
        }
    }

    DualEvaluation out;
    out.value = best;
    out.best = table.make_atom(dual, best_index, best_mask);
    for (const auto &h : hits)
        if (h.value >= best - tol_atom * std::abs(best))
            out.near_optimal.push_back(table.make_atom(dual, h.index, h.mask));
    return out;
}

DualEvaluation dual_eval(const DualStateN &dual, const ChannelRealization &ch, const SystemConfig &config,
                         double tol_atom)
{
    return dual_eval(dual, NomaTable(ch, config), tol_atom);
}

namespace
{
NomaInfiniteResult single_user(const RateProfile &alpha, const NomaTable &table, int k)
{
    std::uint64_t best = 0;
    for (std::uint64_t i = 1; i < table.size(); ++i)
        if (table.gains().gains(i)[k] > table.gains().gains(best)[k])
            best = i;
    const auto seq = table.sequence(best);
    const int pos = static_cast<int>(std::find(seq.begin(), seq.end(), k) - seq.begin());

    NomaInfiniteResult out;
    out.dual.lambda.assign(table.users(), 0.0);
    out.dual.lambda[k] = 1.0 / alpha.alpha[k];
    SolutionAtom atom = table.make_atom(out.dual, best, 1u << pos);
    out.common_rate = atom.rates[k] / alpha.alpha[k];
    out.dual_value = out.common_rate;
    out.dual_bound = out.common_rate;
    out.schedule.atoms.push_back(std::move(atom));
    out.schedule.tau.push_back(1.0);
    out.rates = out.schedule.average_rates(table.users());
    out.atom_pool = 1;
    out.feasible = out.common_rate > 0.0;
    return out;
}

// Atoms of one configuration and pattern differ with lambda through their powers, so the rate
// tuple is part of the identity.
struct PoolKey
{
    std::uint64_t index;
    unsigned mask;
    std::vector<double> rates;
    auto operator<=>(const PoolKey &) const = default;
};

// Prices of the time-sharing LP: min mu  s.t.  sum_i lambda_i r_ai <= mu,  alpha^T lambda = 1,
// lambda >= 0. Returns the full-length dual vector.
std::vector<double> pool_prices(const RateProfile &alpha, const std::vector<int> &active,
                                const std::vector<const SolutionAtom *> &atoms, int users)
{
    const std::size_t d = active.size();
    LinearProgram lp;
    lp.objective.assign(d + 1, 0.0);
    lp.objective[d] = -1.0;
    for (const SolutionAtom *atom : atoms)
    {
        std::vector<double> row(d + 1);
        for (std::size_t i = 0; i < d; ++i)
            row[i] = atom->rates[active[i]];
        row[d] = -1.0;
        lp.ineq_lhs.push_back(std::move(row));
        lp.ineq_rhs.push_back(0.0);
    }
    std::vector<double> eq(d + 1, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        eq[i] = alpha.alpha[active[i]];
    lp.eq_lhs.push_back(std::move(eq));
    lp.eq_rhs.push_back(1.0);
    lp.lower.assign(d + 1, 0.0);
    lp.lower[d] = -std::numeric_limits<double>::infinity();
    const LpResult res = lp_solve(lp);
    if (res.status != LpStatus::optimal)
        throw std::runtime_error("solve_noma_infinite: pricing LP is " + std::string(to_string(res.status)));
    std::vector<double> lambda(static_cast<std::size_t>(users), 0.0);
    for (std::size_t i = 0; i < d; ++i)
        lambda[active[i]] = res.x[i];
    return lambda;
}

// max R  s.t.  alpha_k R <= sum_a tau_a r_ka (k active),  sum tau = 1,  tau >= 0
LpResult time_sharing_lp(const RateProfile &alpha, const std::vector<int> &active,
                         const std::vector<const SolutionAtom *> &atoms)
{
    const std::size_t n = atoms.size();
    LinearProgram lp;
    lp.objective.assign(n + 1, 0.0);
    lp.objective[n] = 1.0;
    for (int k : active)
    {
        std::vector<double> row(n + 1);
        for (std::size_t a = 0; a < n; ++a)
            row[a] = -atoms[a]->rates[k];
        row[n] = alpha.alpha[k];
        lp.ineq_lhs.push_back(std::move(row));
        lp.ineq_rhs.push_back(0.0);
    }
    std::vector<double> ones(n + 1, 1.0);
    ones[n] = 0.0;
    lp.eq_lhs.push_back(std::move(ones));
    lp.eq_rhs.push_back(1.0);
    return lp_solve(lp);
}
} // namespace

NomaInfiniteResult solve_noma_infinite(const RateProfile &alpha, const NomaTable &table, const NomaOptions &options)
{
    const int K = table.users();
    if (static_cast<int>(alpha.users()) != K)
        throw std::invalid_argument("solve_noma_infinite: rate profile length differs from user count");
    const auto active = alpha.active_users();
    if (active.size() == 1)
        return single_user(alpha, table, active.front());

    const int d = static_cast<int>(active.size());
    Eigen::VectorXd a(d), center(d);
    double min_alpha = 1.0;
    for (int i = 0; i < d; ++i)
    {
        a[i] = alpha.alpha[active[i]];
        center[i] = 1.0 / (d * a[i]);
        min_alpha = std::min(min_alpha, a[i]);
    }

    std::map<PoolKey, SolutionAtom> pool;
    auto add = [&pool](const SolutionAtom &atom) {
        return pool.try_emplace(PoolKey{atom.theta_index, atom.pattern, atom.rates}, atom).second;
    };
    DualStateN dual;
    dual.lambda.assign(K, 0.0);

    const SubgradientOracle oracle = [&](const Eigen::VectorXd &lam) {
        const double scale = a.dot(lam);
        for (int i = 0; i < d; ++i)
            dual.lambda[active[i]] = lam[i] / scale;
        const DualEvaluation ev = dual_eval(dual, table, options.tol_atom);
        add(ev.best);
        OracleAnswer ans;
        ans.value = scale * ev.value; // f1 is positively homogeneous
        ans.subgradient.resize(d);
        for (int i = 0; i < d; ++i)
            ans.subgradient[i] = ev.best.rates[active[i]];
        ans.feasible_value = ev.value;
        ans.feasible_point = lam / scale;
        return ans;
    };

    EllipsoidOptions eopt;
    eopt.eps = options.ellipsoid_eps;
    eopt.max_iterations = options.max_ellipsoid_iterations;
    const auto init = EllipsoidState::ball(center, std::sqrt(static_cast<double>(d)) / min_alpha);
    const EllipsoidResult er = ellipsoid_minimize(d, oracle, LinearEquality{a, 1.0}, init, eopt);

    NomaInfiniteResult out;
    out.dual.lambda.assign(K, 0.0);
    for (int i = 0; i < d; ++i)
        out.dual.lambda[active[i]] = er.argmin[i];
    const DualEvaluation final_eval = dual_eval(out.dual, table, options.tol_atom);
    for (const auto &atom : final_eval.near_optimal)
        add(atom);

    // Cutting-plane refinement: price the pool, add the Lagrangian maximizer at those prices, and
    // stop once the LP value meets the dual bound.
    double bound = std::min(er.value, final_eval.value);
    std::vector<const SolutionAtom *> atoms;
    LpResult lp;
    int polish = 0;
    for (;; ++polish)
    {
        atoms.clear();
        for (const auto &[key, atom] : pool)
            atoms.push_back(&atom);
        lp = time_sharing_lp(alpha, active, atoms);
        if (lp.status != LpStatus::optimal)
            throw std::runtime_error("solve_noma_infinite: time-sharing LP is " + std::string(to_string(lp.status)));
        if (bound - lp.value <= options.polish_tolerance * std::max(1.0, bound) || polish >= options.polish_iterations)
            break;
        const DualStateN prices{pool_prices(alpha, active, atoms, K)};
        const DualEvaluation ev = dual_eval(prices, table, options.tol_atom);
        bound = std::min(bound, ev.value);
        bool grew = add(ev.best);
        for (const auto &atom : ev.near_optimal)
            grew = add(atom) || grew;
        if (!grew)
            break;
    }

    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (lp.x[i] > 1e-12)
            total += lp.x[i];
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (lp.x[i] > 1e-12)
        {
            out.schedule.atoms.push_back(*atoms[i]);
            out.schedule.tau.push_back(lp.x[i] / total);
        }
    out.common_rate = lp.value;
    out.dual_value = er.value;
    out.dual_bound = bound;
    out.polish_iterations = polish;
    out.rates = out.schedule.average_rates(K);
    out.ellipsoid_iterations = er.iterations;
    out.atom_pool = atoms.size();
    out.degraded = er.degraded;
    out.feasible = out.common_rate > 0.0;
    return out;
}

NomaInfiniteResult solve_noma_infinite(const RateProfile &alpha, const ChannelRealization &ch,
                                       const SystemConfig &config, const NomaOptions &options)
{
    return solve_noma_infinite(alpha, NomaTable(ch, config), options);
}

std::vector<std::size_t> build_theta_schedule(const TimeSharingSchedule<SolutionAtom> &schedule, int blocks)
{
    if (blocks < 1)
        throw std::invalid_argument("build_theta_schedule: at least one block is required");
    schedule.validate(1e-6);
    return blocks_from_durations(schedule.tau, blocks);
}

double sca_lower_bound(double gain, double interference, double local_interference, double received, double sigma2)
{
    const double s_local = sigma2 + gain * local_interference;
    return log2_1p(gain * received / sigma2) - log2_1p(gain * local_interference / sigma2) -
           gain * inv_ln2 * (interference - local_interference) / s_local;
}

namespace
{
// Block-averaged true NOMA rates for normalized powers x[n*K + k] and per-block SNRs.
void true_rates(const std::vector<std::vector<double>> &snr, const std::vector<std::vector<int>> &seq,
                std::span<const double> x, std::vector<double> &rates)
{
    const std::size_t N = snr.size();
    const std::size_t K = rates.size();
    std::fill(rates.begin(), rates.end(), 0.0);
    for (std::size_t n = 0; n < N; ++n)
    {
        double tail = 0.0; // powers of users decoded after the current position
        for (std::size_t j = K; j-- > 0;)
        {
            const int u = seq[n][j];
            const double p = x[n * K + u];
            rates[u] += (log2_1p(snr[n][u] * (tail + p)) - log2_1p(snr[n][u] * tail)) / static_cast<double>(N);
            tail += p;
        }
    }
}

double common_of(const RateProfile &alpha, const std::vector<double> &rates)
{
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rates.size(); ++k)
        if (alpha.alpha[k] > 0.0)
            m = std::min(m, rates[k] / alpha.alpha[k]);
    return m;
}
} // namespace

NomaFiniteResult solve_noma_blocks(const RateProfile &alpha, const std::vector<std::vector<double>> &block_gains,
                                   double max_power, double sigma2, std::vector<std::vector<double>> init_powers,
                                   const NomaOptions &options)
{
    const std::size_t N = block_gains.size();
    const std::size_t K = alpha.users();
    if (N == 0 || init_powers.size() != N)
        throw std::invalid_argument("solve_noma_blocks: one gain and power vector per block is required");
    check_users(static_cast<int>(K));

    std::vector<std::vector<double>> snr(N, std::vector<double>(K));
    std::vector<std::vector<int>> seq(N);
    std::vector<std::vector<int>> pos(N, std::vector<int>(K));
    double snr_max = 0.0;
    for (std::size_t n = 0; n < N; ++n)
    {
        if (block_gains[n].size() != K || init_powers[n].size() != K)
            throw std::invalid_argument("solve_noma_blocks: per-block vectors must have one entry per user");
        const auto order = decoding_order(block_gains[n]);
        seq[n] = order.sequence;
        pos[n] = order.mu;
        for (std::size_t k = 0; k < K; ++k)
        {
            snr[n][k] = block_gains[n][k] * max_power / sigma2;
            snr_max = std::max(snr_max, snr[n][k]);
        }
    }

    NomaFiniteResult out;
    for (int k : alpha.active_users())
    {
        bool any = false;
        for (std::size_t n = 0; n < N; ++n)
            any = any || snr[n][k] > 0.0;
        if (!any)
            out.feasible = false;
    }

    std::vector<SimplexBlock> blocks;
    for (std::size_t n = 0; n < N; ++n)
        blocks.push_back({n * K, K, 1.0, 0.0});
    const BlockSimplexDomain domain(blocks);

    std::vector<double> x(N * K);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k < K; ++k)
            x[n * K + k] = init_powers[n][k] / max_power;
    domain.project(x);

    std::vector<double> rates(K);
    true_rates(snr, seq, x, rates);
    double current = common_of(alpha, rates);
    out.trace.push_back(current);

    if (out.feasible)
    {
        std::vector<double> local_q(N * K); // interference from later-decoded users at the local point
        for (int l = 0; l < options.sca_iterations; ++l)
        {
            for (std::size_t n = 0; n < N; ++n)
            {
                double tail = 0.0;
                for (std::size_t j = K; j-- > 0;)
                {
                    const int u = seq[n][j];
                    local_q[n * K + u] = tail;
                    tail += x[n * K + u];
                }
            }

            CommonRateProblem prob;
            prob.weights = alpha.alpha;
            prob.domain = domain;
            prob.rates = [&](std::span<const double> y, std::span<double> r, std::span<double> jac) {
                std::fill(r.begin(), r.end(), 0.0);
                const double inv_n = 1.0 / static_cast<double>(N);
                const std::size_t dim = N * K;
                for (std::size_t n = 0; n < N; ++n)
                {
                    double tail = 0.0;
                    for (std::size_t j = K; j-- > 0;)
                    {
                        const int u = seq[n][j];
                        const double a = snr[n][u];
                        const double ql = local_q[n * K + u];
                        const double received = tail + y[n * K + u];
                        r[u] += sca_lower_bound(a, tail, ql, received, 1.0) * inv_n;
                        const double d_recv = a * inv_ln2 / (1.0 + a * received) * inv_n;
                        const double d_int = a * inv_ln2 / (1.0 + a * ql) * inv_n;
                        for (std::size_t jj = j; jj < K; ++jj)
                        {
                            const int i = seq[n][jj];
                            jac[u * dim + n * K + i] += d_recv - (jj > j ? d_int : 0.0);
                        }
                        tail += y[n * K + u];
                    }
                }
            };
            // log2(1 + a * received) is the only curved term: rank one over the received powers.
            prob.hessians = [&](std::span<const double> y, std::span<double> hess) {
                const double inv_n = 1.0 / static_cast<double>(N);
                const std::size_t dim = N * K;
                for (std::size_t n = 0; n < N; ++n)
                {
                    double received = 0.0;
                    for (std::size_t j = K; j-- > 0;)
                    {
                        const int u = seq[n][j];
                        const double a = snr[n][u];
                        received += y[n * K + u];
                        const double c = a * a * inv_ln2 / ((1.0 + a * received) * (1.0 + a * received)) * inv_n;
                        double *h = hess.data() + static_cast<std::size_t>(u) * dim * dim;
                        for (std::size_t j1 = j; j1 < K; ++j1)
                            for (std::size_t j2 = j; j2 < K; ++j2)
                                h[(n * K + seq[n][j1]) * dim + n * K + seq[n][j2]] -= c;
                    }
                }
            };
            CommonRateOptions copt;
            copt.tolerance = options.bisection_tolerance;
            copt.upper = static_cast<double>(K) * log2_1p(snr_max) + 1e-9;
            const CommonRateResult res = maximize_common_rate(prob, x, copt);

            std::vector<double> next_rates(K);
            true_rates(snr, seq, res.x, next_rates);
            const double next = common_of(alpha, next_rates);
            ++out.iterations;
            if (next < current)
                break; // cannot happen in exact arithmetic; keep the better point
            const double gain = next - current;
            x = res.x;
            rates = next_rates;
            current = next;
            out.trace.push_back(current);
            if (gain <= options.sca_tolerance * std::max(current, 1e-300))
                break;
        }
    }

    out.common_rate = current;
    out.rates = rates;
    out.powers.assign(N, std::vector<double>(K));
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k < K; ++k)
            out.powers[n][k] = x[n * K + k] * max_power;
    return out;
}

NomaFiniteResult solve_noma_finite(const RateProfile &alpha, const ChannelRealization &ch, const SystemConfig &config,
                                   int blocks, const NomaOptions &options)
{
    const NomaTable table(ch, config);
    const NomaInfiniteResult inf = solve_noma_infinite(alpha, table, options);
    const auto map = build_theta_schedule(inf.schedule, blocks);

    std::vector<std::vector<double>> gains, powers;
    for (std::size_t atom : map)
    {
        const auto &a = inf.schedule.atoms[atom];
        gains.push_back(a.gains);
        powers.push_back(a.candidate.p);
    }
    NomaFiniteResult out = solve_noma_blocks(alpha, gains, config.max_power, config.noise_power, powers, options);
    for (std::size_t atom : map)
    {
        out.thetas.push_back(inf.schedule.atoms[atom].theta);
        out.theta_indices.push_back(inf.schedule.atoms[atom].theta_index);
    }
    out.feasible = out.feasible && inf.feasible;
    return out;
}

} // namespace irscap
