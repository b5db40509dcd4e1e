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

#include "irscap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace irscap
{

std::string_view to_string(LpStatus status)
{
    switch (status)
    {
    case LpStatus::optimal:
        return "optimal";
    case LpStatus::infeasible:
        return "infeasible";
    case LpStatus::unbounded:
        return "unbounded";
    }
    return "unknown";
}

void LinearProgram::validate() const
{
    const std::size_t n = variables();
    auto finite = [](double x) { return std::isfinite(x); };
    if (!std::all_of(objective.begin(), objective.end(), finite))
        throw std::invalid_argument("LinearProgram: non-finite objective coefficient");
    if (ineq_lhs.size() != ineq_rhs.size() || eq_lhs.size() != eq_rhs.size())
        throw std::invalid_argument("LinearProgram: row count differs from right-hand side length");
    for (const auto *rows : {&ineq_lhs, &eq_lhs})
        for (const auto &row : *rows)
            if (row.size() != n || !std::all_of(row.begin(), row.end(), finite))
                throw std::invalid_argument("LinearProgram: malformed constraint row");
    if (!std::all_of(ineq_rhs.begin(), ineq_rhs.end(), finite) || !std::all_of(eq_rhs.begin(), eq_rhs.end(), finite))
        throw std::invalid_argument("LinearProgram: non-finite right-hand side");
    if (!lower.empty())
    {
        if (lower.size() != n)
            throw std::invalid_argument("LinearProgram: lower-bound vector has wrong length");
        for (double l : lower)
            if (std::isnan(l) || l == std::numeric_limits<double>::infinity())
                throw std::invalid_argument("LinearProgram: invalid lower bound");
    }
}

namespace
{

constexpr double pivot_tol = 1e-11;
constexpr double cost_tol = 1e-10;
constexpr int pivot_cap = 200000;

// Tableau in canonical form: rows hold B^-1 [A | b], the last row holds reduced costs and -objective.
class Tableau
{
  public:
    Tableau(int rows, int cols) : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, -1) {}

    double &at(int r, int c) { return data_[r * (cols_ + 1) + c]; }
    double &rhs(int r) { return at(r, cols_); }
    double &cost(int c) { return at(rows_, c); }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::vector<int> &basis() { return basis_; }

    void pivot(int pr, int pc)
    {
        const double p = at(pr, pc);
        for (int c = 0; c <= cols_; ++c)
            at(pr, c) /= p;
        for (int r = 0; r <= rows_; ++r)
        {
            if (r == pr)
                continue;
            const double f = at(r, pc);
            if (f == 0.0)
                continue;
            for (int c = 0; c <= cols_; ++c)
                at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
        basis_[pr] = pc;
        ++pivots;
    }

    // Sets the cost row to the reduced costs of "maximize c'y".
    void price(const std::vector<double> &c)
    {
        for (int j = 0; j < cols_; ++j)
            cost(j) = c[j];
        cost(cols_) = 0.0;
        for (int r = 0; r < rows_; ++r)
        {
            const double cb = c[basis_[r]];
            if (cb == 0.0)
                continue;
            for (int j = 0; j <= cols_; ++j)
                cost(j) -= cb * at(r, j);
        }
    }

    // Bland's rule. Returns false when the problem is unbounded in the allowed columns.
    bool optimize(int allowed_cols)
    {
        while (true)
        {
            if (pivots > pivot_cap)
                throw std::runtime_error("lp_solve: pivot limit exceeded");
            int enter = -1;
            for (int j = 0; j < allowed_cols; ++j)
                if (cost(j) > cost_tol)
                {
                    enter = j;
                    break;
                }
            if (enter < 0)
                return true;
            int leave = -1;
            double best = 0.0;
            for (int r = 0; r < rows_; ++r)
            {
                const double a = at(r, enter);
                if (a <= pivot_tol)
                    continue;
                const double ratio = rhs(r) / a;
                if (leave < 0 || ratio < best - 1e-14 || (ratio <= best + 1e-14 && basis_[r] < basis_[leave]))
                {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave < 0)
                return false;
            pivot(leave, enter);
        }
    }

    void drop_row(int r)
    {
        std::vector<double> next((rows_) * (cols_ + 1));
        int out = 0;
        for (int i = 0; i <= rows_; ++i)
        {
            if (i == r)
                continue;
            std::copy_n(&at(i, 0), cols_ + 1, next.begin() + out * (cols_ + 1));
            ++out;
        }
        data_.swap(next);
        basis_.erase(basis_.begin() + r);
        --rows_;
    }

    int pivots = 0;

  private:
    int rows_, cols_;
    std::vector<double> data_;
    std::vector<int> basis_;
};

} // namespace

LpResult lp_solve(const LinearProgram &lp)
{
    lp.validate();
    const int n = static_cast<int>(lp.variables());
    const int m_ub = static_cast<int>(lp.ineq_rhs.size());
    const int m_eq = static_cast<int>(lp.eq_rhs.size());
    const int m = m_ub + m_eq;

    // Column map: finite lower bound -> one shifted column; free -> plus/minus pair.
    std::vector<double> shift(n, 0.0);
    std::vector<int> col_plus(n), col_minus(n, -1);
    int ny = 0;
    for (int j = 0; j < n; ++j)
    {
        const double l = lp.lower.empty() ? 0.0 : lp.lower[j];
        col_plus[j] = ny++;
        if (std::isinf(l))
            col_minus[j] = ny++;
        else
            shift[j] = l;
    }

    // Every row needs either a +1 slack with non-negative rhs or an artificial.
    std::vector<std::vector<double>> rows(m, std::vector<double>(ny, 0.0));
    std::vector<double> rhs(m), slack_sign(m, 0.0);
    for (int i = 0; i < m; ++i)
    {
        const bool ub = i < m_ub;
        const auto &a = ub ? lp.ineq_lhs[i] : lp.eq_lhs[i - m_ub];
        double b = ub ? lp.ineq_rhs[i] : lp.eq_rhs[i - m_ub];
        for (int j = 0; j < n; ++j)
        {
            rows[i][col_plus[j]] = a[j];
            if (col_minus[j] >= 0)
                rows[i][col_minus[j]] = -a[j];
            else
                b -= a[j] * shift[j];
        }
        rhs[i] = b;
        slack_sign[i] = ub ? 1.0 : 0.0;
        if (b < 0.0)
        {
            for (double &x : rows[i])
                x = -x;
            rhs[i] = -b;
            slack_sign[i] = -slack_sign[i];
        }
    }

    const int slack0 = ny;
    int n_art = 0;
    for (int i = 0; i < m; ++i)
        if (slack_sign[i] != 1.0)
            ++n_art;
    const int art0 = slack0 + m_ub;
    const int total = art0 + n_art;

    Tableau t(m, total);
    int next_art = art0;
    for (int i = 0; i < m; ++i)
    {
        for (int j = 0; j < ny; ++j)
            t.at(i, j) = rows[i][j];
        if (i < m_ub)
            t.at(i, slack0 + i) = slack_sign[i];
        t.rhs(i) = rhs[i];
        if (slack_sign[i] == 1.0)
            t.basis()[i] = slack0 + i;
        else
        {
            t.at(i, next_art) = 1.0;
            t.basis()[i] = next_art++;
        }
    }

    LpResult result;
    if (n_art > 0)
    {
        std::vector<double> phase1(total, 0.0);
        for (int j = art0; j < total; ++j)
            phase1[j] = -1.0;
        t.price(phase1);
        t.optimize(total);
        double scale = 1.0;
        for (double b : rhs)
            scale = std::max(scale, std::abs(b));
        if (t.cost(total) > 1e-9 * scale) // cost row rhs holds -(phase-1 objective)
        {
            result.status = LpStatus::infeasible;
            result.pivots = t.pivots;
            return result;
        }
        for (int r = 0; r < t.rows();)
        {
            if (t.basis()[r] < art0)
            {
                ++r;
                continue;
            }
            int col = -1;
            for (int j = 0; j < art0; ++j)
                if (std::abs(t.at(r, j)) > 1e-9)
                {
                    col = j;
                    break;
                }
            if (col >= 0)
            {
                t.pivot(r, col);
                ++r;
            }
            else
                t.drop_row(r); // redundant equality
        }
    }

    std::vector<double> cost(total, 0.0);
    for (int j = 0; j < n; ++j)
    {
        cost[col_plus[j]] = lp.objective[j];
        if (col_minus[j] >= 0)
            cost[col_minus[j]] = -lp.objective[j];
    }
    t.price(cost);
    const bool bounded = t.optimize(art0);
    result.pivots = t.pivots;
    if (!bounded)
    {
        result.status = LpStatus::unbounded;
        return result;
    }

    std::vector<double> y(total, 0.0);
    for (int r = 0; r < t.rows(); ++r)
        y[t.basis()[r]] = t.rhs(r);
    result.x.assign(n, 0.0);
    result.value = 0.0;
    for (int j = 0; j < n; ++j)
    {
        result.x[j] = shift[j] + y[col_plus[j]] - (col_minus[j] >= 0 ? y[col_minus[j]] : 0.0);
        result.value += lp.objective[j] * result.x[j];
    }
    result.status = LpStatus::optimal;
    return result;
}

} // namespace irscap
