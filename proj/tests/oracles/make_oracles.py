#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
#
# Reference values frozen into test_noma.cpp and test_oma.cpp. Independent of the C++ code:
# NOMA regions come from densely sampled superposition boundaries time-shared by an LP, OMA block
# problems from a conic solver. Re-run with `python3 make_oracles.py` (numpy, scipy, cvxpy).

import itertools

import cvxpy as cp
import numpy as np
from scipy.optimize import linprog


def gains(h, g, v, levels):
    """Effective gains |h_k + sum_m conj(g_km) e^{j theta_m} v_m|^2 for every configuration."""
    K, M = g.shape
    out = []
    for idx in itertools.product(range(levels), repeat=M):
        theta = np.exp(2j * np.pi * np.array(idx) / levels)
        out.append([abs(h[k] + np.sum(np.conj(g[k]) * theta * v)) ** 2 for k in range(K)])
    return np.array(out)


def superposition_points(H, P, s2, steps):
    """Rate tuples on the monotone power chain for one configuration (weakest decoded first)."""
    K = len(H)
    order = np.argsort(H, kind="stable")
    grid = np.linspace(0.0, P, steps)
    pts = []
    for tail in itertools.product(range(steps), repeat=K - 1):
        if any(tail[i] < tail[i + 1] for i in range(K - 2)):
            continue
        q = [P] + [grid[t] for t in tail] + [0.0]
        r = np.zeros(K)
        for j, u in enumerate(order):
            r[u] = np.log2(1 + H[u] * q[j] / s2) - np.log2(1 + H[u] * q[j + 1] / s2)
        pts.append(r)
    return pts


def noma_common_rate(table, alpha, P, s2, steps):
    cols = []
    for H in table:
        cols.extend(superposition_points(H, P, s2, steps))
    A = np.array(cols).T          # K x atoms
    K, n = A.shape
    # variables (tau, R): maximize R s.t. alpha_k R - sum tau r_k <= 0, sum tau = 1
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-A, np.array(alpha)[:, None]])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(K), A_eq=np.hstack([np.ones((1, n)), [[0.0]]]), b_eq=[1.0],
                  bounds=[(0, None)] * n + [(None, None)], method="highs")
    return -res.fun


def oma_blocks(snr, alpha):
    snr = np.array(snr, dtype=float)
    N, K = snr.shape
    w = cp.Variable((N, K), nonneg=True)
    p = cp.Variable((N, K), nonneg=True)
    R = cp.Variable()
    cons = [cp.sum(w, axis=1) <= 1, cp.sum(p, axis=1) <= 1]
    for k in range(K):
        rate = sum(-cp.rel_entr(w[n, k], w[n, k] + snr[n, k] * p[n, k]) for n in range(N)) / N / np.log(2)
        if alpha[k] > 0:
            cons.append(rate >= alpha[k] * R)
    cp.Problem(cp.Maximize(R), cons).solve(solver=cp.CLARABEL, tol_gap_abs=1e-10, tol_gap_rel=1e-10,
                                           tol_feas=1e-10)
    return R.value


NOMA_CASES = [
    dict(name="two users, two sub-surfaces",
         h=[0.3 + 0.1j, 1.0 - 0.2j],
         g=[[0.5 - 0.5j, 0.2 + 0.4j], [0.1 + 0.3j, -0.3 + 0.2j]],
         v=[1.0 + 0.0j, 0.6 - 0.8j], levels=2, P=1.0, s2=0.01, alpha=[0.5, 0.5], steps=200001),
    dict(name="two users, skewed profile",
         h=[0.3 + 0.1j, 1.0 - 0.2j],
         g=[[0.5 - 0.5j, 0.2 + 0.4j], [0.1 + 0.3j, -0.3 + 0.2j]],
         v=[1.0 + 0.0j, 0.6 - 0.8j], levels=2, P=1.0, s2=0.01, alpha=[0.8, 0.2], steps=200001),
    dict(name="three users",
         h=[0.2 + 0.1j, 0.6 - 0.3j, 1.1 + 0.4j],
         g=[[0.4 + 0.2j, -0.3 + 0.1j], [0.2 - 0.5j, 0.3 + 0.3j], [-0.1 + 0.2j, 0.25 - 0.1j]],
         v=[0.9 + 0.1j, -0.2 + 0.7j], levels=2, P=1.0, s2=0.02, alpha=[0.2, 0.3, 0.5], steps=801),
]

OMA_CASES = [
    dict(name="two blocks", snr=[[1e3, 4e3], [2e3, 1e3]], alpha=[0.5, 0.5]),
    dict(name="three blocks, weak user", snr=[[10.0, 4e3], [3.0, 3e3], [40.0, 900.0]], alpha=[0.5, 0.5]),
    dict(name="one block, equal gains", snr=[[100.0, 100.0]], alpha=[0.5, 0.5]),
    dict(name="three users", snr=[[50.0, 200.0, 800.0], [80.0, 60.0, 1000.0]], alpha=[0.3, 0.3, 0.4]),
    dict(name="skewed profile", snr=[[1e3, 4e3], [2e3, 1e3]], alpha=[0.9, 0.1]),
]

if __name__ == "__main__":
    for case in NOMA_CASES:
        table = gains(np.array(case["h"]), np.array(case["g"]), np.array(case["v"]), case["levels"])
        value = noma_common_rate(table, case["alpha"], case["P"], case["s2"], case["steps"])
        print(f'NOMA {case["name"]}: {value:.12f}')
    for case in OMA_CASES:
        print(f'OMA {case["name"]}: {oma_blocks(case["snr"], case["alpha"]):.12f}')
