"""Independent reference implementations used to check the fast paths.

These deliberately avoid the package's algorithms: the isotonic oracle
enumerates candidate block partitions of the quadratic program, the
ranking-probability oracle evaluates the sequential-choice product with
unshifted exponentials, and the tier oracle rebuilds the comparison graph
from scratch every round.
"""

from __future__ import annotations

import math

import numpy as np

from review_calib import extract_pairwise, find_never_losers


def isotonic_qp_oracle(values, weights=None, direction="non-increasing"):
    """Exhaustive solver of min sum w (x - y)^2 s.t. x monotone.

    The optimum is piecewise constant on consecutive blocks with values
    equal to the blocks' weighted means, so enumerating all 2**(n-1)
    consecutive partitions and keeping the feasible candidate with the
    smallest objective recovers it exactly. Only usable for small n.
    """
    y = np.asarray(values, dtype=float)
    n = len(y)
    if n == 0:
        return y.copy()
    if n > 16:
        raise ValueError("oracle is exponential; keep n <= 16")
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    sign = 1.0 if direction == "non-decreasing" else -1.0
    yy = sign * y
    best_x = None
    best_obj = math.inf
    for mask in range(2 ** (n - 1)):
        x = np.empty(n)
        feasible = True
        prev_mean = -math.inf
        lo = 0
        for k in range(n):
            if k == n - 1 or (mask >> k) & 1:
                block_w = w[lo : k + 1]
                mean = float(np.dot(block_w, yy[lo : k + 1]) / block_w.sum())
                if mean < prev_mean:
                    feasible = False
                    break
                x[lo : k + 1] = mean
                prev_mean = mean
                lo = k + 1
        if not feasible:
            continue
        obj = float(np.dot(w, (x - yy) ** 2))
        if obj < best_obj:
            best_obj = obj
            best_x = x
    return sign * best_x


def pl_prob_direct(theta, perm):
    """Sequential-choice probability with raw exponentials, no shift."""
    theta = [float(t) for t in theta]
    perm = list(perm)
    prob = 1.0
    remaining = perm[:]
    for k in range(len(perm) - 1):
        denom = sum(math.exp(theta[i]) for i in remaining)
        prob *= math.exp(theta[perm[k]]) / denom
        remaining.remove(perm[k])
    return prob


def naive_hierarchical_tiers(rankings, papers):
    """Literal peel: rebuild restricted comparisons each round."""
    remaining = set(int(p) for p in papers)
    tiers = []
    while remaining:
        graph = extract_pairwise(rankings, remaining)
        never_lose = find_never_losers(graph, remaining)
        if not never_lose:
            tiers.append(sorted(remaining))
            break
        tiers.append(sorted(never_lose))
        remaining -= never_lose
    return tiers


def two_state_stationary(a, b):
    """Stationary law of the chain [[1-a, a], [b, 1-b]]."""
    return np.array([b, a]) / (a + b)
