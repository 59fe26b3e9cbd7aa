"""Weighted isotonic regression (pool adjacent violators).

Solves min sum_i w_i (x_i - y_i)^2 subject to x being monotone along the
given index order. The solver is the linear-time stack variant of PAVA;
pooled block values are recomputed with compensated summation so that the
weighted total is preserved tightly even for inputs thousands of entries
long.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NON_INCREASING = "non-increasing"
NON_DECREASING = "non-decreasing"
_DIRECTIONS = (NON_INCREASING, NON_DECREASING)


@dataclass(frozen=True)
class IsotonicProblem:
    """Inputs of one isotonic fit.

    ``weights`` defaults to all ones. ``direction`` is the monotonicity
    required of the output along the index order of ``values``.
    """

    values: np.ndarray
    weights: np.ndarray | None = None
    direction: str = NON_INCREASING


def _pava_non_decreasing(y: np.ndarray, w: np.ndarray | None) -> np.ndarray:
    """Stack PAVA; merges adjacent blocks while their means strictly violate.

    ``w is None`` means unit weights. Block values are recomputed with
    compensated summation so sum(w*x) == sum(w*y) stays tight.
    """
    n = len(y)
    yl = y.tolist()
    starts = [0] * n
    wsum = [0.0] * n
    wysum = [0.0] * n
    m = 0
    if w is None:
        for i in range(n):
            starts[m] = i
            wsum[m] = 1.0
            wysum[m] = yl[i]
            m += 1
            while m > 1 and wysum[m - 2] * wsum[m - 1] > wysum[m - 1] * wsum[m - 2]:
                wsum[m - 2] += wsum[m - 1]
                wysum[m - 2] += wysum[m - 1]
                m -= 1
    else:
        wl = w.tolist()
        for i in range(n):
            starts[m] = i
            wsum[m] = wl[i]
            wysum[m] = wl[i] * yl[i]
            m += 1
            while m > 1 and wysum[m - 2] * wsum[m - 1] > wysum[m - 1] * wsum[m - 2]:
                wsum[m - 2] += wsum[m - 1]
                wysum[m - 2] += wysum[m - 1]
                m -= 1
    out = np.empty(n)
    for b in range(m):
        lo = starts[b]
        hi = starts[b + 1] if b + 1 < m else n
        if hi - lo == 1:
            out[lo] = yl[lo]
        elif w is None:
            out[lo:hi] = math.fsum(yl[lo:hi]) / (hi - lo)
        else:
            out[lo:hi] = math.fsum(wl[i] * yl[i] for i in range(lo, hi)) / math.fsum(wl[lo:hi])
    return out


def _project_non_increasing(y: np.ndarray) -> np.ndarray:
    # unit-weight fast path shared by the per-reviewer score adjustment
    return -_pava_non_decreasing(-y, None)


def isotonic_fit(problem: IsotonicProblem) -> np.ndarray:
    """Unique least-squares monotone fit of the problem's values.

    Returns a piecewise-constant vector whose blocks are weighted means of
    the pooled input entries. An empty input yields an empty output.
    """
    y = np.asarray(problem.values, dtype=float)
    if y.ndim != 1:
        raise ValueError(f"values must be 1-d, got shape {y.shape}")
    if problem.weights is None:
        w = None
    else:
        w = np.asarray(problem.weights, dtype=float)
        if w.shape != y.shape:
            raise ValueError(f"weights shape {w.shape} != values shape {y.shape}")
        if np.any(w <= 0):
            raise ValueError("weights must be strictly positive")
    if problem.direction not in _DIRECTIONS:
        raise ValueError(f"direction must be one of {_DIRECTIONS}, got {problem.direction!r}")
    if y.size == 0:
        return y.copy()
    if problem.direction == NON_DECREASING:
        return _pava_non_decreasing(y, w)
    return -_pava_non_decreasing(-y, w)


def isotonic_project_indexed(scores: np.ndarray, order: np.ndarray, blend: float) -> np.ndarray:
    """Project scores onto "non-increasing along order", then blend.

    ``order`` lists indices from best to worst; the projection forces
    scores[order[0]] >= scores[order[1]] >= ... . The result is
    blend * fitted + (1 - blend) * scores.
    """
    scores = np.asarray(scores, dtype=float)
    order = np.asarray(order)
    if not 0.0 <= blend <= 1.0:
        raise ValueError(f"blend must lie in [0, 1], got {blend}")
    if sorted(order.tolist()) != list(range(len(scores))):
        raise ValueError("order is not a permutation of the score indices")
    fitted = np.empty_like(scores)
    fitted[order] = isotonic_fit(IsotonicProblem(scores[order], direction=NON_INCREASING))
    return blend * fitted + (1.0 - blend) * scores
