from __future__ import annotations

import numpy as np
import pytest

from oracles import isotonic_qp_oracle
from review_calib import IsotonicProblem, isotonic_fit, isotonic_project_indexed
from review_calib.isotonic import NON_DECREASING, NON_INCREASING


def test_feasible_input_unchanged():
    fit = isotonic_fit(IsotonicProblem(np.array([3.0, 2.0, 1.0]), direction=NON_INCREASING))
    assert np.array_equal(fit, [3.0, 2.0, 1.0])


def test_increasing_run_pools_to_mean():
    fit = isotonic_fit(IsotonicProblem(np.array([1.0, 2.0, 3.0]), direction=NON_INCREASING))
    assert np.allclose(fit, [2.0, 2.0, 2.0], atol=1e-12)


def test_partial_violation_pools_all_three():
    fit = isotonic_fit(IsotonicProblem(np.array([1.0, 3.0, 2.0]), direction=NON_INCREASING))
    assert np.allclose(fit, [2.0, 2.0, 2.0], atol=1e-12)


def test_empty_input_gives_empty_output():
    fit = isotonic_fit(IsotonicProblem(np.empty(0)))
    assert fit.size == 0


def test_non_positive_weight_rejected():
    with pytest.raises(ValueError, match="weights"):
        isotonic_fit(IsotonicProblem(np.array([1.0, 2.0]), np.array([1.0, 0.0])))


def test_bad_direction_rejected():
    with pytest.raises(ValueError, match="direction"):
        isotonic_fit(IsotonicProblem(np.array([1.0]), direction="sideways"))


def test_matches_qp_oracle_on_random_instances():
    rng = np.random.default_rng(7)
    for k in range(300):
        n = int(rng.integers(1, 9))
        y = rng.normal(0, 3, n)
        w = rng.uniform(0.2, 4.0, n) if k % 2 else None
        direction = NON_INCREASING if k % 3 else NON_DECREASING
        fit = isotonic_fit(IsotonicProblem(y, w, direction))
        oracle = isotonic_qp_oracle(y, w, direction)
        assert np.max(np.abs(fit - oracle)) < 1e-6


def test_idempotent():
    rng = np.random.default_rng(11)
    for _ in range(50):
        y = rng.normal(0, 2, int(rng.integers(1, 40)))
        once = isotonic_fit(IsotonicProblem(y))
        twice = isotonic_fit(IsotonicProblem(once))
        assert np.max(np.abs(once - twice)) < 1e-12


def test_weighted_total_preserved():
    rng = np.random.default_rng(13)
    for _ in range(50):
        n = int(rng.integers(1, 200))
        y = rng.normal(5, 2, n)
        w = rng.uniform(0.1, 3.0, n)
        fit = isotonic_fit(IsotonicProblem(y, w))
        before = float(np.dot(w, y))
        after = float(np.dot(w, fit))
        assert abs(after - before) <= 1e-9 * max(1.0, abs(before))


def test_large_input_total_preserved_tightly():
    rng = np.random.default_rng(17)
    y = rng.normal(5, 1, 6538)
    fit = isotonic_fit(IsotonicProblem(y))
    assert abs(fit.sum() - y.sum()) <= 1e-9 * abs(y.sum())


def test_translation_equivariance():
    rng = np.random.default_rng(19)
    y = rng.normal(0, 1, 25)
    base = isotonic_fit(IsotonicProblem(y))
    for c in (-10.0, 0.5, 123.25):
        shifted = isotonic_fit(IsotonicProblem(y + c))
        assert np.max(np.abs(shifted - (base + c))) < 1e-9


def test_output_monotone():
    rng = np.random.default_rng(23)
    for _ in range(50):
        y = rng.normal(0, 2, int(rng.integers(2, 60)))
        fit = isotonic_fit(IsotonicProblem(y, direction=NON_INCREASING))
        assert np.all(np.diff(fit) <= 1e-12)
        fit = isotonic_fit(IsotonicProblem(y, direction=NON_DECREASING))
        assert np.all(np.diff(fit) >= -1e-12)


def test_project_indexed_blend_zero_is_identity():
    scores = np.array([4.0, 1.0, 3.0])
    out = isotonic_project_indexed(scores, np.array([1, 0, 2]), blend=0.0)
    assert np.array_equal(out, scores)


def test_project_indexed_consistent_order_unchanged():
    scores = np.array([1.0, 5.0, 3.0])
    order = np.array([1, 2, 0])  # descending in scores already
    for blend in (0.0, 0.5, 1.0):
        out = isotonic_project_indexed(scores, order, blend)
        assert np.allclose(out, scores, atol=1e-12)


def test_project_indexed_half_blend_example():
    # fitted values are (2, 2); half blend with the input gives (1.5, 2.5)
    out = isotonic_project_indexed(np.array([1.0, 3.0]), np.array([0, 1]), blend=0.5)
    assert np.allclose(out, [1.5, 2.5], atol=1e-12)


def test_project_indexed_rejects_bad_blend_and_order():
    scores = np.array([1.0, 2.0])
    with pytest.raises(ValueError, match="blend"):
        isotonic_project_indexed(scores, np.array([0, 1]), blend=1.5)
    with pytest.raises(ValueError, match="permutation"):
        isotonic_project_indexed(scores, np.array([0, 0]), blend=0.5)
