from __future__ import annotations

import numpy as np
import pytest

from review_calib import ConfigurationError, DiscreteDistribution


def test_mean_and_bounds():
    dist = DiscreteDistribution((1, 3, 8), (0.5, 0.25, 0.25))
    assert dist.mean() == pytest.approx(1 * 0.5 + 3 * 0.25 + 8 * 0.25)
    assert dist.min_value == 1
    assert dist.max_value == 8


def test_sampling_respects_support_and_is_deterministic():
    dist = DiscreteDistribution((2, 4), (0.7, 0.3))
    a = dist.sample(np.random.default_rng(5), 1000)
    b = dist.sample(np.random.default_rng(5), 1000)
    assert set(np.unique(a)) <= {2, 4}
    assert np.array_equal(a, b)


@pytest.mark.parametrize(
    "values,probs",
    [
        ((), ()),
        ((1, 2), (0.5,)),
        ((0, 1), (0.5, 0.5)),
        ((2, 2), (0.5, 0.5)),
        ((3, 1), (0.5, 0.5)),
        ((1, 2), (0.7, 0.7)),
        ((1, 2), (-0.1, 1.1)),
    ],
)
def test_invalid_specs_rejected(values, probs):
    with pytest.raises(ConfigurationError):
        DiscreteDistribution(values, probs)


def test_json_round_trip():
    dist = DiscreteDistribution((1, 8), (0.553, 0.447))
    assert DiscreteDistribution.from_json(dist.to_json()) == dist


def test_point_mass_and_uniform_helpers():
    assert DiscreteDistribution.point_mass(4).mean() == 4.0
    u = DiscreteDistribution.uniform((3, 4))
    assert u.probs == (0.5, 0.5)
