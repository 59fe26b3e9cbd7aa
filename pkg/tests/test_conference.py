from __future__ import annotations

import numpy as np
import pytest

from review_calib import (
    Conference,
    ConfigurationError,
    DiscreteDistribution,
    GenConfig,
    GenerationError,
    gen_conference,
    gen_true_scores,
    sample_author_multiplicities,
    scaled_config,
)
from review_calib.conference import fit_multiplicity_distribution
from review_calib.seeding import PURPOSE_CONFERENCE, stream


def _rng(seed=0):
    return np.random.default_rng(seed)


# --- author multiplicities


def test_fitted_distribution_hits_tail_targets():
    dist = fit_multiplicity_distribution(GenConfig().author_multiplicity_targets, 18535)
    values = np.asarray(dist.values)
    probs = np.asarray(dist.probs)
    tails = {t: probs[values >= t].sum() for t in (2, 5, 10, 15)}
    # the first threshold is matched exactly by the mixture weight
    assert tails[2] == pytest.approx(4505 / 18535, abs=1e-12)
    # higher thresholds come from the one-parameter tail fit
    assert tails[5] == pytest.approx(508 / 18535, rel=0.25)
    assert tails[10] == pytest.approx(74 / 18535, rel=0.35)
    assert tails[15] == pytest.approx(26 / 18535, rel=0.35)


def test_default_sample_tail_fraction_in_reported_range():
    draws = sample_author_multiplicities(GenConfig(), _rng(3))
    assert len(draws) == 18535
    frac = float(np.mean(draws >= 2))
    assert 0.22 <= frac <= 0.27


def test_all_single_paper_authors():
    config = GenConfig(n_papers=50, n_authors=120, author_multiplicity_targets=())
    draws = sample_author_multiplicities(config, _rng(1))
    assert np.all(draws == 1)


def test_half_multi_author_target_frequency():
    config = GenConfig(n_papers=10, n_authors=4, author_multiplicity_targets=((2, 2),))
    rng = _rng(9)
    draws = np.concatenate([sample_author_multiplicities(config, rng) for _ in range(10_000)])
    frac = float(np.mean(draws >= 2))
    # 40k Bernoulli(0.5) draws; 3 sigma is ~0.0075
    assert frac == pytest.approx(0.5, abs=0.01)


def test_infeasible_targets_rejected():
    with pytest.raises(ConfigurationError, match="exceeds"):
        GenConfig(author_multiplicity_targets=((2, 100), (5, 200)), n_authors=1000)
    with pytest.raises(ConfigurationError, match="increasing"):
        GenConfig(author_multiplicity_targets=((5, 100), (2, 200)), n_authors=1000)
    with pytest.raises(ConfigurationError, match="threshold"):
        GenConfig(author_multiplicity_targets=((1, 100),), n_authors=1000)


def test_multiplicity_calibration_over_seeds():
    config = GenConfig()
    target = config.author_multiplicity_targets[0][1] / config.n_authors
    fracs = []
    for seed in range(20):
        draws = sample_author_multiplicities(config, _rng(seed))
        fracs.append(float(np.mean(draws >= 2)))
    assert abs(float(np.mean(fracs)) - target) < 0.02


# --- true scores


def test_true_scores_shape_and_moments():
    scores = gen_true_scores(6538, 5.0, 0.88, _rng(2))
    assert scores.shape == (6538,)
    assert abs(scores.mean() - 5.0) < 3 * 0.88 / np.sqrt(6538)


def test_true_scores_degenerate_and_empty():
    assert np.array_equal(gen_true_scores(4, 2.5, 0.0, _rng(0)), np.full(4, 2.5))
    assert gen_true_scores(0, 5.0, 1.0, _rng(0)).size == 0


def test_true_scores_large_sample_mean():
    scores = gen_true_scores(10**6, 5.0, 1.0, _rng(8))
    assert abs(scores.mean() - 5.0) < 0.01


def test_true_scores_negative_sd_rejected():
    with pytest.raises(ValueError, match="sd"):
        gen_true_scores(5, 0.0, -1.0, _rng(0))


# --- conference generation


def test_conference_invariants(tiny_conf, tiny_config):
    tiny_conf.validate()
    per_paper = np.bincount(
        np.concatenate(tiny_conf.assignment), minlength=tiny_conf.n_papers
    )
    support = tiny_config.reviewers_per_paper_dist.values
    assert per_paper.min() == min(support)
    assert per_paper.max() == max(support)
    # reviewer loads never exceed the capacity support
    loads = np.fromiter((len(a) for a in tiny_conf.assignment), dtype=int)
    assert loads.max() <= tiny_config.reviewer_capacity_dist.max_value


def test_single_paper_conference():
    config = GenConfig(
        n_papers=1,
        n_authors=1,
        author_multiplicity_targets=(),
        reviewers_per_paper_dist=DiscreteDistribution.point_mass(1),
    )
    conf = gen_conference(config)
    conf.validate()
    assert conf.n_papers == 1
    assert sum(len(a) for a in conf.assignment) == 1


def test_determinism_byte_identical(tiny_config):
    a = gen_conference(tiny_config, stream(tiny_config.master_seed, PURPOSE_CONFERENCE))
    b = gen_conference(tiny_config, stream(tiny_config.master_seed, PURPOSE_CONFERENCE))
    assert a.to_json_str() == b.to_json_str()


def test_json_round_trip(tiny_conf):
    clone = Conference.from_json(tiny_conf.to_json())
    assert np.array_equal(clone.true_scores, tiny_conf.true_scores)
    assert all(np.array_equal(x, y) for x, y in zip(clone.assignment, tiny_conf.assignment))
    assert all(np.array_equal(x, y) for x, y in zip(clone.authorship, tiny_conf.authorship))
    clone.validate()


def test_capacity_deficit_raises():
    config = scaled_config(GenConfig(), 40)
    starving = GenConfig(
        n_papers=40,
        n_authors=config.n_authors,
        author_multiplicity_targets=config.author_multiplicity_targets,
        authors_per_paper_dist=config.authors_per_paper_dist,
        n_reviewers=3,
    )
    with pytest.raises(GenerationError, match="deficit"):
        gen_conference(starving)


def test_authorship_deficit_raises():
    config = GenConfig(n_papers=30, n_authors=5, author_multiplicity_targets=())
    with pytest.raises(GenerationError, match="deficit"):
        gen_conference(config)


def test_scaled_config_shrinks_all_counts():
    small = scaled_config(GenConfig(), 200)
    assert small.n_papers == 200
    assert small.n_authors == round(18535 * 200 / 6538)
    assert small.author_multiplicity_targets[0][0] == 2
    assert small.author_multiplicity_targets[0][1] <= small.n_authors


def test_genconfig_json_round_trip():
    config = GenConfig()
    clone = GenConfig.from_json(config.to_json())
    assert clone == config
    with pytest.raises(ConfigurationError, match="unknown"):
        GenConfig.from_json({"n_paperz": 10})


def test_genconfig_validation():
    with pytest.raises(ConfigurationError):
        GenConfig(n_papers=0)
    with pytest.raises(ConfigurationError):
        GenConfig(true_score_sd=0.0)
    with pytest.raises(ConfigurationError):
        GenConfig(capacity_slack=0.9)
