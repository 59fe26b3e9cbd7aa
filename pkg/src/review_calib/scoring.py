"""Reviewer score simulation.

Scores come out of a three-step process per reviewer: (1) independent
Gaussian raw scores around true quality plus a reviewer-specific bias,
(2) a Plackett-Luce ranking of the reviewer's bundle driven by the true
qualities, and (3) a least-squares isotonic adjustment of the raw scores
so the final scores respect the sampled ranking.

A reviewer's bias shifts every score they give by the same amount, so it
never changes their internal ranking; the per-reviewer noise variance is a
Gamma draw (``noise_sd`` is its square root).
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .conference import Conference
from .errors import ConfigurationError
from .isotonic import _project_non_increasing

ReviewerRanking = np.ndarray
"""Paper ids of one reviewer's bundle, most preferred first."""


@dataclass(frozen=True)
class ReviewerParams:
    """Additive bias and noise level of a single reviewer."""

    bias: float
    noise_sd: float

    def __post_init__(self):
        if self.noise_sd < 0:
            raise ValueError(f"noise_sd must be >= 0, got {self.noise_sd}")


@dataclass(frozen=True)
class NoiseCase:
    """One noise scenario: bias half-width and Gamma law of the noise variance.

    Biases are Uniform(-bias_halfwidth, bias_halfwidth); the per-reviewer
    noise variance is Gamma(gamma_shape, scale=gamma_scale), with
    gamma_scale = 0 meaning exactly zero noise.
    """

    name: str
    bias_halfwidth: float
    gamma_shape: float
    gamma_scale: float


NOISE_CASES: dict[str, NoiseCase] = {
    case.name: case
    for case in (
        NoiseCase("Base", 2.0, 1.0, 1.0),
        NoiseCase("NoBias", 0.0, 1.0, 1.0),
        NoiseCase("NoVariance", 2.0, 1.0, 0.0),
        NoiseCase("BigBias", 3.0, 1.0, 1.0),
        NoiseCase("BigVariance", 2.0, 1.0, 1.5),
    )
}


def get_noise_case(name: str) -> NoiseCase:
    """Look up a case by name; tolerant of case and - / _ separators."""
    key = name.replace("-", "").replace("_", "").lower()
    for case in NOISE_CASES.values():
        if case.name.lower() == key:
            return case
    raise ConfigurationError(
        f"unknown noise case {name!r}; expected one of {sorted(NOISE_CASES)}"
    )


def case_index(case: NoiseCase) -> int:
    """Stable registry index of a case, used to address its random streams."""
    return list(NOISE_CASES).index(case.name)


@dataclass
class ScoreTable:
    """Sparse (reviewer, paper) -> score map on the assignment support.

    Slot-aligned with the conference: entry k is reviewer
    ``reviewers[k]``'s score for paper ``papers[k]``, slots sorted by
    (reviewer, paper). ``reviewer_ptr`` is the CSR pointer per reviewer.
    """

    reviewers: np.ndarray
    papers: np.ndarray
    values: np.ndarray
    reviewer_ptr: np.ndarray

    @classmethod
    def for_conference(cls, conf: Conference, values: np.ndarray) -> "ScoreTable":
        if len(values) != conf.n_slots:
            raise ValueError(f"expected {conf.n_slots} slot values, got {len(values)}")
        return cls(
            reviewers=conf.slot_reviewers,
            papers=conf.slot_papers,
            values=np.asarray(values, dtype=float),
            reviewer_ptr=conf.reviewer_ptr,
        )

    def reviewer_slice(self, reviewer: int) -> slice:
        return slice(int(self.reviewer_ptr[reviewer]), int(self.reviewer_ptr[reviewer + 1]))

    def value(self, reviewer: int, paper: int) -> float:
        sl = self.reviewer_slice(reviewer)
        papers = self.papers[sl]
        k = bisect_left(papers.tolist(), paper)
        if k == len(papers) or papers[k] != paper:
            raise KeyError(f"reviewer {reviewer} does not review paper {paper}")
        return float(self.values[sl][k])

    def as_dict(self) -> dict[tuple[int, int], float]:
        return {
            (int(r), int(p)): float(v)
            for r, p, v in zip(self.reviewers, self.papers, self.values)
        }

    def to_json(self) -> dict:
        return {
            "reviewers": self.reviewers.tolist(),
            "papers": self.papers.tolist(),
            "values": self.values.tolist(),
        }


def rankings_to_json(rankings: list[ReviewerRanking]) -> list[list[int]]:
    return [np.asarray(r).tolist() for r in rankings]


def rankings_from_json(obj: list[list[int]]) -> list[ReviewerRanking]:
    return [np.asarray(r, dtype=np.int64) for r in obj]


def gen_reviewer_params(
    case: NoiseCase, n_reviewers: int, rng: np.random.Generator
) -> list[ReviewerParams]:
    """Draw per-reviewer bias and noise level for one scenario."""
    h = case.bias_halfwidth
    biases = rng.uniform(-h, h, size=n_reviewers) if h > 0 else np.zeros(n_reviewers)
    if case.gamma_scale > 0:
        variances = rng.gamma(case.gamma_shape, case.gamma_scale, size=n_reviewers)
    else:
        variances = np.zeros(n_reviewers)
    sds = np.sqrt(variances)
    return [ReviewerParams(float(b), float(s)) for b, s in zip(biases, sds)]


def raw_scores(
    conf: Conference, params: list[ReviewerParams], rng: np.random.Generator
) -> ScoreTable:
    """Step-1 raw scores: Normal(theta + bias, noise_sd) per assigned pair.

    Draws are independent across (reviewer, paper) pairs and consumed from
    the stream in canonical slot order (sorted by reviewer, then paper).
    """
    if len(params) != conf.n_reviewers:
        raise ValueError(f"expected {conf.n_reviewers} reviewer params, got {len(params)}")
    bias = np.fromiter((p.bias for p in params), dtype=float, count=len(params))
    noise_sd = np.fromiter((p.noise_sd for p in params), dtype=float, count=len(params))
    loc = conf.true_scores[conf.slot_papers] + bias[conf.slot_reviewers]
    scale = noise_sd[conf.slot_reviewers]
    return ScoreTable.for_conference(conf, rng.normal(loc, scale))


def pl_ranking_prob(theta: np.ndarray, perm: np.ndarray) -> float:
    """Plackett-Luce probability of observing the given preference order.

    ``perm`` lists indices into theta from most to least preferred. The
    probability is the product of sequential softmax choices with weights
    exp(theta); weights are computed with a max shift, which leaves the
    result unchanged (the model is translation invariant).
    """
    theta = np.asarray(theta, dtype=float)
    perm = np.asarray(perm)
    if theta.size == 0:
        raise ValueError("theta must contain at least one item")
    if sorted(perm.tolist()) != list(range(theta.size)):
        raise ValueError("perm is not a permutation of theta's index set")
    w = np.exp(theta - theta.max())
    ordered = w[perm]
    denom = np.cumsum(ordered[::-1])[::-1]
    prob = 1.0
    for k in range(theta.size - 1):
        prob *= ordered[k] / denom[k]
    return float(prob)


def sample_pl_ranking(theta: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Sample a preference order by sequential choice without replacement."""
    theta = np.asarray(theta, dtype=float)
    if theta.size == 0:
        raise ValueError("theta must contain at least one item")
    shift = float(theta.max())
    weights = [math.exp(float(v) - shift) for v in theta]
    indices = list(range(theta.size))
    total = sum(weights)
    out = np.empty(theta.size, dtype=np.int64)
    for k in range(theta.size - 1):
        u = rng.random() * total
        acc = 0.0
        pos = len(weights) - 1
        for q, wq in enumerate(weights):
            acc += wq
            if u <= acc:
                pos = q
                break
        out[k] = indices.pop(pos)
        total -= weights.pop(pos)
    out[-1] = indices[0]
    return out


def project_scores_to_ranking(raw: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Step-3 adjustment: least-squares fit of raw scores to the ranking.

    Returns the Euclidean projection of ``raw`` onto score vectors that are
    non-increasing along ``perm`` (most preferred scored highest).
    """
    raw = np.asarray(raw, dtype=float)
    perm = np.asarray(perm)
    if sorted(perm.tolist()) != list(range(raw.size)):
        raise ValueError("perm is not a permutation of the raw-score indices")
    out = np.empty_like(raw)
    out[perm] = _project_non_increasing(raw[perm])
    return out


def generate_final_scores(
    conf: Conference, case: NoiseCase, rng: np.random.Generator
) -> tuple[ScoreTable, ScoreTable, list[ReviewerRanking]]:
    """Full three-step simulation for every reviewer.

    Returns (final table, raw table, rankings); rankings[r] holds reviewer
    r's bundle as paper ids, most preferred first (empty for reviewers
    without assignments). The three sub-streams (parameters, raw scores,
    rankings) are spawned from ``rng``; rankings are sampled in reviewer-id
    order, so the output is independent of any outer parallelism.
    """
    params_rng, scores_rng, ranking_rng = rng.spawn(3)
    params = gen_reviewer_params(case, conf.n_reviewers, params_rng)
    raw = raw_scores(conf, params, scores_rng)
    theta = conf.true_scores
    final_values = np.empty(conf.n_slots)
    rankings: list[ReviewerRanking] = []
    ptr = conf.reviewer_ptr
    empty = np.empty(0, dtype=np.int64)
    for r in range(conf.n_reviewers):
        lo, hi = int(ptr[r]), int(ptr[r + 1])
        if hi == lo:
            rankings.append(empty)
            continue
        bundle = conf.slot_papers[lo:hi]
        perm = sample_pl_ranking(theta[bundle], ranking_rng)
        rankings.append(bundle[perm])
        # same projection as project_scores_to_ranking, skipping re-validation
        adjusted = np.empty(hi - lo)
        adjusted[perm] = _project_non_increasing(raw.values[lo:hi][perm])
        final_values[lo:hi] = adjusted
    final = ScoreTable.for_conference(conf, final_values)
    return final, raw, rankings
