"""The four paper-quality estimators compared by the benchmark.

1. average: mean of the final review scores per paper.
2. reviewer-ranking: isotonic calibration of the averages along the full
   order produced by hierarchical tier peeling, blended 50/50 with the
   raw averages.
3. author-ranking: per-owner isotonic projection onto each prolific
   author's (perfectly quality-ordered) ranking of their own papers.
4. combined: reviewer-ranking calibration followed by the author
   projection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .conference import Conference
from .isotonic import NON_INCREASING, IsotonicProblem, isotonic_fit, isotonic_project_indexed
from .ranking import full_ranking, hierarchical_tiers
from .scoring import ReviewerRanking, ScoreTable

EstimateVector = np.ndarray
"""Per-paper quality estimates, indexed by paper id."""


def avg_scores(final: ScoreTable, conf: Conference) -> EstimateVector:
    """Mean final score per paper; every paper must have at least one review."""
    counts = np.bincount(final.papers, minlength=conf.n_papers)
    if np.any(counts == 0):
        missing = int(np.flatnonzero(counts == 0)[0])
        raise ValueError(f"paper {missing} has no review score")
    sums = np.bincount(final.papers, weights=final.values, minlength=conf.n_papers)
    return sums / counts


def calibrate_reviewer(
    avg: EstimateVector, rankings: Sequence[ReviewerRanking], blend: float = 0.5
) -> EstimateVector:
    """Calibrate averages along the reviewer-derived global ranking.

    Builds the tier decomposition from the rankings, orders papers tier by
    tier (averages inside a tier), projects the averages onto that order,
    and returns blend * fitted + (1 - blend) * avg.
    """
    avg = np.asarray(avg, dtype=float)
    tiers = hierarchical_tiers(rankings, range(len(avg)))
    order = full_ranking(tiers, avg)
    return isotonic_project_indexed(avg, order, blend)


@dataclass
class OwnerPartition:
    """Disjoint paper ownership by prolific authors.

    ``owners`` maps author id -> owned papers ordered by descending true
    quality; ownership sets never overlap and each has >= 2 papers.
    """

    owners: dict[int, np.ndarray]

    @property
    def n_owned(self) -> int:
        return sum(len(v) for v in self.owners.values())

    def validate(self) -> None:
        seen: set[int] = set()
        for author, papers in self.owners.items():
            ids = set(int(p) for p in papers)
            if len(ids) != len(papers) or len(ids) < 2:
                raise ValueError(f"owner {author} must own >= 2 distinct papers")
            if ids & seen:
                raise ValueError(f"owner {author} overlaps a previous owner")
            seen |= ids


def build_owner_partition(conf: Conference) -> OwnerPartition:
    """Greedy disjoint ownership favouring the most prolific authors.

    Authors are processed by descending submission count (ties toward the
    smaller author id); each claims their papers that are still unowned and
    is kept only if at least two remain. Owned papers are ordered by
    descending true score (smaller id first on exact ties).
    """
    multiplicities = np.fromiter(
        (len(p) for p in conf.authorship), dtype=np.int64, count=conf.n_authors
    )
    order = np.lexsort((np.arange(conf.n_authors), -multiplicities))
    theta = conf.true_scores
    claimed = np.zeros(conf.n_papers, dtype=bool)
    owners: dict[int, np.ndarray] = {}
    for a in order:
        if multiplicities[a] < 2:
            break
        papers = conf.authorship[a]
        mine = papers[~claimed[papers]]
        if len(mine) < 2:
            continue
        claimed[mine] = True
        owners[int(a)] = mine[np.lexsort((mine, -theta[mine]))]
    return OwnerPartition(owners=owners)


def calibrate_author(
    scores: EstimateVector, owners: OwnerPartition, blend: float = 1.0
) -> EstimateVector:
    """Project each owner's papers onto their true-quality order.

    The default blend of 1 applies the full projection (the owners' order
    is exact, so no regularisation toward the input is needed); papers
    without an owner pass through unchanged.
    """
    if not 0.0 <= blend <= 1.0:
        raise ValueError(f"blend must lie in [0, 1], got {blend}")
    out = np.asarray(scores, dtype=float).copy()
    for papers in owners.owners.values():
        fitted = isotonic_fit(IsotonicProblem(out[papers], direction=NON_INCREASING))
        out[papers] = blend * fitted + (1.0 - blend) * out[papers]
    return out


def calibrate_combined(
    avg: EstimateVector,
    rankings: Sequence[ReviewerRanking],
    owners: OwnerPartition,
    blend: float = 0.5,
) -> EstimateVector:
    """Reviewer calibration first, exact author projection second."""
    return calibrate_author(calibrate_reviewer(avg, rankings, blend), owners)


def rmse(est: EstimateVector, truth: np.ndarray) -> float:
    """Root mean square error between estimates and true scores."""
    est = np.asarray(est, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if est.shape != truth.shape:
        raise ValueError(f"shape mismatch: {est.shape} vs {truth.shape}")
    return float(np.sqrt(np.mean((est - truth) ** 2)))


def estimates_to_csv(estimates: dict[str, EstimateVector]) -> str:
    """Per-paper estimates as CSV with columns paper_id,method,estimate."""
    lines = ["paper_id,method,estimate"]
    for method, vector in estimates.items():
        for paper_id, value in enumerate(np.asarray(vector, dtype=float)):
            lines.append(f"{paper_id},{method},{float(value)!r}")
    return "\n".join(lines) + "\n"
