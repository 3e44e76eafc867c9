"""Reference sampling-set selectors used for comparison (no repeats)."""

from __future__ import annotations

import numpy as np

from .design import DesignWeights
from .estimation import SamplingSequence


def greedy_sigma_min(rows: np.ndarray, budget: int) -> SamplingSequence:
    """Greedy selection maximizing the smallest singular value of the grown
    row submatrix.

    While fewer rows than columns are chosen, the square submatrix on the
    first `chosen+1` columns is scored instead, so early picks are still
    discriminated. Ties go to the lowest index. Returns `budget` distinct
    nodes in ascending order.
    """
    rows = np.asarray(rows, dtype=float)
    n, k = rows.shape
    if budget > n:
        raise ValueError(f"budget {budget} exceeds node count {n}")
    chosen: list[int] = []
    remaining = list(range(n))
    for _ in range(budget):
        cols = min(len(chosen) + 1, k)
        best_i, best_score = None, -np.inf
        for i in remaining:
            sub = rows[chosen + [i], :cols]
            score = np.linalg.svd(sub, compute_uv=False)[-1]
            if score > best_score + 1e-15:
                best_i, best_score = i, score
        chosen.append(best_i)
        remaining.remove(best_i)
    return SamplingSequence(np.sort(chosen))


def top_m_selection(weights: DesignWeights, budget: int) -> SamplingSequence:
    """The `budget` nodes with largest design weight, each sampled once.

    Ties go to the lowest index; output ascending.
    """
    p = weights.p
    if budget > len(p):
        raise ValueError(f"budget {budget} exceeds node count {len(p)}")
    # stable sort on -p keeps lowest index first among ties
    order = np.argsort(-p, kind="stable")
    return SamplingSequence(np.sort(order[:budget]))
