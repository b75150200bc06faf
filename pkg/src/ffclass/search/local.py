"""Steepest-ascent sign-flip search for large |det M| over r x r +-1 matrices.

The float inverse only ranks candidate flips; every reported determinant
is recomputed exactly.  A result certifies a lower bound, never maximality.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..core import Design, classify, exact_det
from .criteria import SearchResult

DEFAULT_RESTARTS = 10_000
_IMPROVE = 1 + 1e-9


def _random_start(rng: np.random.Generator, r: int) -> np.ndarray:
    while True:
        m = rng.choice(np.array([-1.0, 1.0]), size=(r, r))
        m[0, :] = 1.0
        m[:, 0] = 1.0
        if abs(np.linalg.det(m)) > 0.5:
            return m


def _climb(m: np.ndarray, max_flips: int) -> int:
    """Flip the single free entry with the largest |det| gain until none helps."""
    flips = 0
    while flips < max_flips:
        inv = np.linalg.inv(m)
        # det after flipping (i, j) is det * (1 - 2 m_ij inv_ji)
        gain = np.abs(1.0 - 2.0 * m * inv.T)
        gain[0, :] = 0.0
        gain[:, 0] = 0.0
        i, j = np.unravel_index(int(np.argmax(gain)), gain.shape)
        if gain[i, j] <= _IMPROVE:
            break
        m[i, j] = -m[i, j]
        flips += 1
    return flips


def matrix_to_design(m) -> Design:
    """Saturated design of an r x r +-1 matrix whose first column is all +1."""
    m = np.asarray(m, dtype=np.int64)
    if not (m[:, 0] == 1).all():
        raise ValueError("first column must be all +1")
    return Design.from_rows(m[:, 1:].tolist())


def saturated_local_search(
    r: int,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    target: Optional[int] = None,
    max_flips: Optional[int] = None,
) -> SearchResult:
    if r < 2:
        raise ValueError("local search needs r >= 2")
    rng = np.random.default_rng(seed)
    if max_flips is None:
        max_flips = 50 * r * r
    best_det, best_m, hits, used = -1, None, 0, 0
    for _ in range(restarts):
        used += 1
        m = _random_start(rng, r)
        _climb(m, max_flips)
        mi = m.astype(np.int64)
        det = abs(exact_det(mi))
        if det > best_det:
            best_det, best_m, hits = det, mi, 1
        elif det == best_det:
            hits += 1
        if target is not None and best_det >= target:
            break
    design = matrix_to_design(best_m)
    return SearchResult(
        criterion="maxdet",
        best_design=design,
        best_value=best_det,
        num_evaluated=used,
        num_maximizers=hits,
        classification=classify(design),
        exhaustive_flag=False,
        seed=seed,
        extra={"target": target, "target_reached": target is not None and best_det >= target},
    )
