"""Exhaustive D-, A- and E-optimal design search over normalized subsets.

Every design is level-switch equivalent to one containing the all-ones run,
and all three criteria are invariant under level switching, so enumeration
fixes that run (code 0) and chooses the other ``r - 1`` runs among the
remaining ``2^s - 1`` points.  Work is split by the second-smallest code;
units are merged in code order, so any thread count gives the serial result.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import comb, isqrt
from typing import Iterator, Optional, Union

import numpy as np

from ..core import Design, classify, exact_det
from .criteria import (
    Criterion,
    SearchResult,
    SingularInformationError,
    a_value_from_charpoly,
    batch_gram,
    batch_gram_det,
    int64_safe,
    outer_table,
)
from .polyroots import RootInterval, batch_charpoly, compare_roots, smallest_real_root

DEFAULT_BUDGET = 10**8
MAX_FACTORS = 6
CHUNK = 1 << 17


class BudgetExceeded(RuntimeError):
    pass


def search_space_size(s: int, r: int) -> int:
    return comb(2**s - 1, r - 1)


def _check(s: int, r: int, budget: int) -> None:
    if not 1 <= s <= MAX_FACTORS:
        raise ValueError(f"exhaustive search supports 1 <= s <= {MAX_FACTORS}, got s = {s}")
    if not 1 <= r <= 2**s:
        raise ValueError(f"need 1 <= r <= 2^s = {2**s}, got r = {r}")
    size = search_space_size(s, r)
    if size > budget:
        raise BudgetExceeded(f"C({2**s - 1}, {r - 1}) = {size} designs exceeds the budget of {budget}")


def _units(s: int, r: int) -> list[int]:
    if r == 1:
        return [0]
    return list(range(1, 2**s - r + 2))


def _unit_chunks(s: int, r: int, first: int) -> Iterator[np.ndarray]:
    """Code arrays (k, r) of all normalized designs whose second code is ``first``."""
    if r == 1:
        yield np.zeros((1, 1), dtype=np.int64)
        return
    if r == 2:
        yield np.array([[0, first]], dtype=np.int64)
        return
    rest = itertools.combinations(range(first + 1, 2**s), r - 2)
    while True:
        flat = np.fromiter(itertools.chain.from_iterable(itertools.islice(rest, CHUNK)), dtype=np.int64)
        if flat.size == 0:
            return
        tail = flat.reshape(-1, r - 2)
        head = np.empty((tail.shape[0], 2), dtype=np.int64)
        head[:, 0] = 0
        head[:, 1] = first
        yield np.hstack([head, tail])


def iter_normalized(s: int, r: int) -> Iterator[np.ndarray]:
    """All normalized designs as code arrays, in lexicographic order."""
    for first in _units(s, r):
        yield from _unit_chunks(s, r, first)


def batch_d_values(s: int, r: int, codes: np.ndarray, outer: Optional[np.ndarray] = None) -> np.ndarray:
    if outer is None:
        outer = outer_table(s)
    g = batch_gram(outer, codes)
    if int64_safe(s, r):
        return batch_gram_det(g)
    return np.array([exact_det(m) for m in g], dtype=object)


def _d_unit(s, r, first, outer):
    best, n, hits = -1, 0, []
    for codes in _unit_chunks(s, r, first):
        vals = batch_d_values(s, r, codes, outer)
        n += len(vals)
        m = vals.max()
        if m > best:
            best, hits = m, []
        if m == best:
            hits.append(codes[np.asarray(vals == m, dtype=bool)])
    hits = np.vstack(hits)
    return int(best), len(hits), tuple(int(c) for c in hits[0]), n, hits


def _poly_unit(s, r, first, outer):
    """Distinct characteristic polynomials -> [first code tuple, multiplicity]."""
    table: dict[tuple, list] = {}
    n = 0
    for codes in _unit_chunks(s, r, first):
        polys = batch_charpoly(batch_gram(outer, codes))
        n += len(polys)
        uniq, idx, counts = np.unique(polys, axis=0, return_index=True, return_counts=True)
        for p, i, c in zip(map(tuple, uniq.tolist()), idx, counts):
            if p in table:
                table[p][1] += int(c)
            else:
                table[p] = [tuple(int(v) for v in codes[i]), int(c)]
    return table, n


def _det_of(poly) -> int:
    n = len(poly) - 1
    return (-1) ** n * poly[n]


def rank_polys(polys, criterion: Criterion):
    """Best criterion value over a collection of characteristic polynomials
    and the list of polynomials attaining it (exact comparisons only).
    """
    polys = list(polys)
    if criterion is Criterion.D:
        best = max(abs(_det_of(p)) for p in polys)
        return best, [p for p in polys if abs(_det_of(p)) == best]
    if criterion is Criterion.A:
        values = {p: a_value_from_charpoly(p) for p in polys if _det_of(p) != 0}
        if not values:
            raise SingularInformationError("every candidate has a singular information matrix")
        best = min(values.values())
        return best, [p for p, v in values.items() if v == best]
    roots = {p: smallest_real_root(p) for p in polys}
    best_p = None
    for p in sorted(polys, key=lambda q: -roots[q].midpoint()):
        if best_p is None or compare_roots(roots[p], roots[best_p]) > 0:
            best_p = p
    best = roots[best_p]
    return best, [p for p in polys if p == best_p or compare_roots(roots[p], best) == 0]


def _map_units(fn, s, r, threads, *extra):
    outer = outer_table(s)
    units = _units(s, r)
    if threads <= 1:
        return [fn(s, r, u, outer, *extra) for u in units]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda u: fn(s, r, u, outer, *extra), units))


def _merged_polys(s, r, threads):
    merged: dict[tuple, list] = {}
    n = 0
    for table, k in _map_units(_poly_unit, s, r, threads):
        n += k
        for p, (codes, c) in table.items():
            if p in merged:
                merged[p][1] += c
            else:
                merged[p] = [codes, c]
    return merged, n


def _poly_keys(polys: np.ndarray, salt: np.ndarray) -> np.ndarray:
    # wrapping int64 dot product; collisions are resolved by exact comparison
    with np.errstate(over="ignore"):
        return polys @ salt


def _collect_unit(s, r, first, outer, wanted, salt):
    """Code tuples of the unit's designs whose characteristic polynomial is in ``wanted``."""
    keys = np.array(sorted({int(k) for k in _poly_keys(np.array(list(wanted), dtype=np.int64), salt)}), dtype=np.int64)
    out: dict[tuple, list] = {}
    for codes in _unit_chunks(s, r, first):
        polys = batch_charpoly(batch_gram(outer, codes))
        hit = np.isin(_poly_keys(polys, salt), keys)
        for p, c in zip(map(tuple, polys[hit].tolist()), codes[hit].tolist()):
            if p in wanted:
                out.setdefault(p, []).append(tuple(c))
    return out


def _collect(s, r, wanted, threads):
    salt = np.random.default_rng(0x5EED).integers(1, 2**62, size=s + 2, dtype=np.int64)
    merged: dict[tuple, list] = {}
    for part in _map_units(_collect_unit, s, r, threads, frozenset(wanted), salt):
        for p, codes in part.items():
            merged.setdefault(p, []).extend(codes)
    return merged


def class_census(s: int, designs) -> dict[str, int]:
    """Number of designs in each class, for code tuples in ``s`` factors."""
    counts = Counter(classify(Design.from_codes(s, c)).design_class.value for c in designs)
    return dict(sorted(counts.items()))


def exhaustive_search(
    s: int,
    r: int,
    criterion: Union[str, Criterion] = Criterion.D,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    census: bool = True,
) -> SearchResult:
    """Global optimum of the criterion over all r-run designs in s factors.

    Ties go to the design with the smallest canonical encoding, which is the
    lexicographically first normalized code tuple.  With ``census`` the class
    of every maximizer is tallied into ``extra["maximizer_classes"]``; for A
    and E this costs a second enumeration pass.
    """
    criterion = Criterion.parse(criterion)
    _check(s, r, budget)
    extra = {}
    if criterion is Criterion.D:
        parts = _map_units(_d_unit, s, r, threads)
        best = max(p[0] for p in parts)
        winners = [p for p in parts if p[0] == best]
        value: Union[int, Fraction, RootInterval] = best
        arg = winners[0][2]
        count = sum(p[1] for p in winners)
        n = sum(p[3] for p in parts)
        if census:
            extra["maximizer_classes"] = class_census(s, (tuple(c) for p in winners for c in p[4].tolist()))
    else:
        merged, n = _merged_polys(s, r, threads)
        value, best_polys = rank_polys(merged, criterion)
        arg = min(merged[p][0] for p in best_polys)
        count = sum(merged[p][1] for p in best_polys)
        if census:
            found = _collect(s, r, best_polys, threads)
            extra["maximizer_classes"] = class_census(s, (c for codes in found.values() for c in codes))
    design = Design.from_codes(s, arg)
    return SearchResult(
        criterion=criterion.value,
        best_design=design,
        best_value=value,
        num_evaluated=n,
        num_maximizers=count,
        classification=classify(design),
        exhaustive_flag=True,
        extra=extra,
    )


def optimal_sets(
    s: int,
    r: int,
    criteria=(Criterion.D, Criterion.A, Criterion.E),
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
):
    """For each criterion, its optimal value and the set of normalized code tuples attaining it."""
    _check(s, r, budget)
    merged, _ = _merged_polys(s, r, threads)
    ranked = {}
    for crit in criteria:
        crit = Criterion.parse(crit)
        ranked[crit] = rank_polys(merged, crit)
    found = _collect(s, r, {p for _, best in ranked.values() for p in best}, threads)
    return {crit: (value, frozenset(c for p in best for c in found[p])) for crit, (value, best) in ranked.items()}


def argmax_agreement(s: int, r: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> dict:
    """Compare the D-optimal set with the A- and E-optimal sets at one (s, r)."""
    sets = optimal_sets(s, r, budget=budget, threads=threads)
    d = sets[Criterion.D][1]
    doc = {"s": s, "r": r, "d_maximizers": len(d)}
    for crit in (Criterion.A, Criterion.E):
        other = sets[crit][1]
        doc[crit.value] = {
            "maximizers": len(other),
            "equal": other == d,
            "contains_d": d <= other,
            "classes_outside_d": class_census(s, other - d),
        }
    return doc


def saturated_exhaustive(r: int, threads: int = 1) -> SearchResult:
    """Maximal |det M| over r x r +-1 matrices, by enumerating saturated designs.

    Rows of a nonsingular matrix are distinct and |det| ignores row order, so
    the normalized run sets of ``r - 1`` factors cover every normalized matrix.
    """
    if not 2 <= r <= 6:
        raise ValueError(f"saturated exhaustive search is limited to 2 <= r <= 6, got r = {r}; use local search")
    res = exhaustive_search(r - 1, r, Criterion.D, threads=threads)
    det = isqrt(res.best_value)
    if det * det != res.best_value:
        raise ArithmeticError("det(M'M) of a square M is not a perfect square")
    return SearchResult(
        criterion="maxdet",
        best_design=res.best_design,
        best_value=det,
        num_evaluated=res.num_evaluated,
        num_maximizers=res.num_maximizers,
        classification=res.classification,
        exhaustive_flag=True,
        extra=res.extra,
    )
