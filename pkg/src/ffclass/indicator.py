"""Indicator-function coefficients of a two-level design.

The indicator ``f`` of a design equals 1 on its runs and 0 elsewhere in the
full factorial.  Written in the contrast basis ``X_I(x) = prod_{j in I} x_j``
its coefficients are ``b_I = n_I / 2^s`` with the integer numerators
``n_I = sum over runs of X_I(x)``.  Subsets ``I`` are bit masks with bit
``j - 1`` standing for factor ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import Design, DesignClass, DesignError, classify

MAX_FACTORS = 16


@dataclass(frozen=True)
class IndicatorPoly:
    s: int
    numerators: tuple[int, ...]  # indexed by subset mask

    @property
    def denominator(self) -> int:
        return 2**self.s

    def coefficient(self, mask: int) -> Fraction:
        return Fraction(self.numerators[mask], self.denominator)

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Nonzero ``(word, n_I)`` pairs sorted by word length, then lexicographically."""
        out = [(mask_to_word(mask), n) for mask, n in enumerate(self.numerators) if n]
        out.sort(key=lambda t: (len(t[0]), t[0]))
        return out


def mask_to_word(mask: int) -> tuple[int, ...]:
    return tuple(j + 1 for j in range(mask.bit_length()) if (mask >> j) & 1)


def word_to_mask(word: Sequence[int]) -> int:
    mask = 0
    for j in word:
        mask |= 1 << (j - 1)
    return mask


def _point_mask(run: Sequence[int]) -> int:
    # bit j-1 set when factor j sits at level -1
    return sum(1 << j for j, v in enumerate(run) if v == -1)


def _walsh_hadamard(values: np.ndarray, s: int) -> np.ndarray:
    """Unnormalized butterfly: out[I] = sum_p values[p] * (-1)^{|p & I|}."""
    a = values.astype(np.int64).copy()
    h = 1
    for _ in range(s):
        a = a.reshape(-1, 2, h)
        lo, hi = a[:, 0, :].copy(), a[:, 1, :].copy()
        a[:, 0, :] = lo + hi
        a[:, 1, :] = lo - hi
        a = a.reshape(-1)
        h *= 2
    return a


def indicator_coefficients(d: Design) -> IndicatorPoly:
    if d.s > MAX_FACTORS:
        raise ValueError(f"dense indicator transform is capped at s = {MAX_FACTORS}, got {d.s}")
    f = np.zeros(2**d.s, dtype=np.int64)
    for run in d.runs:
        f[_point_mask(run)] = 1
    return IndicatorPoly(d.s, tuple(int(v) for v in _walsh_hadamard(f, d.s)))


def evaluate(p: IndicatorPoly, x: Sequence[int]) -> Fraction:
    if len(x) != p.s:
        raise ValueError(f"point has {len(x)} coordinates, polynomial has {p.s} factors")
    px = _point_mask(x)
    total = 0
    for mask, n in enumerate(p.numerators):
        if n:
            total += -n if bin(mask & px).count("1") & 1 else n
    return Fraction(total, p.denominator)


def classify_from_indicator(p: IndicatorPoly) -> DesignClass:
    """AFD iff every non-constant coefficient is strictly smaller in modulus than b_0."""
    n0 = p.numerators[0]
    if all(abs(n) < n0 for n in p.numerators[1:]):
        return DesignClass.AFD
    return DesignClass.NOT_AFD


def refine_classification(p: IndicatorPoly) -> DesignClass:
    """Full class label; non-AFD cases are resolved on the support design."""
    label = classify_from_indicator(p)
    if label is DesignClass.AFD:
        return label
    return classify(support(p)).design_class


def support(p: IndicatorPoly) -> Design:
    if len(p.numerators) != 2**p.s:
        raise ValueError("numerator table does not cover every subset")
    # The transform is its own inverse up to the factor 2^s.
    values = _walsh_hadamard(np.array(p.numerators, dtype=np.int64), p.s)
    den = p.denominator
    bad = [int(v) for v in values if v not in (0, den)]
    if bad:
        raise DesignError(f"not an indicator: takes value {Fraction(bad[0], den)} somewhere")
    masks = [m for m in range(2**p.s) if values[m] == den]
    if not masks:
        raise DesignError("indicator has empty support")
    runs = [tuple(-1 if (m >> j) & 1 else 1 for j in range(p.s)) for m in masks]
    return Design(p.s, tuple(runs))
