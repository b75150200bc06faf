"""Optimality criteria on the information matrix M'M and their batched kernels."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from ..core import ClassificationResult, Design, exact_det, gram_matrix, to_design_matrix
from .polyroots import RootInterval, batch_charpoly, charpoly, smallest_real_root


class Criterion(str, enum.Enum):
    D = "d"
    A = "a"
    E = "e"

    @classmethod
    def parse(cls, value: Union[str, "Criterion"]) -> "Criterion":
        if isinstance(value, Criterion):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown criterion {value!r}; expected d, a or e") from None


class SingularInformationError(ValueError):
    """M'M is singular where a nonsingular one is required."""


Value = Union[int, Fraction, RootInterval]


@dataclass(frozen=True)
class SearchResult:
    criterion: str
    best_design: Design
    best_value: Value
    num_evaluated: int
    num_maximizers: int
    classification: ClassificationResult
    exhaustive_flag: bool
    seed: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def value_string(self) -> str:
        return str(self.best_value)

    def to_json(self) -> dict:
        out = {
            "criterion": self.criterion,
            "s": self.best_design.s,
            "r": self.best_design.r,
            "design": self.best_design.to_rows(),
            "value": self.value_string(),
            "num_evaluated": self.num_evaluated,
            "num_maximizers": self.num_maximizers,
            "exhaustive": self.exhaustive_flag,
        }
        if isinstance(self.best_value, RootInterval):
            out["value_interval"] = [str(self.best_value.lo), str(self.best_value.hi)]
        out.update(self.classification.to_json())
        if self.seed is not None:
            out["seed"] = self.seed
        out.update(self.extra)
        return out


def _gram(d: Design) -> np.ndarray:
    return gram_matrix(to_design_matrix(d))


def d_value(d: Design) -> int:
    """|det(M'M)|, exactly."""
    return abs(exact_det(_gram(d)))


def a_value(d: Design) -> Fraction:
    """trace((M'M)^-1) as trace(adj(M'M)) / det(M'M)."""
    return a_value_from_charpoly(charpoly(_gram(d)))


def a_value_from_charpoly(coeffs) -> Fraction:
    n = len(coeffs) - 1
    det = (-1) ** n * int(coeffs[n])
    if det == 0:
        raise SingularInformationError("A-criterion undefined: M'M is singular")
    trace_adj = (-1) ** (n - 1) * int(coeffs[n - 1])
    return Fraction(trace_adj, det)


def e_value(d: Design) -> RootInterval:
    """Isolating interval (width <= 1e-9) of the smallest eigenvalue of M'M."""
    return smallest_real_root(charpoly(_gram(d)))


# -- batched kernels -----------------------------------------------------------


def point_table(s: int) -> np.ndarray:
    """Model-matrix rows for every point of the full factorial, indexed by code."""
    codes = np.arange(2**s)
    bits = (codes[:, None] >> np.arange(s - 1, -1, -1)) & 1
    return np.hstack([np.ones((2**s, 1), dtype=np.int64), 1 - 2 * bits]).astype(np.int64)


def outer_table(s: int) -> np.ndarray:
    p = point_table(s)
    return np.einsum("pi,pj->pij", p, p)


def batch_gram(outer: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Gram matrices for a stack of designs given as code arrays (k, r)."""
    g = np.zeros((codes.shape[0],) + outer.shape[1:], dtype=np.int64)
    for col in range(codes.shape[1]):
        g += outer[codes[:, col]]
    return g


def int64_safe(s: int, r: int) -> bool:
    """Whether Bareiss on (s+1)x(s+1) Gram matrices of r runs fits in int64."""
    minor_bound = r ** (s + 1)
    return 2 * minor_bound * minor_bound < 2**63


def batch_gram_det(g: np.ndarray) -> np.ndarray:
    """Exact determinants of positive semidefinite int64 matrices (k, n, n).

    Bareiss without pivoting: its pivots are leading principal minors, and a
    vanishing leading principal minor of a PSD matrix forces det = 0.
    """
    a = np.array(g, dtype=np.int64, copy=True)
    k, n, _ = a.shape
    if n == 0:
        return np.ones(k, dtype=np.int64)
    prev = np.ones(k, dtype=np.int64)
    singular = np.zeros(k, dtype=bool)
    for t in range(n - 1):
        pivot = a[:, t, t].copy()
        zero = pivot == 0
        singular |= zero
        pivot[zero] = 1
        a[:, t + 1:, t + 1:] = (
            pivot[:, None, None] * a[:, t + 1:, t + 1:] - a[:, t + 1:, t, None] * a[:, t, None, t + 1:]
        ) // prev[:, None, None]
        prev = pivot
    det = a[:, n - 1, n - 1].copy()
    det[singular] = 0
    return det

