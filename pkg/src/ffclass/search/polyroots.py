"""Exact characteristic polynomials and isolation of their smallest real root.

Polynomials are coefficient lists, highest degree first.  Root isolation
works on dyadic rationals and integer sign evaluations only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm, gcd
from typing import Sequence

import numpy as np

DEFAULT_WIDTH = Fraction(1, 10**9)


def charpoly(a) -> list[int]:
    """Coefficients of det(t I - A) for an integer matrix, by Faddeev-LeVerrier.

    Every division in the recurrence is exact for integer input.
    """
    a = [[int(v) for v in row] for row in np.asarray(a, dtype=object).tolist()]
    n = len(a)
    coeffs = [1]
    m = [[0] * n for _ in range(n)]  # M_0 = 0
    c = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        am = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            am[i][i] += c
        m = am
        tr = sum(sum(a[i][t] * m[t][i] for t in range(n)) for i in range(n))
        if tr % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        c = -tr // k
        coeffs.append(c)
    return coeffs


def batch_charpoly(a: np.ndarray) -> np.ndarray:
    """Vectorised Faddeev-LeVerrier over a stack of int64 matrices (k, n, n).

    Intended for small Gram matrices whose coefficients stay far below 2^63.
    """
    a = np.asarray(a, dtype=np.int64)
    k, n, _ = a.shape
    out = np.empty((k, n + 1), dtype=np.int64)
    out[:, 0] = 1
    m = np.zeros_like(a)
    c = np.ones(k, dtype=np.int64)
    eye = np.arange(n)
    for step in range(1, n + 1):
        m = np.matmul(a, m)
        m[:, eye, eye] += c[:, None]
        tr = np.einsum("kij,kji->k", a, m)
        c = -(tr // step)
        out[:, step] = c
    return out


# -- polynomial arithmetic over Q ----------------------------------------------


def _trim(p: list) -> list:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _deriv(p: Sequence) -> list:
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])] or [0]


def _divmod(p: Sequence, q: Sequence) -> tuple[list, list]:
    p = [Fraction(c) for c in p]
    q = [Fraction(c) for c in _trim(list(q))]
    if q == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return [Fraction(0)], p
    quot = []
    rem = p[:]
    while len(rem) >= len(q):
        f = rem[0] / q[0]
        quot.append(f)
        for i in range(len(q)):
            rem[i] -= f * q[i]
        rem.pop(0)
    return quot or [Fraction(0)], _trim(rem) if rem else [Fraction(0)]


def _is_zero(p: Sequence) -> bool:
    return all(c == 0 for c in p)


def poly_gcd(p: Sequence, q: Sequence) -> list[Fraction]:
    """Monic gcd over Q."""
    a, b = [Fraction(c) for c in _trim(list(p))], [Fraction(c) for c in _trim(list(q))]
    while not _is_zero(b):
        a, b = b, _divmod(a, b)[1]
    if _is_zero(a):
        return [Fraction(0)]
    return [c / a[0] for c in a]


def _primitive(p: Sequence[Fraction]) -> list[int]:
    """Positive multiple of p with coprime integer coefficients."""
    den = lcm(*[Fraction(c).denominator for c in p])
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g else ints


def square_free(p: Sequence[int]) -> list[int]:
    g = poly_gcd(p, _deriv(p))
    q, _ = _divmod(p, g)
    return _primitive(q)


def sturm_chain(p: Sequence[int]) -> list[list[int]]:
    chain = [_primitive(p), _primitive(_deriv(p))]
    while True:
        _, rem = _divmod(chain[-2], chain[-1])
        if _is_zero(rem):
            return chain
        chain.append(_primitive([-c for c in rem]))


def _sign_at(p: Sequence[int], x: Fraction) -> int:
    # sign of p(x) for x = num/den, den > 0, evaluated as an integer
    num, den = x.numerator, x.denominator
    n = len(p) - 1
    total = 0
    for i, c in enumerate(p):
        total += c * num ** (n - i) * den**i
    return (total > 0) - (total < 0)


def _variations(chain, x: Fraction) -> int:
    signs = [s for s in (_sign_at(p, x) for p in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(chain, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in (lo, hi]."""
    return _variations(chain, lo) - _variations(chain, hi)


@dataclass(frozen=True)
class RootInterval:
    """Closed interval [lo, hi] containing exactly one root of ``poly``
    (the smallest real root); ``lo == hi`` when the root is known exactly.
    """

    lo: Fraction
    hi: Fraction
    poly: tuple[int, ...]

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)

    def refine(self, width: Fraction) -> "RootInterval":
        if self.width <= width:
            return self
        return _bisect(square_free(self.poly), self.lo, self.hi, width, self.poly)

    def __str__(self) -> str:
        if self.exact:
            return str(self.lo)
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


def _cauchy_bound(p: Sequence[int]) -> Fraction:
    lead = abs(p[0])
    return 1 + max((Fraction(abs(c), lead) for c in p[1:]), default=Fraction(0))


def _bisect(g, lo: Fraction, hi: Fraction, width: Fraction, poly) -> RootInterval:
    # g square-free with exactly one root in (lo, hi]; the root is simple so g changes sign.
    s_hi = _sign_at(g, hi)
    if s_hi == 0:
        return RootInterval(hi, hi, tuple(poly))
    while hi - lo > width:
        mid = (lo + hi) / 2
        s_mid = _sign_at(g, mid)
        if s_mid == 0:
            return RootInterval(mid, mid, tuple(poly))
        if s_mid == s_hi:
            hi = mid
        else:
            lo = mid
    return RootInterval(lo, hi, tuple(poly))


def smallest_real_root(p: Sequence[int], width: Fraction = DEFAULT_WIDTH) -> RootInterval:
    """Isolate the smallest real root of an integer polynomial.

    A Sturm count locates an interval holding only the smallest root, then
    sign-change bisection shrinks it to at most ``width``.
    """
    p = [int(c) for c in _trim(list(p))]
    if len(p) < 2:
        raise ValueError("constant polynomial has no roots")
    g = square_free(p)
    chain = sturm_chain(g)
    bound = _cauchy_bound(g)
    lo, hi = -bound, bound
    if count_roots(chain, lo, hi) == 0:
        raise ValueError("polynomial has no real roots")
    if _sign_at(g, Fraction(0)) == 0 and count_roots(chain, lo, Fraction(0)) == 1:
        return RootInterval(Fraction(0), Fraction(0), tuple(p))
    # Invariant: no root in (-inf, lo], at least one root in (lo, hi].
    while count_roots(chain, lo, hi) > 1:
        mid = (lo + hi) / 2
        if count_roots(chain, lo, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return _bisect(g, lo, hi, width, p)


def compare_roots(a: RootInterval, b: RootInterval, max_rounds: int = 200) -> int:
    """Exact three-way comparison of the roots isolated by two intervals."""
    for _ in range(max_rounds):
        if a.hi < b.lo:
            return -1
        if b.hi < a.lo:
            return 1
        if a.exact and b.exact:
            return 0
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        g = poly_gcd(a.poly, b.poly)
        if len(g) > 1:
            # A common factor with a root in the overlap, inside both isolating
            # intervals, must vanish at both isolated roots.
            chain = sturm_chain(square_free(_primitive(g)))
            if count_roots(chain, lo, hi) + (_sign_at(_primitive(g), lo) == 0) >= 1:
                return 0
        w = max(a.width, b.width) / 4
        a, b = a.refine(w), b.refine(w)
    raise ArithmeticError("root comparison did not resolve")
