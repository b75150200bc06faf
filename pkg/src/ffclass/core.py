"""Two-level designs, GF(2) elimination, exact determinants and the
regular / subset / affinely full-dimensional classifier.

Levels are the integers -1 and +1.  The binary image of a level ``x`` is
``(1 - x) // 2`` so that +1 maps to 0 and -1 maps to 1.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class DesignError(ValueError):
    """Raised for malformed designs or design files."""


class DesignClass(str, enum.Enum):
    FULL_FACTORIAL = "full_factorial"
    REGULAR = "regular"
    SUBSET = "subset"
    AFD = "afd"
    # Used where only the AFD / non-AFD dichotomy is decidable.
    NOT_AFD = "not_afd"

    def __str__(self) -> str:
        return self.value


def _level(token: str) -> int:
    if token in ("1", "+1"):
        return 1
    if token == "-1":
        return -1
    raise DesignError(f"invalid level token {token!r}")


@dataclass(frozen=True)
class Design:
    """An ordered set of distinct runs in ``{-1, +1}^s``."""

    s: int
    runs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        runs = tuple(tuple(int(v) for v in run) for run in self.runs)
        object.__setattr__(self, "runs", runs)
        if self.s < 1:
            raise DesignError("a design needs at least one factor")
        if not runs:
            raise DesignError("a design needs at least one run")
        for run in runs:
            if len(run) != self.s:
                raise DesignError(f"run {run} has {len(run)} entries, expected {self.s}")
            if any(v not in (-1, 1) for v in run):
                raise DesignError(f"run {run} has entries outside {{-1, +1}}")
        if len(set(runs)) != len(runs):
            raise DesignError("duplicate run (replication is not allowed)")
        if len(runs) > 2**self.s:
            raise DesignError("more runs than points in the full factorial")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "Design":
        rows = [tuple(row) for row in rows]
        if not rows:
            raise DesignError("empty design")
        return cls(len(rows[0]), tuple(rows))

    @classmethod
    def from_codes(cls, s: int, codes: Iterable[int]) -> "Design":
        """Build a design from binary row codes (factor 1 is the most significant bit)."""
        return cls(s, tuple(code_to_run(s, c) for c in codes))

    @property
    def r(self) -> int:
        return len(self.runs)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.runs, dtype=np.int64).reshape(self.r, self.s)

    def codes(self) -> list[int]:
        return [run_to_code(run) for run in self.runs]

    def canonical_key(self) -> int:
        """Sorted row codes concatenated into one integer; smaller wins ties."""
        key = 0
        for c in sorted(self.codes()):
            key = (key << self.s) | c
        return key

    def to_rows(self) -> list[list[int]]:
        return [list(run) for run in self.runs]

    def __len__(self) -> int:
        return self.r


def run_to_code(run: Sequence[int]) -> int:
    code = 0
    for v in run:
        code = (code << 1) | ((1 - v) >> 1)
    return code


def code_to_run(s: int, code: int) -> tuple[int, ...]:
    return tuple(1 - 2 * ((code >> (s - 1 - j)) & 1) for j in range(s))


def full_factorial(s: int) -> Design:
    return Design.from_codes(s, range(2**s))


def parse_design(text: str) -> Design:
    """Parse a design file.

    Accepts the whitespace-separated text format (``1``/``+1``/``-1`` or
    ``0``/``1`` tokens, ``#`` comments, blank lines ignored) and, for
    round-tripping CLI output, a JSON row list or a JSON object holding a
    ``design`` (or ``best_design``) row list.
    """
    stripped = text.strip()
    if stripped.startswith(("[", "{")):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise DesignError(f"invalid JSON design: {exc}") from None
        if isinstance(obj, dict):
            obj = obj.get("design", obj.get("best_design"))
        if not isinstance(obj, list) or not obj:
            raise DesignError("JSON input holds no design row list")
        rows = [[_level(str(v)) for v in row] for row in obj]
        return _rows_to_design(rows)

    token_rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        token_rows.append(line.split())
    if not token_rows:
        raise DesignError("empty design")
    tokens = {t for row in token_rows for t in row}
    binary_mode = "-1" not in tokens and "0" in tokens
    if binary_mode:
        if not tokens <= {"0", "1"}:
            raise DesignError(f"binary mode accepts only 0/1, got {sorted(tokens - {'0', '1'})}")
        rows = [[1 - 2 * int(t) for t in row] for row in token_rows]
    else:
        rows = [[_level(t) for t in row] for row in token_rows]
    return _rows_to_design(rows)


def _rows_to_design(rows: list[list[int]]) -> Design:
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DesignError(f"ragged input: row {i + 1} has {len(row)} entries, expected {width}")
    return Design.from_rows(rows)


def format_design(d: Design) -> str:
    return "\n".join(" ".join(f"{v:2d}" for v in run) for run in d.runs) + "\n"


def normalize(d: Design) -> Design:
    """Relabel levels so the first run is all +1."""
    flip = d.runs[0]
    return Design(d.s, tuple(tuple(v * f for v, f in zip(run, flip)) for run in d.runs))


# -- matrices -----------------------------------------------------------------


def to_design_matrix(d: Design) -> np.ndarray:
    """The r x (s+1) main-effect model matrix with a leading column of ones."""
    return np.hstack([np.ones((d.r, 1), dtype=np.int64), d.array])


@dataclass(frozen=True)
class BinaryMatrix:
    """Bit matrix over F2.  Row ``i`` is an int whose bit ``j`` is entry (i, j)."""

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != self.rows:
            raise ValueError("bits length does not match the row count")
        limit = 1 << self.cols
        if any(b < 0 or b >= limit for b in self.bits):
            raise ValueError("row has bits beyond the column count")

    @classmethod
    def from_array(cls, a) -> "BinaryMatrix":
        a = np.asarray(a, dtype=np.int64) % 2
        rows, cols = a.shape
        bits = tuple(sum(int(v) << j for j, v in enumerate(row)) for row in a)
        return cls(rows, cols, bits)

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def entry(self, i: int, j: int) -> int:
        return (self.bits[i] >> j) & 1

    def to_array(self) -> np.ndarray:
        return np.array(
            [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)],
            dtype=np.int64,
        ).reshape(self.rows, self.cols)


def to_binary(d: Design) -> BinaryMatrix:
    """Map the design matrix to F2: column 0 stays 1, levels go to (1 - x) / 2."""
    bits = []
    for run in d.runs:
        row = 1
        for j, v in enumerate(run, start=1):
            if v == -1:
                row |= 1 << j
        bits.append(row)
    return BinaryMatrix(d.r, d.s + 1, tuple(bits))


def gf2_rank(b: BinaryMatrix) -> int:
    pivots: dict[int, int] = {}
    for row in b.bits:
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = row
                break
            row ^= pivots[top]
    return len(pivots)


def affine_dimension(d: Design) -> int:
    return gf2_rank(to_binary(d)) - 1


@dataclass(frozen=True)
class DefiningRelation:
    """``prod_{j in word} x_j == sign`` on every run."""

    word: tuple[int, ...]
    sign: int

    def holds(self, run: Sequence[int]) -> bool:
        p = 1
        for j in self.word:
            p *= run[j - 1]
        return p == self.sign

    def __str__(self) -> str:
        return "".join(f"x{j}" for j in self.word) + f" = {self.sign}"


def _kernel_vectors(b: BinaryMatrix) -> list[int]:
    """Basis of {c : B c = 0} as bit vectors over the columns of ``b``.

    The basis is reduced with pivots taken at the highest column index, so
    each vector is the unique kernel element whose top column is its pivot.
    """
    n = b.cols
    # Row-reduce B to RREF with pivots chosen from column 0 upwards.
    rows = list(b.bits)
    pivot_cols = []
    rank = 0
    for col in range(n):
        sel = next((i for i in range(rank, len(rows)) if (rows[i] >> col) & 1), None)
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        for i in range(len(rows)):
            if i != rank and (rows[i] >> col) & 1:
                rows[i] ^= rows[rank]
        pivot_cols.append(col)
        rank += 1
    free = [c for c in range(n) if c not in pivot_cols]
    basis = []
    for f in free:
        v = 1 << f
        for i, pc in enumerate(pivot_cols):
            if (rows[i] >> f) & 1:
                v |= 1 << pc
        basis.append(v)
    # Each free column is the highest set bit of its vector, and no other
    # vector has that bit, so the basis is already reduced from the top.
    return sorted(basis, key=lambda v: v.bit_length())


def confounding_kernel(d: Design) -> list[DefiningRelation]:
    """Independent relations ``X_I = sign`` satisfied by every run."""
    relations = []
    for v in _kernel_vectors(to_binary(d)):
        word = tuple(j for j in range(1, d.s + 1) if (v >> j) & 1)
        sign = -1 if v & 1 else 1
        relations.append(DefiningRelation(word, sign))
    return relations


@dataclass(frozen=True)
class ClassificationResult:
    design_class: DesignClass
    affine_dim: int
    num_generators: int
    relations: tuple[DefiningRelation, ...]
    constant_factors: tuple[int, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "class": self.design_class.value,
            "affine_dim": self.affine_dim,
            "num_generators": self.num_generators,
            "relations": [{"word": list(rel.word), "sign": rel.sign} for rel in self.relations],
            "constant_factors": list(self.constant_factors),
        }


def classify(d: Design) -> ClassificationResult:
    dim = affine_dimension(d)
    relations = tuple(confounding_kernel(d))
    if d.r == 2**d.s:
        cls = DesignClass.FULL_FACTORIAL
    elif dim == d.s:
        cls = DesignClass.AFD
    elif d.r == 2**dim:
        cls = DesignClass.REGULAR
    else:
        cls = DesignClass.SUBSET
    constant = tuple(j + 1 for j in range(d.s) if len({run[j] for run in d.runs}) == 1)
    return ClassificationResult(cls, dim, d.s - dim, relations, constant)


# -- exact integer linear algebra ---------------------------------------------


def gram_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    return m.T @ m


def exact_det(a) -> int:
    """Determinant by fraction-free (Bareiss) elimination on Python ints."""
    rows = [[int(v) for v in row] for row in np.asarray(a, dtype=object).tolist()]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pivot = rows[k][k]
        for i in range(k + 1, n):
            ri, rk = rows[i], rows[k]
            for j in range(k + 1, n):
                ri[j] = (pivot * ri[j] - ri[k] * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * rows[n - 1][n - 1]


def is_identifiable(d: Design) -> bool:
    if d.r < d.s + 1:
        return False
    return exact_det(gram_matrix(to_design_matrix(d))) != 0
