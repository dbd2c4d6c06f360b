"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` throughout; nothing in this package
ever touches floating point.  Matrices are dense and row-major, which is fine
at the desk scale this library targets (a few hundred rows at most).

The three workhorses are :func:`rank`, :func:`kernel_basis`, and
:func:`normalize_coprime`.  Elimination is plain Gaussian elimination with
exact pivoting; fraction-free variants buy nothing at this size.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rat = Fraction
RatVector = tuple[Fraction, ...]


class ZeroVectorError(ValueError):
    """Raised when an operation requires a nonzero vector."""


def rat(value) -> Fraction:
    """Coerce ints, strings like ``"p/q"``, or Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rat(value: Fraction) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def vec(values: Iterable) -> RatVector:
    return tuple(rat(v) for v in values)


def vec_add(u: Sequence[Fraction], v: Sequence[Fraction]) -> RatVector:
    return tuple(a + b for a, b in zip(u, v, strict=True))

def vec_sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> RatVector:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c, v: Sequence[Fraction]) -> RatVector:
    c = rat(c)
    return tuple(c * a for a in v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), Fraction(0))


def support(v: Sequence) -> frozenset[int]:
    return frozenset(i for i, a in enumerate(v) if a != 0)


class RatMatrix:
    """An immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence]):
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("entry grid does not match declared shape")
        self.rows = rows
        self.cols = cols
        self.data: tuple[RatVector, ...] = tuple(vec(r) for r in data)

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        data = list(data)
        if not data:
            if cols is None:
                raise ValueError("empty matrix needs an explicit column count")
            return cls(0, cols, [])
        return cls(len(data), len(data[0]), data)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    def row(self, i: int) -> RatVector:
        return self.data[i]

    def mul_vec(self, v: Sequence[Fraction]) -> RatVector:
        return tuple(dot(r, v) for r in self.data)

    def stack(self, other: "RatMatrix") -> "RatMatrix":
        if other.cols != self.cols:
            raise ValueError("column counts differ")
        return RatMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def take_rows(self, indices: Iterable[int]) -> "RatMatrix":
        rows = [self.data[i] for i in indices]
        return RatMatrix(len(rows), self.cols, rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rat(a) for a in r) for r in self.data)
        return f"RatMatrix({self.rows}x{self.cols}: {body})"


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (rref rows, pivot columns)."""
    if not rows:
        return rows, []
    cols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rref(M: RatMatrix) -> tuple[RatMatrix, list[int]]:
    rows, pivots = _echelon([list(r) for r in M.data])
    return RatMatrix.from_rows(rows, cols=M.cols), pivots


def rank(M: RatMatrix) -> int:
    """Rank over the rationals."""
    _, pivots = _echelon([list(r) for r in M.data])
    return len(pivots)


def kernel_basis(M: RatMatrix) -> list[RatVector]:
    """A basis of the right null space of M, exactly.

    The basis has cols - rank(M) vectors; each satisfies M v = 0.  Free
    variables are set to 1 one at a time, in column order, so the result is
    deterministic.
    """
    rows, pivots = _echelon([list(r) for r in M.data])
    n = M.cols
    pivot_of_col = {c: i for i, c in enumerate(pivots)}
    free_cols = [c for c in range(n) if c not in pivot_of_col]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for c, i in pivot_of_col.items():
            v[c] = -rows[i][fc]
        basis.append(tuple(v))
    return basis


def solve_unique(M: RatMatrix, rhs: Sequence[Fraction]) -> RatVector | None:
    """Solve M x = rhs when the solution is unique; None if none or many."""
    aug = [list(r) + [rat(b)] for r, b in zip(M.data, rhs, strict=True)]
    rows, pivots = _echelon(aug)
    if any(p == M.cols for p in pivots):  # pivot in the rhs column: inconsistent
        return None
    if len(pivots) < M.cols:
        return None
    x = [Fraction(0)] * M.cols
    for i, c in enumerate(pivots):
        x[c] = rows[i][M.cols]
    return tuple(x)


def normalize_coprime(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a nonzero rational vector by the unique positive factor that
    makes all entries integers with overall gcd 1.

    The sign is left as-is; use :func:`canonical_sign` when deduplicating the
    +/- pair of a circuit.
    """
    v = vec(v)
    if all(a == 0 for a in v):
        raise ZeroVectorError("cannot normalize the zero vector")
    denom_lcm = 1
    for a in v:
        denom_lcm = denom_lcm * a.denominator // gcd(denom_lcm, a.denominator)
    ints = [int(a * denom_lcm) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    return tuple(a // g for a in ints)


def canonical_sign(v: Sequence[int]) -> tuple[int, ...]:
    """Flip signs so the first nonzero entry is positive."""
    for a in v:
        if a != 0:
            if a < 0:
                return tuple(-x for x in v)
            return tuple(v)
    raise ZeroVectorError("zero vector has no canonical sign")
