"""Circuits of a linear system: oracle, enumeration, imbalance, and walks.

A circuit of the pair (A, B) is a nonzero g in ker(A), normalized to coprime
integer entries, whose image Bg has inclusion-minimal support among
{Bx : x in ker(A), x != 0}.  The decision procedure used everywhere here is
the kernel-dimension test: g is a circuit iff Ag = 0 and

    dim ker [A; B0] = 1,   where B0 = rows of B with (Bg)_i = 0.

Equivalence with support minimality: any y in ker[A; B0] has supp(By)
contained in supp(Bg).  If the kernel had dimension >= 2, a combination of g
with an independent kernel vector would zero one more row of supp(Bg),
producing a vector of strictly smaller support; conversely a vector of
strictly smaller support lies in ker[A; B0] and is not a multiple of g.

Enumeration walks the lattice of row-span flats of B restricted to ker(A):
every circuit is the one-dimensional kernel of a rank (d-1) span of rows
(d = dim ker A), and every such span gives a circuit.  Rank arithmetic runs
over a prime field with the prime certified against a Hadamard bound on the
integer row data, so the modular computation is provably exact; inputs too
large to certify fall back to rational arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Literal, Sequence

from .ratmat import (
    RatMatrix,
    RatVector,
    ZeroVectorError,
    canonical_sign,
    dot,
    format_rat,
    kernel_basis,
    normalize_coprime,
    rat,
    rank,
    support,
    vec,
    vec_add,
    vec_scale,
)

DEFAULT_MAX_VARS = 12
DEFAULT_DEPTH_CAP = 12


class CapExceededError(RuntimeError):
    """An enumeration or search would exceed its configured cap."""


class NotInKernelError(ValueError):
    """The tested vector is not in ker(A)."""


class InfeasiblePointError(ValueError):
    pass


class InfeasibleDirectionError(ValueError):
    pass


class EmptySetError(ValueError):
    pass


@dataclass(frozen=True)
class ConstraintSystem:
    """Equalities A x = b and inequalities B x <= d over n variables."""

    A: RatMatrix
    b: RatVector
    B: RatMatrix
    d: RatVector
    variable_labels: tuple[str, ...]
    row_labels: tuple[str, ...]

    def __post_init__(self):
        n = self.A.cols
        if self.B.cols != n:
            raise ValueError("A and B column counts differ")
        if len(self.b) != self.A.rows or len(self.d) != self.B.rows:
            raise ValueError("right-hand side length mismatch")
        if len(self.variable_labels) != n:
            raise ValueError("variable label count mismatch")
        if len(self.row_labels) != self.A.rows + self.B.rows:
            raise ValueError("row label count mismatch")

    @classmethod
    def build(
        cls,
        n: int,
        equalities: Sequence[tuple[Sequence, object]] = (),
        inequalities: Sequence[tuple[Sequence, object]] = (),
        variable_labels: Sequence[str] | None = None,
        eq_labels: Sequence[str] | None = None,
        ineq_labels: Sequence[str] | None = None,
    ) -> "ConstraintSystem":
        A = RatMatrix.from_rows([list(c) for c, _ in equalities], cols=n)
        B = RatMatrix.from_rows([list(c) for c, _ in inequalities], cols=n)
        b = vec(r for _, r in equalities)
        d = vec(r for _, r in inequalities)
        if variable_labels is None:
            variable_labels = tuple(f"x{i}" for i in range(n))
        if eq_labels is None:
            eq_labels = tuple(f"eq{i}" for i in range(A.rows))
        if ineq_labels is None:
            ineq_labels = tuple(f"ineq{i}" for i in range(B.rows))
        return cls(A, b, B, d, tuple(variable_labels), tuple(eq_labels) + tuple(ineq_labels))

    @property
    def n(self) -> int:
        return self.A.cols

    def ineq_label(self, i: int) -> str:
        return self.row_labels[self.A.rows + i]

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        return all(a == b for a, b in zip(self.A.mul_vec(x), self.b)) and all(
            lhs <= rhs for lhs, rhs in zip(self.B.mul_vec(x), self.d)
        )

    def tight_rows(self, x: Sequence[Fraction]) -> tuple[int, ...]:
        lhs = self.B.mul_vec(x)
        return tuple(i for i in range(self.B.rows) if lhs[i] == self.d[i])

    def is_extreme_point(self, x: Sequence[Fraction]) -> bool:
        if not self.is_feasible(x):
            return False
        tight = self.A.stack(self.B.take_rows(self.tight_rows(x)))
        return rank(tight) == self.n

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "variables": list(self.variable_labels),
            "equalities": [
                {"coeffs": [format_rat(a) for a in row], "rhs": format_rat(r)}
                for row, r in zip(self.A.data, self.b)
            ],
            "inequalities": [
                {
                    "coeffs": [format_rat(a) for a in row],
                    "rhs": format_rat(r),
                    "label": self.ineq_label(i),
                }
                for i, (row, r) in enumerate(zip(self.B.data, self.d))
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ConstraintSystem":
        n = doc["n"]
        eqs = [(row["coeffs"], row["rhs"]) for row in doc.get("equalities", [])]
        ineqs = [(row["coeffs"], row["rhs"]) for row in doc.get("inequalities", [])]
        labels = tuple(row.get("label", f"ineq{i}") for i, row in enumerate(doc.get("inequalities", [])))
        return cls.build(
            n,
            eqs,
            ineqs,
            variable_labels=doc.get("variables"),
            ineq_labels=labels,
        )

    @classmethod
    def from_json(cls, text: str) -> "ConstraintSystem":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class Circuit:
    """A coprime-integer circuit vector in canonical (first nonzero > 0) sign."""

    vector: tuple[int, ...]
    zero_rows_of_B: frozenset[int]

    def __post_init__(self):
        if all(a == 0 for a in self.vector):
            raise ZeroVectorError("circuit vector must be nonzero")

    def support(self) -> frozenset[int]:
        return support(self.vector)

    def as_fractions(self) -> RatVector:
        return vec(self.vector)

    def __lt__(self, other: "Circuit") -> bool:
        return self.vector < other.vector


@dataclass(frozen=True)
class NotCircuit:
    """Evidence that g is not a circuit: A w = 0 and supp(Bw) strictly
    inside supp(Bg)."""

    witness: RatVector


@dataclass(frozen=True)
class ImbalanceReport:
    kappa: Fraction
    witness_circuit: Circuit
    witness_indices: tuple[int, int]


class Unbounded:
    """Sentinel outcome of max_step for recession directions."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = Unbounded()


# ---------------------------------------------------------------------------
# certified modular rank arithmetic
# ---------------------------------------------------------------------------

# Mersenne primes comfortably above the Hadamard bounds of desk-scale data.
_PRIMES = (2**31 - 1, 2**61 - 1, 2**127 - 1, 2**521 - 1)


def _integer_rows(rows: Iterable[Sequence[Fraction]]) -> list[tuple[int, ...]]:
    """Scale each rational row to coprime integers (rank is unaffected)."""
    out = []
    for row in rows:
        row = vec(row)
        if all(a == 0 for a in row):
            out.append(tuple(0 for _ in row))
        else:
            out.append(normalize_coprime(row))
    return out


def _hadamard_below(int_rows: Sequence[Sequence[int]], n: int, p: int) -> bool:
    norms_sq = sorted((sum(a * a for a in row) for row in int_rows), reverse=True)
    bound_sq = 1
    for s in norms_sq[: min(len(norms_sq), n)]:
        bound_sq *= max(s, 1)
    return bound_sq < p * p


def _certified_prime(int_rows: Sequence[Sequence[int]], n: int) -> int | None:
    """Smallest prime provably exceeding every minor of the row matrix.

    Any square submatrix determinant is bounded (Hadamard) by the product of
    its rows' Euclidean norms, so if prod of the min(m, n) largest row norms
    is below p, nonzero minors stay nonzero mod p and all modular rank
    computations on row submatrices agree with the rational ones.
    """
    norms_sq = sorted((sum(a * a for a in row) for row in int_rows), reverse=True)
    t = min(len(norms_sq), n)
    bound_sq = 1
    for s in norms_sq[:t]:
        bound_sq *= max(s, 1)
    for p in _PRIMES:
        if bound_sq < p * p:
            return p
    return None


def _rank_mod(rows: Iterable[Sequence[int]], p: int) -> int:
    mat = [[a % p for a in row] for row in rows]
    if not mat:
        return 0
    cols = len(mat[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = pow(mat[r][c], p - 2, p)
        mat[r] = [a * inv % p for a in mat[r]]
        for i in range(r + 1, len(mat)):
            f = mat[i][c]
            if f:
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return r


def _rank_rows(rows: list[Sequence[Fraction]], n: int) -> int:
    """Exact rank, via certified modular elimination when possible."""
    int_rows = _integer_rows(rows)
    p = _certified_prime(int_rows, n)
    if p is not None:
        return _rank_mod(int_rows, p)
    return rank(RatMatrix.from_rows([list(r) for r in rows], cols=n))


# ---------------------------------------------------------------------------
# the circuit oracle
# ---------------------------------------------------------------------------


def _system_int_rows(system: ConstraintSystem) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Integer-scaled copies of A's and B's rows (zero patterns preserved),
    cached on the system instance."""
    cached = getattr(system, "_int_rows_cache", None)
    if cached is None:
        zero_row = tuple(0 for _ in range(system.n))
        int_a = [
            normalize_coprime(r) if any(r) else zero_row for r in system.A.data
        ]
        int_b = [
            normalize_coprime(r) if any(r) else zero_row for r in system.B.data
        ]
        cached = (int_a, int_b)
        object.__setattr__(system, "_int_rows_cache", cached)
    return cached


def _as_int_vector(g: Sequence[Fraction]) -> tuple[int, ...] | None:
    out = []
    for a in g:
        if isinstance(a, int):
            out.append(a)
        elif a.denominator == 1:
            out.append(a.numerator)
        else:
            return None
    return tuple(out)


def _zero_rows(system: ConstraintSystem, g: Sequence[Fraction]) -> frozenset[int]:
    g_int = _as_int_vector(g)
    if g_int is not None:
        _, int_b = _system_int_rows(system)
        return frozenset(
            i
            for i, row in enumerate(int_b)
            if sum(a * b for a, b in zip(row, g_int)) == 0
        )
    img = system.B.mul_vec(g)
    return frozenset(i for i, a in enumerate(img) if a == 0)


def _stacked_rows(system: ConstraintSystem, row_ids: Iterable[int]) -> list[RatVector]:
    return list(system.A.data) + [system.B.data[i] for i in sorted(row_ids)]


def is_circuit(system: ConstraintSystem, g: Sequence[Fraction]) -> Circuit | NotCircuit:
    """Decide whether g is a circuit of the system.

    Returns the canonical Circuit, or NotCircuit carrying a witness y with
    A y = 0 and supp(By) strictly contained in supp(Bg).  Raises
    ZeroVectorError on g = 0 and NotInKernelError when A g != 0; the zero
    vector is never treated as a trivial circuit.
    """
    g = vec(g)
    if all(a == 0 for a in g):
        raise ZeroVectorError("the zero vector is excluded from circuit tests")
    gn = normalize_coprime(g)
    int_a, int_b = _system_int_rows(system)
    if any(sum(a * b for a, b in zip(row, gn)) != 0 for row in int_a):
        raise NotInKernelError("A g != 0")
    zero = frozenset(
        i
        for i, row in enumerate(int_b)
        if sum(a * b for a, b in zip(row, gn)) == 0
    )
    int_rows = int_a + [int_b[i] for i in sorted(zero)]
    p = _certified_prime(int_rows, system.n)
    if p is not None:
        r = _rank_mod(int_rows, p)
    else:
        r = rank(RatMatrix.from_rows([list(row) for row in int_rows], cols=system.n))
    if system.n - r == 1:
        return Circuit(vector=canonical_sign(gn), zero_rows_of_B=zero)
    rows = _stacked_rows(system, zero)
    return NotCircuit(witness=_smaller_support_witness(system, g, zero, rows))


def _smaller_support_witness(
    system: ConstraintSystem,
    g: RatVector,
    zero: frozenset[int],
    rows: list[RatVector],
) -> RatVector:
    """A vector y in ker[A; B0] with supp(By) strictly inside supp(Bg).

    ker[A; B0] has dimension >= 2 here, so it contains a vector independent
    of g; if that vector does not already miss a row of supp(Bg), subtract
    the multiple of g that zeroes one.
    """
    basis = kernel_basis(RatMatrix.from_rows([list(r) for r in rows], cols=system.n))
    img_g = system.B.mul_vec(g)
    supp_g = support(img_g)
    for z in basis:
        img_z = system.B.mul_vec(z)
        if not _proportional(z, g):
            if support(img_z) < supp_g:
                return z
            for i in sorted(supp_g):
                if img_z[i] != 0:
                    y = vec_add(z, vec_scale(-img_z[i] / img_g[i], g))
                    return y
            return z  # supp(Bg) empty: lineality direction, documented caveat
    raise AssertionError("kernel of dimension >= 2 must contain an independent vector")


def _int_kernel_line(rows: Sequence[Sequence[int]], d: int) -> RatVector:
    """The kernel direction of d-1 independent integer rows in R^d.

    Fraction-free (Bareiss) forward elimination followed by a short rational
    back-substitution; much cheaper than a full rational RREF.
    """
    M = [list(r) for r in rows]
    m = len(M)
    prev = 1
    piv_cols: list[int] = []
    r = 0
    for c in range(d):
        pr = next((i for i in range(r, m) if M[i][c]), None)
        if pr is None:
            continue
        if pr != r:
            M[r], M[pr] = M[pr], M[r]
        pc = M[r][c]
        for i in range(r + 1, m):
            f = M[i][c]
            M[i] = [(pc * M[i][j] - f * M[r][j]) // prev for j in range(d)]
        prev = pc
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(d) if c not in piv_cols]
    if len(free) != 1:
        raise AssertionError("rows do not have rank d-1")
    x = [Fraction(0)] * d
    x[free[0]] = Fraction(1)
    for i in range(len(piv_cols) - 1, -1, -1):
        c = piv_cols[i]
        s = Fraction(0)
        for j in range(c + 1, d):
            if M[i][j] and x[j]:
                s += M[i][j] * x[j]
        x[c] = -s / M[i][c]
    return tuple(x)


def _proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    ratio = None
    for a, b in zip(u, v):
        if (a == 0) != (b == 0):
            return False
        if b != 0:
            r = a / b
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return True


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _functional_points(system: ConstraintSystem, K: list[RatVector]):
    """B's rows as functionals on ker(A) coordinates, deduplicated up to sign.

    Returns (points, row_map): integer point tuples in R^d, and for each
    point the (sorted) original B-row indices it represents.
    """
    d = len(K)
    seen: dict[tuple[int, ...], list[int]] = {}
    order: list[tuple[int, ...]] = []
    for i, row in enumerate(system.B.data):
        func = tuple(dot(row, col) for col in K)
        if all(a == 0 for a in func):
            continue
        pt = canonical_sign(normalize_coprime(func))
        if pt not in seen:
            seen[pt] = []
            order.append(pt)
        seen[pt].append(i)
    return order, seen


_NUMPY_PRIME = 536870909  # 2^29 - 3: q*(p-1)^2 fits int64 for q <= 12


class _NumpyFlatEngine:
    """Row-span flat lattice over GF(p), fully vectorized across each level.

    Flats are spans of point subsets, so a flat is determined by the set of
    points it contains; levels are deduplicated by that member set.
    Extending a flat quotients every point to its residual; the nonzero
    residuals belonging to one child flat form a single projective class, so
    grouping residual rows by their scaled canonical form enumerates the
    children and their member sets without touching individual subsets.  The
    prime is certified against the Hadamard bound, making every zero/nonzero
    and proportionality decision provably exact.
    """

    def __init__(self, points: list[tuple[int, ...]], dim: int, p: int):
        import numpy as np

        self.np = np
        self.P = np.ascontiguousarray(np.array(points, dtype=np.int64) % p)
        self.dim = dim
        self.p = p

    def _batch_modinv(self, vals):
        np, p = self.np, self.p
        result = np.ones_like(vals)
        base = vals % p
        e = p - 2
        while e:
            if e & 1:
                result = result * base % p
            base = base * base % p
            e >>= 1
        return result

    def hyperplane_flats(self) -> list[tuple[int, ...]]:
        np, p, P = self.np, self.p, self.P
        npts, d = P.shape
        target = self.dim - 1
        if target == 0:
            return [()]

        # Per-level stores, uniform in rank q = depth - 1.
        rrefs = np.zeros((1, 0, d), dtype=np.int64)
        pivots = np.zeros((1, 0), dtype=np.int64)
        members = np.zeros((1, npts), dtype=bool)
        gens: list[tuple[int, ...]] = [()]
        # chunk bounded by the (groups x points) membership matrix
        chunk = max(1, 4_000_000 // (npts * npts))

        for depth in range(1, target + 1):
            final = depth == target
            seen: dict[bytes, int] = {}
            keep_parent: list[int] = []
            keep_point: list[int] = []
            keep_lead: list[int] = []
            keep_row: list = []
            keep_members: list = []
            for i0 in range(0, len(gens), chunk):
                i1 = min(i0 + chunk, len(gens))
                C = i1 - i0
                R = rrefs[i0:i1]
                if R.shape[1]:
                    coeff = P[:, pivots[i0:i1]].transpose(1, 0, 2)  # (C, npts, q)
                    residual = (P[None, :, :] - coeff @ R) % p
                else:
                    residual = np.broadcast_to(P, (C, npts, d)).copy()
                nz = residual.any(axis=2)  # (C, npts)
                leads = (residual != 0).argmax(axis=2)
                lead_vals = np.take_along_axis(residual, leads[:, :, None], axis=2)[:, :, 0]
                inv = self._batch_modinv(np.where(nz, lead_vals, 1))
                canon = residual * inv[:, :, None] % p
                # group identical (flat, projective residual class) records
                flat_ids = np.repeat(np.arange(C, dtype=np.int64), npts)
                recs = np.concatenate(
                    [flat_ids[:, None], canon.reshape(C * npts, d)], axis=1
                )
                mask = nz.ravel()
                rows_idx = np.nonzero(mask)[0]
                if not len(rows_idx):
                    continue
                recs = np.ascontiguousarray(recs[mask])
                void = recs.view(np.dtype((np.void, recs.dtype.itemsize * (d + 1)))).ravel()
                _, first_idx, inverse = np.unique(
                    void, return_index=True, return_inverse=True
                )
                G = len(first_idx)
                point_idx = rows_idx % npts
                local_flat = rows_idx // npts
                group_members = np.zeros((G, npts), dtype=bool)
                group_members[inverse, point_idx] = True
                parent_local = local_flat[first_idx]
                group_members |= members[i0:i1][parent_local]
                rep_point = point_idx[first_idx]
                # dedupe within the chunk by member set, then across chunks
                packed = np.packbits(group_members, axis=1)
                width = packed.shape[1]
                pv = np.ascontiguousarray(packed).view(
                    np.dtype((np.void, width))
                ).ravel()
                _, uniq_idx = np.unique(pv, return_index=True)
                uniq_idx.sort()
                raw = packed[uniq_idx].tobytes()
                for t, g in enumerate(uniq_idx.tolist()):
                    key = raw[t * width : (t + 1) * width]
                    if key in seen:
                        continue
                    seen[key] = 1
                    keep_parent.append(i0 + int(parent_local[g]))
                    keep_point.append(int(rep_point[g]))
                    if not final:
                        keep_lead.append(int(leads[parent_local[g], rep_point[g]]))
                        keep_row.append(canon[parent_local[g], rep_point[g]])
                        keep_members.append(group_members[g])
            new_gens = [gens[par] + (j,) for par, j in zip(keep_parent, keep_point)]
            if final:
                return sorted(new_gens)
            if not new_gens:
                return []
            K = len(new_gens)
            q = rrefs.shape[1]
            par_idx = np.array(keep_parent, dtype=np.int64)
            rows_new = np.array(keep_row, dtype=np.int64)  # (K, d)
            leads_new = np.array(keep_lead, dtype=np.int64)
            if q:
                par_rref = rrefs[par_idx]  # (K, q, d)
                lead_col = np.take_along_axis(
                    par_rref, leads_new[:, None, None], axis=2
                )  # (K, q, 1)
                adjusted = (par_rref - lead_col * rows_new[:, None, :]) % p
                stacked = np.concatenate([adjusted, rows_new[:, None, :]], axis=1)
                piv_new = np.concatenate(
                    [pivots[par_idx], leads_new[:, None]], axis=1
                )  # (K, q+1)
                order = np.argsort(piv_new, axis=1)
                rrefs = np.take_along_axis(stacked, order[:, :, None], axis=1)
                pivots = np.take_along_axis(piv_new, order, axis=1)
            else:
                rrefs = rows_new[:, None, :]
                pivots = leads_new[:, None]
            members = np.array(keep_members, dtype=bool)
            gens = new_gens
        return sorted(gens)


class _PyFlatEngine:
    """The same flat search in plain Python arithmetic: field ops modulo a
    large certified prime, or exact Fractions when `prime` is None."""

    def __init__(self, points: list[tuple[int, ...]], dim: int, prime: int | None):
        self.dim = dim
        self.p = prime
        if prime is None:
            self.points = [vec(pt) for pt in points]
        else:
            self.points = [tuple(a % prime for a in pt) for pt in points]

    def _inv(self, a):
        if self.p is None:
            return 1 / a
        return pow(a, self.p - 2, self.p)

    def _reduce(self, rref, pivots, pt):
        r = list(pt)
        for row, c in zip(rref, pivots):
            f = r[c]
            if f:
                if self.p is None:
                    r = [a - f * b for a, b in zip(r, row)]
                else:
                    r = [(a - f * b) % self.p for a, b in zip(r, row)]
        return r

    def hyperplane_flats(self) -> list[tuple[int, ...]]:
        target = self.dim - 1
        if target == 0:
            return [()]
        level: dict[int, tuple] = {0: ((), (), ())}
        npts = len(self.points)
        for depth in range(1, target + 1):
            final = depth == target
            nxt: dict[int, tuple] = {}
            for members, (pivots, rref, gens) in level.items():
                buckets: dict[tuple, list[tuple[int, int, tuple]]] = {}
                for j in range(npts):
                    rem = self._reduce(rref, pivots, self.points[j])
                    lead = next((i for i, a in enumerate(rem) if a), None)
                    if lead is None:
                        continue
                    inv = self._inv(rem[lead])
                    if self.p is None:
                        crow = tuple(a * inv for a in rem)
                    else:
                        crow = tuple(a * inv % self.p for a in rem)
                    buckets.setdefault(crow, []).append((j, lead, crow))
                for group in buckets.values():
                    child_members = members
                    for j, _, _ in group:
                        child_members |= 1 << j
                    if child_members in nxt:
                        continue
                    j, lead, crow = group[0]
                    child_gens = gens + (j,)
                    if final:
                        nxt[child_members] = (None, None, child_gens)
                        continue
                    out = []
                    for row, c in zip(rref, pivots):
                        f = row[lead]
                        if f:
                            if self.p is None:
                                row = tuple(a - f * b for a, b in zip(row, crow))
                            else:
                                row = tuple((a - f * b) % self.p for a, b in zip(row, crow))
                        out.append(row)
                    out.append(crow)
                    paired = sorted(zip(list(pivots) + [lead], out))
                    nxt[child_members] = (
                        tuple(c for c, _ in paired),
                        tuple(r for _, r in paired),
                        child_gens,
                    )
            level = nxt
        return sorted(v[2] for v in level.values())


def enumerate_circuits(
    system: ConstraintSystem,
    *,
    max_vars: int = DEFAULT_MAX_VARS,
    method: Literal["row-subsets", "brute-force"] = "row-subsets",
) -> tuple[Circuit, ...]:
    """All circuits of the system, one canonical-sign representative per
    +/- pair, sorted by vector.

    The default method realizes the row-subset characterization: a circuit is
    the kernel line of rows R of B with rank [A; B_R] = n - 1, and distinct
    circuits come from distinct row spans, so it suffices to enumerate the
    rank (d-1) flats of B's rows viewed inside ker(A).  The brute-force
    method exhaustively tries every row subset and keeps the candidates whose
    B-image support is minimal among all candidates; it exists as an
    independent cross-check and is only usable for small row counts.
    """
    if system.n > max_vars:
        raise CapExceededError(f"{system.n} variables exceeds cap {max_vars}")
    if method == "brute-force":
        return _enumerate_brute_force(system)

    K = kernel_basis(system.A) if system.A.rows else [
        tuple(Fraction(int(i == j)) for i in range(system.n)) for j in range(system.n)
    ]
    d = len(K)
    if d == 0:
        return ()
    if d == 1:
        g = canonical_sign(normalize_coprime(K[0]))
        return (Circuit(vector=g, zero_rows_of_B=_zero_rows(system, vec(g))),)

    points, _ = _functional_points(system, K)
    if len(points) < d - 1:
        return ()

    int_point_rows = [tuple(pt) for pt in points]
    p = _certified_prime(int_point_rows, d)
    if p is not None and _NUMPY_PRIME * _NUMPY_PRIME * d < 2**63 and _hadamard_below(
        int_point_rows, d, _NUMPY_PRIME
    ):
        engine = _NumpyFlatEngine(int_point_rows, d, _NUMPY_PRIME)
    elif p is not None:
        engine = _PyFlatEngine(int_point_rows, d, p)
    else:
        engine = _PyFlatEngine(int_point_rows, d, None)

    identity_kernel = system.A.rows == 0
    circuits: dict[tuple[int, ...], Circuit] = {}
    for gens in engine.hyperplane_flats():
        line = _int_kernel_line([points[j] for j in gens], d)
        if identity_kernel:
            g = line
        else:
            g = tuple(
                sum((c * K[t][i] for t, c in enumerate(line) if c), Fraction(0))
                for i in range(system.n)
            )
        vector = canonical_sign(normalize_coprime(g))
        if vector not in circuits:
            circuits[vector] = Circuit(
                vector=vector, zero_rows_of_B=_zero_rows(system, vector)
            )
    return tuple(sorted(circuits.values()))


def _enumerate_brute_force(system: ConstraintSystem) -> tuple[Circuit, ...]:
    m = system.B.rows
    if m > 22:
        raise CapExceededError(f"brute force over 2^{m} row subsets refused")
    candidates: dict[tuple[int, ...], frozenset[int]] = {}
    all_rows = list(range(m))
    for size in range(m + 1):
        for subset in combinations(all_rows, size):
            rows = _stacked_rows(system, subset)
            M = RatMatrix.from_rows([list(r) for r in rows], cols=system.n)
            basis = kernel_basis(M)
            if len(basis) != 1:
                continue
            vector = canonical_sign(normalize_coprime(basis[0]))
            if vector not in candidates:
                candidates[vector] = frozenset(support(system.B.mul_vec(vec(vector))))
    keep = []
    for vector, supp in candidates.items():
        if not any(other < supp for other in candidates.values()):
            keep.append(Circuit(vector=vector, zero_rows_of_B=_zero_rows(system, vec(vector))))
    return tuple(sorted(keep))


def imbalance(circuits: Iterable[Circuit]) -> ImbalanceReport:
    """kappa = max |g(i)/g(j)| over circuits g and nonzero entry pairs."""
    best: ImbalanceReport | None = None
    for c in circuits:
        nz = [(abs(a), i) for i, a in enumerate(c.vector) if a != 0]
        hi, i = max(nz)
        lo, j = min(nz)
        kappa = Fraction(hi, lo)
        if best is None or kappa > best.kappa:
            best = ImbalanceReport(kappa=kappa, witness_circuit=c, witness_indices=(i, j))
    if best is None:
        raise EmptySetError("imbalance of an empty circuit set")
    return best


# ---------------------------------------------------------------------------
# feasibility, steps, walks
# ---------------------------------------------------------------------------


def feasible_circuits_at(
    system: ConstraintSystem,
    x: Sequence[Fraction],
    pool: Iterable[Circuit],
) -> list[tuple[Circuit, int]]:
    """The circuits of the pool feasible at x, with the signs that work.

    A signed direction g is feasible iff (Bg)_i <= 0 on every inequality row
    tight at x (equality rows are preserved since A g = 0).
    """
    x = vec(x)
    if not system.is_feasible(x):
        raise InfeasiblePointError("x violates the system")
    tight = system.tight_rows(x)
    out = []
    for c in sorted(pool):
        img = system.B.mul_vec(c.as_fractions())
        for sign in (1, -1):
            if all(sign * img[i] <= 0 for i in tight):
                out.append((c, sign))
    return out


def max_step(
    system: ConstraintSystem,
    x: Sequence[Fraction],
    direction: Sequence[Fraction],
) -> Fraction | Unbounded:
    """The maximal epsilon with x + eps*direction feasible.

    Returns UNBOUNDED when no inequality row increases along the direction.
    Raises InfeasibleDirectionError when the direction leaves the polyhedron
    immediately (a tight row increases).
    """
    x = vec(x)
    direction = vec(direction)
    if not system.is_feasible(x):
        raise InfeasiblePointError("x violates the system")
    img = system.B.mul_vec(direction)
    lhs = system.B.mul_vec(x)
    best: Fraction | None = None
    for i in range(system.B.rows):
        if img[i] > 0:
            step = (system.d[i] - lhs[i]) / img[i]
            if best is None or step < best:
                best = step
    if best is None:
        return UNBOUNDED
    if best == 0:
        raise InfeasibleDirectionError("direction increases a tight row")
    return best


@dataclass(frozen=True)
class WalkTrace:
    """A circuit walk x_0 .. x_k with its signed directions and step lengths.

    circuits_used holds the signed coprime-integer direction of each step
    (either sign of a canonical circuit), so x_{i+1} = x_i + eps_i * g_i
    holds literally.
    """

    points: tuple[RatVector, ...]
    circuits_used: tuple[tuple[int, ...], ...]
    step_lengths: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.circuits_used)

    def to_json_dict(self) -> dict:
        return {
            "points": [[format_rat(a) for a in pt] for pt in self.points],
            "circuits": [list(g) for g in self.circuits_used],
            "step_lengths": [format_rat(e) for e in self.step_lengths],
        }


@dataclass(frozen=True)
class WalkSearchResult:
    status: Literal["found", "not-found", "cap-exceeded"]
    trace: WalkTrace | None
    explored: int


def walk_bfs(
    system: ConstraintSystem,
    start: Sequence[Fraction],
    target: Sequence[Fraction],
    pool: Iterable[Circuit],
    depth_cap: int = DEFAULT_DEPTH_CAP,
    integral_only: bool = False,
) -> WalkSearchResult:
    """Breadth-first search for a shortest circuit walk from start to target.

    States are exact rational points; every move is a maximal step along a
    feasible signed circuit from the pool.  With integral_only, only integral
    points are expanded (the reconfiguration regime).  The outcome
    distinguishes a cap hit from a genuinely exhausted finite state space.
    """
    start = vec(start)
    target = vec(target)
    if not system.is_feasible(start):
        raise InfeasiblePointError("start infeasible")
    if not system.is_feasible(target):
        raise InfeasiblePointError("target infeasible")
    if not system.is_extreme_point(start):
        raise ValueError("walk must start at an extreme point")

    pool = sorted(pool)
    parent: dict[RatVector, tuple[RatVector, tuple[int, ...], Fraction] | None] = {start: None}
    frontier = [start]
    depth = 0
    truncated = False

    def rebuild(pt: RatVector) -> WalkTrace:
        chain = []
        while parent[pt] is not None:
            prev, g, eps = parent[pt]
            chain.append((prev, g, eps, pt))
            pt = prev
        chain.reverse()
        points = [start] + [step[3] for step in chain]
        return WalkTrace(
            points=tuple(points),
            circuits_used=tuple(step[1] for step in chain),
            step_lengths=tuple(step[2] for step in chain),
        )

    if start == target:
        return WalkSearchResult("found", rebuild(start), explored=1)

    while frontier:
        if depth >= depth_cap:
            truncated = True
            break
        depth += 1
        nxt = []
        for x in frontier:
            if integral_only and any(a.denominator != 1 for a in x):
                continue
            for circuit, sign in feasible_circuits_at(system, x, pool):
                g = tuple(sign * a for a in circuit.vector)
                eps = max_step(system, x, vec(g))
                if eps is UNBOUNDED:
                    continue
                y = vec_add(x, vec_scale(eps, vec(g)))
                if y in parent:
                    continue
                parent[y] = (x, g, eps)
                if y == target:
                    return WalkSearchResult("found", rebuild(y), explored=len(parent))
                nxt.append(y)
        frontier = nxt
    status = "cap-exceeded" if truncated else "not-found"
    return WalkSearchResult(status, None, explored=len(parent))


@dataclass(frozen=True)
class WalkValidation:
    ok: bool
    violation: str | None = None
    step_index: int | None = None


def validate_walk(system: ConstraintSystem, trace: WalkTrace) -> WalkValidation:
    """Check the three circuit-walk conditions exactly.

    (1) every visited point is feasible; (2) each move is a positive step
    along a vector the oracle confirms as a circuit; (3) each step length is
    maximal.  The first violated condition is reported with its step index.
    """
    if len(trace.points) != len(trace.circuits_used) + 1 or len(trace.circuits_used) != len(
        trace.step_lengths
    ):
        return WalkValidation(False, "trace shape mismatch", None)
    for i, pt in enumerate(trace.points):
        if not system.is_feasible(pt):
            return WalkValidation(False, f"point {i} infeasible", i)
    for i, (g, eps) in enumerate(zip(trace.circuits_used, trace.step_lengths)):
        if eps <= 0:
            return WalkValidation(False, f"step {i} has nonpositive length", i)
        moved = vec_add(trace.points[i], vec_scale(eps, vec(g)))
        if moved != trace.points[i + 1]:
            return WalkValidation(False, f"step {i} does not reach the next point", i)
        try:
            verdict = is_circuit(system, vec(g))
        except (ZeroVectorError, NotInKernelError):
            return WalkValidation(False, f"g_{i} not a circuit", i)
        if isinstance(verdict, NotCircuit):
            return WalkValidation(False, f"g_{i} not a circuit", i)
        step = max_step(system, trace.points[i], vec(g))
        if step is UNBOUNDED or step != eps:
            return WalkValidation(False, f"step {i} not maximal", i)
    return WalkValidation(True)


def circuits_to_json(circuits: Iterable[Circuit]) -> str:
    return json.dumps([list(c.vector) for c in sorted(circuits)])


def circuits_from_json(text: str, system: ConstraintSystem) -> tuple[Circuit, ...]:
    vectors = json.loads(text)
    out = []
    for v in vectors:
        vector = canonical_sign(normalize_coprime(vec(v)))
        out.append(Circuit(vector=vector, zero_rows_of_B=_zero_rows(system, vec(vector))))
    return tuple(sorted(out))
