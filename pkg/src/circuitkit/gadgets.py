"""Generators for the exponential-imbalance constructions and the zig-zag
polytope, plus verification of their forced halving relations.

Each gadget builds a concrete graph G_k, the inequality system whose rows are
characteristic vectors of a fixed edge-set family (stacked on an identity
block), and the seed vector whose balanced rows force every circuit supported
inside its image to halve a designated entry at each stage.  Right-hand sides
default to 1; circuits and the imbalance measure depend only on the
coefficient matrices, never on the right-hand sides, so no geometric meaning
should be read into the default polyhedron.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .circuits import ConstraintSystem
from .graphs import Graph
from .ratmat import RatMatrix, RatVector, format_rat, kernel_basis, rat, vec


class BadParameterError(ValueError):
    pass


class ConstraintFamilyKind(Enum):
    INDUCED_5_SETS = "induced-5-sets"
    PATHS_4 = "paths-4"
    ALL_SIZE_3_SETS = "all-size-3-sets"
    PATHS_3 = "paths-3"
    CYCLES_UP_TO_4 = "cycles-up-to-4"
    STARS_AT_LEAST_2 = "stars-at-least-2"
    MAXIMAL_STARS = "maximal-stars"


class GadgetKind(Enum):
    THM21 = "thm21"
    THM22 = "thm22"
    THM23 = "thm23"
    THM24 = "thm24"
    COLORING = "coloring"


@dataclass(frozen=True)
class GadgetInstance:
    graph: Graph
    system: ConstraintSystem
    seed_vector: RatVector
    # (index, index, factor): every kernel vector h supported in the seed's
    # balanced rows satisfies h[first] = factor * h[second].
    halving_pairs: tuple[tuple[int, int, Fraction], ...]
    designated_entries: tuple[int, ...]
    kind: GadgetKind
    k: int


@dataclass(frozen=True)
class HalvingReport:
    ok: bool
    kernel_dimension: int
    counterexample: RatVector | None = None
    failed_pair: tuple[int, int, Fraction] | None = None


@dataclass(frozen=True)
class ZigzagParams:
    M: Fraction
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "M", rat(self.M))
        object.__setattr__(self, "eps", rat(self.eps))
        if not (0 < self.eps <= self.M):
            raise BadParameterError("need 0 < eps <= M")


def _family_edge_sets(g: Graph, kind: ConstraintFamilyKind) -> list[tuple[int, ...]]:
    if kind is ConstraintFamilyKind.INDUCED_5_SETS:
        out = set()
        for U in combinations(range(g.vertex_count), 5):
            out.add(tuple(sorted(g.induced_edge_ids(U))))
        return sorted(out)
    if kind is ConstraintFamilyKind.PATHS_4:
        return g.simple_paths_with_edge_count(4)
    if kind is ConstraintFamilyKind.ALL_SIZE_3_SETS:
        return [tuple(c) for c in combinations(range(g.edge_count), 3)]
    if kind is ConstraintFamilyKind.PATHS_3:
        return g.simple_paths_with_edge_count(3)
    if kind is ConstraintFamilyKind.CYCLES_UP_TO_4:
        return g.cycles_with_max_edge_count(4)
    if kind is ConstraintFamilyKind.STARS_AT_LEAST_2:
        return g.star_edge_sets(2)
    if kind is ConstraintFamilyKind.MAXIMAL_STARS:
        return g.star_edge_sets(1, maximal_only=True)
    raise BadParameterError(f"unknown family {kind}")


def build_family_system(
    g: Graph,
    kind: ConstraintFamilyKind,
    rhs: Fraction | int = 1,
) -> ConstraintSystem:
    """The inequality system whose rows are the family's characteristic
    vectors over E(G), stacked on an identity block.

    Empty and duplicate rows are removed (a family member equal to a single
    edge duplicates an identity row).  All right-hand sides default to 1.
    """
    n = g.edge_count
    rows: list[tuple[int, ...]] = []
    labels: list[str] = []
    seen: set[tuple[int, ...]] = set()
    for edge_set in _family_edge_sets(g, kind):
        if not edge_set:
            continue
        row = tuple(1 if e in edge_set else 0 for e in range(n))
        if row in seen:
            continue
        seen.add(row)
        rows.append(row)
        labels.append("H{" + ",".join(g.edge_name(e) for e in edge_set) + "}")
    for e in range(n):
        row = tuple(1 if i == e else 0 for i in range(n))
        if row in seen:
            continue
        seen.add(row)
        rows.append(row)
        labels.append(f"x[{g.edge_name(e)}]")
    return ConstraintSystem.build(
        n,
        inequalities=[(row, rhs) for row in rows],
        variable_labels=tuple(g.edge_name(e) for e in range(n)),
        ineq_labels=tuple(labels),
    )


def _pow_neg_half(i: int) -> Fraction:
    return Fraction(1, 1) * Fraction(-1, 2) ** i


def _thm21_graph(k: int) -> tuple[Graph, dict[str, int]]:
    names = ["w0"]
    for i in range(1, k + 1):
        names += [f"t{i}", f"u{i}", f"v{i}", f"w{i}"]
    idx = {name: j for j, name in enumerate(names)}
    edges = []
    for i in range(1, k + 1):
        edges += [
            (idx[f"t{i}"], idx[f"u{i}"]),
            (idx[f"t{i}"], idx[f"v{i}"]),
            (idx[f"v{i}"], idx[f"w{i}"]),
            (idx[f"u{i}"], idx[f"w{i}"]),
        ]
    for i in range(k):
        edges.append((idx[f"w{i}"], idx[f"t{i + 1}"]))
    return Graph(len(names), tuple(edges), vertex_names=tuple(names)), idx


def _thm22_graph(k: int) -> tuple[Graph, dict[str, int]]:
    names = ["u0"]
    for i in range(1, k + 1):
        names += [f"t{i}", f"u{i}", f"v{i}", f"w{i}"]
    idx = {name: j for j, name in enumerate(names)}
    edges = []
    for i in range(1, k + 1):
        edges += [
            (idx[f"u{i - 1}"], idx[f"t{i}"]),
            (idx[f"t{i}"], idx[f"u{i}"]),
            (idx[f"u{i}"], idx[f"v{i}"]),
            (idx[f"v{i}"], idx[f"w{i}"]),
        ]
    return Graph(len(names), tuple(edges), vertex_names=tuple(names)), idx


def _ladder_graph(k: int, cross_all: bool) -> tuple[Graph, dict[str, int]]:
    names = []
    for i in range(k + 1):
        names += [f"u{i}", f"v{i}"]
    idx = {name: j for j, name in enumerate(names)}
    edges = []
    for i in range(k):
        edges.append((idx[f"u{i}"], idx[f"v{i}"]))
        if cross_all:
            edges += [
                (idx[f"u{i}"], idx[f"u{i + 1}"]),
                (idx[f"u{i}"], idx[f"v{i + 1}"]),
                (idx[f"v{i}"], idx[f"u{i + 1}"]),
                (idx[f"v{i}"], idx[f"v{i + 1}"]),
            ]
        else:
            edges += [
                (idx[f"v{i}"], idx[f"u{i + 1}"]),
                (idx[f"v{i}"], idx[f"v{i + 1}"]),
            ]
    edges.append((idx[f"u{k}"], idx[f"v{k}"]))
    return Graph(len(names), tuple(edges), vertex_names=tuple(names)), idx


def _coloring_gadget_graph(t: int) -> tuple[Graph, dict[str, int]]:
    names = []
    for i in range(t + 1):
        names += [f"u{i}", f"v{i}", f"w{i}"]
    idx = {name: j for j, name in enumerate(names)}
    edges = []
    for i in range(t):
        edges += [
            (idx[f"u{i}"], idx[f"v{i}"]),
            (idx[f"v{i}"], idx[f"w{i}"]),
            (idx[f"w{i}"], idx[f"u{i}"]),
            (idx[f"v{i}"], idx[f"u{i + 1}"]),
        ]
    edges += [
        (idx[f"u{t}"], idx[f"v{t}"]),
        (idx[f"v{t}"], idx[f"w{t}"]),
        (idx[f"w{t}"], idx[f"u{t}"]),
    ]
    return Graph(len(names), tuple(edges), vertex_names=tuple(names)), idx


def gadget(kind: GadgetKind, k: int) -> GadgetInstance:
    """Build the graph G_k, system, and seed vector of one construction.

    The seed vector reproduces the figure of the corresponding proof; each
    halving pair (i, j, f) records the forced relation h(i) = f * h(j) that
    verify_halving checks on the kernel of the seed's balanced rows.  The
    coloring gadget (k odd, >= 3) works over the 4-color coloring system and
    forces a factor-4 ratio at stride two.
    """
    if kind is GadgetKind.COLORING:
        if k < 3 or k % 2 == 0:
            raise BadParameterError("coloring gadget needs odd k >= 3")
        return _coloring_gadget(k)
    if k < 1:
        raise BadParameterError("k must be >= 1")
    if kind is GadgetKind.THM21:
        g, idx = _thm21_graph(k)
        seed = [Fraction(0)] * g.edge_count
        for i in range(k):
            seed[g.edge_id(idx[f"w{i}"], idx[f"t{i + 1}"])] = _pow_neg_half(i)
        for i in range(1, k + 1):
            seed[g.edge_id(idx[f"u{i}"], idx[f"w{i}"])] = _pow_neg_half(i)
            seed[g.edge_id(idx[f"v{i}"], idx[f"w{i}"])] = _pow_neg_half(i)
        designated = tuple(g.edge_id(idx[f"w{i}"], idx[f"t{i + 1}"]) for i in range(k))
        pairs = tuple(
            (designated[i - 1], designated[i], Fraction(-2)) for i in range(1, k)
        )
        system = build_family_system(g, ConstraintFamilyKind.INDUCED_5_SETS)
    elif kind is GadgetKind.THM22:
        g, idx = _thm22_graph(k)
        seed = [Fraction(0)] * g.edge_count
        for i in range(1, k + 1):
            seed[g.edge_id(idx[f"u{i - 1}"], idx[f"t{i}"])] = _pow_neg_half(i - 1)
            seed[g.edge_id(idx[f"t{i}"], idx[f"u{i}"])] = _pow_neg_half(i)
            seed[g.edge_id(idx[f"u{i}"], idx[f"v{i}"])] = _pow_neg_half(i)
            seed[g.edge_id(idx[f"v{i}"], idx[f"w{i}"])] = _pow_neg_half(i - 1)
        designated = tuple(
            g.edge_id(idx[f"u{i - 1}"], idx[f"t{i}"]) for i in range(1, k + 1)
        )
        pairs = tuple(
            (designated[i - 1], designated[i], Fraction(-2)) for i in range(1, k)
        )
        system = build_family_system(g, ConstraintFamilyKind.PATHS_3)
    elif kind is GadgetKind.THM23:
        g, idx = _ladder_graph(k, cross_all=True)
        seed = [Fraction(0)] * g.edge_count
        for i in range(k + 1):
            seed[g.edge_id(idx[f"u{i}"], idx[f"v{i}"])] = _pow_neg_half(i)
        for i in range(1, k + 1):
            seed[g.edge_id(idx[f"u{i - 1}"], idx[f"u{i}"])] = _pow_neg_half(i)
            seed[g.edge_id(idx[f"v{i - 1}"], idx[f"u{i}"])] = _pow_neg_half(i)
        designated = tuple(g.edge_id(idx[f"u{i}"], idx[f"v{i}"]) for i in range(k + 1))
        pairs = tuple(
            (designated[i], designated[i + 1], Fraction(-2)) for i in range(k)
        )
        system = build_family_system(g, ConstraintFamilyKind.CYCLES_UP_TO_4)
    elif kind is GadgetKind.THM24:
        g, idx = _ladder_graph(k, cross_all=False)
        seed = [Fraction(0)] * g.edge_count
        for i in range(k + 1):
            seed[g.edge_id(idx[f"u{i}"], idx[f"v{i}"])] = Fraction(1, 2**i)
        for i in range(1, k + 1):
            seed[g.edge_id(idx[f"v{i - 1}"], idx[f"u{i}"])] = -Fraction(1, 2**i)
            seed[g.edge_id(idx[f"v{i - 1}"], idx[f"v{i}"])] = -Fraction(1, 2**i)
        designated = tuple(g.edge_id(idx[f"u{i}"], idx[f"v{i}"]) for i in range(k + 1))
        pairs = tuple(
            (designated[i], designated[i + 1], Fraction(2)) for i in range(k)
        )
        system = build_family_system(g, ConstraintFamilyKind.STARS_AT_LEAST_2)
    else:
        raise BadParameterError(f"unknown gadget kind {kind}")
    return GadgetInstance(
        graph=g,
        system=system,
        seed_vector=tuple(seed),
        halving_pairs=pairs,
        designated_entries=designated,
        kind=kind,
        k=k,
    )


def _coloring_gadget(t: int) -> GadgetInstance:
    from .coloring import coloring_system, variable_index

    g, idx = _coloring_gadget_graph(t)
    palette = 4  # colors a, b, c, d
    system = coloring_system(g, palette)
    A_COL, B_COL, C_COL, D_COL = 0, 1, 2, 3
    seed = [Fraction(0)] * system.n

    def put(vertex: str, color: int, value: Fraction):
        seed[variable_index(g, palette, idx[vertex], color)] = value

    for i in range(0, t, 2):
        lo = Fraction(1, 2**i)
        put(f"u{i}", A_COL, lo)
        put(f"u{i}", B_COL, -lo / 2)
        put(f"u{i}", C_COL, -lo / 2)
        put(f"v{i}", B_COL, lo / 2)
        put(f"v{i}", C_COL, -lo / 2)
        put(f"w{i}", B_COL, -lo / 2)
        put(f"w{i}", C_COL, lo / 2)
        put(f"u{i + 1}", A_COL, -lo / 4)
        put(f"u{i + 1}", C_COL, lo / 2)
        put(f"u{i + 1}", D_COL, -lo / 4)
        put(f"v{i + 1}", A_COL, -lo / 4)
        put(f"v{i + 1}", D_COL, lo / 4)
        put(f"w{i + 1}", A_COL, lo / 4)
        put(f"w{i + 1}", D_COL, -lo / 4)
    designated = tuple(
        variable_index(g, palette, idx[f"u{i}"], A_COL) for i in range(t + 1)
    )
    pairs = tuple(
        (designated[i], designated[i + 2], Fraction(4)) for i in range(t - 2)
    )
    return GadgetInstance(
        graph=g,
        system=system,
        seed_vector=tuple(seed),
        halving_pairs=pairs,
        designated_entries=designated,
        kind=GadgetKind.COLORING,
        k=t,
    )


def verify_halving(inst: GadgetInstance) -> HalvingReport:
    """Check the forced ratio relations on the kernel of the seed's zero rows.

    Stacks A (when present) on the rows of B whose image of the seed vector
    vanishes, computes an exact kernel basis, and checks h[i] = f * h[j] for
    every halving pair on every basis vector.  Relations are linear, so a
    basis check covers the whole kernel; a failing basis vector is returned
    as the counterexample.
    """
    system = inst.system
    img = system.B.mul_vec(inst.seed_vector)
    zero_rows = [system.B.data[i] for i, a in enumerate(img) if a == 0]
    stacked = RatMatrix.from_rows(
        [list(r) for r in list(system.A.data) + zero_rows], cols=system.n
    )
    basis = kernel_basis(stacked)
    for h in basis:
        for i, j, f in inst.halving_pairs:
            if h[i] != f * h[j]:
                return HalvingReport(
                    ok=False,
                    kernel_dimension=len(basis),
                    counterexample=h,
                    failed_pair=(i, j, f),
                )
    return HalvingReport(ok=True, kernel_dimension=len(basis))


def zigzag_system(params: ZigzagParams) -> tuple[ConstraintSystem, tuple[RatVector, ...]]:
    """The quadrilateral conv{(0,0), (e,0), (M+1+e,M), (M+1+e,M+e)} as four
    facet inequalities, plus its vertex list.

    Its 0/1 circuits are exactly +-(1,0) and +-(0,1); the two long edges
    contribute circuit directions (M+1, M) and (M+1+e, M+e).
    """
    M, e = params.M, params.eps
    vertices = (
        vec([0, 0]),
        vec([e, 0]),
        vec([M + 1 + e, M]),
        vec([M + 1 + e, M + e]),
    )
    inequalities = [
        ([0, -1], 0),                      # bottom edge: y >= 0
        ([M, -(M + 1)], M * e),            # lower-right edge through (e,0), (M+1+e,M)
        ([1, 0], M + 1 + e),               # right edge: x <= M+1+e
        ([-(M + e), M + 1 + e], 0),        # upper edge through (0,0), (M+1+e,M+e)
    ]
    system = ConstraintSystem.build(
        2,
        inequalities=inequalities,
        variable_labels=("x", "y"),
        ineq_labels=("bottom", "lower-right", "right", "upper"),
    )
    for v in vertices:
        if not system.is_extreme_point(v):
            raise AssertionError(f"zigzag vertex {v} is not extreme")
    return system, vertices
