"""Fractional coloring polytope, its 0/1 circuits, and Kempe dynamics.

The variables of the coloring system are pairs (vertex, color), vertex-major.
The central fact implemented here: the difference of two distinct proper
colorings is a circuit exactly when the subgraph G(s) it induces is
connected, where

    V(s) = {v : s(v,i) != 0 for some i}
    E(s) = {uv in E : s(u,i) + s(v,i) = 0 and s(u,i) != 0 for some i}

and those circuits are precisely the generalized Kempe swaps: recolorings of
one connected component of the subgraph induced by a set of color classes in
which every chain vertex changes color and each chain edge hands one
endpoint's old color to the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

from .circuits import CapExceededError, Circuit, ConstraintSystem, is_circuit
from .graphs import Graph
from .ratmat import RatVector, vec


class ImproperColoringError(ValueError):
    pass


class EqualColoringsError(ValueError):
    pass


class NotIntegralError(ValueError):
    pass


class BadColorSetError(ValueError):
    pass


class BadInstanceError(ValueError):
    pass


class UnreachableError(RuntimeError):
    pass


class SwapInvalidError(ValueError):
    """A proposed generalized Kempe swap violates one of the definition's
    conditions; `reason` names the first violated one."""

    def __init__(self, reason: str):
        super().__init__(f"invalid generalized Kempe swap: {reason}")
        self.reason = reason


@dataclass(frozen=True)
class Coloring:
    assignment: tuple[int, ...]  # vertex id -> color id
    palette: tuple[int, ...]

    def __post_init__(self):
        if any(c not in self.palette for c in self.assignment):
            raise ValueError("assignment uses a color outside the palette")

    def color(self, v: int) -> int:
        return self.assignment[v]

    def is_proper(self, g: Graph) -> bool:
        return all(self.assignment[u] != self.assignment[v] for u, v in g.edges)

    def recolor(self, changes: dict[int, int]) -> "Coloring":
        new = list(self.assignment)
        for v, c in changes.items():
            new[v] = c
        return Coloring(tuple(new), self.palette)

    def to_json_dict(self) -> dict:
        return {
            "palette": list(self.palette),
            "assignment": {str(v): c for v, c in enumerate(self.assignment)},
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Coloring":
        palette = tuple(doc["palette"])
        items = sorted((int(v), c) for v, c in doc["assignment"].items())
        return cls(tuple(c for _, c in items), palette)


@dataclass(frozen=True)
class DifferenceGraph:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    s: RatVector


@dataclass(frozen=True)
class KempeChain:
    colors: tuple[int, ...]
    component_vertices: frozenset[int]


def variable_index(g: Graph, palette_size: int, v: int, color_pos: int) -> int:
    """Index of variable (v, i) in the coloring system (vertex-major)."""
    return v * palette_size + color_pos


def coloring_system(g: Graph, palette_size: int) -> ConstraintSystem:
    """The fractional coloring system: per-vertex color sums = 1, per-edge
    per-color sums <= 1, and nonnegativity."""
    if palette_size < 1:
        raise ValueError("palette_size must be >= 1")
    n = g.vertex_count * palette_size
    equalities = []
    eq_labels = []
    for v in range(g.vertex_count):
        row = [0] * n
        for i in range(palette_size):
            row[variable_index(g, palette_size, v, i)] = 1
        equalities.append((row, 1))
        eq_labels.append(f"sum[{g.vertex_name(v)}]")
    inequalities = []
    ineq_labels = []
    for i in range(palette_size):
        for u, v in g.edges:
            row = [0] * n
            row[variable_index(g, palette_size, u, i)] = 1
            row[variable_index(g, palette_size, v, i)] = 1
            inequalities.append((row, 1))
            ineq_labels.append(f"edge[{g.vertex_name(u)}{g.vertex_name(v)}:c{i}]")
    for v in range(g.vertex_count):
        for i in range(palette_size):
            row = [0] * n
            row[variable_index(g, palette_size, v, i)] = -1
            inequalities.append((row, 0))
            ineq_labels.append(f"x[{g.vertex_name(v)}:c{i}]>=0")
    labels = tuple(
        f"({g.vertex_name(v)},c{i})"
        for v in range(g.vertex_count)
        for i in range(palette_size)
    )
    return ConstraintSystem.build(
        n,
        equalities=equalities,
        inequalities=inequalities,
        variable_labels=labels,
        eq_labels=tuple(eq_labels),
        ineq_labels=tuple(ineq_labels),
    )


def char_vector(g: Graph, c: Coloring) -> RatVector:
    r = len(c.palette)
    x = [Fraction(0)] * (g.vertex_count * r)
    for v, color in enumerate(c.assignment):
        x[variable_index(g, r, v, c.palette.index(color))] = Fraction(1)
    return tuple(x)


def decode_vector(g: Graph, palette: Sequence[int], x: Sequence[Fraction]) -> Coloring:
    """Inverse of char_vector; rejects fractional input."""
    r = len(palette)
    assignment = []
    for v in range(g.vertex_count):
        block = [x[variable_index(g, r, v, i)] for i in range(r)]
        if any(a not in (0, 1) for a in block) or sum(block) != 1:
            raise NotIntegralError(f"vertex {v} block {block} is not a unit assignment")
        assignment.append(palette[block.index(1)])
    return Coloring(tuple(assignment), tuple(palette))


def _difference(g: Graph, c1: Coloring, c2: Coloring) -> RatVector:
    return tuple(
        a - b for a, b in zip(char_vector(g, c2), char_vector(g, c1), strict=True)
    )


def difference_graph(g: Graph, c1: Coloring, c2: Coloring) -> DifferenceGraph:
    """G(s) for s = X(c2) - X(c1), built from the verbatim definitions."""
    r = len(c1.palette)
    s = _difference(g, c1, c2)

    def entry(v: int, i: int) -> Fraction:
        return s[variable_index(g, r, v, i)]

    vertices = frozenset(
        v for v in range(g.vertex_count) if any(entry(v, i) != 0 for i in range(r))
    )
    edges = set()
    for u, v in g.edges:
        for i in range(r):
            if entry(u, i) != 0 and entry(u, i) + entry(v, i) == 0:
                edges.add((u, v))
                break
    return DifferenceGraph(vertices=vertices, edges=frozenset(edges), s=s)


def _graph_connected(vertices: frozenset[int], edges: frozenset[tuple[int, int]]) -> bool:
    if len(vertices) <= 1:
        return True
    adj = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == vertices


def difference_is_circuit(
    g: Graph, c1: Coloring, c2: Coloring
) -> tuple[bool, DifferenceGraph]:
    """Whether X(c2) - X(c1) is a circuit of the fractional coloring
    polytope: true exactly when G(s) is connected."""
    if c1.palette != c2.palette:
        raise BadColorSetError("colorings use different palettes")
    if not c1.is_proper(g) or not c2.is_proper(g):
        raise ImproperColoringError("both colorings must be proper")
    if c1.assignment == c2.assignment:
        raise EqualColoringsError("colorings are identical")
    dg = difference_graph(g, c1, c2)
    return _graph_connected(dg.vertices, dg.edges), dg


def kempe_chains(g: Graph, c: Coloring, colors: Sequence[int]) -> list[KempeChain]:
    """Connected components of G restricted to the given color classes."""
    colors = tuple(colors)
    if len(set(colors)) != len(colors) or len(colors) < 2:
        raise BadColorSetError("colors must be distinct and at least two")
    if any(col not in c.palette for col in colors):
        raise BadColorSetError("color outside the palette")
    keep = {v for v in range(g.vertex_count) if c.color(v) in colors}
    adj = {v: set() for v in keep}
    for u, v in g.edges:
        if u in keep and v in keep:
            adj[u].add(v)
            adj[v].add(u)
    chains = []
    seen: set[int] = set()
    for v in sorted(keep):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        chains.append(KempeChain(colors=colors, component_vertices=frozenset(comp)))
    return chains


def apply_generalized_swap(
    g: Graph, c: Coloring, chain: KempeChain, new_assignment: dict[int, int]
) -> Coloring:
    """Validate and apply a generalized Kempe swap on the given chain.

    Checks, in order: the recoloring stays on the chain (condition 1), every
    chain vertex changes color (condition 2), each chain edge passes one
    endpoint's old color to the other (condition 3), new colors stay within
    the chain's color set, and the result is proper.
    """
    if not c.is_proper(g):
        raise ImproperColoringError("base coloring must be proper")
    comp = chain.component_vertices
    if any(v not in comp for v in new_assignment):
        raise SwapInvalidError("condition 1: a vertex outside the chain changes")
    if set(new_assignment) != set(comp) or any(
        new_assignment[v] == c.color(v) for v in comp
    ):
        raise SwapInvalidError("condition 2: some chain vertex keeps its color")
    for u, v in g.edges:
        if u in comp and v in comp:
            if new_assignment[u] != c.color(v) and new_assignment[v] != c.color(u):
                raise SwapInvalidError(
                    f"condition 3: edge {g.vertex_name(u)}{g.vertex_name(v)} "
                    "inherits neither endpoint color"
                )
    if any(color not in chain.colors for color in new_assignment.values()):
        raise SwapInvalidError("colors: a new color is outside the chain's color set")
    result = c.recolor(new_assignment)
    if not result.is_proper(g):
        raise SwapInvalidError("properness: the recoloring is not proper")
    return result


@dataclass(frozen=True)
class ColoringCircuit:
    """A feasible 0/1 circuit at a proper coloring, with its swap reading."""

    vector: tuple[int, ...]
    chain: KempeChain
    new_colors: dict[int, int]
    target: Coloring


def feasible_01_circuits_at(
    g: Graph, c: Coloring, *, chain_cap: int = 8
) -> list[ColoringCircuit]:
    """All 0/1 circuits feasible at X(c) that land on a proper coloring.

    Enumerates candidate recolorings of connected vertex subsets (complete
    for proper-to-proper steps: the changed set of such a circuit spans a
    connected difference graph) and keeps those whose difference passes the
    connectivity characterization.  Every result steps with maximal length 1.
    """
    if not c.is_proper(g):
        raise ImproperColoringError("coloring must be proper")
    biggest = max(
        (len(comp) for comp in _vertex_components(g)),
        default=0,
    )
    if biggest > chain_cap:
        raise CapExceededError(
            f"a connected subset may exceed the chain cap {chain_cap}"
        )
    results = []
    for subset in g.connected_vertex_subsets(chain_cap):
        verts = sorted(subset)
        options = [[col for col in c.palette if col != c.color(v)] for v in verts]
        for choice in product(*options):
            changes = dict(zip(verts, choice))
            target = c.recolor(changes)
            if not target.is_proper(g):
                continue
            ok, dg = difference_is_circuit(g, c, target)
            if not ok or dg.vertices != frozenset(verts):
                continue
            used = tuple(
                sorted(
                    {c.color(v) for v in verts} | set(choice),
                    key=c.palette.index,
                )
            )
            chain = KempeChain(colors=used, component_vertices=frozenset(verts))
            results.append(
                ColoringCircuit(
                    vector=tuple(int(a) for a in dg.s),
                    chain=chain,
                    new_colors=changes,
                    target=target,
                )
            )
    return results


def _vertex_components(g: Graph) -> list[set[int]]:
    seen: set[int] = set()
    comps = []
    adj = g.adjacency()
    for v in range(g.vertex_count):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(comp)
    return comps


def proper_colorings(g: Graph, palette: Sequence[int]) -> Iterator[Coloring]:
    """All proper colorings over the palette, in lexicographic order."""
    palette = tuple(palette)
    adj = g.adjacency()
    assignment = [None] * g.vertex_count

    def rec(v: int) -> Iterator[Coloring]:
        if v == g.vertex_count:
            yield Coloring(tuple(assignment), palette)
            return
        for col in palette:
            if all(assignment[u] != col for u, _ in adj[v] if u < v):
                assignment[v] = col
                yield from rec(v + 1)
                assignment[v] = None

    yield from rec(0)


@dataclass(frozen=True)
class ProperWalk:
    length: int
    colorings: tuple[Coloring, ...]


def proper_walk_bfs(
    g: Graph, palette_size: int, c1: Coloring, c2: Coloring
) -> ProperWalk:
    """Shortest proper walk between two proper colorings.

    BFS over the proper colorings of the palette with adjacency given by the
    circuit characterization; by that characterization this is the shortest
    circuit walk through proper-coloring vertices.
    """
    palette = tuple(range(palette_size))
    if c1.palette != palette or c2.palette != palette:
        c1 = Coloring(c1.assignment, palette)
        c2 = Coloring(c2.assignment, palette)
    for c in (c1, c2):
        if not c.is_proper(g):
            raise ImproperColoringError("endpoint coloring is not proper")
    if c1.assignment == c2.assignment:
        return ProperWalk(0, (c1,))
    states = [c.assignment for c in proper_colorings(g, palette)]
    parent: dict[tuple[int, ...], tuple[int, ...] | None] = {c1.assignment: None}
    frontier = [c1.assignment]
    while frontier:
        nxt = []
        for a in frontier:
            ca = Coloring(a, palette)
            for b in states:
                if b in parent or b == a:
                    continue
                ok, _ = difference_is_circuit(g, ca, Coloring(b, palette))
                if ok:
                    parent[b] = a
                    if b == c2.assignment:
                        chain = [b]
                        while parent[chain[-1]] is not None:
                            chain.append(parent[chain[-1]])
                        chain.reverse()
                        cols = tuple(Coloring(s, palette) for s in chain)
                        return ProperWalk(len(cols) - 1, cols)
                    nxt.append(b)
        frontier = nxt
    raise UnreachableError("no proper walk connects the two colorings")


def reconfiguration_graph(
    g: Graph,
    palette_size: int,
    adjacency: str = "circuit",
) -> tuple[list[Coloring], list[tuple[int, int]]]:
    """Nodes and edges of the proper-coloring reconfiguration graph.

    adjacency="circuit" joins colorings one circuit step apart (generalized
    Kempe swaps); adjacency="kempe" restricts to ordinary two-color swaps.
    """
    palette = tuple(range(palette_size))
    nodes = list(proper_colorings(g, palette))
    index = {c.assignment: i for i, c in enumerate(nodes)}
    edges = []
    for i, ci in enumerate(nodes):
        for j in range(i + 1, len(nodes)):
            cj = nodes[j]
            ok, dg = difference_is_circuit(g, ci, cj)
            if not ok:
                continue
            if adjacency == "circuit":
                edges.append((i, j))
            elif adjacency == "kempe":
                used = {
                    color
                    for v in dg.vertices
                    for color in (ci.color(v), cj.color(v))
                }
                if len(used) == 2:
                    edges.append((index[ci.assignment], index[cj.assignment]))
            else:
                raise ValueError(f"unknown adjacency {adjacency!r}")
    return nodes, edges


def components_of(nodes: list, edges: list[tuple[int, int]]) -> int:
    parent = list(range(len(nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(i) for i in range(len(nodes))})


def two_step_construction(n: int, c1: Coloring, c2: Coloring, g: Graph | None = None):
    """A proper walk of length <= 2 between colorings of K_n with n colors.

    When the difference is a circuit the walk is the single step; otherwise
    the difference's arc digraph splits into t >= 2 cycles and the
    intermediate coloring rotates colors along the concatenated cycles,
    making both legs single cycles and hence circuits.
    """
    from .circuits import WalkTrace

    if g is None:
        g = Graph.complete(n)
    if g.vertex_count != n or len(g.edges) != n * (n - 1) // 2:
        raise BadInstanceError("two-step construction requires K_n")
    palette = c1.palette
    if len(palette) != n or c2.palette != palette:
        raise BadInstanceError("palette must have exactly n colors")
    for c in (c1, c2):
        if not c.is_proper(g):
            raise ImproperColoringError("colorings must be proper")
        if len(set(c.assignment)) != n:
            raise BadInstanceError("colorings of K_n with n colors are bijections")

    def trace(points: list[Coloring]) -> WalkTrace:
        xs = [char_vector(g, c) for c in points]
        dirs = []
        for a, b in zip(xs, xs[1:]):
            dirs.append(tuple(int(q - p) for p, q in zip(a, b)))
        return WalkTrace(
            points=tuple(xs),
            circuits_used=tuple(dirs),
            step_lengths=tuple(Fraction(1) for _ in dirs),
        )

    if c1.assignment == c2.assignment:
        return trace([c1])
    ok, _ = difference_is_circuit(g, c1, c2)
    if ok:
        return trace([c1, c2])

    changed = [v for v in range(n) if c1.color(v) != c2.color(v)]
    # arcs u -> v when v's target color is u's current color
    succ = {}
    for u in changed:
        for v in changed:
            if v != u and c2.color(v) == c1.color(u):
                succ[u] = v
                break
    cycles = []
    remaining = set(changed)
    while remaining:
        start = min(remaining)
        cyc = [start]
        while succ[cyc[-1]] != start:
            cyc.append(succ[cyc[-1]])
        remaining -= set(cyc)
        cycles.append(cyc)
    order = [v for cyc in cycles for v in cyc]
    rotated = {}
    for pos, v in enumerate(order):
        rotated[v] = c1.color(order[pos - 1])
    mid = c1.recolor(rotated)
    if not mid.is_proper(g):
        raise AssertionError("intermediate coloring must be proper on K_n")
    return trace([c1, mid, c2])
