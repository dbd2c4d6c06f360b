"""Simple loop-free undirected graphs with stable integer ids.

Vertices are 0..n-1; an edge's id is its index in the `edges` tuple, which is
stable across everything built from the graph (constraint rows, circuit
coordinates, walk traces).  Optional name strings exist purely to keep
counterexamples legible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    pass


class LoopEdgeError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    vertex_names: tuple[str, ...] | None = None
    edge_names: tuple[str, ...] | None = None

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise LoopEdgeError(f"loop edge ({u},{v})")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphError(f"edge ({u},{v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge ({u},{v})")
            seen.add(key)
        object.__setattr__(self, "edges", tuple((min(u, v), max(u, v)) for u, v in self.edges))
        if self.vertex_names is not None and len(self.vertex_names) != self.vertex_count:
            raise GraphError("vertex name count mismatch")
        if self.edge_names is not None and len(self.edge_names) != len(self.edges):
            raise GraphError("edge name count mismatch")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw) -> "Graph":
        return cls(n, tuple(edges), **kw)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple(combinations(range(n), 2)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, tuple((i, (i + 1) % n) for i in range(n)))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int:
        key = (min(u, v), max(u, v))
        try:
            return self.edges.index(key)
        except ValueError:
            raise GraphError(f"no edge ({u},{v})") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in set(self.edges)

    def vertex_name(self, v: int) -> str:
        return self.vertex_names[v] if self.vertex_names else str(v)

    def edge_name(self, e: int) -> str:
        if self.edge_names:
            return self.edge_names[e]
        u, v = self.edges[e]
        return f"{self.vertex_name(u)}{self.vertex_name(v)}"

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per-vertex list of (neighbor, edge id)."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for e, (u, v) in enumerate(self.edges):
            adj[u].append((v, e))
            adj[v].append((u, e))
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for u, w in self.edges if v in (u, w))

    def induced_edge_ids(self, vertices: Iterable[int]) -> tuple[int, ...]:
        vs = set(vertices)
        return tuple(e for e, (u, v) in enumerate(self.edges) if u in vs and v in vs)

    def edge_vertices(self, edge_ids: Iterable[int]) -> frozenset[int]:
        out = set()
        for e in edge_ids:
            u, v = self.edges[e]
            out.add(u)
            out.add(v)
        return frozenset(out)

    # -- connectivity over edge subsets ------------------------------------

    def edge_components(self, edge_ids: Iterable[int]) -> list[frozenset[int]]:
        """Connected components of the subgraph formed by the given edges,
        returned as frozensets of edge ids (deterministic order)."""
        edge_ids = sorted(set(edge_ids))
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in edge_ids:
            u, v = self.edges[e]
            for z in (u, v):
                parent.setdefault(z, z)
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        groups: dict[int, set[int]] = {}
        for e in edge_ids:
            root = find(self.edges[e][0])
            groups.setdefault(root, set()).add(e)
        comps = [frozenset(g) for g in groups.values()]
        comps.sort(key=min)
        return comps

    def edges_connected(self, edge_ids: Iterable[int]) -> bool:
        comps = self.edge_components(edge_ids)
        return len(comps) <= 1

    def edge_set_diameter(self, edge_ids: Iterable[int]) -> int | None:
        """Graph diameter of the subgraph on exactly these edges (and the
        vertices they cover); None when that subgraph is disconnected."""
        edge_ids = sorted(set(edge_ids))
        if not edge_ids:
            return 0
        verts = sorted(self.edge_vertices(edge_ids))
        adj = {v: [] for v in verts}
        for e in edge_ids:
            u, v = self.edges[e]
            adj[u].append(v)
            adj[v].append(u)
        best = 0
        for s in verts:
            dist = {s: 0}
            queue = [s]
            for x in queue:
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        queue.append(y)
            if len(dist) < len(verts):
                return None
            best = max(best, max(dist.values()))
        return best

    def is_forest(self, edge_ids: Iterable[int]) -> bool:
        edge_ids = sorted(set(edge_ids))
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in edge_ids:
            u, v = self.edges[e]
            for z in (u, v):
                parent.setdefault(z, z)
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def forests(self) -> Iterator[frozenset[int]]:
        """All forests (edge subsets without cycles), including the empty one."""
        m = self.edge_count
        stack: list[tuple[int, frozenset[int]]] = [(0, frozenset())]
        yield frozenset()
        while stack:
            start, current = stack.pop()
            for e in range(start, m):
                cand = current | {e}
                if self.is_forest(cand):
                    yield cand
                    stack.append((e + 1, cand))

    def connected_vertex_subsets(self, max_size: int) -> Iterator[frozenset[int]]:
        """Connected subsets of vertices, by increasing size, each once."""
        adj = self.adjacency()
        found: set[frozenset[int]] = set()
        level = [frozenset([v]) for v in range(self.vertex_count)]
        for s in level:
            found.add(s)
            yield s
        for _ in range(max_size - 1):
            nxt = []
            for s in level:
                border = set()
                for v in s:
                    border.update(u for u, _ in adj[v])
                for u in sorted(border - s):
                    cand = s | {u}
                    if cand not in found:
                        found.add(cand)
                        nxt.append(cand)
                        yield cand
            level = nxt

    # -- family enumeration (rows of the gadget systems) -------------------

    def simple_paths_with_edge_count(self, k: int) -> list[tuple[int, ...]]:
        """Edge-id sets of simple paths with exactly k edges, deduplicated."""
        adj = self.adjacency()
        out: set[tuple[int, ...]] = set()

        def extend(last: int, visited: list[int], edges_used: list[int]):
            if len(edges_used) == k:
                out.add(tuple(sorted(edges_used)))
                return
            for nb, e in adj[last]:
                if nb not in visited:
                    extend(nb, visited + [nb], edges_used + [e])

        for v in range(self.vertex_count):
            extend(v, [v], [])
        return sorted(out)

    def cycles_with_max_edge_count(self, k: int) -> list[tuple[int, ...]]:
        """Edge-id sets of simple cycles with 3..k edges."""
        adj = self.adjacency()
        out: set[tuple[int, ...]] = set()

        def extend(start: int, last: int, visited: list[int], edges_used: list[int]):
            for nb, e in adj[last]:
                if nb == start and len(edges_used) >= 2:
                    out.add(tuple(sorted(edges_used + [e])))
                elif nb not in visited and nb > start and len(edges_used) < k - 1:
                    extend(start, nb, visited + [nb], edges_used + [e])

        for v in range(self.vertex_count):
            extend(v, v, [v], [])
        return sorted(out)

    def star_edge_sets(self, min_size: int, maximal_only: bool = False) -> list[tuple[int, ...]]:
        out: set[tuple[int, ...]] = set()
        adj = self.adjacency()
        for v in range(self.vertex_count):
            incident = sorted(e for _, e in adj[v])
            if maximal_only:
                if len(incident) >= 1:
                    out.add(tuple(incident))
                continue
            for size in range(min_size, len(incident) + 1):
                for comb in combinations(incident, size):
                    out.add(comb)
        return sorted(out)

    def chromatic_number(self) -> int:
        """Exhaustive chromatic number; plumbing for small test instances only."""
        if self.vertex_count == 0:
            return 0
        if not self.edges:
            return 1
        for t in range(2, self.vertex_count + 1):
            if _colorable(self, t):
                return t
        return self.vertex_count

    def spanning_forests(self) -> Iterator[frozenset[int]]:
        """Forests with one tree per connected component of the graph."""
        comp_count = len(self.edge_components(range(self.edge_count)))
        isolated = self.vertex_count - len(self.edge_vertices(range(self.edge_count)))
        target = self.vertex_count - comp_count - isolated
        for f in self.forests():
            if len(f) == target:
                yield f


def _colorable(g: Graph, t: int) -> bool:
    adj = g.adjacency()
    colors = [-1] * g.vertex_count

    def rec(v: int) -> bool:
        if v == g.vertex_count:
            return True
        used = {colors[u] for u, _ in adj[v] if colors[u] >= 0}
        for c in range(t):
            if c not in used:
                colors[v] = c
                if rec(v + 1):
                    return True
                colors[v] = -1
        return False

    return rec(0)


def parse_graph_text(text: str) -> Graph:
    """Parse a plain edge list: one "u v" pair per line, '#' comments."""
    edges = []
    max_v = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(lineno, f"expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(lineno, f"non-integer vertex in {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphParseError(lineno, "vertices must be nonnegative")
        if u == v:
            raise LoopEdgeError(f"line {lineno}: loop edge {u} {v}")
        if (min(u, v), max(u, v)) in {(min(a, b), max(a, b)) for a, b in edges}:
            raise DuplicateEdgeError(f"line {lineno}: duplicate edge {u} {v}")
        edges.append((u, v))
        max_v = max(max_v, u, v)
    return Graph(max_v + 1 if edges else 0, tuple(edges))


class GraphParseError(GraphError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
