"""Simple undirected graphs on at most 64 vertices.

Adjacency is a tuple of integer bitmasks, one per vertex, which keeps
neighbourhood comparisons (duplicate-vertex detection) and BFS loops cheap.
Vertices are always 0..n-1; no loops, no multi-edges, no weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Graph",
    "BipartiteSplit",
    "DuplicateClass",
    "from_edge_list",
    "union_disjoint",
    "components",
    "is_connected",
    "bipartite_split",
    "diameter",
    "duplicate_classes",
    "common_neighbors",
    "induced_subgraph",
    "is_complete_multipartite",
    "complement_graph",
    "to_graph6",
    "from_graph6",
    "to_json_dict",
    "from_json_dict",
]

MAX_VERTICES = 64


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph; `adj[v]` is the neighbour bitmask of v."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in [0, {MAX_VERTICES}]")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"vertex {v} has neighbours outside 0..{self.n - 1}")
            if row >> v & 1:
                raise ValueError(f"loop at vertex {v}")
        for v in range(self.n):
            for u in range(v + 1, self.n):
                if (self.adj[v] >> u & 1) != (self.adj[u] >> v & 1):
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")

    # -- basic queries -------------------------------------------------

    def degree(self, v: int) -> int:
        return int(self.adj[v]).bit_count()

    def degrees(self) -> np.ndarray:
        return np.array([int(r).bit_count() for r in self.adj], dtype=np.int64)

    @property
    def m(self) -> int:
        """Edge count."""
        return sum(int(r).bit_count() for r in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> Iterator[int]:
        row = self.adj[v]
        while row:
            low = row & -row
            yield low.bit_length() - 1
            row ^= low

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            row = self.adj[u] >> (u + 1) << (u + 1)
            while row:
                low = row & -row
                yield (u, low.bit_length() - 1)
                row ^= low

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges():
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        """New graph with the given edges added (endpoints must exist)."""
        rows = list(self.adj)
        for u, v in extra:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))


@dataclass(frozen=True)
class BipartiteSplit:
    """Vertex bipartition as two disjoint covering bitmasks."""

    part1: int
    part2: int

    def sides(self, n: int) -> tuple[list[int], list[int]]:
        return (_mask_vertices(self.part1), _mask_vertices(self.part2))


@dataclass(frozen=True)
class DuplicateClass:
    """Maximal set of >= 2 vertices sharing a neighbourhood.

    kind "independent": identical open neighbourhoods (members pairwise
    non-adjacent); kind "clique": identical closed neighbourhoods (members
    pairwise adjacent).  `outside_degree` is the number of neighbours each
    member has outside the class; it is required to be >= 1, so classes never
    form an isolated component on their own.
    """

    vertices: tuple[int, ...]
    kind: str
    outside_degree: int

    def __post_init__(self):
        if self.kind not in ("independent", "clique"):
            raise ValueError(f"unknown duplicate-class kind {self.kind!r}")
        if len(self.vertices) < 2:
            raise ValueError("duplicate class needs at least two vertices")
        if self.outside_degree < 1:
            raise ValueError("duplicate class must have outside neighbours")

    @property
    def size(self) -> int:
        return len(self.vertices)


def _mask_vertices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph from vertex count and an iterable of (u, v) pairs.

    Repeated edges collapse; loops and out-of-range endpoints raise.
    """
    rows = [0] * n
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def union_disjoint(a: Graph, b: Graph) -> Graph:
    """Disjoint union; b's vertices are shifted up by a.n."""
    if a.n + b.n > MAX_VERTICES:
        raise ValueError("union exceeds the vertex limit")
    rows = list(a.adj) + [row << a.n for row in b.adj]
    return Graph(a.n + b.n, tuple(rows))


def _bfs_mask(g: Graph, start: int) -> int:
    """Bitmask of all vertices reachable from start."""
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= g.adj[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def components(g: Graph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by least vertex."""
    remaining = (1 << g.n) - 1
    out = []
    while remaining:
        start = (remaining & -remaining).bit_length() - 1
        mask = _bfs_mask(g, start)
        out.append(_mask_vertices(mask))
        remaining &= ~mask
    return out


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return _bfs_mask(g, 0) == (1 << g.n) - 1


def bipartite_split(g: Graph) -> BipartiteSplit | None:
    """Two-colouring as a BipartiteSplit, or None if an odd cycle exists.

    For disconnected graphs every component is coloured independently; the
    returned split puts each component's colour-0 side (the side containing
    its least vertex) into part1.
    """
    color = [-1] * g.n
    part = [0, 0]
    for s in range(g.n):
        if color[s] != -1:
            continue
        color[s] = 0
        part[0] |= 1 << s
        frontier = [s]
        while frontier:
            nxt = []
            for v in frontier:
                cv = color[v]
                for u in g.neighbors(v):
                    if color[u] == -1:
                        color[u] = 1 - cv
                        part[1 - cv] |= 1 << u
                        nxt.append(u)
                    elif color[u] == cv:
                        return None
            frontier = nxt
    return BipartiteSplit(part1=part[0], part2=part[1])


def _ecc(g: Graph, start: int) -> int:
    seen = 1 << start
    frontier = seen
    dist = 0
    while True:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= g.adj[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        if not frontier:
            return dist
        seen |= frontier
        dist += 1


def diameter(g: Graph) -> int:
    """Longest shortest path; raises on disconnected input."""
    if not is_connected(g):
        raise ValueError("diameter is undefined for disconnected graphs")
    if g.n == 0:
        raise ValueError("diameter is undefined for the empty graph")
    return max(_ecc(g, v) for v in range(g.n))


def duplicate_classes(g: Graph) -> list[DuplicateClass]:
    """All maximal duplicate-vertex classes of both kinds.

    Vertices u, v land in the same independent class when adj[u] == adj[v]
    (which forces u !~ v), and in the same clique class when their closed
    neighbourhoods adj[v] | 1<<v coincide (forcing u ~ v).  Classes of size
    one are dropped, as are classes with no neighbours outside themselves.
    """
    out: list[DuplicateClass] = []
    open_groups: dict[int, list[int]] = {}
    for v in range(g.n):
        open_groups.setdefault(g.adj[v], []).append(v)
    for mask, verts in open_groups.items():
        if len(verts) < 2:
            continue
        outside = int(mask).bit_count()  # open neighbourhood excludes the class
        if outside < 1:
            continue
        out.append(DuplicateClass(tuple(verts), "independent", outside))

    closed_groups: dict[int, list[int]] = {}
    for v in range(g.n):
        closed_groups.setdefault(g.adj[v] | (1 << v), []).append(v)
    for mask, verts in closed_groups.items():
        if len(verts) < 2:
            continue
        class_mask = 0
        for v in verts:
            class_mask |= 1 << v
        outside = int(mask & ~class_mask).bit_count()
        if outside < 1:
            continue
        out.append(DuplicateClass(tuple(verts), "clique", outside))
    out.sort(key=lambda c: (c.vertices[0], c.kind))
    return out


def common_neighbors(g: Graph, u: int, v: int) -> list[int]:
    """Vertices adjacent to both u and v, ascending."""
    return _mask_vertices(g.adj[u] & g.adj[v])


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> Graph:
    """Induced subgraph; vertex i of the result is vertices[i]."""
    verts = list(vertices)
    if len(set(verts)) != len(verts):
        raise ValueError("duplicate vertices")
    pos = {v: i for i, v in enumerate(verts)}
    edges = []
    for i, v in enumerate(verts):
        for u in g.neighbors(v):
            if u in pos and pos[u] > i:
                edges.append((i, pos[u]))
    return from_edge_list(len(verts), edges)


def complement_graph(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    rows = tuple((full & ~g.adj[v]) & ~(1 << v) for v in range(g.n))
    return Graph(g.n, rows)


def is_complete_multipartite(g: Graph) -> tuple[int, ...] | None:
    """Part sizes (ascending) if g is complete multipartite, else None.

    A graph is complete multipartite exactly when its complement is a
    disjoint union of cliques; the parts are the complement's components.
    Works for r = 1 (edgeless) through r = n (complete).
    """
    if g.n == 0:
        return None
    comp = complement_graph(g)
    parts = []
    for verts in components(comp):
        k = len(verts)
        for v in verts:
            if int(comp.adj[v]).bit_count() != k - 1:
                return None
        parts.append(k)
    return tuple(sorted(parts))


# -- serialization -----------------------------------------------------


def to_graph6(g: Graph) -> str:
    """Encode in graph6 (printable-ASCII) form; supports n <= 62."""
    n = g.n
    if n > 62:
        raise ValueError("graph6 encoding here only supports n <= 62")
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = val << 1 | b
        out.append(chr(val + 63))
    return "".join(out)


def from_graph6(s: str) -> Graph:
    """Decode a graph6 string (optionally prefixed with '>>graph6<<')."""
    s = s.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    if not s:
        raise ValueError("empty graph6 string")
    data = [ord(c) - 63 for c in s]
    if data[0] < 0 or data[0] > 62:
        raise ValueError("unsupported graph6 order byte")
    n = data[0]
    need = (n * (n - 1) // 2 + 5) // 6
    body = data[1:]
    if len(body) != need:
        raise ValueError(
            f"graph6 body length {len(body)} does not match order {n} (need {need})"
        )
    if any(b < 0 or b > 63 for b in body):
        raise ValueError("graph6 characters out of range")
    bits = []
    for val in body:
        for shift in range(5, -1, -1):
            bits.append(val >> shift & 1)
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    return from_edge_list(n, edges)


def to_json_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}


def from_json_dict(d: dict) -> Graph:
    if "n" not in d or "edges" not in d:
        raise ValueError('graph JSON needs "n" and "edges" keys')
    return from_edge_list(int(d["n"]), d["edges"])
