"""Zero-divisor graphs and their brute-force metric invariants.

This module is the ground truth the structural classifier is checked
against, so nothing here knows anything about amalgamations: vertices are
the nonzero zero-divisors of an arbitrary finite ring and every invariant
is computed directly from the adjacency relation.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import InvalidVertexError, TheoremViolationError
from .rings import Element, FiniteRing, zero_divisors_mask


class ZeroDivisorGraph:
    """Vertices: nonzero zero-divisors; x adjacent y iff x != y and xy = 0."""

    def __init__(self, ring: FiniteRing):
        self.ring = ring
        zd = zero_divisors_mask(ring).copy()
        zd[ring.zero] = False
        self.vertices = np.flatnonzero(zd).astype(np.int64)
        v = len(self.vertices)
        adj = ring.mul[np.ix_(self.vertices, self.vertices)].astype(np.int64) == ring.zero
        np.fill_diagonal(adj, False)
        adj.setflags(write=False)
        self.adj = adj
        self._pos = {int(x): i for i, x in enumerate(self.vertices)}
        self._neighbors: list[np.ndarray] | None = None

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return int(self.adj.sum()) // 2

    def vertex_names(self) -> tuple[str, ...]:
        return tuple(self.ring.names[int(x)] for x in self.vertices)

    def vertex_elements(self) -> tuple[Element, ...]:
        return tuple(Element(self.ring, int(x)) for x in self.vertices)

    def _position(self, x) -> int:
        if isinstance(x, Element):
            if x.ring is not self.ring:
                raise InvalidVertexError(
                    f"element of {x.ring.label} is not a vertex of this graph"
                )
            idx = x.index
        else:
            idx = int(x)
        pos = self._pos.get(idx)
        if pos is None:
            raise InvalidVertexError(
                f"{self.ring.names[idx] if 0 <= idx < self.ring.size else idx!r} "
                "is not a vertex (not a nonzero zero-divisor)"
            )
        return pos

    def neighbor_lists(self) -> list[np.ndarray]:
        if self._neighbors is None:
            self._neighbors = [np.flatnonzero(row) for row in self.adj]
        return self._neighbors

    def __repr__(self) -> str:
        return f"ZeroDivisorGraph({self.ring.label}, V={self.vertex_count}, E={self.edge_count})"


def build_gamma(ring: FiniteRing) -> ZeroDivisorGraph:
    return ZeroDivisorGraph(ring)


def _reach_layers(g: ZeroDivisorGraph):
    """Adjacency-within-1, -2, -3 steps, via batched BFS levels.

    One boolean matrix product is one BFS level expanded for every source at
    once; paths here never need more than three steps on a valid ring.
    """
    a = g.adj
    af = a.astype(np.float32)
    a2 = (af @ af) > 0
    reach2 = a | a2
    a3 = (af @ reach2.astype(np.float32)) > 0
    reach3 = reach2 | a3
    return a, reach2, reach3


def diameter(g: ZeroDivisorGraph) -> int | None:
    """Largest pairwise distance; None for the empty graph.

    Asserts the two facts every zero-divisor graph of a commutative ring
    satisfies: connectedness and diameter at most 3.  A violation can only
    mean the underlying tables are not a commutative ring.
    """
    v = g.vertex_count
    if v == 0:
        return None
    if v == 1:
        return 0
    off = ~np.eye(v, dtype=bool)
    a, reach2, reach3 = _reach_layers(g)
    if not (reach3 | ~off).all():
        i, j = np.argwhere(~reach3 & off)[0]
        raise TheoremViolationError(
            f"{g.ring.label}: vertices {g.ring.names[int(g.vertices[i])]} and "
            f"{g.ring.names[int(g.vertices[j])]} are farther than 3 apart or disconnected",
            witness=(int(g.vertices[i]), int(g.vertices[j])),
        )
    if (a | ~off).all():
        return 1
    if (reach2 | ~off).all():
        return 2
    return 3


def is_complete(g: ZeroDivisorGraph) -> bool:
    """All distinct vertices adjacent; empty and one-vertex graphs count."""
    v = g.vertex_count
    if v <= 1:
        return True
    return bool((g.adj | np.eye(v, dtype=bool)).all())


def distance(g: ZeroDivisorGraph, u, v) -> int:
    """Shortest-path distance between two vertices, by plain BFS."""
    su, sv = g._position(u), g._position(v)
    if su == sv:
        return 0
    nbrs = g.neighbor_lists()
    seen = {su: 0}
    queue = deque([su])
    while queue:
        cur = queue.popleft()
        d = seen[cur]
        for nxt in nbrs[cur]:
            nxt = int(nxt)
            if nxt == sv:
                return d + 1
            if nxt not in seen:
                seen[nxt] = d + 1
                queue.append(nxt)
    raise TheoremViolationError(
        f"{g.ring.label}: zero-divisor graph is disconnected",
        witness=(int(g.vertices[su]), int(g.vertices[sv])),
    )


def girth(g: ZeroDivisorGraph) -> int | None:
    """Length of a shortest cycle, or None when the graph is acyclic."""
    v = g.vertex_count
    if v < 3:
        return None
    af = g.adj.astype(np.float32)
    common = af @ af
    if (g.adj & (common > 0)).any():
        return 3
    off = ~np.eye(v, dtype=bool)
    if ((common >= 2) & off).any():
        return 4
    # girth >= 5: per-root BFS, shortest cycle through each root
    nbrs = g.neighbor_lists()
    best = None
    for root in range(v):
        dist = np.full(v, -1, dtype=np.int64)
        parent = np.full(v, -1, dtype=np.int64)
        dist[root] = 0
        queue = deque([root])
        while queue:
            cur = queue.popleft()
            for nxt in nbrs[cur]:
                nxt = int(nxt)
                if dist[nxt] < 0:
                    dist[nxt] = dist[cur] + 1
                    parent[nxt] = cur
                    queue.append(nxt)
                elif parent[cur] != nxt:
                    cycle = int(dist[cur] + dist[nxt] + 1)
                    if best is None or cycle < best:
                        best = cycle
    return best


def to_dot(g: ZeroDivisorGraph) -> str:
    """Deterministic DOT rendering: vertex order fixed, edges i < j."""
    esc = lambda s: s.replace("\\", "\\\\").replace('"', '\\"')
    lines = ["graph zero_divisor_graph {", f'  label="{esc(g.ring.label)}";']
    names = g.vertex_names()
    for i, name in enumerate(names):
        lines.append(f'  v{i} [label="{esc(name)}"];')
    for i in range(g.vertex_count):
        for j in range(i + 1, g.vertex_count):
            if g.adj[i, j]:
                lines.append(f"  v{i} -- v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def adjacency_payload(g: ZeroDivisorGraph) -> dict:
    """JSON-ready adjacency dump with a stable vertex order."""
    edges = [
        [i, j]
        for i in range(g.vertex_count)
        for j in range(i + 1, g.vertex_count)
        if g.adj[i, j]
    ]
    return {
        "schema_version": 1,
        "ring": g.ring.label,
        "vertices": list(g.vertex_names()),
        "edges": edges,
    }
