"""Finite graphs (lattice windows, tori, explicit adjacency) and the
metric / boundary / filling primitives everything else is built on.

Vertices are integers ``0..n-1``. Lattice graphs number their vertices
row-major (last axis fastest). Vertex sets are ``frozenset``; anything that
is ordered on output (partitions, edge lists) is sorted by vertex id.

On a finite window the role of "the infinite part of the graph" is played by
the rim, ``Graph.window_exterior``: a path *escapes* when it reaches the rim.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable

import numpy as np

from .errors import DegenerateInput, InvalidParameter, NotFillable, UnsupportedTopology

WINDOW = "window"
TORUS = "torus"
EXPLICIT = "explicit"
TOPOLOGIES = (WINDOW, TORUS, EXPLICIT)

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Graph:
    adj: tuple[tuple[int, ...], ...]
    topology: str
    dims: tuple[int, ...]
    coords: tuple[tuple[int, ...], ...] | None = None
    window_exterior: frozenset[int] = frozenset()

    @property
    def vertex_count(self) -> int:
        return len(self.adj)

    def __len__(self) -> int:
        return len(self.adj)

    @property
    def vertices(self) -> range:
        return range(len(self.adj))

    @property
    def is_lattice(self) -> bool:
        return self.coords is not None

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted((u, v) for u, nbrs in enumerate(self.adj) for v in nbrs if u < v))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edge_set

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides, acc = [], 1
        for side in reversed(self.dims):
            strides.append(acc)
            acc *= side
        return tuple(reversed(strides))

    def vertex_at(self, coord: Iterable[int]) -> int:
        if not self.is_lattice:
            raise UnsupportedTopology("explicit graphs have no coordinates")
        coord = tuple(coord)
        if self.topology == TORUS:
            coord = tuple(c % s for c, s in zip(coord, self.dims))
        elif any(not 0 <= c < s for c, s in zip(coord, self.dims)):
            raise InvalidParameter(f"coordinate {coord} outside window {self.dims}")
        return sum(c * s for c, s in zip(coord, self._strides))

    @cached_property
    def coord_array(self) -> np.ndarray:
        if not self.is_lattice:
            raise UnsupportedTopology("explicit graphs have no coordinates")
        return np.asarray(self.coords, dtype=np.int64).reshape(len(self.adj), len(self.dims))

    @cached_property
    def center(self) -> int:
        return self.vertex_at(tuple(s // 2 for s in self.dims))

    def check_vertices(self, vs: Iterable[int]) -> frozenset[int]:
        out = frozenset(vs)
        n = len(self.adj)
        for v in out:
            if not (isinstance(v, (int, np.integer)) and 0 <= v < n):
                raise InvalidParameter(f"vertex {v!r} not in graph")
        return out

    def distance(self, u: int, v: int) -> float:
        """Graph metric; ``inf`` between different components."""
        if self.is_lattice:
            total = 0
            for a, b, side in zip(self.coords[u], self.coords[v], self.dims):
                diff = abs(a - b)
                total += min(diff, side - diff) if self.topology == TORUS else diff
            return total
        dist = bfs_distances(self, [u], stop=v)
        return dist.get(v, float("inf"))


def build_grid(dims: Iterable[int], topology: str = WINDOW) -> Graph:
    """Lattice graph on a box: ``window`` is the induced Z^d box, ``torus``
    wraps every axis (2d-regular)."""
    dims = tuple(int(s) for s in dims)
    if not dims:
        raise InvalidParameter("dims must be non-empty")
    if any(s <= 0 for s in dims):
        raise InvalidParameter(f"dimensions must be positive, got {dims}")
    if topology not in (WINDOW, TORUS):
        raise InvalidParameter(f"unknown lattice topology {topology!r}")
    if topology == TORUS and any(s < 3 for s in dims):
        raise InvalidParameter("torus side lengths must be >= 3")

    coords = tuple(product(*(range(s) for s in dims)))
    strides = []
    acc = 1
    for side in reversed(dims):
        strides.append(acc)
        acc *= side
    strides.reverse()
    adj = []
    for c in coords:
        base = sum(x * s for x, s in zip(c, strides))
        nbrs = []
        for axis, side in enumerate(dims):
            for step in (-1, 1):
                x = c[axis] + step
                if topology == TORUS:
                    x %= side
                elif not 0 <= x < side:
                    continue
                nbrs.append(base + (x - c[axis]) * strides[axis])
        adj.append(tuple(sorted(set(nbrs))))
    exterior: frozenset[int] = frozenset()
    if topology == WINDOW:
        full = 2 * len(dims)
        exterior = frozenset(v for v, nbrs in enumerate(adj) if len(nbrs) < full)
    return Graph(tuple(adj), topology, dims, coords, exterior)


def from_edges(n: int, edges: Iterable[Iterable[int]]) -> Graph:
    """Explicit graph on ``n`` vertices."""
    if n < 0:
        raise InvalidParameter("vertex count must be non-negative")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for e in edges:
        u, v = (int(x) for x in e)
        if u == v:
            raise InvalidParameter(f"self-loop at {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidParameter(f"edge {(u, v)} has an endpoint outside 0..{n - 1}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(tuple(tuple(sorted(s)) for s in nbrs), EXPLICIT, (n,))


# --------------------------------------------------------------------------
# traversal helpers


def bfs_distances(G: Graph, sources: Iterable[int], radius: int | None = None,
                  allowed: frozenset[int] | set[int] | None = None,
                  stop: int | None = None) -> dict[int, int]:
    dist = {}
    queue = deque()
    for s in sources:
        if s not in dist and (allowed is None or s in allowed):
            dist[s] = 0
            queue.append(s)
    adj = G.adj
    while queue:
        v = queue.popleft()
        if v == stop:
            break
        d = dist[v]
        if radius is not None and d >= radius:
            continue
        for w in adj[v]:
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = d + 1
                queue.append(w)
    return dist


def reachable(G: Graph, sources: Iterable[int], allowed: frozenset[int] | set[int]) -> set[int]:
    """Vertices of ``allowed`` reachable from ``sources`` inside ``allowed``."""
    seen = {s for s in sources if s in allowed}
    stack = list(seen)
    adj = G.adj
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w in allowed and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def is_connected(G: Graph, S: Iterable[int]) -> bool:
    """Induced connectivity; the empty set counts as connected."""
    S = S if isinstance(S, (set, frozenset)) else set(S)
    if not S:
        return True
    return len(reachable(G, [min(S)], S)) == len(S)


def induced_edges(G: Graph, S: Iterable[int]) -> set[Edge]:
    """E(S): edges of the induced subgraph on S."""
    S = S if isinstance(S, (set, frozenset)) else set(S)
    return {(u, v) for u in S for v in G.adj[u] if u < v and v in S}


def set_diameter(G: Graph, S: Iterable[int]) -> int:
    """Largest graph distance between two points of S (0 for |S| <= 1)."""
    S = sorted(S)
    if len(S) <= 1:
        return 0
    if not G.is_lattice:
        best = 0
        for v in S:
            dist = bfs_distances(G, [v])
            best = max(best, max(dist.get(w, float("inf")) for w in S))
        return best
    pts = G.coord_array[S]
    dims = np.asarray(G.dims)
    best = 0
    chunk = max(1, 2_000_000 // len(S))
    for i in range(0, len(S), chunk):
        diff = np.abs(pts[i:i + chunk, None, :] - pts[None, :, :])
        if G.topology == TORUS:
            diff = np.minimum(diff, dims - diff)
        best = max(best, int(diff.sum(axis=2).max()))
    return best


# --------------------------------------------------------------------------
# metric primitives


def ball(G: Graph, C: Iterable[int], n: int) -> frozenset[int]:
    """B_n(C): vertices within graph distance n of C."""
    C = G.check_vertices(C)
    if n < 0:
        raise InvalidParameter("radius must be non-negative")
    return frozenset(bfs_distances(G, C, radius=n))


def boundary(G: Graph, C: Iterable[int], n: int = 1, mode: str = "outer") -> frozenset[int]:
    """Outer boundary B_n(C) - C, or (``mode="visible"``) the part of the
    1-boundary from which a C-avoiding path reaches the window rim."""
    C = G.check_vertices(C)
    if mode == "outer":
        if n < 1:
            raise InvalidParameter("boundary radius must be positive")
        return ball(G, C, n) - C
    if mode != "visible":
        raise InvalidParameter(f"unknown boundary mode {mode!r}")
    if G.topology != WINDOW:
        raise UnsupportedTopology("visible boundary needs a window (nothing to escape to)")
    outer = ball(G, C, 1) - C
    return outer & escaping_vertices(G, C)


def escaping_vertices(G: Graph, C: frozenset[int]) -> set[int]:
    """Vertices outside C joined to the window rim by a path avoiding C."""
    allowed = frozenset(G.vertices) - C
    return reachable(G, G.window_exterior - C, allowed)


def n_components(G: Graph, B: Iterable[int], n: int) -> list[frozenset[int]]:
    """Classes of the equivalence on B generated by 'within distance n'."""
    B = G.check_vertices(B)
    if n < 1:
        raise InvalidParameter("n must be positive")
    parent = {v: v for v in B}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for v in B:
        for w in bfs_distances(G, [v], radius=n):
            if w in parent and w > v:
                a, b = find(v), find(w)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    classes: dict[int, set[int]] = {}
    for v in B:
        classes.setdefault(find(v), set()).add(v)
    return sorted((frozenset(c) for c in classes.values()), key=min)


def connected_components(G: Graph, S: Iterable[int]) -> list[frozenset[int]]:
    """Components of the subgraph induced on S, ordered by least vertex."""
    S = G.check_vertices(S)
    remaining = set(S)
    out = []
    for v in sorted(S):
        if v in remaining:
            comp = reachable(G, [v], S)
            remaining -= comp
            out.append(frozenset(comp))
    return out


def is_full(G: Graph, C: Iterable[int]) -> bool:
    """A set is full when its complement induces a connected subgraph."""
    C = G.check_vertices(C)
    if G.topology == EXPLICIT:
        raise UnsupportedTopology("fullness is defined on window and torus graphs")
    if len(C) == len(G):
        raise DegenerateInput("C is the whole vertex set")
    return is_connected(G, frozenset(G.vertices) - C)


def fill(G: Graph, C: Iterable[int]) -> frozenset[int]:
    """C together with every component of its complement that does not reach
    the window rim. Exactly one complement component may reach the rim."""
    C = G.check_vertices(C)
    if G.topology != WINDOW:
        raise UnsupportedTopology("filling needs a window (no exterior on a torus)")
    rest = frozenset(G.vertices) - C
    exterior_comps = [comp for comp in connected_components(G, rest) if comp & G.window_exterior]
    if len(exterior_comps) != 1:
        raise NotFillable(
            f"complement has {len(exterior_comps)} rim-meeting components (need exactly 1)",
            witness={"exterior_components": len(exterior_comps)},
        )
    return frozenset(G.vertices) - exterior_comps[0]
