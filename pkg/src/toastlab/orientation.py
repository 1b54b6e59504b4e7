"""Parity subgraphs and balanced orientations of even-degree graphs.

The orientation is built by peeling edge-disjoint cycles level by level:
every surviving edge of a tile in layer i is put on a cycle inside the
tile's parent (the next covering tile), the cycle is oriented cyclically and
removed. Removing a cycle keeps every degree even, so the maximal tiles
(which are unions of components of G) can always be finished by plain
cycle peeling.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InvalidToast, NoCycle, NoSolution, NotEvenDegree
from .graph_core import Edge, Graph, edge_key, from_edges, induced_edges
from .report import Report
from .toast import Toast, verify_toast


@dataclass(frozen=True)
class Cycle:
    """Closed edge-distinct walk; ``vertices[0] == vertices[-1]``."""

    vertices: tuple[int, ...]

    @property
    def edges(self) -> list[Edge]:
        vs = self.vertices
        return [edge_key(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    @property
    def arcs(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    def __len__(self) -> int:
        return len(self.vertices) - 1


@dataclass
class Orientation:
    arcs: dict[Edge, tuple[int, int]] = field(default_factory=dict)
    cycles: list[Cycle] = field(default_factory=list)
    log: list[dict] = field(default_factory=list)

    def orient(self, tail: int, head: int) -> None:
        key = edge_key(tail, head)
        if key in self.arcs:
            raise ValueError(f"edge {key} oriented twice")
        self.arcs[key] = (tail, head)


# --------------------------------------------------------------------------
# parity subgraph


def _spanning_forest(G: Graph):
    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    comp: dict[int, int] = {}
    for root in G.vertices:
        if root in parent:
            continue
        parent[root], depth[root], comp[root] = None, 0, root
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in G.adj[v]:
                if w not in parent:
                    parent[w], depth[w], comp[w] = v, depth[v] + 1, root
                    queue.append(w)
    return parent, depth, comp


def parity_subgraph(G: Graph, P: Iterable[int]) -> set[Edge]:
    """Edge set H with deg_H(v) odd exactly for v in P.

    Pairs the P-vertices of each component in id order and takes the
    symmetric difference of their spanning-tree paths."""
    P = G.check_vertices(P)
    if len(P) % 2:
        raise NoSolution("|P| is odd", witness={"size": len(P)})
    parent, depth, comp = _spanning_forest(G)
    groups: dict[int, list[int]] = {}
    for v in sorted(P):
        groups.setdefault(comp[v], []).append(v)
    for root, members in groups.items():
        if len(members) % 2:
            raise NoSolution("a component holds an odd number of P-vertices",
                             witness={"component_root": root, "count": len(members)})
    H: set[Edge] = set()
    for members in groups.values():
        for a, b in zip(members[::2], members[1::2]):
            while a != b:
                if depth[a] < depth[b]:
                    a, b = b, a
                H ^= {edge_key(a, parent[a])}
                a = parent[a]
    return H


# --------------------------------------------------------------------------
# cycles


def _simplify(walk: list[int]) -> list[int]:
    """Cut loops out of a walk, keeping its endpoints."""
    out: list[int] = []
    pos: dict[int, int] = {}
    for x in walk:
        if x in pos:
            cut = pos[x]
            for y in out[cut + 1:]:
                del pos[y]
            del out[cut + 1:]
        else:
            pos[x] = len(out)
            out.append(x)
    return out


def _peel_walk(nbrs: dict[int, set[int]] | list[set[int]], e: Edge,
               region: frozenset[int] | None = None) -> Cycle | None:
    """Least-neighbour trail from one end of e back to the other, made simple."""
    u, v = e
    used = {e}
    walk = [v]
    cur = v
    while cur != u:
        nxt = None
        for w in sorted(nbrs[cur]):
            if (region is None or w in region) and edge_key(cur, w) not in used:
                nxt = w
                break
        if nxt is None:
            return None
        used.add(edge_key(cur, nxt))
        walk.append(nxt)
        cur = nxt
    return Cycle(tuple([u] + _simplify(walk)))


def extract_cycle(G: Graph, available: Iterable[Edge], e: Edge, region: Iterable[int]) -> Cycle:
    """Simple cycle through e using available edges inside region.

    Requires every vertex of the (region, available) subgraph to have even
    degree, which guarantees the cycle exists."""
    region = frozenset(region)
    e = edge_key(*e)
    avail = {edge_key(*a) for a in available}
    if e not in avail or e[0] not in region or e[1] not in region:
        raise NoCycle(f"edge {e} is not available inside the region", witness={"edge": list(e)})
    nbrs: dict[int, set[int]] = {v: set() for v in region}
    for a, b in avail:
        if a in region and b in region:
            nbrs[a].add(b)
            nbrs[b].add(a)
    odd = sorted(v for v, s in nbrs.items() if len(s) % 2)
    if odd:
        raise NoCycle("available subgraph has odd-degree vertices", witness={"vertex": odd[0]})
    cycle = _peel_walk(nbrs, e)
    if cycle is None:
        raise NoCycle(f"no cycle through {e}", witness={"edge": list(e)})
    return cycle


def _bfs_path(nbrs, src: int, dst: int, skip: Edge, region: frozenset[int] | None) -> list[int] | None:
    prev = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        if x == dst:
            break
        for w in sorted(nbrs[x]):
            if w in prev or (region is not None and w not in region):
                continue
            if edge_key(x, w) == skip:
                continue
            prev[w] = x
            queue.append(w)
    if dst not in prev:
        return None
    path = [dst]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def _direct_cycle(nbrs, e: Edge, region: frozenset[int] | None) -> Cycle | None:
    u, v = e
    path = _bfs_path(nbrs, v, u, e, region)
    if path is None:
        return None
    return Cycle(tuple([u] + path))


def _trail_to(nbrs, start: int, target: frozenset[int], used: set[Edge]) -> list[int] | None:
    walk = [start]
    cur = start
    while cur not in target:
        nxt = None
        for w in sorted(nbrs[cur]):
            if edge_key(cur, w) not in used:
                nxt = w
                break
        if nxt is None:
            return None
        used.add(edge_key(cur, nxt))
        walk.append(nxt)
        cur = nxt
    return walk


def _stitch_cycle(nbrs, e: Edge, residual: frozenset[int]) -> Cycle | None:
    """Walk out of both ends of e into the residual, join the landing points
    with a parity subgraph of the residual, and read off a cycle through e."""
    a, b = e
    used = {e}
    first = _trail_to(nbrs, a, residual | {b}, used)
    if first is None:
        return None
    if first[-1] == b:
        return Cycle(tuple([b] + _simplify(first)))
    second = _trail_to(nbrs, b, residual | frozenset(first), used)
    if second is None:
        return None
    x, y = first[-1], second[-1]
    if y not in residual:
        # landed back on the first trail: cut it there and the walk closes
        first = first[:first.index(y) + 1]
        x = y
    pieces = [edge_key(p, q) for p, q in zip(first, first[1:])]
    pieces += [edge_key(p, q) for p, q in zip(second, second[1:])]
    pieces.append(e)
    if x != y:
        local = sorted(residual)
        index = {w: i for i, w in enumerate(local)}
        sub_edges = [(index[p], index[q]) for p in local for q in nbrs[p]
                     if q in residual and p < q and edge_key(p, q) not in used]
        try:
            H = parity_subgraph(from_edges(len(local), sub_edges), [index[x], index[y]])
        except NoSolution:
            return None
        pieces += [edge_key(local[p], local[q]) for p, q in H]
    union: dict[int, set[int]] = {}
    for p, q in pieces:
        union.setdefault(p, set()).add(q)
        union.setdefault(q, set()).add(p)
    return _peel_walk(union, e)


def balanced_orientation(G: Graph, T: Toast, prefer: str = "direct") -> Orientation:
    """Orientation of E(G) with in-degree = out-degree everywhere.

    ``prefer`` picks which cycle search runs first for non-maximal tiles
    ("direct": shortest cycle in the covering tile; "stitch": trails plus a
    parity subgraph of the covering tile's residual). The method used for
    every cycle is recorded in ``Orientation.log``."""
    odd = [v for v in G.vertices if G.degree(v) % 2]
    if odd:
        raise NotEvenDegree(f"{len(odd)} vertices of odd degree", witness={"vertex": odd[0], "count": len(odd)})
    report = verify_toast(G, T)
    if not report.passed("T1", "T2", "T3"):
        failed = report.failures()[0]
        raise InvalidToast(f"toast fails {failed.name}", witness=failed.witness)
    if prefer not in ("direct", "stitch"):
        raise ValueError(f"unknown method {prefer!r}")

    st = T.structure
    nbrs = [set(a) for a in G.adj]
    out = Orientation()
    balance = [0] * len(G)

    def take(cycle: Cycle, tile_id: int, method: str):
        for p, q in cycle.arcs:
            out.orient(p, q)
            nbrs[p].discard(q)
            nbrs[q].discard(p)
            balance[p] += 1
            balance[q] -= 1
        out.cycles.append(cycle)
        out.log.append({"tile": tile_id, "method": method, "length": len(cycle)})

    for layer_no, layer in enumerate(st.layers, 1):
        for tile_id in layer:
            tile = T.tile(tile_id)
            ancestors = st.ancestors(tile_id)
            for e in sorted(induced_edges(G, tile.vertices)):
                if e[1] not in nbrs[e[0]]:
                    continue
                cycle, method = None, None
                if not ancestors:
                    cycle, method = _peel_walk(nbrs, e, tile.vertices), "peel"
                for up in ancestors:
                    region = T.tile(up).vertices
                    tries = [("direct", lambda: _direct_cycle(nbrs, e, region)),
                             ("stitch", lambda: _stitch_cycle(nbrs, e, st.residual(up)))]
                    if prefer == "stitch":
                        tries.reverse()
                    for name, search in tries:
                        cycle = search()
                        if cycle is not None:
                            method = name
                            break
                    if cycle is not None:
                        break
                if cycle is None:
                    cycle, method = _direct_cycle(nbrs, e, None), "global"
                if cycle is None:
                    raise NoCycle(f"no cycle through {e}", witness={"edge": list(e)})
                take(cycle, tile_id, method)
        assert not any(balance), f"partial orientation unbalanced after layer {layer_no}"
    return out


def verify_balanced(G: Graph, O: Orientation) -> Report:
    """Every edge oriented exactly once and in-degree = out-degree."""
    report = Report()
    bad_arcs = sorted(k for k, (t, h) in O.arcs.items() if edge_key(t, h) != k or not G.has_edge(t, h))
    report.add("arcs-valid", not bad_arcs, {"edge": list(bad_arcs[0])} if bad_arcs else None)
    missing = sorted(G.edge_set - set(O.arcs))
    report.add("all-oriented", not missing,
               {"edge": list(missing[0]), "count": len(missing)} if missing else None)
    indeg = [0] * len(G)
    outdeg = [0] * len(G)
    for t, h in O.arcs.values():
        outdeg[t] += 1
        indeg[h] += 1
    unbalanced = [v for v in G.vertices if indeg[v] != outdeg[v]]
    report.add("balanced", not unbalanced,
               {"vertices": unbalanced[:8], "count": len(unbalanced)} if unbalanced else None)
    return report


def to_dot(G: Graph, O: Orientation) -> str:
    lines = ["digraph orientation {"]
    lines += [f"  {t} -> {h};" for t, h in sorted(O.arcs.values())]
    lines.append("}")
    return "\n".join(lines) + "\n"
