"""Quantized fractional perfect matchings and their rounding along tile chains.

A fractional matching keeps integer numerators over a fixed denominator d,
so every value is one of 0/d, 1/d, ..., d/d and all arithmetic is exact.
Rounding moves mass around alternating circuits: +1 and -1 in turn along an
even cycle of non-integral edges, which leaves every vertex sum unchanged
and never touches an edge that is already 0 or d.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ChainTooShort, InvalidInput, InvalidToast, OutOfRange, ParityError
from .graph_core import Edge, Graph, edge_key, induced_edges
from .orientation import Cycle
from .report import Report
from .toast import Tile, Toast, verify_toast


@dataclass
class FractionalMatching:
    d: int
    num: dict[Edge, int] = field(default_factory=dict)

    def copy(self) -> "FractionalMatching":
        return FractionalMatching(self.d, dict(self.num))

    def is_integral(self, e: Edge) -> bool:
        return self.num[e] in (0, self.d)

    def vertex_sum(self, G: Graph, v: int) -> int:
        return sum(self.num[edge_key(v, w)] for w in G.adj[v])


@dataclass(frozen=True)
class Matching:
    edges: frozenset[Edge]

    def __len__(self) -> int:
        return len(self.edges)

    def covered(self) -> set[int]:
        return {v for e in self.edges for v in e}

    def is_perfect(self, G: Graph) -> bool:
        return verify_matching(G, self).ok


def init_fractional(G: Graph, d: int) -> FractionalMatching:
    """1/d on every edge of a d-regular graph."""
    if d < 1:
        raise InvalidInput("d must be positive")
    for v in G.vertices:
        if G.degree(v) != d:
            raise InvalidInput(f"graph is not {d}-regular", witness={"vertex": v, "degree": G.degree(v)})
    return FractionalMatching(d, {e: 1 for e in G.edges})


def apply_circuit(f: FractionalMatching, C: Cycle, e_prime: Edge, eps_num: int) -> FractionalMatching:
    """Add eps at edges of even distance from e' along C, subtract at odd.

    Returns a new matching; f is left unchanged."""
    edges = C.edges
    if len(edges) % 2:
        raise ParityError(f"circuit of odd length {len(edges)}", witness={"length": len(edges)})
    e_prime = edge_key(*e_prime)
    if e_prime not in edges:
        raise InvalidInput(f"edge {e_prime} is not on the circuit", witness={"edge": list(e_prime)})
    if len(set(edges)) != len(edges):
        raise InvalidInput("circuit repeats an edge")
    start = edges.index(e_prime)
    out = f.copy()
    for i, e in enumerate(edges):
        if e not in out.num:
            raise InvalidInput(f"circuit edge {e} has no value", witness={"edge": list(e)})
        step = eps_num if (i - start) % 2 == 0 else -eps_num
        value = out.num[e] + step
        if not 0 <= value <= f.d:
            raise OutOfRange(f"edge {e} would take value {value}/{f.d}",
                             witness={"edge": list(e), "value": value})
        out.num[e] = value
    return out


def _support_cycle(G: Graph, f: FractionalMatching, e: Edge, region: frozenset[int] | None) -> Cycle | None:
    """Shortest cycle through e in the non-integral support inside region:
    breadth-first search between the two endpoints of e avoiding e."""
    u, v = e
    d = f.d

    def live(x, w):
        if region is not None and w not in region:
            return False
        return 0 < f.num[edge_key(x, w)] < d

    prev = {v: None}
    queue = deque([v])
    while queue and u not in prev:
        x = queue.popleft()
        for w in G.adj[x]:
            if w in prev or not live(x, w) or edge_key(x, w) == e:
                continue
            prev[w] = x
            queue.append(w)
    if u not in prev:
        return None
    path = [u]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    # path runs u ... v; close it with the edge {v, u}
    return Cycle(tuple(path + [u]))


def _check_support(G: Graph, f: FractionalMatching, vertices: Iterable[int]) -> None:
    for x in vertices:
        live = sum(1 for w in G.adj[x] if 0 < f.num[edge_key(x, w)] < f.d)
        assert live != 1, f"vertex {x} meets exactly one non-integral edge"


def round_tile(G: Graph, f: FractionalMatching, chain: list[int], T: Toast,
               log: list | None = None, fallback: bool = False) -> FractionalMatching:
    """Make every edge of E(C_1) integral using circuits inside C_1, ..., C_m.

    For each non-integral edge (ascending), pick its nearer integer (ties go
    to 0) and apply eps = 1/d circuits through it, each found in the smallest
    chain tile whose non-integral support has one. With ``fallback`` the
    whole graph is tried after the last chain tile."""
    if not chain:
        raise InvalidInput("empty chain")
    regions: list[tuple[object, frozenset[int] | None]] = [(i, T.tile(i).vertices) for i in chain]
    if fallback:
        regions.append(("graph", None))
    out = f.copy()
    deepest = 0
    base = T.tile(chain[0])
    for e in sorted(induced_edges(G, base.vertices)):
        if out.is_integral(e):
            continue
        up = 2 * out.num[e] > out.d
        while not out.is_integral(e):
            cycle, depth = None, None
            for depth, (label, region) in enumerate(regions):
                cycle = _support_cycle(G, out, e, region)
                if cycle is not None:
                    break
            if cycle is None:
                raise ChainTooShort(f"no circuit through {e} within the chain",
                                    witness={"edge": list(e), "tile": chain[0], "chain": list(chain)})
            deepest = max(deepest, depth)
            edges = cycle.edges
            e_prime = e if up else edges[(edges.index(e) + 1) % len(edges)]
            out = apply_circuit(out, cycle, e_prime, 1)
            _check_support(G, out, cycle.vertices)
            if log is not None:
                log.append({"kind": "circuit", "tile": chain[0], "region": regions[depth][0],
                            "cycle": list(cycle.vertices), "e_prime": list(e_prime), "eps": 1})
    if log is not None:
        log.append({"kind": "tile", "tile": chain[0], "deepest": regions[deepest][0],
                    "depth": deepest})
    return out


def two_coloring(G: Graph) -> list[int] | None:
    """Proper 2-colouring, or None if G has an odd cycle."""
    color = [-1] * len(G)
    for s in G.vertices:
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for w in G.adj[x]:
                if color[w] < 0:
                    color[w] = 1 - color[x]
                    queue.append(w)
                elif color[w] == color[x]:
                    return None
    return color


def perfect_matching(G: Graph, T: Toast, d: int, log: list | None = None) -> Matching:
    """Round 1/d on a d-regular bipartite graph to a perfect matching.

    Tiles are processed in (layer, id) order; each tile's chain is itself
    followed by its ancestors, trimmed to d * |E(tile)| entries, then the
    maximal tile above it, then the whole graph as a last resort."""
    if two_coloring(G) is None:
        raise InvalidInput("graph is not bipartite")
    f = init_fractional(G, d)
    report = verify_toast(G, T)
    if not report.passed("T1", "T2", "T3"):
        failed = report.failures()[0]
        raise InvalidToast(f"toast fails {failed.name}", witness=failed.witness)
    st = T.structure
    order = sorted(T.tiles, key=lambda t: (st.layer_of[t.id], t.id))
    for tile in order:
        ups = st.ancestors(tile.id)
        limit = max(1, d * len(induced_edges(G, tile.vertices)))
        chain = ([tile.id] + ups)[:limit]
        if ups and ups[-1] not in chain:
            chain.append(ups[-1])
        f = round_tile(G, f, chain, T, log=log, fallback=True)
    rest = sorted(e for e in G.edges if not f.is_integral(e))
    if rest:
        # edges lying in no tile: round them against the whole graph
        whole = Toast((Tile(0, 1, frozenset(G.vertices)),))
        for e in rest:
            if not f.is_integral(e):
                f = round_tile(G, f, [0], whole, log=log)
    return Matching(frozenset(e for e, j in f.num.items() if j == d))


def verify_fractional(G: Graph, f: FractionalMatching) -> Report:
    report = Report()
    extra = sorted(e for e in f.num if not G.has_edge(*e))
    missing = sorted(G.edge_set - set(f.num))
    bad_e = {"edge": list((extra or missing)[0]), "reason": "not an edge" if extra else "no value"} \
        if extra or missing else None
    report.add("edges", bad_e is None, bad_e)
    bad_range = sorted(e for e, j in f.num.items() if not 0 <= j <= f.d)
    report.add("range", not bad_range,
               {"edge": list(bad_range[0]), "value": f.num[bad_range[0]]} if bad_range else None)
    sums = [0] * len(G)
    for (u, v), j in f.num.items():
        if G.has_edge(u, v):
            sums[u] += j
            sums[v] += j
    bad_v = [v for v in G.vertices if sums[v] != f.d]
    report.add("vertex-sums", not bad_v,
               {"vertex": bad_v[0], "sum": sums[bad_v[0]], "d": f.d, "count": len(bad_v)} if bad_v else None)
    return report


def verify_matching(G: Graph, M: Matching) -> Report:
    report = Report()
    bad = sorted(e for e in M.edges if not G.has_edge(*e))
    report.add("edges-valid", not bad, {"edge": list(bad[0])} if bad else None)
    seen: dict[int, Edge] = {}
    clash = None
    for e in sorted(M.edges):
        for v in e:
            if v in seen:
                clash = {"vertex": v, "edges": [list(seen[v]), list(e)]}
                break
            seen[v] = e
        if clash:
            break
    report.add("disjoint", clash is None, clash)
    uncovered = [v for v in G.vertices if v not in seen]
    report.add("perfect", not uncovered,
               {"vertex": uncovered[0], "count": len(uncovered)} if uncovered else None)
    report.info["size"] = len(M.edges)
    return report


def replay_log(G: Graph, d: int, log: list) -> tuple[FractionalMatching, list[Edge]]:
    """Re-apply the logged circuits to 1/d and list every edge that changed
    after having been integral (empty when integrality is monotone)."""
    f = init_fractional(G, d)
    frozen: set[Edge] = {e for e in f.num if f.is_integral(e)}
    violations: list[Edge] = []
    for entry in log:
        if entry.get("kind") != "circuit":
            continue
        cycle = Cycle(tuple(entry["cycle"]))
        g = apply_circuit(f, cycle, tuple(entry["e_prime"]), entry["eps"])
        for e in cycle.edges:
            if e in frozen and g.num[e] != f.num[e]:
                violations.append(e)
        f = g
        frozen.update(e for e in cycle.edges if f.is_integral(e))
    return f, violations
