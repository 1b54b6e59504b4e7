"""Toasts: leveled laminar families of finite vertex sets.

Axioms checked by :func:`verify_toast`:

* T1  every edge of G lies inside some tile,
* T2  any two tiles are 1-separated or one contains the other's 1-ball,
* T3  every tile minus its strictly smaller tiles induces a connected subgraph,
* T4  the union of each minimal layer is contained in the union of the next.

Two tiles with identical vertex sets are ordered by ``(level, id)``; the
larger one then "strictly contains" the smaller and has an empty residual,
which T3 reports as a violation.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .errors import InvalidToast, NotFound
from .graph_core import WINDOW, Graph, ball, connected_components, induced_edges, is_connected
from .report import Report


@dataclass(frozen=True)
class Tile:
    id: int
    level: int
    vertices: frozenset[int]

    def __post_init__(self):
        if not self.vertices:
            raise InvalidToast(f"tile {self.id} is empty")
        if self.level < 1:
            raise InvalidToast(f"tile {self.id} has non-positive level {self.level}")

    @property
    def rank(self) -> tuple[int, int]:
        return (self.level, self.id)

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True, eq=False)
class Toast:
    tiles: tuple[Tile, ...] = ()
    claims_connected: bool = False
    claims_layered: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(sorted(self.tiles, key=lambda t: t.id)))
        ids = [t.id for t in self.tiles]
        if len(set(ids)) != len(ids):
            raise InvalidToast("duplicate tile ids")

    def __len__(self) -> int:
        return len(self.tiles)

    def __iter__(self):
        return iter(self.tiles)

    @cached_property
    def _by_id(self) -> dict[int, Tile]:
        return {t.id: t for t in self.tiles}

    def tile(self, tile_id: int) -> Tile:
        try:
            return self._by_id[tile_id]
        except KeyError:
            raise NotFound(f"no tile with id {tile_id}") from None

    @cached_property
    def union(self) -> frozenset[int]:
        return frozenset().union(*(t.vertices for t in self.tiles))

    @cached_property
    def structure(self) -> "ToastStructure":
        return ToastStructure(self)

    def without(self, tile_ids: Iterable[int]) -> "Toast":
        drop = set(tile_ids)
        return Toast(tuple(t for t in self.tiles if t.id not in drop),
                     self.claims_connected, self.claims_layered)


def strictly_below(a: Tile, b: Tile) -> bool:
    """Containment order on tiles (vertex sets, ties broken by level then id)."""
    if a.id == b.id:
        return False
    if a.vertices == b.vertices:
        return a.rank < b.rank
    return len(a.vertices) < len(b.vertices) and a.vertices < b.vertices


@dataclass
class ToastStructure:
    """Containment forest, layers and residuals of a toast."""

    toast: Toast
    below: dict[int, list[int]] = field(init=False)   # tile -> tiles strictly inside it
    above: dict[int, list[int]] = field(init=False)   # tile -> tiles strictly containing it

    def __post_init__(self):
        tiles = sorted(self.toast.tiles, key=lambda t: (len(t.vertices), t.rank))
        self.below = {t.id: [] for t in tiles}
        self.above = {t.id: [] for t in tiles}
        for i, a in enumerate(tiles):
            for b in tiles[i + 1:]:
                if strictly_below(a, b):
                    self.below[b.id].append(a.id)
                    self.above[a.id].append(b.id)

    def parent(self, tile_id: int) -> int | None:
        """Smallest tile strictly containing the given one."""
        ups = self.above[tile_id]
        if not ups:
            return None
        return min(ups, key=lambda i: (len(self.toast.tile(i).vertices), self.toast.tile(i).rank))

    def ancestors(self, tile_id: int) -> list[int]:
        """Chain of strictly larger tiles, innermost first (via parents)."""
        chain = []
        p = self.parent(tile_id)
        while p is not None:
            chain.append(p)
            p = self.parent(p)
        return chain

    def root(self, tile_id: int) -> int:
        chain = self.ancestors(tile_id)
        return chain[-1] if chain else tile_id

    @cached_property
    def maximal(self) -> list[int]:
        return sorted(i for i, ups in self.above.items() if not ups)

    @cached_property
    def layers(self) -> list[list[int]]:
        remaining = set(self.below)
        out = []
        while remaining:
            layer = sorted(i for i in remaining if not any(j in remaining for j in self.below[i]))
            out.append(layer)
            remaining.difference_update(layer)
        return out

    @cached_property
    def layer_of(self) -> dict[int, int]:
        return {i: k for k, layer in enumerate(self.layers, 1) for i in layer}

    def residual(self, tile_id: int) -> frozenset[int]:
        tile = self.toast.tile(tile_id)
        inner = [self.toast.tile(j).vertices for j in self.below[tile_id]]
        return tile.vertices.difference(*inner)


def layers(T: Toast, G: Graph | None = None) -> list[list[int]]:
    """Stratify tiles into T_1 (minimal), T_2 (minimal among the rest), ...

    With a graph given, T2 is checked first and a violation raises."""
    if G is not None:
        witness = _first_t2_violation(G, T)
        if witness is not None:
            raise InvalidToast("T2 violated", witness=witness)
    return T.structure.layers


def residual(G: Graph, T: Toast, tile_id: int) -> frozenset[int]:
    """The tile minus every tile it strictly contains."""
    T.tile(tile_id)
    return T.structure.residual(tile_id)


# --------------------------------------------------------------------------
# verification


def _t2_pair_ok(ball_k, k, ball_l, l) -> bool:
    return not (ball_k & l) or ball_k <= l or ball_l <= k


def _t2_violations(G: Graph, T: Toast, threads: int = 1) -> list[tuple[int, int]]:
    tiles = T.tiles
    balls = {t.id: ball(G, t.vertices, 1) for t in tiles}

    def scan(i):
        a = tiles[i]
        bad = []
        for b in tiles[i + 1:]:
            if not _t2_pair_ok(balls[a.id], a.vertices, balls[b.id], b.vertices):
                bad.append((a.id, b.id))
        return bad

    if threads > 1 and len(tiles) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(scan, range(len(tiles))))
    else:
        chunks = [scan(i) for i in range(len(tiles))]
    return sorted(p for chunk in chunks for p in chunk)


def _first_t2_violation(G: Graph, T: Toast) -> dict | None:
    bad = _t2_violations(G, T)
    if not bad:
        return None
    return {"tiles": list(bad[0]), "count": len(bad)}


def verify_toast(G: Graph, T: Toast, threads: int = 1) -> Report:
    """Check T1-T4 (plus laminarity) and report witnesses; never raises."""
    report = Report()
    covered: set = set()
    for t in T.tiles:
        covered |= induced_edges(G, t.vertices)
    if G.topology == WINDOW:
        inside = T.union
        relevant = {e for e in G.edges if e[0] in inside and e[1] in inside}
        report.info["edges_outside_tiles"] = len(G.edges) - len(relevant)
    else:
        relevant = set(G.edges)
    missing = sorted(relevant - covered)
    report.add("T1", not missing,
               {"edge": list(missing[0]), "count": len(missing)} if missing else None)

    bad = _t2_violations(G, T, threads)
    report.add("T2", not bad, {"tiles": list(bad[0]), "count": len(bad)} if bad else None)

    overlapping = []
    tiles = T.tiles
    for i, a in enumerate(tiles):
        for b in tiles[i + 1:]:
            if a.vertices & b.vertices and not (a.vertices <= b.vertices or b.vertices <= a.vertices):
                overlapping.append((a.id, b.id))
    report.add("laminar", not overlapping,
               {"tiles": list(overlapping[0]), "count": len(overlapping)} if overlapping else None)

    st = T.structure
    t3_bad = []
    for t in tiles:
        res = st.residual(t.id)
        if not res:
            t3_bad.append({"tile": t.id, "reason": "empty residual"})
        elif not is_connected(G, res):
            parts = connected_components(G, res)
            t3_bad.append({"tile": t.id, "reason": "disconnected residual",
                           "components": len(parts), "vertices": [min(p) for p in parts[:2]]})
    report.add("T3", not t3_bad, dict(t3_bad[0], count=len(t3_bad)) if t3_bad else None)

    unions = [frozenset().union(*(T.tile(i).vertices for i in layer)) for layer in st.layers]
    t4_bad = None
    for i in range(len(unions) - 1):
        escaping = unions[i] - unions[i + 1]
        if escaping:
            t4_bad = {"layer": i + 1, "vertex": min(escaping), "count": len(escaping)}
            break
    report.add("T4", t4_bad is None, t4_bad)
    report.info["tiles"] = len(tiles)
    report.info["layers"] = len(st.layers)
    return report


# --------------------------------------------------------------------------
# connectification


def _open_region(st: ToastStructure, tile_id: int, selected: set[int], extra: frozenset = frozenset()):
    tile = st.toast.tile(tile_id)
    inner = [st.toast.tile(j).vertices for j in st.below[tile_id] if j in selected]
    return tile.vertices.difference(*inner) - extra


def refine_to_connected(G: Graph, T: Toast) -> tuple[Toast, Fraction]:
    """Select a sub-family of tiles satisfying T2 and T3.

    A toast that already satisfies T3 is returned as is. Otherwise tiles are
    selected greedily, in passes: a tile L is taken when its own residual
    w.r.t. the selection is connected, no selected tile above L loses
    connectivity, and either L is maximal or some strictly larger tile K has
    ``B_1(L) <= K`` with K minus (selected tiles inside K and L) connected. Each pass takes at most one new
    tile under every maximal tile. Returns the selection and the fraction of
    V(G) it covers.
    """
    report = verify_toast(G, T)
    if not report.passed("T2"):
        raise InvalidToast("refinement needs a family satisfying T2", witness=report["T2"].witness)
    n = len(G)
    if report.passed("T3"):
        return T, Fraction(len(T.union), n) if n else Fraction(0)

    st = T.structure
    order = sorted(T.tiles, key=lambda t: (st.layer_of[t.id], t.id))
    balls = {t.id: ball(G, t.vertices, 1) for t in T.tiles}
    selected: set[int] = set()

    def eligible(tile: Tile) -> bool:
        own = _open_region(st, tile.id, selected)
        if not own or not is_connected(G, own):
            return False
        for up in st.above[tile.id]:
            if up in selected:
                rest = _open_region(st, up, selected, tile.vertices)
                if not rest or not is_connected(G, rest):
                    return False
        if not st.above[tile.id]:
            return True
        for up in st.above[tile.id]:
            if balls[tile.id] <= T.tile(up).vertices:
                rest = _open_region(st, up, selected, tile.vertices)
                if rest and is_connected(G, rest):
                    return True
        return False

    while True:
        claimed: set[int] = set()
        progress = False
        for tile in order:
            if tile.id in selected:
                continue
            root = st.root(tile.id)
            if root in claimed:
                continue
            if eligible(tile):
                selected.add(tile.id)
                claimed.add(root)
                progress = True
        if not progress:
            break

    chosen = tuple(t for t in T.tiles if t.id in selected)
    out = Toast(chosen, claims_connected=True, claims_layered=False)
    return out, Fraction(len(out.union), n) if n else Fraction(0)
