"""Level sets V_1, ..., V_N on lattice graphs and their conversion to toasts.

Properties verified by :func:`verify_level_sets` (``r`` is the base radius):

* P1  each 3r-component of V_n has diameter < c_n,
* P2  every vertex has its r-ball inside some V_n,
* P3  for n < m and x in V_n, the 4r-ball of x lies inside V_m or misses it.

The generator uses shifted hypercube cells. Level n (n < N) is made of the
cores of axis boxes of side ``scale**n`` (each box shrunk by a margin that
keeps distinct cores more than 3r apart), minus the "mixed zone" of every
higher level: the points whose 4r-ball meets both V_m and its complement.
The top level V_N is the whole domain (all of a torus, or the window
interior), which is what makes P2 hold on a finite graph.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import GenerationFailed, InvalidParameter, NotFillable, UnsupportedTopology
from .graph_core import (
    TORUS,
    WINDOW,
    Graph,
    ball,
    bfs_distances,
    connected_components,
    fill,
    is_full,
    n_components,
    set_diameter,
)
from .report import Report
from .toast import Tile, Toast


@dataclass(frozen=True, eq=False)
class LevelSets:
    levels: tuple[frozenset[int], ...]
    r: int
    component_bounds: tuple[int, ...]
    domain: frozenset[int] | None = None
    scale: int | None = None
    offsets: tuple[tuple[int, ...], ...] = ()
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.levels)


def default_domain(G: Graph) -> frozenset[int]:
    """All of a torus; a window minus its rim."""
    everything = frozenset(G.vertices)
    if G.topology == WINDOW:
        return everything - G.window_exterior
    return everything


def centered_box(G: Graph, inner: list[int] | tuple[int, ...]) -> frozenset[int]:
    """Vertices of the axis box of the given side lengths centred in G."""
    if len(inner) != len(G.dims):
        raise InvalidParameter("inner box must have one side per axis")
    lo = [(s - k) // 2 for s, k in zip(G.dims, inner)]
    if any(l < 0 for l in lo):
        raise InvalidParameter(f"inner box {inner} larger than graph {G.dims}")
    return frozenset(
        v for v, c in enumerate(G.coords)
        if all(l <= x < l + k for x, l, k in zip(c, lo, inner))
    )


def core_margin(r: int) -> int:
    """Cells are shrunk by this many layers so that cores of adjacent cells
    sit at distance 2g + 1 > 3r from each other."""
    return (3 * r) // 2 + 1


def _cores(G: Graph, side: int, offset: tuple[int, ...], margin: int) -> set[int]:
    out = set()
    torus = G.topology == TORUS
    for v, coord in enumerate(G.coords):
        inside = True
        for x, o, length in zip(coord, offset, G.dims):
            if torus:
                p = (x - o) % length
                start = (p // side) * side
                width = min(side, length - start)
            else:
                p = x - o
                start = (p // side) * side
                width = side
            q = p - start
            if not margin <= q < width - margin:
                inside = False
                break
        if inside:
            out.add(v)
    return out


def mixed_zone(G: Graph, S: frozenset[int] | set[int], radius: int) -> set[int]:
    """Points whose ``radius``-ball meets both S and its complement."""
    rest = [v for v in G.vertices if v not in S]
    if not S or not rest:
        return set()
    near_s = bfs_distances(G, S, radius=radius)
    near_rest = bfs_distances(G, rest, radius=radius)
    return {v for v in near_s if v in near_rest}


def component_bounds(G: Graph, levels, r: int) -> tuple[int, ...]:
    """Tight P1 bounds: one more than the largest 3r-component diameter."""
    out = []
    for V in levels:
        comps = n_components(G, V, 3 * r)
        out.append(1 + max((set_diameter(G, c) for c in comps), default=0))
    return tuple(out)


def generate_level_sets(G: Graph, r: int, num_levels: int, scale: int, seed: int,
                        domain: frozenset[int] | None = None,
                        max_attempts: int = 32) -> LevelSets:
    """Search seeded cell offsets until the level sets pass verification."""
    if not G.is_lattice:
        raise UnsupportedTopology("level sets are generated on lattice graphs")
    if r < 1 or num_levels < 1 or scale < 2:
        raise InvalidParameter("need r >= 1, num_levels >= 1, scale >= 2")
    domain = default_domain(G) if domain is None else G.check_vertices(domain)
    if not domain:
        raise GenerationFailed("empty domain")
    margin = core_margin(r)
    for n in range(1, num_levels):
        side = scale ** n
        if side - 2 * margin <= 0:
            raise GenerationFailed(
                f"level {n}: cells of side {side} have empty cores for r={r} "
                f"(collar margin {margin})", witness={"level": n, "side": side})
        if G.topology == TORUS and any(side >= length for length in G.dims):
            raise GenerationFailed(
                f"level {n}: cells of side {side} do not fit in torus {G.dims}",
                witness={"level": n, "side": side})

    rng = random.Random(seed)
    last = None
    for attempt in range(max_attempts):
        offsets = tuple(
            tuple(rng.randrange(scale ** n) for _ in G.dims) for n in range(1, num_levels)
        )
        levels: list[frozenset[int]] = [frozenset()] * num_levels
        levels[-1] = domain
        zones: set[int] = set()
        empty = None
        for n in range(num_levels - 1, 0, -1):
            zones |= mixed_zone(G, levels[n], 4 * r)
            V = (_cores(G, scale ** n, offsets[n - 1], margin) & domain) - zones
            if not V:
                empty = n
                break
            levels[n - 1] = frozenset(V)
        if empty is not None:
            last = f"level {empty} emptied by collars of higher levels"
            continue
        bounds = component_bounds(G, levels, r)
        result = LevelSets(tuple(levels), r, bounds, domain, scale, offsets, seed)
        report = verify_level_sets(G, result)
        if report.ok:
            return result
        last = report.summary()
    raise GenerationFailed(f"no valid offsets in {max_attempts} attempts ({last})",
                           witness={"last_failure": last})


def verify_level_sets(G: Graph, L: LevelSets) -> Report:
    """Check P1-P3. Vertices whose r-ball leaves the domain are exempt
    from P2 and counted in ``info['p2_exemptions']``."""
    report = Report()
    r = L.r
    if len(L.component_bounds) != len(L.levels):
        report.add("P1", False, {"reason": "component_bounds length mismatch"})
    else:
        bad = None
        for n, (V, c) in enumerate(zip(L.levels, L.component_bounds), 1):
            for comp in n_components(G, V, 3 * r):
                diam = set_diameter(G, comp)
                if diam >= c:
                    bad = {"level": n, "component_min": min(comp), "diameter": diam, "bound": c}
                    break
            if bad:
                break
        report.add("P1", bad is None, bad)

    domain = default_domain(G) if L.domain is None else L.domain
    exempt = 0
    p2_bad = []
    for x in G.vertices:
        bx = ball(G, [x], r)
        if not bx <= domain:
            exempt += 1
            continue
        if not any(bx <= V for V in L.levels):
            p2_bad.append(x)
    report.add("P2", not p2_bad, {"vertex": p2_bad[0], "count": len(p2_bad)} if p2_bad else None)
    report.info["p2_exemptions"] = exempt

    p3_bad = None
    for n, Vn in enumerate(L.levels):
        for m in range(n + 1, len(L.levels)):
            Vm = L.levels[m]
            for x in sorted(Vn):
                bx = ball(G, [x], 4 * r)
                if bx & Vm and not bx <= Vm:
                    p3_bad = {"vertex": x, "lower": n + 1, "upper": m + 1}
                    break
            if p3_bad:
                break
        if p3_bad:
            break
    report.add("P3", p3_bad is None, p3_bad)
    return report


def fill_levels(G: Graph, L: LevelSets) -> list[frozenset[int]]:
    """W_n: every 3r-component of V_n replaced by its filling.

    Components nested inside another component's filling are skipped. On a
    torus nothing can be filled, so every 3r-component must already be full
    (or be the whole torus)."""
    out = []
    everything = frozenset(G.vertices)
    for n, V in enumerate(L.levels, 1):
        comps = n_components(G, V, 3 * L.r)
        if G.topology == TORUS:
            for comp in comps:
                if comp != everything and not is_full(G, comp):
                    raise NotFillable(f"level {n}: 3r-component at {min(comp)} is not full on a torus",
                                      witness={"level": n, "component_min": min(comp)})
            out.append(V)
            continue
        if G.topology != WINDOW:
            raise UnsupportedTopology("filling needs a window or torus")
        filled = []
        for comp in comps:
            try:
                filled.append((fill(G, comp), comp))
            except NotFillable as exc:
                raise NotFillable(f"level {n}: component at {min(comp)} cannot be filled",
                                  witness={"level": n, "component_min": min(comp)}) from exc
        filled.sort(key=lambda pair: (-len(pair[0]), min(pair[1])))
        covered: set[int] = set()
        for hat, comp in filled:
            if comp <= covered:
                continue
            covered |= hat
        out.append(frozenset(covered) | V)
    return out


def levels_to_toast(G: Graph, W: list[frozenset[int]]) -> Toast:
    """Tiles are the connected components of each W_n, tagged with level n.
    The result is not self-certified; run verify_toast on it."""
    tiles = []
    for n, Wn in enumerate(W, 1):
        for comp in connected_components(G, Wn):
            tiles.append(Tile(len(tiles), n, comp))
    return Toast(tuple(tiles), claims_connected=True, claims_layered=False)


def build_toast(G: Graph, r: int, num_levels: int, scale: int, seed: int,
                domain: frozenset[int] | None = None) -> tuple[LevelSets, list[frozenset[int]], Toast]:
    """generate_level_sets -> fill_levels -> levels_to_toast."""
    L = generate_level_sets(G, r, num_levels, scale, seed, domain=domain)
    W = fill_levels(G, L)
    return L, W, levels_to_toast(G, W)
