"""Brute-force ground truth, built on different algorithms than the main
constructions so that agreement between the two means something.

* maximum bipartite matching by augmenting paths (vs circuit rounding),
* parity-pattern enumeration over edge subsets (vs tree-path pairing),
* thickened-boundary connectivity over enumerated lattice animals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import BudgetExceeded, InvalidInput, InvalidParameter, NoSolution
from .graph_core import WINDOW, Graph, ball, build_grid, edge_key, is_connected
from .matching import Matching, two_coloring

# --------------------------------------------------------------------------
# matching


class OracleMatching(NamedTuple):
    matching: Matching
    perfect: bool


def oracle_matching(G: Graph) -> OracleMatching:
    """Maximum matching of a bipartite graph by repeated augmenting paths."""
    color = two_coloring(G)
    if color is None:
        raise InvalidInput("graph is not bipartite")
    mate: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for w in G.adj[u]:
            if w in seen:
                continue
            seen.add(w)
            if w not in mate or augment(mate[w], seen):
                mate[w] = u
                mate[u] = w
                return True
        return False

    for u in G.vertices:
        if color[u] == 0 and u not in mate:
            augment(u, set())
    edges = frozenset(edge_key(u, w) for u, w in mate.items())
    return OracleMatching(Matching(edges), 2 * len(edges) == len(G))


# --------------------------------------------------------------------------
# parity subgraphs

MAX_PARITY_VERTICES = 20


class ParityOracle:
    """All degree-parity patterns realised by spanning subgraphs of G.

    Edge subsets are enumerated edge by edge; two partial subsets with the
    same parity pattern are interchangeable for every later choice, so only
    one representative per pattern is kept. The pattern of a subset is a
    bitmask with bit v set iff v has odd degree."""

    def __init__(self, G: Graph):
        if len(G) > MAX_PARITY_VERTICES:
            raise InvalidParameter(f"parity enumeration is limited to {MAX_PARITY_VERTICES} vertices")
        self.G = G
        patterns = {0}
        for u, v in G.edges:
            flip = (1 << u) | (1 << v)
            patterns |= {p ^ flip for p in patterns}
        self.patterns = frozenset(patterns)

    def exists(self, P) -> bool:
        mask = 0
        for v in self.G.check_vertices(P):
            mask |= 1 << v
        return mask in self.patterns


def oracle_parity_exists(G: Graph, P) -> bool:
    """Whether some H <= E(G) has odd degree exactly on P."""
    return ParityOracle(G).exists(P)


# --------------------------------------------------------------------------
# kappa search


@dataclass
class KappaReport:
    d: int
    window: tuple[int, ...]
    max_set_size: int
    kappa: int
    witness_sets_checked: int
    failing_set_at_kappa_minus_1: frozenset[int] = frozenset()
    failing_shape: tuple[tuple[int, ...], ...] = ()
    sets_by_size: dict[int, int] = field(default_factory=dict)


def _neighbours(cell: tuple[int, ...]):
    for axis in range(len(cell)):
        for step in (-1, 1):
            yield cell[:axis] + (cell[axis] + step,) + cell[axis + 1:]


def _normalise(cells) -> tuple[tuple[int, ...], ...]:
    lo = [min(c[i] for c in cells) for i in range(len(next(iter(cells))))]
    return tuple(sorted(tuple(x - l for x, l in zip(c, lo)) for c in cells))


def lattice_animals(d: int, max_size: int, budget: int | None = None):
    """Connected subsets of Z^d up to translation, by size; each shape is
    normalised to have minimum coordinate 0 on every axis."""
    layers: dict[int, list[tuple]] = {}
    if max_size < 1:
        return layers
    current = {(tuple([0] * d),)}
    total = 0
    for size in range(1, max_size + 1):
        layers[size] = sorted(current)
        total += len(current)
        if budget is not None and total > budget:
            raise BudgetExceeded(f"more than {budget} sets", partial=layers)
        if size == max_size:
            break
        grown = set()
        for shape in current:
            cells = set(shape)
            for c in shape:
                for nb in _neighbours(c):
                    if nb not in cells:
                        grown.add(_normalise(cells | {nb}))
        current = grown
    return layers


def kappa_search(window_dims, max_set_size: int, kappa_max: int,
                 budget: int | None = None, anchor=None) -> KappaReport:
    """Smallest kappa <= kappa_max such that B_kappa(C) - C is connected for
    every connected full C of at most max_set_size lattice points.

    Shapes are placed with their bounding-box corner at ``anchor`` (default:
    centred in the window). Raises NoSolution if no kappa up to kappa_max
    works and BudgetExceeded (with the partial report) past ``budget`` sets."""
    dims = tuple(int(x) for x in window_dims)
    if kappa_max < 1:
        raise InvalidParameter("kappa_max must be at least 1")
    if max_set_size < 0:
        raise InvalidParameter("max_set_size must be non-negative")
    d = len(dims)
    G = build_grid(dims, WINDOW)
    report = KappaReport(d, dims, max_set_size, 1, 0)
    if max_set_size == 0:
        return report
    try:
        animals = lattice_animals(d, max_set_size, budget)
    except BudgetExceeded as exc:
        report.sets_by_size = {k: len(v) for k, v in exc.partial.items()}
        report.witness_sets_checked = sum(report.sets_by_size.values())
        raise BudgetExceeded(str(exc), partial=report) from None
    everything = frozenset(G.vertices)

    placed = []
    for size, shapes in animals.items():
        full = 0
        for shape in shapes:
            extent = [max(c[i] for c in shape) + 1 for i in range(d)]
            base = anchor if anchor is not None else [(s - e) // 2 for s, e in zip(dims, extent)]
            C = frozenset(G.vertex_at([x + b for x, b in zip(c, base)]) for c in shape)
            if ball(G, C, kappa_max + 1) & G.window_exterior:
                raise InvalidParameter(f"window {dims} too small for sets of size {size} "
                                       f"at kappa_max {kappa_max}")
            if not is_connected(G, everything - C):
                continue
            full += 1
            placed.append((shape, C))
        report.sets_by_size[size] = full
    report.witness_sets_checked = len(placed)

    previous_failure = None
    for kappa in range(1, kappa_max + 1):
        failure = None
        for shape, C in placed:
            if not is_connected(G, ball(G, C, kappa) - C):
                failure = (shape, C)
                break
        if failure is None:
            report.kappa = kappa
            if previous_failure is not None:
                report.failing_shape, report.failing_set_at_kappa_minus_1 = previous_failure
            return report
        previous_failure = failure
    raise NoSolution(f"no kappa <= {kappa_max} works",
                     witness={"shape": [list(c) for c in previous_failure[0]]})
