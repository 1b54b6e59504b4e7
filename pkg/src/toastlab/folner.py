"""Følner pairs on Z^d and finite connected-isoperimetric families."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParameter, UndefinedRatio, UnsupportedTopology
from .graph_core import WINDOW, Graph, ball, boundary, build_grid, connected_components, is_connected
from .report import Report


@dataclass(frozen=True, eq=False)
class FolnerPair:
    n: int
    F: frozenset[int]
    B: frozenset[int]
    graph: Graph

    @property
    def shell(self) -> frozenset[int]:
        return self.B - self.F

    @property
    def ratio(self) -> Fraction:
        if not self.F:
            raise UndefinedRatio("F is empty")
        return Fraction(len(self.shell), len(self.F))


def folner_sets(d: int, n: int, thickness: int = 2) -> FolnerPair:
    """F_n = B_{n - thickness} inside B_n around the centre of a window of
    radius n + 1. Thickness 2 is the canonical family; thickness 1 gives the
    l1 sphere as shell, which is disconnected."""
    if d < 2:
        raise InvalidParameter("d must be at least 2")
    if n < 2:
        raise InvalidParameter("n must be at least 2")
    if not 1 <= thickness <= n:
        raise InvalidParameter("thickness must lie in 1..n")
    G = build_grid([2 * (n + 1) + 1] * d, WINDOW)
    c = G.center
    return FolnerPair(n, ball(G, [c], n - thickness), ball(G, [c], n), G)


def verify_folner(G: Graph, p: FolnerPair, epsilon) -> Report:
    """Boundary in shell, shell connected, and |B - F| / |F| < epsilon."""
    epsilon = Fraction(epsilon)
    report = Report()
    report.add("F-in-B", p.F <= p.B)
    shell = p.B - p.F
    outside = sorted(boundary(G, p.F, 1) - shell) if p.F else []
    report.add("boundary-in-shell", not outside,
               {"vertex": outside[0], "count": len(outside)} if outside else None)
    parts = connected_components(G, shell)
    report.add("shell-connected", bool(shell) and len(parts) == 1,
               None if len(parts) == 1 else {"components": len(parts)})
    if p.F:
        ratio = Fraction(len(shell), len(p.F))
        report.add("ratio", ratio < epsilon, None if ratio < epsilon else {"ratio": str(ratio)})
        report.info["ratio"] = str(ratio)
        report.info["ratio_float"] = float(ratio)
    else:
        report.add("ratio", False, {"reason": "F is empty"})
    return report


@dataclass(frozen=True)
class IsoFamily:
    members: tuple[tuple[frozenset[int], frozenset[int]], ...]

    @classmethod
    def of(cls, pairs) -> "IsoFamily":
        return cls(tuple((frozenset(F), frozenset(B)) for F, B in pairs))


def verify_iso_family(G: Graph, fam: IsoFamily) -> tuple[Report, Fraction]:
    """Check the four conditions on a finite family of pairs F <= B_F and
    return |union(B_F - F)| / |union F|.

    (1) visible boundary of F inside B_F - F, (2) B_F - F connected,
    (3) B_F disjoint from every other F', (4) every non-escaping component of
    G minus the union of the F lies inside the union of the B_F."""
    if G.topology != WINDOW:
        raise UnsupportedTopology("the visible boundary needs a window")
    if not fam.members:
        raise UndefinedRatio("empty family")
    report = Report()
    members = [(G.check_vertices(F), G.check_vertices(B)) for F, B in fam.members]

    bad1 = [i for i, (F, B) in enumerate(members) if not boundary(G, F, 1, "visible") <= B - F]
    report.add("(1)", not bad1, {"member": bad1[0], "count": len(bad1)} if bad1 else None)

    bad2 = [i for i, (F, B) in enumerate(members) if not (B - F) or not is_connected(G, B - F)]
    report.add("(2)", not bad2, {"member": bad2[0], "count": len(bad2)} if bad2 else None)

    bad3 = [(i, j) for i, (_, B) in enumerate(members) for j, (F2, _) in enumerate(members)
            if i != j and B & F2]
    report.add("(3)", not bad3, {"members": list(bad3[0]), "count": len(bad3)} if bad3 else None)

    all_f = frozenset().union(*(F for F, _ in members))
    all_b = frozenset().union(*(B for _, B in members))
    stray = []
    for comp in connected_components(G, frozenset(G.vertices) - all_f):
        if not comp & G.window_exterior and not comp <= all_b:
            stray.append(min(comp))
    report.add("(4)", not stray, {"component_min": stray[0], "count": len(stray)} if stray else None)

    rim_touching = [i for i, (_, B) in enumerate(members) if ball(G, B, 1) & G.window_exterior]
    if rim_touching:
        report.info["rim_touching_members"] = rim_touching
    shells = frozenset().union(*(B - F for F, B in members))
    if not all_f:
        raise UndefinedRatio("all members have empty F")
    ratio = Fraction(len(shells), len(all_f))
    report.info["ratio"] = str(ratio)
    return report, ratio
