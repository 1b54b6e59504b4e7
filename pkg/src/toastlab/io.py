"""Deterministic JSON encoding of graphs, toasts and certificates.

Every encoder sorts its collections, and :func:`dumps` sorts keys, so equal
objects always serialise to identical bytes.
"""
from __future__ import annotations

import json
from pathlib import Path

from .folner import IsoFamily
from .graph_core import EXPLICIT, Graph, build_grid, edge_key, from_edges
from .levels import LevelSets
from .matching import FractionalMatching, Matching
from .oracles import KappaReport
from .orientation import Cycle, Orientation
from .report import Report
from .toast import Tile, Toast
from .tree import TreeCertificate


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def write_json(path, data) -> None:
    Path(path).write_text(dumps(data))


def read_json(path):
    return json.loads(Path(path).read_text())


def _edges(edges) -> list[list[int]]:
    return [list(e) for e in sorted(edge_key(*e) for e in edges)]


# graph ------------------------------------------------------------------


def graph_to_json(G: Graph) -> dict:
    out = {"topology": G.topology, "dims": list(G.dims), "n": len(G)}
    if G.topology == EXPLICIT:
        out["edges"] = _edges(G.edges)
    return out


def graph_from_json(data: dict) -> Graph:
    if data["topology"] == EXPLICIT:
        return from_edges(int(data["n"]), data["edges"])
    return build_grid(data["dims"], data["topology"])


def vertex_set_to_json(S) -> list[int]:
    return sorted(S)


# toasts and levels --------------------------------------------------------


def toast_to_json(T: Toast) -> dict:
    return {
        "flags": {"claims_connected": T.claims_connected, "claims_layered": T.claims_layered},
        "tiles": [{"id": t.id, "level": t.level, "vertices": sorted(t.vertices)} for t in T.tiles],
    }


def toast_from_json(data: dict) -> Toast:
    tiles = tuple(Tile(int(t["id"]), int(t["level"]), frozenset(t["vertices"])) for t in data["tiles"])
    flags = data.get("flags", {})
    return Toast(tiles, bool(flags.get("claims_connected", False)), bool(flags.get("claims_layered", False)))


def levels_to_json(L: LevelSets) -> dict:
    return {
        "r": L.r,
        "scale": L.scale,
        "seed": L.seed,
        "offsets": [list(o) for o in L.offsets],
        "component_bounds": list(L.component_bounds),
        "levels": [sorted(V) for V in L.levels],
        "domain": None if L.domain is None else sorted(L.domain),
    }


def levels_from_json(data: dict) -> LevelSets:
    return LevelSets(
        tuple(frozenset(V) for V in data["levels"]),
        int(data["r"]),
        tuple(data["component_bounds"]),
        None if data.get("domain") is None else frozenset(data["domain"]),
        data.get("scale"),
        tuple(tuple(o) for o in data.get("offsets", ())),
        data.get("seed"),
    )


def report_to_json(R: Report) -> dict:
    return R.to_json()


# certificates -------------------------------------------------------------


def tree_to_json(cert: TreeCertificate) -> dict:
    return {
        "tree_edges": _edges(cert.tree_edges),
        "exit_edges": _edges(cert.exit_edges),
        "exit_vertices": [[k, v] for k, v in sorted(cert.exit_vertices.items())],
        "escape_orientation": [[v, p] for v, p in sorted(cert.escape_orientation.items())],
    }


def tree_from_json(data: dict) -> TreeCertificate:
    return TreeCertificate(
        {edge_key(*e) for e in data["tree_edges"]},
        {int(k): int(v) for k, v in data["exit_vertices"]},
        {edge_key(*e) for e in data["exit_edges"]},
        {int(v): int(p) for v, p in data["escape_orientation"]},
    )


def orientation_to_json(O: Orientation) -> list[dict]:
    return [{"tail": t, "head": h} for t, h in sorted(O.arcs.values())]


def orientation_from_json(data) -> Orientation:
    O = Orientation()
    for arc in data:
        O.orient(int(arc["tail"]), int(arc["head"]))
    return O


def cycles_to_json(cycles: list[Cycle]) -> list[list[int]]:
    return [list(c.vertices) for c in cycles]


def fractional_to_json(f: FractionalMatching) -> dict:
    return {"d": f.d, "num": [[u, v, j] for (u, v), j in sorted(f.num.items())]}


def fractional_from_json(data: dict) -> FractionalMatching:
    return FractionalMatching(int(data["d"]), {edge_key(u, v): int(j) for u, v, j in data["num"]})


def matching_to_json(M: Matching) -> list[list[int]]:
    return _edges(M.edges)


def matching_from_json(data) -> Matching:
    return Matching(frozenset(edge_key(*e) for e in data))


def kappa_to_json(K: KappaReport) -> dict:
    return {
        "d": K.d,
        "window": list(K.window),
        "max_set_size": K.max_set_size,
        "kappa": K.kappa,
        "witness_sets_checked": K.witness_sets_checked,
        "failing_set_at_kappa_minus_1": sorted(K.failing_set_at_kappa_minus_1),
        "failing_shape": [list(c) for c in K.failing_shape],
        "sets_by_size": {str(k): v for k, v in sorted(K.sets_by_size.items())},
    }


def iso_family_to_json(fam: IsoFamily) -> dict:
    return {"members": [{"F": sorted(F), "B": sorted(B)} for F, B in fam.members]}


def iso_family_from_json(data: dict) -> IsoFamily:
    return IsoFamily.of((m["F"], m["B"]) for m in data["members"])
