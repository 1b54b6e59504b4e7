"""Spanning forests with an escape orientation, built from a connected toast.

Each tile residual gets a breadth-first spanning tree; each tile gets one
exit edge from a vertex ``v_K`` of K to a neighbour ``u`` outside K (inside
the parent tile's residual, or outside every tile for maximal tiles). Every
vertex points toward its tile's exit, and every exit points into the
enclosing region, so parent walks always end at the exterior.

On a finite window "one-ended" is replaced by a vertex-deletion proxy:
removing any covered vertex from the forest must leave exactly one piece
(of the deleted vertex's tree) that still escapes, i.e. contains a rim
vertex or a vertex whose parent is the exterior marker.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import InvalidToast, NoEscape
from .graph_core import Edge, Graph, edge_key
from .report import Report
from .toast import Toast, verify_toast

EXTERIOR = -1


@dataclass
class TreeCertificate:
    tree_edges: set[Edge] = field(default_factory=set)
    exit_vertices: dict[int, int] = field(default_factory=dict)
    exit_edges: set[Edge] = field(default_factory=set)
    escape_orientation: dict[int, int] = field(default_factory=dict)


def _bfs_tree(G: Graph, region: frozenset[int]) -> list[Edge]:
    root = min(region)
    seen = {root}
    queue = deque([root])
    edges = []
    while queue:
        v = queue.popleft()
        for w in G.adj[v]:
            if w in region and w not in seen:
                seen.add(w)
                edges.append(edge_key(v, w))
                queue.append(w)
    return edges


def _orient_toward(root: int, edges: list[Edge]) -> dict[int, int]:
    nbrs: dict[int, list[int]] = {}
    for u, v in edges:
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    parent = {}
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for w in nbrs.get(v, ()):
            if w not in seen:
                seen.add(w)
                parent[w] = v
                stack.append(w)
    return parent


def build_tree(G: Graph, T: Toast) -> TreeCertificate:
    """One-ended spanning forest of the union of a connected toast."""
    report = verify_toast(G, T)
    if not report.passed("T1", "T2", "T3"):
        failed = report.failures()[0]
        raise InvalidToast(f"toast fails {failed.name}", witness=failed.witness)
    st = T.structure
    covered = T.union
    cert = TreeCertificate()
    for tile in T.tiles:
        res = st.residual(tile.id)
        tree = _bfs_tree(G, res)
        cert.tree_edges.update(tree)

        parent_id = st.parent(tile.id)
        if parent_id is not None:
            targets = st.residual(parent_id)
        else:
            targets = frozenset(G.vertices) - covered
        exit_pair = None
        for v in sorted(tile.vertices):
            outside = [u for u in G.adj[v] if u in targets]
            if outside:
                exit_pair = (v, min(outside))
                break
        if exit_pair is None:
            rim = sorted(tile.vertices & G.window_exterior) if parent_id is None else []
            if not rim:
                raise NoEscape(f"tile {tile.id} has no neighbour outside it to exit through",
                               witness={"tile": tile.id})
            v_k = rim[0]
            cert.exit_vertices[tile.id] = v_k
            cert.escape_orientation[v_k] = EXTERIOR
        else:
            v_k, u = exit_pair
            if v_k not in res:
                raise InvalidToast(f"exit vertex {v_k} of tile {tile.id} lies in a smaller tile")
            cert.exit_vertices[tile.id] = v_k
            cert.exit_edges.add(edge_key(v_k, u))
            cert.escape_orientation[v_k] = u
            if parent_id is None:
                cert.escape_orientation[u] = EXTERIOR
        cert.escape_orientation.update(_orient_toward(v_k, tree))
    return cert


def _forest_adjacency(edges) -> dict[int, list[int]]:
    nbrs: dict[int, list[int]] = {}
    for u, v in edges:
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    return nbrs


def escaping_markers(G: Graph, cert: TreeCertificate) -> set[int]:
    """Forest vertices that count as having reached the exterior."""
    verts = set(cert.escape_orientation)
    for e in cert.tree_edges | cert.exit_edges:
        verts.update(e)
    marks = {v for v in verts if v in G.window_exterior}
    marks.update(v for v, p in cert.escape_orientation.items() if p == EXTERIOR)
    return marks


def verify_tree(G: Graph, T: Toast, cert: TreeCertificate) -> Report:
    """Checks (a) spanning, (b) acyclic, (c) one parent per vertex with
    terminating parent walks, (d) the vertex-deletion one-end proxy."""
    report = Report()
    covered = T.union
    forest = cert.tree_edges | cert.exit_edges
    non_edges = sorted(e for e in forest if not G.has_edge(*e))
    untouched = sorted(covered - set(cert.escape_orientation))
    bad_a = {}
    if untouched:
        bad_a = {"vertex": untouched[0], "count": len(untouched)}
    elif non_edges:
        bad_a = {"non_edge": list(non_edges[0])}
    report.add("(a) spanning", not bad_a, bad_a or None)

    uf = {}

    def find(x):
        uf.setdefault(x, x)
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    cycle_edge = None
    for u, v in sorted(forest):
        a, b = find(u), find(v)
        if a == b:
            cycle_edge = [u, v]
            break
        uf[a] = b
    report.add("(b) acyclic", cycle_edge is None, {"edge": cycle_edge} if cycle_edge else None)

    orient = cert.escape_orientation
    bad_c = None
    limit = len(orient) + 1
    for v in sorted(covered):
        if v not in orient:
            bad_c = {"vertex": v, "reason": "no parent"}
            break
    if bad_c is None:
        for v, p in sorted(orient.items()):
            if p != EXTERIOR and edge_key(v, p) not in forest:
                bad_c = {"vertex": v, "reason": "parent edge not in forest"}
                break
    if bad_c is None:
        # each forest edge must carry exactly one parent pointer
        for u, v in sorted(forest):
            for x in (u, v):
                if x not in orient:
                    bad_c = {"vertex": x, "reason": "no parent"}
                    break
            if bad_c is None and (orient[u] == v) == (orient[v] == u):
                bad_c = {"edge": [u, v], "reason": "edge not oriented exactly once"}
            if bad_c:
                break
    if bad_c is None:
        done: set[int] = set()
        for v in sorted(orient):
            path = []
            x = v
            while x != EXTERIOR and x not in done:
                path.append(x)
                if len(path) > limit or x not in orient:
                    bad_c = {"vertex": v, "reason": "parent walk does not reach the exterior"}
                    break
                x = orient[x]
            if bad_c:
                break
            done.update(path)
    report.add("(c) out-degree", bad_c is None, bad_c)

    if cycle_edge is not None:
        report.add("(d) one-end", False, {"reason": "forest has a cycle"})
        return report
    bad_d = one_end_failures(G, cert, covered)
    report.add("(d) one-end", not bad_d,
               {"vertex": bad_d[0][0], "escaping": bad_d[0][1], "count": len(bad_d)} if bad_d else None)
    report.info["checked_vertices"] = len(covered)
    return report


def one_end_failures(G: Graph, cert: TreeCertificate, vertices) -> list[tuple[int, int]]:
    """(vertex, escaping piece count) for every vertex whose deletion does not
    leave exactly one escaping piece of its tree. Linear time via subtree
    marker counts."""
    nbrs = _forest_adjacency(cert.tree_edges | cert.exit_edges)
    marks = escaping_markers(G, cert)
    for v in cert.escape_orientation:
        nbrs.setdefault(v, [])
    sub: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    comp_total: dict[int, int] = {}
    comp_of: dict[int, int] = {}
    for root in sorted(nbrs):
        if root in parent:
            continue
        parent[root] = None
        order = [root]
        stack = [root]
        while stack:
            v = stack.pop()
            for w in nbrs[v]:
                if w not in parent:
                    parent[w] = v
                    order.append(w)
                    stack.append(w)
        for v in reversed(order):
            sub[v] = sub.get(v, 0) + (1 if v in marks else 0)
            if parent[v] is not None:
                sub[parent[v]] = sub.get(parent[v], 0) + sub[v]
        for v in order:
            comp_of[v] = root
        comp_total[root] = sub[root]
    bad = []
    for v in sorted(vertices):
        if v not in nbrs:
            bad.append((v, 0))
            continue
        pieces = sum(1 for w in nbrs[v] if parent.get(w) == v and sub[w] > 0)
        if parent[v] is not None and comp_total[comp_of[v]] - sub[v] > 0:
            pieces += 1
        if pieces != 1:
            bad.append((v, pieces))
    return bad


def to_dot(cert: TreeCertificate) -> str:
    """DOT digraph: tree edges solid, exit edges dashed, arrows toward exits."""
    lines = ["digraph tree {"]
    for v, p in sorted(cert.escape_orientation.items()):
        if p == EXTERIOR:
            lines.append(f'  {v} -> exterior [style=dotted];')
            continue
        style = "dashed" if edge_key(v, p) in cert.exit_edges else "solid"
        lines.append(f"  {v} -> {p} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
