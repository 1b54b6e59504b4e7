"""Write every connected graph on 1..8 vertices (up to isomorphism) as graph6.

Graphs on up to 7 vertices come from the networkx atlas. Every connected
graph on 8 vertices has a vertex whose removal leaves a connected graph, so
the 8-vertex graphs are obtained by attaching a new vertex to each
connected 7-vertex graph in every possible way and removing isomorphic
copies (Weisfeiler-Lehman hash buckets, then an exact isomorphism test).

Expected counts: 1, 1, 2, 6, 21, 112, 853, 11117.
"""
from __future__ import annotations

import argparse
from itertools import combinations
from pathlib import Path

import networkx as nx

EXPECTED = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}


def connected_graphs(max_n: int = 8) -> dict[int, list[nx.Graph]]:
    by_n: dict[int, list[nx.Graph]] = {n: [] for n in range(1, max_n + 1)}
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if 1 <= n <= min(max_n, 7) and nx.is_connected(g):
            by_n[n].append(nx.convert_node_labels_to_integers(g))
    if max_n >= 8:
        buckets: dict[str, list[nx.Graph]] = {}
        for base in by_n[7]:
            for k in range(1, 8):
                for nbrs in combinations(range(7), k):
                    g = base.copy()
                    g.add_edges_from((7, v) for v in nbrs)
                    key = nx.weisfeiler_lehman_graph_hash(g, iterations=3)
                    bucket = buckets.setdefault(key, [])
                    if not any(nx.is_isomorphic(g, h) for h in bucket):
                        bucket.append(g)
        by_n[8] = [g for bucket in buckets.values() for g in bucket]
    return by_n


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests/data/connected_graphs_le8.g6"))
    ap.add_argument("--max-n", type=int, default=8)
    args = ap.parse_args()
    by_n = connected_graphs(args.max_n)
    lines = []
    for n in sorted(by_n):
        found = len(by_n[n])
        if found != EXPECTED[n]:
            raise SystemExit(f"n={n}: found {found} graphs, expected {EXPECTED[n]}")
        lines += sorted(nx.to_graph6_bytes(g, header=False).decode().strip() for g in by_n[n])
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} graphs to {args.out}")


if __name__ == "__main__":
    main()
