import itertools
import random
from collections import Counter

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import torus_toast
from toastlab.errors import InvalidToast, NoCycle, NoSolution, NotEvenDegree
from toastlab.graph_core import build_grid, edge_key, from_edges
from toastlab.oracles import ParityOracle
from toastlab.orientation import (
    Cycle,
    Orientation,
    balanced_orientation,
    extract_cycle,
    parity_subgraph,
    to_dot,
    verify_balanced,
)
from toastlab.toast import Tile, Toast


def parity_of(n, H):
    deg = [0] * n
    for u, v in H:
        deg[u] ^= 1
        deg[v] ^= 1
    return {v for v in range(n) if deg[v]}


def whole_tile(G):
    return Toast((Tile(0, 1, frozenset(G.vertices)),))


def cycle_graph(n):
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


# -- parity subgraphs --------------------------------------------------------


def test_parity_path():
    G = from_edges(3, [(0, 1), (1, 2)])
    assert parity_subgraph(G, [0, 2]) == {(0, 1), (1, 2)}


def test_parity_triangle():
    G = from_edges(3, [(0, 1), (1, 2), (0, 2)])
    H = parity_subgraph(G, [0, 1])
    assert parity_of(3, H) == {0, 1}


def test_parity_four_cycle_all_odd_matches_exhaustive_search():
    G = cycle_graph(4)
    solutions = [set(S) for k in range(5) for S in itertools.combinations(G.edges, k)
                 if parity_of(4, S) == {0, 1, 2, 3}]
    assert solutions
    H = parity_subgraph(G, [0, 1, 2, 3])
    assert H in solutions


def test_parity_odd_p_has_no_solution():
    with pytest.raises(NoSolution):
        parity_subgraph(cycle_graph(5), [0, 1, 2])


def test_parity_split_across_components():
    G = from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(NoSolution):
        parity_subgraph(G, [0, 2])
    assert parity_of(4, parity_subgraph(G, [0, 1, 2, 3])) == {0, 1, 2, 3}


@st.composite
def connected_graph_and_even_set(draw):
    n = draw(st.integers(1, 12))
    edges = {edge_key(v, draw(st.integers(0, v - 1))) for v in range(1, n)}
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    edges |= {edge_key(u, v) for u, v in extra if u != v}
    P = draw(st.sets(st.integers(0, n - 1)))
    if len(P) % 2:
        P = set(P) ^ {0}
    return from_edges(n, edges), P


@settings(max_examples=200, deadline=None)
@given(connected_graph_and_even_set())
def test_parity_random_connected(case):
    G, P = case
    H = parity_subgraph(G, P)
    assert H <= G.edge_set
    assert parity_of(len(G), H) == set(P)


def test_parity_success_matches_oracle_on_random_graphs():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(1, 8)
        pairs = list(itertools.combinations(range(n), 2))
        G = from_edges(n, [p for p in pairs if rng.random() < 0.3])
        oracle = ParityOracle(G)
        for k in range(n + 1):
            for P in itertools.combinations(range(n), k):
                try:
                    H = parity_subgraph(G, P)
                except NoSolution:
                    assert not oracle.exists(P)
                else:
                    assert oracle.exists(P)
                    assert parity_of(n, H) == set(P)


# -- cycles ------------------------------------------------------------------


def test_extract_cycle_four_cycle():
    G = cycle_graph(4)
    C = extract_cycle(G, G.edges, (0, 1), G.vertices)
    assert sorted(C.edges) == sorted(G.edges)
    assert C.vertices[0] == C.vertices[-1]


def test_extract_cycle_bowtie_returns_first_triangle():
    G = from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    C = extract_cycle(G, G.edges, (0, 1), G.vertices)
    through_e = [c for c in nx.simple_cycles(nx.Graph(G.edges)) if {0, 1} <= set(c)]
    assert len(through_e) == 1
    assert set(C.vertices) == set(through_e[0]) == {0, 1, 2}


def test_extract_cycle_missing_edge():
    G = cycle_graph(4)
    with pytest.raises(NoCycle):
        extract_cycle(G, [(1, 2), (2, 3), (0, 3)], (0, 1), G.vertices)


def test_extract_cycle_odd_degree_precondition():
    G = from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
    with pytest.raises(NoCycle):
        extract_cycle(G, G.edges, (0, 1), G.vertices)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_extract_cycle_keeps_degrees_even(seed):
    G = build_grid([5, 6], "torus")
    rng = random.Random(seed)
    available = set(G.edges)
    while available:
        e = rng.choice(sorted(available))
        C = extract_cycle(G, available, e, G.vertices)
        edges = C.edges
        assert len(set(edges)) == len(edges) and e in edges
        available -= set(edges)
        deg = Counter(v for edge in available for v in edge)
        assert all(k % 2 == 0 for k in deg.values())


# -- balanced orientation -----------------------------------------------------


def test_single_cycle_orientation_is_cyclic():
    G = cycle_graph(7)
    O = balanced_orientation(G, whole_tile(G))
    assert verify_balanced(G, O).ok
    assert len(O.cycles) == 1
    tails = sorted(t for t, _ in O.arcs.values())
    assert tails == list(range(7))


@pytest.mark.parametrize("prefer", ["direct", "stitch"])
def test_torus_8x8_orientation(torus8, prefer):
    G, _, _, T = torus8
    O = balanced_orientation(G, T, prefer=prefer)
    report = verify_balanced(G, O)
    assert report.ok
    outdeg = Counter(t for t, _ in O.arcs.values())
    indeg = Counter(h for _, h in O.arcs.values())
    assert set(outdeg.values()) == set(indeg.values()) == {2}


def test_stitch_method_is_exercised():
    G, _, _, T = torus_toast(32, 8, seed=3)
    O = balanced_orientation(G, T, prefer="stitch")
    methods = Counter(x["method"] for x in O.log)
    assert methods["stitch"] > 0
    assert verify_balanced(G, O).ok


def test_cycles_partition_edges(torus64):
    G, _, _, T = torus64
    O = balanced_orientation(G, T)
    seen = Counter(e for C in O.cycles for e in C.edges)
    assert set(seen) == G.edge_set
    assert set(seen.values()) == {1}


def test_orientation_decomposes_into_directed_cycles(torus8):
    """Independent of the recorded cycles: greedily peel directed cycles off
    the arc set, which only succeeds when every vertex is balanced."""
    G, _, _, T = torus8
    O = balanced_orientation(G, T)
    out = {v: [] for v in G.vertices}
    for t, h in O.arcs.values():
        out[t].append(h)
    remaining = sum(len(x) for x in out.values())
    while remaining:
        start = next(v for v in G.vertices if out[v])
        v = start
        while True:
            v = out[v].pop()
            remaining -= 1
            if v == start:
                break
    assert all(not x for x in out.values())


def test_star_is_not_even():
    G = from_edges(4, [(0, 1), (0, 2), (0, 3)])
    with pytest.raises(NotEvenDegree):
        balanced_orientation(G, whole_tile(G))


def test_window_graph_rejected():
    G = build_grid([6, 6], "window")
    with pytest.raises(NotEvenDegree):
        balanced_orientation(G, whole_tile(G))


def test_orientation_requires_valid_toast():
    G = build_grid([6, 6], "torus")
    with pytest.raises(InvalidToast):
        balanced_orientation(G, Toast())


def test_verify_flipped_edge_on_four_cycle():
    G = cycle_graph(4)
    O = Orientation()
    for t, h in [(0, 1), (1, 2), (2, 3), (0, 3)]:
        O.orient(t, h)
    report = verify_balanced(G, O)
    assert report.passed("all-oriented")
    assert report["balanced"].witness["vertices"] == [0, 3]


def test_verify_partial_orientation():
    G = cycle_graph(4)
    O = Orientation()
    O.orient(0, 1)
    report = verify_balanced(G, O)
    assert report["all-oriented"].witness == {"edge": [0, 3], "count": 3}


def test_orienting_twice_rejected():
    O = Orientation()
    O.orient(0, 1)
    with pytest.raises(ValueError):
        O.orient(1, 0)


def test_cycle_helpers_and_dot():
    C = Cycle((0, 1, 2, 0))
    assert len(C) == 3
    assert C.arcs == [(0, 1), (1, 2), (2, 0)]
    G = cycle_graph(3)
    O = balanced_orientation(G, whole_tile(G))
    assert to_dot(G, O).count("->") == 3
