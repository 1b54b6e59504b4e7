import itertools
from fractions import Fraction

import networkx as nx
import pytest

from conftest import at, torus_toast, window_toast
from toastlab.errors import InvalidToast, NotFound
from toastlab.graph_core import build_grid, from_edges, induced_edges, is_connected
from toastlab.toast import Tile, Toast, layers, refine_to_connected, residual, verify_toast


def box(G, lo, hi):
    """Vertices with every coordinate in [lo, hi)."""
    return frozenset(v for v, c in enumerate(G.coords) if all(lo <= x < hi for x in c))


def rect(G, x0, x1, y0, y1):
    return frozenset(at(G, x, y) for x in range(x0, x1) for y in range(y0, y1))


def t2_oracle(G, T):
    """Pairwise trichotomy with networkx neighbourhoods."""
    g = nx.Graph(G.edges)

    def b1(S):
        return set(S).union(*(set(g[v]) for v in S))

    bad = []
    for K, L in itertools.combinations(T.tiles, 2):
        bk, bl = b1(K.vertices), b1(L.vertices)
        if bk & L.vertices and not bk <= L.vertices and not bl <= K.vertices:
            bad.append((K.id, L.id))
    return bad


# -- layers and residuals --------------------------------------------------

G30 = build_grid([30, 30], "window")


def test_layers_two_disjoint_tiles():
    T = Toast((Tile(0, 1, rect(G30, 2, 5, 2, 5)), Tile(1, 1, rect(G30, 10, 13, 10, 13))))
    assert layers(T, G30) == [[0, 1]]


def test_layers_chain_gives_three_layers():
    T = Toast((Tile(0, 1, rect(G30, 10, 12, 10, 12)), Tile(1, 2, rect(G30, 8, 14, 8, 14)),
               Tile(2, 3, rect(G30, 4, 20, 4, 20))))
    assert layers(T, G30) == [[0], [1], [2]]


def test_layers_two_inside_one():
    T = Toast((Tile(0, 1, rect(G30, 5, 7, 5, 7)), Tile(1, 1, rect(G30, 10, 12, 10, 12)),
               Tile(2, 2, rect(G30, 3, 15, 3, 15))))
    assert layers(T, G30) == [[0, 1], [2]]


def test_layers_raises_on_t2_violation():
    T = Toast((Tile(0, 1, rect(G30, 2, 6, 2, 6)), Tile(1, 1, rect(G30, 6, 9, 2, 6))))
    with pytest.raises(InvalidToast):
        layers(T, G30)


def test_residual_examples():
    K, L, M = rect(G30, 10, 12, 10, 12), rect(G30, 8, 14, 8, 14), rect(G30, 4, 20, 4, 20)
    T = Toast((Tile(0, 1, K), Tile(1, 2, L), Tile(2, 3, M)))
    assert residual(G30, T, 0) == K
    assert residual(G30, T, 1) == L - K
    top = residual(G30, T, 2)
    assert top == M - L - K
    assert len(top) == 16 * 16 - 6 * 6
    with pytest.raises(NotFound):
        residual(G30, T, 99)


def test_tile_must_be_nonempty():
    with pytest.raises(InvalidToast):
        Tile(0, 1, frozenset())


# -- verify_toast ------------------------------------------------------------


def nested_boxes_torus():
    G = build_grid([36, 36], "torus")
    T = Toast((Tile(0, 1, box(G, 16, 20)), Tile(1, 2, box(G, 12, 24)), Tile(2, 3, frozenset(G.vertices))))
    return G, T


def test_nested_boxes_pass_t1_to_t3():
    G, T = nested_boxes_torus()
    report = verify_toast(G, T)
    assert report.passed("T1", "T2", "T3", "T4", "laminar")
    assert t2_oracle(G, T) == []


def test_t2_violation_has_witness():
    K, L = rect(G30, 2, 6, 2, 6), rect(G30, 6, 9, 2, 6)
    T = Toast((Tile(0, 1, K), Tile(1, 1, L)))
    report = verify_toast(G30, T)
    assert not report["T2"].passed
    assert report["T2"].witness["tiles"] == [0, 1]
    assert t2_oracle(G30, T) == [(0, 1)]


def test_t3_fails_on_two_far_squares():
    T = Toast((Tile(0, 1, rect(G30, 2, 5, 2, 5) | rect(G30, 20, 23, 20, 23)),))
    report = verify_toast(G30, T)
    assert report.passed("T2")
    assert not report["T3"].passed
    assert report["T3"].witness["components"] == 2


def test_duplicate_whole_tiles_have_empty_residual():
    G = build_grid([6, 6], "torus")
    everything = frozenset(G.vertices)
    T = Toast((Tile(0, 1, everything), Tile(1, 2, everything)))
    report = verify_toast(G, T)
    assert report.passed("T1", "T2")
    assert not report["T3"].passed
    assert report["T3"].witness == {"tile": 1, "reason": "empty residual", "count": 1}


def test_empty_toast_fails_t1_only_when_edges_exist():
    G = build_grid([4, 4], "torus")
    report = verify_toast(G, Toast())
    assert not report["T1"].passed
    assert report.passed("T2", "T3", "T4")
    assert verify_toast(from_edges(3, []), Toast()).passed("T1")


def test_t1_on_window_counts_only_edges_inside_union():
    K = rect(G30, 5, 10, 5, 10)
    report = verify_toast(G30, Toast((Tile(0, 1, K),)))
    assert report.passed("T1")
    assert report.info["edges_outside_tiles"] == len(G30.edges) - len(induced_edges(G30, K))


def test_threads_do_not_change_report(torus64):
    G, _, _, T = torus64
    assert verify_toast(G, T, threads=4).to_json() == verify_toast(G, T).to_json()


# -- generated toasts --------------------------------------------------------

SEEDS = range(20)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_generated_toasts_are_laminar_and_agree_with_oracle(seed):
    G, _, _, T = torus_toast(24, 8, seed=seed)
    report = verify_toast(G, T)
    assert report.passed("T1", "T2", "T3", "laminar")
    assert t2_oracle(G, T) == []


@pytest.mark.parametrize("seed", SEEDS)
def test_deleting_bottom_layers_preserves_t2(seed):
    G, _, _, T = window_toast(side=48, inner=40, scale=5, seed=seed, levels=3)
    st = T.structure
    for k in range(1, len(st.layers)):
        drop = [i for layer in st.layers[:k] for i in layer]
        rest = T.without(drop)
        report = verify_toast(G, rest)
        assert report.passed("T2"), (seed, k, report["T2"].witness)
        assert report.passed("T1")


def test_layers_partition_tiles(torus64):
    _, _, _, T = torus64
    st = T.structure
    flat = [i for layer in st.layers for i in layer]
    assert sorted(flat) == [t.id for t in T.tiles]
    for k, layer in enumerate(st.layers):
        for i in layer:
            # everything strictly inside a tile sits in an earlier layer
            assert all(st.layer_of[j] < k + 1 for j in st.below[i])
            if k:
                assert any(st.layer_of[j] == k for j in st.below[i])


# -- refine_to_connected -----------------------------------------------------


def test_refine_returns_connected_toast_unchanged(torus64):
    G, _, _, T = torus64
    out, coverage = refine_to_connected(G, T)
    assert out is T
    assert coverage == Fraction(len(T.union), len(G))


def test_refine_drops_disconnected_tile():
    K = rect(G30, 6, 8, 6, 8)
    M = rect(G30, 5, 9, 5, 9) | rect(G30, 15, 19, 15, 19)
    L = rect(G30, 2, 28, 2, 28)
    T = Toast((Tile(0, 1, K), Tile(1, 2, M), Tile(2, 3, L)))
    assert not verify_toast(G30, T).passed("T3")
    out, coverage = refine_to_connected(G30, T)
    assert [t.id for t in out.tiles] == [0, 2]
    assert verify_toast(G30, out).passed("T2", "T3")
    assert coverage == Fraction(len(L), len(G30))


def test_refine_of_disconnected_singleton_level_covers_nothing():
    tiles = tuple(Tile(i, 1, frozenset({at(G30, 3, 3 + 6 * i), at(G30, 20, 3 + 6 * i)})) for i in range(4))
    out, coverage = refine_to_connected(G30, Toast(tiles))
    assert len(out) == 0
    assert coverage == 0


def test_refine_rejects_t2_violations():
    T = Toast((Tile(0, 1, rect(G30, 2, 6, 2, 6)), Tile(1, 1, rect(G30, 6, 9, 2, 6))))
    with pytest.raises(InvalidToast):
        refine_to_connected(G30, T)


@pytest.mark.parametrize("seed", range(5))
def test_refine_output_passes_t2_t3_and_coverage_grows_with_levels(seed):
    G, _, _, T = window_toast(side=48, inner=40, scale=5, seed=seed, levels=3)
    st = T.structure
    coverages = []
    for k in range(1, len(st.layers) + 1):
        keep = {i for layer in st.layers[:k] for i in layer}
        part = T.without(t.id for t in T.tiles if t.id not in keep)
        out, coverage = refine_to_connected(G, part)
        assert verify_toast(G, out).passed("T2", "T3")
        coverages.append(coverage)
    assert coverages == sorted(coverages)


def test_refine_breaks_up_merged_tiles():
    G, _, _, T = window_toast(side=48, inner=40, scale=5, seed=3, levels=3)
    st = T.structure
    layer1 = st.layers[0]
    # merge the first two minimal tiles into a single disconnected tile
    a, b = T.tile(layer1[0]), T.tile(layer1[1])
    merged = Tile(a.id, a.level, a.vertices | b.vertices)
    tiles = [merged] + [t for t in T.tiles if t.id not in (a.id, b.id)]
    broken = Toast(tuple(tiles))
    assert not is_connected(G, merged.vertices)
    assert not verify_toast(G, broken).passed("T3")
    out, _ = refine_to_connected(G, broken)
    assert a.id not in {t.id for t in out.tiles}
    assert verify_toast(G, out).passed("T2", "T3")
