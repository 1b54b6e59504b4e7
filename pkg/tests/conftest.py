from functools import lru_cache
from pathlib import Path

import networkx as nx
import pytest

from toastlab.graph_core import build_grid, from_edges
from toastlab.levels import build_toast, centered_box

DATA = Path(__file__).parent / "data"


@lru_cache(maxsize=None)
def torus_toast(side, scale, seed=7, levels=2, r=1):
    G = build_grid([side, side], "torus")
    L, W, T = build_toast(G, r, levels, scale, seed)
    return G, L, W, T


@lru_cache(maxsize=None)
def window_toast(side=96, inner=64, scale=8, seed=7, levels=2, r=1):
    G = build_grid([side, side], "window")
    L, W, T = build_toast(G, r, levels, scale, seed, domain=centered_box(G, [inner, inner]))
    return G, L, W, T


def matching_scale(side):
    """Largest-cell scale that still fits a 2-level toast on a side x side torus."""
    return 6 if side < 16 else 8


@lru_cache(maxsize=1)
def graph_corpus():
    """All connected graphs on 1..8 vertices, as explicit graphs."""
    out = []
    for line in (DATA / "connected_graphs_le8.g6").read_text().split():
        g = nx.from_graph6_bytes(line.encode())
        out.append(from_edges(g.number_of_nodes(), list(g.edges())))
    return out


def at(G, *coord):
    return G.vertex_at(coord)


@pytest.fixture(scope="session")
def torus64():
    return torus_toast(64, 8)


@pytest.fixture(scope="session")
def window96():
    return window_toast()


@pytest.fixture(scope="session")
def torus8():
    return torus_toast(8, 6)
