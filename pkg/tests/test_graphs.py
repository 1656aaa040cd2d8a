import networkx as nx
import pytest

from braidwalk.braid_core import B3, B3_MOD_Z, Family, GroupContext
from braidwalk.graphs import (
    NotACactus,
    cactus_canonical_form,
    cayley_ball,
    free_product_ball,
    isomorphic_balls,
    projection_is_isomorphism,
    schreier_ball,
    to_networkx,
    wl_hash,
    write_edge_list,
)
from braidwalk.montecarlo.balls import bfs_distances


@pytest.mark.parametrize("ctx", [B3, B3_MOD_Z])
def test_cayley_ball_matches_bfs(ctx):
    dist, edges = cayley_ball(ctx, 5)
    ref = bfs_distances(5, ctx)
    assert len(dist) == len(ref)
    assert sorted(dist.values()) == sorted(ref.values())
    assert all(lab in "aAbB" for _, _, lab in edges)


def test_free_product_ball_sizes():
    # c, c^-1, d, d^-1 at distance one
    dist, _ = free_product_ball(3, 3)
    counts = [sum(1 for d in dist.values() if d == r) for r in range(4)]
    assert counts[:2] == [1, 4]


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_schreier_isomorphic_to_free_product(k):
    ctx = B3_MOD_Z if k == 3 else GroupContext(Family.AkmodZ, k)
    assert isomorphic_balls(ctx, 5)
    assert projection_is_isomorphism(ctx, 5)


def test_canonical_form_separates():
    d3, e3 = free_product_ball(3, 4)
    d4, e4 = free_product_ball(4, 4)
    g3, g4 = to_networkx(e3, d3), to_networkx(e4, d4)
    assert cactus_canonical_form(g3, "1") != cactus_canonical_form(g4, "1")
    assert wl_hash(g3) == wl_hash(to_networkx(e3, d3))


def test_canonical_form_is_label_invariant():
    d, e = free_product_ball(4, 4)
    g = to_networkx(e, d)
    relabel = {v: f"n{i}" for i, v in enumerate(sorted(g.nodes, reverse=True))}
    h = nx.relabel_nodes(g, relabel)
    assert cactus_canonical_form(g, "1") == cactus_canonical_form(h, relabel["1"])


def test_not_a_cactus():
    with pytest.raises(NotACactus):
        cactus_canonical_form(nx.complete_graph(4), 0)


def test_write_edge_list(tmp_path):
    _, edges = schreier_ball(B3_MOD_Z, 2)
    path = tmp_path / "g.txt"
    n = write_edge_list(path, edges)
    lines = path.read_text().splitlines()
    assert n == len(lines) == len(edges)
    assert all(len(line.split()) == 3 for line in lines)
