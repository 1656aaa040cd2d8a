"""Balls of Cayley and Schreier graphs, as edge lists and networkx graphs.

* ``cayley_ball(ctx, R)``: X(G, S) for G = B3/Z or A_k/Z, generators a, b
  and inverses.
* ``schreier_ball(ctx, R)``: S(C_k, S), cosets {g, g.Delta}; for even k
  Delta is central, the quotient is already A_k/Z and this is the Cayley
  graph.
* ``free_product_ball(k, R)``: X(Z/k * Z/k, {c, c^-1, d, d^-1}).

Balls are taken in the graph metric of the graph itself and edges are
those of the induced subgraph.  Multi-edges (two generators joining the
same pair, as for k = 2 factors) are kept once in the networkx graph.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Hashable, Iterable

import networkx as nx

from .braid_core import GarsideNormalForm, GroupContext, identity, multiply_right
from .free_product import FPWord, schreier_project

Edge = tuple[str, str, str]


def _bfs(root, neighbours: Callable[[object], Iterable[tuple[str, object]]], key, radius: int):
    dist = {key(root): 0}
    nodes = {key(root): root}
    frontier = [root]
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for _, y in neighbours(x):
                ky = key(y)
                if ky not in dist:
                    dist[ky] = r
                    nodes[ky] = y
                    nxt.append(y)
        frontier = nxt
    edges: list[Edge] = []
    for kx, x in nodes.items():
        for label, y in neighbours(x):
            ky = key(y)
            if ky in dist:
                edges.append((kx, ky, label))
    return dist, edges


def _coset_key(x: GarsideNormalForm) -> str:
    return ".".join(x.word) or "1"


def _element_key(x: GarsideNormalForm) -> str:
    return str(x)


def _group_steps(x: GarsideNormalForm):
    return [(g, multiply_right(x, g)) for g in "aAbB"]


def cayley_ball(ctx: GroupContext, radius: int):
    """(distances, directed labelled edges) of the radius ball of X(G, S)."""
    return _bfs(identity(ctx), _group_steps, _element_key, radius)


def schreier_ball(ctx: GroupContext, radius: int):
    """Ball of the Schreier graph on cosets {g, g.Delta}, keyed by the Delta-free part."""
    return _bfs(identity(ctx), _group_steps, _coset_key, radius)


def _fp_steps(w: FPWord):
    return [(g, w.times(g)) for g in "cCdD"]


def free_product_ball(k: int, radius: int):
    return _bfs(FPWord(k), _fp_steps, str, radius)


def to_networkx(edges: Iterable[Edge], nodes: Iterable[Hashable] = ()) -> nx.Graph:
    """Undirected simple graph; self-loops (none occur here) are dropped."""
    g = nx.Graph()
    g.add_nodes_from(nodes)
    g.add_edges_from((u, v) for u, v, _ in edges if u != v)
    return g


def write_edge_list(path: str | Path, edges: Iterable[Edge]) -> int:
    """One edge per line: ``source target label``.  Returns the edge count."""
    lines = [f"{u} {v} {label}" for u, v, label in sorted(edges)]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))
    return len(lines)


def wl_hash(g: nx.Graph) -> str:
    return nx.weisfeiler_lehman_graph_hash(g, iterations=5)


class NotACactus(ValueError):
    pass


def cactus_canonical_form(g: nx.Graph, root: Hashable) -> str:
    """Canonical string of a connected rooted cactus (every block a cycle or an edge).

    Equal strings imply a root-preserving isomorphism.  Blocks hanging at
    a vertex are encoded recursively and sorted; a cycle is read in both
    directions from its attachment vertex and the smaller reading kept.
    Generic isomorphism search is hopeless on these highly symmetric
    graphs, while this is linear up to sorting.
    """
    blocks = [frozenset(c) for c in nx.biconnected_components(g)]
    at: dict[Hashable, list[int]] = {}
    for i, b in enumerate(blocks):
        sub = g.subgraph(b)
        if len(b) > 2 and sub.number_of_edges() != len(b):
            raise NotACactus("a block is neither a cycle nor a bridge")
        for v in b:
            at.setdefault(v, []).append(i)

    def cycle_order(i, v):
        b = blocks[i]
        if len(b) == 2:
            return [w for w in b if w != v]
        order, prev, cur = [], v, next(w for w in g[v] if w in b)
        while cur != v:
            order.append(cur)
            prev, cur = cur, next(w for w in g[cur] if w in b and w != prev)
        return order

    def vertex(v, parent):
        return "(" + "".join(sorted(block(i, v) for i in at.get(v, []) if i != parent)) + ")"

    def block(i, v):
        order = cycle_order(i, v)
        fwd = [vertex(w, i) for w in order]
        body = min("".join(fwd), "".join(reversed(fwd)))
        return f"[{len(order)}{body}]"

    if g.number_of_nodes() == 1:
        return "()"
    return vertex(root, None)


def isomorphic_balls(ctx: GroupContext, radius: int) -> bool:
    """Schreier ball of A_k/Z (or B3/Z) is isomorphic to the Z/k * Z/k ball.

    WL hashes must agree and the rooted cactus forms must coincide.
    """
    d1, e1 = schreier_ball(ctx, radius)
    d2, e2 = free_product_ball(ctx.k, radius)
    g1, g2 = to_networkx(e1, d1), to_networkx(e2, d2)
    if g1.number_of_nodes() != g2.number_of_nodes() or g1.number_of_edges() != g2.number_of_edges():
        return False
    if wl_hash(g1) != wl_hash(g2):
        return False
    return cactus_canonical_form(g1, "1") == cactus_canonical_form(g2, "1")


def projection_is_isomorphism(ctx: GroupContext, radius: int) -> bool:
    """Check that schreier_project maps the Schreier ball bijectively onto the
    free-product ball and carries edges to edges."""
    root = identity(ctx)
    d1, e1 = schreier_ball(ctx, radius)
    d2, e2 = free_product_ball(ctx.k, radius)
    reps = {}
    frontier = [root]
    reps[_coset_key(root)] = root
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for _, y in _group_steps(x):
                ky = _coset_key(y)
                if ky in d1 and ky not in reps:
                    reps[ky] = y
                    nxt.append(y)
        frontier = nxt
    image = {k: str(schreier_project(x)) for k, x in reps.items()}
    if len(set(image.values())) != len(image) or set(image.values()) != set(d2):
        return False
    fp_edges = {frozenset((u, v)) for u, v, _ in e2 if u != v}
    mapped = {frozenset((image[u], image[v])) for u, v, _ in e1 if u != v}
    return mapped == fp_edges
