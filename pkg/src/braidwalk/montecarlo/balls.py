"""Exhaustive ball computations: BFS distances and exact convolution powers."""

from __future__ import annotations

import math
from collections import defaultdict

from ..braid_core import (
    B3_MOD_Z,
    GarsideNormalForm,
    GroupContext,
    identity,
    multiply_right,
)

MAX_RADIUS = 12


class BallTooLarge(ValueError):
    pass


def _check_radius(radius: int, cap: int = MAX_RADIUS):
    if radius > cap:
        raise BallTooLarge(f"radius {radius} exceeds the cap {cap}")
    if radius < 0:
        raise ValueError("radius must be nonnegative")


def bfs_distances(radius: int, ctx: GroupContext = B3_MOD_Z) -> dict[GarsideNormalForm, int]:
    """Cayley-graph distances from 1 for all elements of the radius ball."""
    _check_radius(radius)
    root = identity(ctx)
    dist = {root: 0}
    frontier = [root]
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for g in "aAbB":
                y = multiply_right(x, g)
                if y not in dist:
                    dist[y] = r
                    nxt.append(y)
        frontier = nxt
    return dist


def exact_convolution(nu: dict[str, float], n_max: int, ctx: GroupContext = B3_MOD_Z):
    """Distributions of X_1..X_n_max and the entropy ratios H(mu^{*n}) / n.

    ``nu`` maps generators 'a', 'A', 'b', 'B' to probabilities.
    """
    _check_radius(n_max)
    steps = [(g, w) for g, w in nu.items() if w > 0]
    dist = {identity(ctx): 1.0}
    out, ratios = [], []
    for n in range(1, n_max + 1):
        new: dict[GarsideNormalForm, float] = defaultdict(float)
        for x, px in dist.items():
            for g, w in steps:
                new[multiply_right(x, g)] += px * w
        dist = dict(new)
        out.append(dist)
        h = -sum(p * math.log(p) for p in dist.values() if p > 0)
        ratios.append(h / n)
    return out, ratios
