"""Oracle suites: normal form against Burau equality, geodesic length against BFS."""

from __future__ import annotations

import dataclasses

import numpy as np

from ..braid_core import B3, B3_MOD_Z, GroupContext, geodesic_length, normal_form
from .balls import bfs_distances
from .burau import batch_equal, burau_batch, encode_words

# words equal to 1 in B3 (relator and free cancellations), and Delta^2
# which is 1 only modulo the centre
_TRIVIAL_B3 = ("abaBAB", "BABaba", "babABA", "ABAbab", "aA", "Aa", "bB", "Bb")
_CENTRAL = ("abaaba", "BABBAB", "ababab", "BABABA")


def random_word(rng: np.random.Generator, length: int) -> str:
    return "".join(rng.choice(list("aAbB"), size=length))


def _insert(rng, w: str, r: str) -> str:
    i = int(rng.integers(0, len(w) + 1))
    return w[:i] + r + w[i:]


def random_pairs(rng: np.random.Generator, n: int, length: int = 16, modulo_center: bool = True):
    """n word pairs; about half are equal by construction (random insertions of
    trivial words, and of Delta^2 when working modulo the centre)."""
    pool = _TRIVIAL_B3 + (_CENTRAL if modulo_center else ())
    pairs, planted = [], []
    for _ in range(n):
        w1 = random_word(rng, length)
        if rng.random() < 0.5:
            w2 = w1
            for _ in range(int(rng.integers(1, 4))):
                w2 = _insert(rng, w2, pool[int(rng.integers(len(pool)))])
            planted.append(True)
        else:
            # independent word, or a one-letter perturbation (usually unequal)
            w2 = random_word(rng, length) if rng.random() < 0.5 else _insert(rng, w1, "ab"[int(rng.integers(2))])
            planted.append(False)
        pairs.append((w1, w2))
    return pairs, np.array(planted)


@dataclasses.dataclass(frozen=True)
class OracleReport:
    n: int
    agree: int
    planted_equal: int
    equal: int

    @property
    def rate(self) -> float:
        return self.agree / self.n if self.n else 1.0


def normal_form_vs_burau(n_pairs: int, seed: int, length: int = 16, modulo_center: bool = True, chunk: int = 5000) -> OracleReport:
    ctx = B3_MOD_Z if modulo_center else B3
    rng = np.random.default_rng(seed)
    agree = equal = planted_eq = 0
    width = length + 3 * 6
    done = 0
    while done < n_pairs:
        m = min(chunk, n_pairs - done)
        pairs, planted = random_pairs(rng, m, length, modulo_center)
        b1, _ = burau_batch(encode_words([p[0] for p in pairs], width))
        b2, _ = burau_batch(encode_words([p[1] for p in pairs], width))
        by_burau = batch_equal(b1, b2, modulo_center)
        by_nf = np.array([normal_form(x, ctx) == normal_form(y, ctx) for x, y in pairs])
        agree += int((by_burau == by_nf).sum())
        equal += int(by_nf.sum())
        planted_eq += int(planted.sum())
        done += m
    return OracleReport(n_pairs, agree, planted_eq, equal)


def geodesic_vs_bfs(radius: int, ctx: GroupContext = B3_MOD_Z) -> tuple[int, int]:
    """(mismatches, ball size) of geodesic_length against BFS distances."""
    dist = bfs_distances(radius, ctx)
    bad = sum(1 for x, d in dist.items() if geodesic_length(x) != d)
    return bad, len(dist)
