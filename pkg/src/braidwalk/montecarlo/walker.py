"""Vectorised random-walk engine on B3, B3/Z and A_k.

Many independent trajectories are advanced in lock-step.  Each trajectory
keeps its positive word as a stack of letters together with, per position,
the length of the trailing alternating run, the running syllable count,
the running count of syllables of length >= 2 and (optionally) an integer
code of the prefix.  Appending a letter is O(1); a Delta is detected when
the run reaches k and popped in O(1).

The scalar engine in :mod:`braidwalk.braid_core` is the reference; the two
are cross-checked in the tests.
"""

from __future__ import annotations

import numpy as np

from ..braid_core import GarsideNormalForm, GroupContext, syllables_of

GEN_CODES = {"a": 0, "A": 1, "b": 2, "B": 3}
CODE_CAP = 1 << 40  # prefix codes beyond this are clamped (never compared)


def word_code(letters: str) -> int:
    """Integer code of a positive word, matching :class:`BatchWalk` codes."""
    c = 1
    for x in letters:
        c = 2 * c + (x == "b")
    return c if c < CODE_CAP else CODE_CAP


class BatchWalk:
    def __init__(self, ctx: GroupContext, trials: int, capacity: int = 64, track_codes: bool = False):
        self.ctx = ctx
        self.k = ctx.k
        self.n = trials
        self.track_codes = track_codes
        self.length = np.zeros(trials, dtype=np.int64)
        self.e = np.zeros(trials, dtype=np.int64)
        self._alloc(capacity)
        # inverse letter x^-1 = tau(Y) Delta^-1, Y alternating of length k-1 ending in other(x)
        k = self.k
        tails = []
        for x in (0, 1):
            y = 1 - x
            start = y if (k - 1) % 2 else x
            t = [(start + i) % 2 for i in range(k - 1)]
            if ctx.twists:
                t = [1 - z for z in t]
            tails.append(t)
        self._tails = np.array(tails, dtype=np.int8)  # [x, position]

    def _alloc(self, cap: int):
        self.cap = cap
        # index 0 is a sentinel for the empty word; letter i sits at i + 1
        self.letters = np.full((self.n, cap + 1), -1, dtype=np.int8)
        self.runs = np.zeros((self.n, cap + 1), dtype=np.int16)
        self.syl = np.zeros((self.n, cap + 1), dtype=np.int32)
        self.long = np.zeros((self.n, cap + 1), dtype=np.int32)
        if self.track_codes:
            self.codes = np.ones((self.n, cap + 1), dtype=np.int64)

    def _grow(self):
        old = (self.letters, self.runs, self.syl, self.long, getattr(self, "codes", None))
        c = self.cap
        self._alloc(2 * c)
        self.letters[:, : c + 1] = old[0]
        self.runs[:, : c + 1] = old[1]
        self.syl[:, : c + 1] = old[2]
        self.long[:, : c + 1] = old[3]
        if self.track_codes:
            self.codes[:, : c + 1] = old[4]

    def _push(self, idx: np.ndarray, x: np.ndarray):
        if idx.size == 0:
            return
        if self.ctx.twists:
            x = x ^ (self.e[idx] & 1).astype(np.int8)
        L = self.length[idx]
        if L.max() + 1 > self.cap:
            self._grow()
        prev = self.letters[idx, L]
        run = np.where((L > 0) & (prev != x), self.runs[idx, L] + 1, 1).astype(np.int16)
        P = L + 1
        self.letters[idx, P] = x
        self.runs[idx, P] = run
        self.syl[idx, P] = self.syl[idx, L] + (run == 1)
        self.long[idx, P] = self.long[idx, L] + (run == 2)
        if self.track_codes:
            c = self.codes[idx, L]
            self.codes[idx, P] = np.where(c >= CODE_CAP // 2, CODE_CAP, 2 * c + x)
        self.length[idx] = P
        full = run == self.k
        if full.any():
            j = idx[full]
            self.length[j] -= self.k
            self.e[j] += 1

    def step(self, gens: np.ndarray, active: np.ndarray | None = None):
        """Right-multiply trajectory i by generator gens[i] (codes a, A, b, B = 0..3)."""
        idx = np.arange(self.n) if active is None else active
        g = gens[idx]
        letter = (g >> 1).astype(np.int8)  # 0 = a, 1 = b
        pos = (g & 1) == 0
        self._push(idx[pos], letter[pos])
        inv = idx[~pos]
        xs = letter[~pos]
        for t in range(self.k - 1):
            self._push(inv, self._tails[xs, t])
        self.e[inv] -= 1

    # observables -------------------------------------------------------
    def syllable_count(self) -> np.ndarray:
        return self.syl[np.arange(self.n), self.length]

    def long_count(self) -> np.ndarray:
        return self.long[np.arange(self.n), self.length]

    def code(self) -> np.ndarray:
        return self.codes[np.arange(self.n), self.length]

    def delta_exp(self) -> np.ndarray:
        return self.e.copy()

    def geodesic_b3(self) -> np.ndarray:
        """Word length in B3 (vectorised form of braid_core.geodesic_length)."""
        if self.k != 3:
            raise NotImplementedError
        m = self.syllable_count()
        m2 = self.long_count()
        m1 = m - m2
        d = self.e + m2
        used = np.where(d >= 0, np.minimum(d, m2), np.minimum(-d, m1))
        return m + used + 3 * (np.abs(d) - used)

    def element(self, i: int) -> GarsideNormalForm:
        letters = "".join("ab"[x] for x in self.letters[i, 1 : self.length[i] + 1])
        return GarsideNormalForm(self.ctx, syllables_of(letters), self.ctx.reduce(int(self.e[i])))


def sample_generators(rng: np.random.Generator, nu: dict[str, float], size) -> np.ndarray:
    gens = np.array([GEN_CODES[g] for g in ("a", "A", "b", "B")], dtype=np.int64)
    probs = np.array([nu.get(g, 0.0) for g in ("a", "A", "b", "B")])
    return rng.choice(gens, size=size, p=probs / probs.sum())
