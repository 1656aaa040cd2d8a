"""Nearest-neighbour random walks on the free product Z/kZ * Z/kZ.

Generators are ``c``, ``C`` (= c^-1) in the first factor and ``d``, ``D``
in the second.  A nontrivial factor element is a pair ``(side, j)`` with
side 0 (c) or 1 (d) and exponent ``1 <= j <= k-1``.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Mapping

import numpy as np

from . import fixedpoint
from .fixedpoint import NonConvergence  # noqa: F401  (re-exported)

FPLetter = tuple[int, int]  # (side, exponent)
_GEN = {"c": (0, 1), "C": (0, -1), "d": (1, 1), "D": (1, -1)}


@dataclasses.dataclass(frozen=True)
class FPWord:
    k: int
    syllables: tuple[FPLetter, ...] = ()

    def __post_init__(self):
        for side, j in self.syllables:
            if side not in (0, 1) or not 1 <= j <= self.k - 1:
                raise ValueError(f"bad syllable {(side, j)} for k={self.k}")
        for (s1, _), (s2, _) in zip(self.syllables, self.syllables[1:]):
            if s1 == s2:
                raise ValueError("adjacent syllables must alternate factors")

    def __len__(self):
        return len(self.syllables)

    def times(self, gen: str) -> "FPWord":
        side, step = _GEN[gen]
        syl = list(self.syllables)
        if syl and syl[-1][0] == side:
            j = (syl[-1][1] + step) % self.k
            if j:
                syl[-1] = (side, j)
            else:
                syl.pop()
        else:
            syl.append((side, step % self.k))
        return FPWord(self.k, tuple(syl))

    def __str__(self):
        if not self.syllables:
            return "1"
        return "".join(("c", "d")[s] + (f"^{j}" if j > 1 else "") for s, j in self.syllables)


def factor_elements(k: int) -> list[FPLetter]:
    return [(side, j) for side in (0, 1) for j in range(1, k)]


def _check_mu(mu: Mapping[str, float]) -> dict[str, float]:
    mu = {g: float(mu.get(g, 0.0)) for g in _GEN}
    if any(w < 0 for w in mu.values()):
        raise ValueError("negative step probability")
    if not math.isclose(sum(mu.values()), 1.0, abs_tol=1e-12):
        raise ValueError("step distribution must sum to 1")
    return mu


def symmetric_mu(p: float) -> dict[str, float]:
    """mu(c) = mu(d) = p, mu(c^-1) = mu(d^-1) = 1/2 - p."""
    return {"c": p, "d": p, "C": 0.5 - p, "D": 0.5 - p}


def uniform_mu() -> dict[str, float]:
    return symmetric_mu(0.25)


def _steps(k: int, mu: dict[str, float]) -> list[tuple[FPLetter, float]]:
    """Step distribution as factor elements, merging c and c^-1 when k = 2."""
    out: dict[FPLetter, float] = {}
    for g, w in mu.items():
        side, step = _GEN[g]
        key = (side, step % k)
        out[key] = out.get(key, 0.0) + w
    return list(out.items())


def solve_fp_passage(k: int, mu_tilde: Mapping[str, float], **kw) -> dict[FPLetter, float]:
    """Probabilities y(g) that the walk started at 1 ever visits g.

    Minimal nonnegative solution of
    y(g) = mu(g) + sum_{s in A(g), s != g} mu(s) y(s^-1 g)
                 + sum_{s not in A(g)} mu(s) y(s^-1) y(g),
    A(g) the factor containing g.
    """
    mu = _check_mu(mu_tilde)
    elems = factor_elements(k)
    index = {g: i for i, g in enumerate(elems)}
    steps = _steps(k, mu)

    # precompute the monomials of each equation
    const = np.zeros(len(elems))
    linear = []  # (row, coeff, col)
    quad = []  # (row, coeff, col1, col2)
    for g in elems:
        i = index[g]
        for s, w in steps:
            if w == 0:
                continue
            if s == g:
                const[i] += w
            elif s[0] == g[0]:
                linear.append((i, w, index[(g[0], (g[1] - s[1]) % k)]))
            else:
                quad.append((i, w, index[(s[0], (-s[1]) % k)], i))
    lr = np.array([t[0] for t in linear], dtype=int)
    lw = np.array([t[1] for t in linear])
    lc = np.array([t[2] for t in linear], dtype=int)
    qr = np.array([t[0] for t in quad], dtype=int)
    qw = np.array([t[1] for t in quad])
    q1 = np.array([t[2] for t in quad], dtype=int)
    q2 = np.array([t[3] for t in quad], dtype=int)

    def rhs(y):
        out = const.copy()
        np.add.at(out, lr, lw * y[lc])
        np.add.at(out, qr, qw * y[q1] * y[q2])
        return out

    y, _ = fixedpoint.minimal_solution(rhs, len(elems), **kw)
    return {g: float(y[index[g]]) for g in elems}


@dataclasses.dataclass(frozen=True)
class FPHarmonicWeights:
    k: int
    r_tilde: dict[FPLetter, float]

    def r(self, j: int) -> float:
        """Weight of exponent j summed over both factors."""
        return self.r_tilde[(0, j)] + self.r_tilde[(1, j)]

    def side_mass(self, side: int) -> float:
        return sum(w for (s, _), w in self.r_tilde.items() if s == side)


def harmonic_weights(k: int, mu_tilde: Mapping[str, float], y=None) -> FPHarmonicWeights:
    """Law of the first syllable of the limit word.

    Last-exit decomposition at g: the limit starts with g iff some visit to
    g is followed by a step into the other factor and no return, giving
    ``r(g) = y(g) / (1 - U) * escape(other side of g)``, U the return
    probability to 1.
    """
    mu = _check_mu(mu_tilde)
    if y is None:
        y = solve_fp_passage(k, mu)
    steps = _steps(k, mu)
    inv = lambda s: (s[0], (-s[1]) % k)  # noqa: E731
    ret = sum(w * y[inv(s)] for s, w in steps)
    if ret >= 1 - 1e-12:
        raise ValueError("recurrent step distribution: no harmonic measure")
    escape = [sum(w * (1 - y[inv(s)]) for s, w in steps if s[0] == side) for side in (0, 1)]
    r = {g: y[g] * escape[1 - g[0]] / (1 - ret) for g in y}
    return FPHarmonicWeights(k, r)


def fp_drift(k: int, mu_tilde: Mapping[str, float]) -> float:
    """Linear growth rate of the syllable length |W_n|.

    Integrates the one-step change of the syllable count under left
    multiplication against the harmonic measure: a step in factor A adds a
    syllable when the limit starts in B and removes one when it starts with
    the step's inverse.
    """
    mu = _check_mu(mu_tilde)
    hw = harmonic_weights(k, mu)
    gamma = 0.0
    for s, w in _steps(k, mu):
        if w == 0:
            continue
        inv = (s[0], (-s[1]) % k)
        gamma += w * (hw.side_mass(1 - s[0]) - hw.r_tilde[inv])
    return gamma


def closed_form_r(p: float) -> tuple[float, float]:
    """r~(c) and r~(c^2) for k = 3 and mu(c) = mu(d) = p."""
    if math.isclose(p, 0.25, abs_tol=1e-12):
        return 0.25, 0.25
    s = math.sqrt(16 * p * p - 8 * p + 5)
    return (4 * p - 3 + s) / (4 * (4 * p - 1)), (4 * p + 1 - s) / (4 * (4 * p - 1))


def schreier_project(x) -> FPWord:
    """Image of the coset {x, x.Delta} in Z/k * Z/k.

    Syllable i of the Delta-free part becomes a factor element with
    exponent |u_i|.  Factors alternate; the first factor is c when the
    first syllable starts with a and d when it starts with b, which makes
    the map a bijection of cosets onto the free product.
    """
    word = x.word
    if not word:
        return FPWord(x.context.k)
    side = 0 if word[0][0] == "a" else 1
    syl = tuple(((side + i) % 2, len(u)) for i, u in enumerate(word))
    return FPWord(x.context.k, syl)
