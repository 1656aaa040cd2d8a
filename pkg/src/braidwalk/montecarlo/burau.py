"""Equality oracle for B3 and B3/Z through the reduced Burau representation.

The reduced Burau representation of B3 is faithful, so two words are equal
in B3 iff their 2x2 Laurent-polynomial matrices agree.  Delta^2 maps to the
scalar t^3, hence equality in B3/Z is equality up to a factor t^(3j).

Two implementations: exact sparse polynomials over Python integers, and a
batched numpy version (int64, dense exponent window) for large random tests.
"""

from __future__ import annotations

import numpy as np

from ..braid_core import parse_word

Poly = dict  # exponent -> nonzero int coefficient


def _padd(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e)
    return out


def _shift(p: Poly, s: int) -> Poly:
    return {e + s: c for e, c in p.items()}


_ONE = {0: 1}
_GEN = {
    "a": ((({1: -1}), _ONE), ({}, _ONE)),
    "A": (({-1: -1}, {-1: 1}), ({}, _ONE)),
    "b": ((_ONE, {}), ({1: 1}, {1: -1})),
    "B": ((_ONE, {}), (_ONE, {-1: -1})),
}
_DELTA_WORD = {"D": "aba", "d": "BAB"}


def burau_matrix(word) -> tuple[tuple[Poly, Poly], tuple[Poly, Poly]]:
    m = ((_ONE, {}), ({}, _ONE))
    for g in parse_word(word):
        for h in _DELTA_WORD.get(g, g):
            n = _GEN[h]
            m = tuple(
                tuple(_padd(_pmul(m[i][0], n[0][j]), _pmul(m[i][1], n[1][j])) for j in range(2))
                for i in range(2)
            )
    return m


def burau_oracle(w1, w2, modulo_center: bool = True) -> bool:
    """True iff w1 == w2 in B3/Z (default) or in B3."""
    m1, m2 = burau_matrix(w1), burau_matrix(w2)
    if m1 == m2:
        return True
    if not modulo_center:
        return False
    # find the candidate shift from any nonzero entry, then confirm
    for i in range(2):
        for j in range(2):
            if m1[i][j] and m2[i][j]:
                s = min(m1[i][j]) - min(m2[i][j])
                if s % 3:
                    return False
                return all(m1[r][c] == _shift(m2[r][c], s) for r in range(2) for c in range(2))
    return False


_CODES = {"a": 0, "A": 1, "b": 2, "B": 3}


def encode_words(words, length: int) -> np.ndarray:
    """Pad generator words to a (n, length) int array, -1 marking padding."""
    out = np.full((len(words), length), -1, dtype=np.int8)
    for i, w in enumerate(words):
        w = "".join(_DELTA_WORD.get(g, g) for g in parse_word(w))
        if len(w) > length:
            raise ValueError("word longer than the batch width")
        out[i, : len(w)] = [_CODES[g] for g in w]
    return out


def burau_batch(codes: np.ndarray) -> tuple[np.ndarray, int]:
    """Burau matrices for a batch of encoded words.

    Returns (M, offset) with M of shape (n, 2, 2, 2L+1) holding the
    coefficient of t^(e) at index e + offset.  Entries stay below 2^L in
    absolute value, so int64 is exact for L <= 60.
    """
    n, L = codes.shape
    if L > 60:
        raise OverflowError("use burau_matrix for words longer than 60")
    W = 2 * L + 1
    off = L
    M = np.zeros((n, 2, 2, W), dtype=np.int64)
    M[:, 0, 0, off] = 1
    M[:, 1, 1, off] = 1
    for step in range(L):
        g = codes[:, step]
        c0 = M[:, :, 0, :].copy()
        c1 = M[:, :, 1, :].copy()
        up0 = np.roll(c0, 1, axis=-1)  # t * col0
        dn0 = np.roll(c0, -1, axis=-1)  # t^-1 * col0
        up1 = np.roll(c1, 1, axis=-1)
        dn1 = np.roll(c1, -1, axis=-1)
        sel = g == 0  # a: col0' = -t col0, col1' = col0 + col1
        M[sel, :, 0] = -up0[sel]
        M[sel, :, 1] = c0[sel] + c1[sel]
        sel = g == 1  # a^-1: col0' = -t^-1 col0, col1' = t^-1 col0 + col1
        M[sel, :, 0] = -dn0[sel]
        M[sel, :, 1] = dn0[sel] + c1[sel]
        sel = g == 2  # b: col0' = col0 + t col1, col1' = -t col1
        M[sel, :, 0] = c0[sel] + up1[sel]
        M[sel, :, 1] = -up1[sel]
        sel = g == 3  # b^-1: col0' = col0 + col1, col1' = -t^-1 col1
        M[sel, :, 0] = c0[sel] + c1[sel]
        M[sel, :, 1] = -dn1[sel]
    return M, off


def batch_equal(m1: np.ndarray, m2: np.ndarray, modulo_center: bool = True) -> np.ndarray:
    """Row-wise equality of two Burau batches (same width)."""
    eq = np.all(m1 == m2, axis=(1, 2, 3))
    if not modulo_center:
        return eq
    W = m1.shape[-1]
    for s in range(3, W, 3):
        for sh in (s, -s):
            shifted = np.roll(m2, sh, axis=-1)
            # reject wrap-around: rolled-out mass must be zero
            if sh > 0:
                clean = np.all(m2[..., W - sh:] == 0, axis=(1, 2, 3))
            else:
                clean = np.all(m2[..., :-sh] == 0, axis=(1, 2, 3))
            eq |= clean & np.all(m1 == shifted, axis=(1, 2, 3))
    return eq
