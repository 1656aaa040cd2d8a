"""First-passage probabilities and the Green function of the walk on B3/Z.

``q(u)`` for a letter ``u`` of Sigma is the probability that the walk from 1
reaches u before u.Delta (equivalently: the first visit to the coset
{u, u.Delta} happens at u).  The vector q is the minimal nonnegative
solution of the one-step system evaluated by :func:`eval_traffic_rhs`.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import math
from typing import Mapping, Sequence

import numpy as np

from . import fixedpoint
from .braid_core import (
    SIGMA,
    GarsideNormalForm,
    SigmaLetter,
    as_sigma,
    element,
    identity,
    inverse,
    iota,
    multiply,
    sigma_word,
)
from .fixedpoint import NonConvergence  # noqa: F401

SIGMA_INDEX = {s: i for i, s in enumerate(SIGMA)}
MAX_PSI_LENGTH = 20


class StructureError(AssertionError):
    pass


class TransienceViolation(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class StepDistribution:
    """Probability on the generators a, a^-1, b, b^-1 of B3."""

    a: float
    A: float
    b: float
    B: float

    def __post_init__(self):
        w = self.as_dict().values()
        if any(x < 0 for x in w) or not math.isclose(sum(w), 1.0, abs_tol=1e-12):
            raise ValueError(f"not a probability vector: {self.as_dict()}")

    @classmethod
    def from_mapping(cls, m: Mapping[str, float]) -> "StepDistribution":
        return cls(m.get("a", 0.0), m.get("A", 0.0), m.get("b", 0.0), m.get("B", 0.0))

    @classmethod
    def inverse_symmetric(cls, p: float) -> "StepDistribution":
        return cls(a=p, A=p, b=0.5 - p, B=0.5 - p)

    @classmethod
    def positive_symmetric(cls, p: float) -> "StepDistribution":
        return cls(a=p, b=p, A=0.5 - p, B=0.5 - p)

    @classmethod
    def uniform(cls) -> "StepDistribution":
        return cls(0.25, 0.25, 0.25, 0.25)

    def as_dict(self) -> dict[str, float]:
        return {"a": self.a, "A": self.A, "b": self.b, "B": self.B}

    def swapped(self) -> "StepDistribution":
        return StepDistribution(a=self.b, A=self.B, b=self.a, B=self.A)

    def irreducible(self) -> bool:
        return min(self.as_dict().values()) > 0

    def pushforward(self) -> np.ndarray:
        """mu on Sigma: a -> a, b -> b, a^-1 -> ba.D, b^-1 -> ab.D."""
        mu = np.zeros(len(SIGMA))
        mu[SIGMA_INDEX[SigmaLetter("a")]] = self.a
        mu[SIGMA_INDEX[SigmaLetter("b")]] = self.b
        mu[SIGMA_INDEX[SigmaLetter("ba", True)]] = self.A
        mu[SIGMA_INDEX[SigmaLetter("ab", True)]] = self.B
        return mu


def _idx(x: GarsideNormalForm) -> int:
    s = as_sigma(x)
    if s is None:
        raise StructureError(f"index expression {x} is not a letter of Sigma")
    return SIGMA_INDEX[s]


@functools.lru_cache(maxsize=None)
def traffic_structure():
    """Index algebra of the one-step system, resolved in B3/Z.

    Returns (linear, quadratic): lists of (u, v, i) and (u, v, i, j, l, m)
    meaning mu(v) y(i) contributes to row u, resp. mu(v) [y(i) y(j) + y(l) y(m)].
    """
    D = element("D")
    linear, quadratic = [], []
    for u in SIGMA:
        ue, ui = element(u), SIGMA_INDEX[u]
        for v in SIGMA:
            ve = element(v)
            vinv = inverse(ve)
            if v.syllable[0] == u.syllable[0]:
                if v.syllable == u.syllable:  # v in {u, u.D}
                    continue
                linear.append((ui, SIGMA_INDEX[v], _idx(multiply(vinv, ue))))
            else:
                quadratic.append((
                    ui, SIGMA_INDEX[v],
                    _idx(vinv), ui,
                    _idx(multiply(vinv, D)), _idx(multiply(element(iota(u)), D)),
                ))
    return linear, quadratic


def eval_traffic_rhs(y: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """Right-hand side of the first-passage system at y (both indexed by SIGMA)."""
    linear, quadratic = traffic_structure()
    y = np.asarray(y, dtype=float)
    out = np.array(mu, dtype=float)
    for u, v, i in linear:
        out[u] += mu[v] * y[i]
    for u, v, i, j, l, m in quadratic:
        out[u] += mu[v] * (y[i] * y[j] + y[l] * y[m])
    return out


def _fast_rhs(mu: np.ndarray):
    linear, quadratic = traffic_structure()
    lin = np.array(linear, dtype=int).reshape(-1, 3)
    quad = np.array(quadratic, dtype=int).reshape(-1, 6)
    lw, qw = mu[lin[:, 1]], mu[quad[:, 1]]

    def rhs(y):
        out = mu.copy()
        np.add.at(out, lin[:, 0], lw * y[lin[:, 2]])
        np.add.at(out, quad[:, 0], qw * (y[quad[:, 2]] * y[quad[:, 3]] + y[quad[:, 4]] * y[quad[:, 5]]))
        return out

    def jac(y):
        J = np.zeros((len(mu), len(mu)))
        np.add.at(J, (lin[:, 0], lin[:, 2]), lw)
        np.add.at(J, (quad[:, 0], quad[:, 2]), qw * y[quad[:, 3]])
        np.add.at(J, (quad[:, 0], quad[:, 3]), qw * y[quad[:, 2]])
        np.add.at(J, (quad[:, 0], quad[:, 4]), qw * y[quad[:, 5]])
        np.add.at(J, (quad[:, 0], quad[:, 5]), qw * y[quad[:, 4]])
        return J

    return rhs, jac


def solve_traffic(mu: np.ndarray, start=None, **kw) -> np.ndarray:
    """Fixed point of the one-step system.

    From zero (default) plain iteration gives the minimal solution.  With a
    ``start`` vector Newton's method is used instead, since the other
    fixed points are typically repelling for the plain iteration.
    """
    rhs, jac = _fast_rhs(np.asarray(mu, dtype=float))
    if start is None:
        y, _ = fixedpoint.minimal_solution(rhs, len(SIGMA), **kw)
    else:
        y, _ = fixedpoint.newton(rhs, jac, np.asarray(start, dtype=float), **kw)
    return y


@dataclasses.dataclass(frozen=True)
class QVector:
    q: np.ndarray  # indexed by SIGMA
    q_hat_1: float
    q_hat_delta: float
    mu: np.ndarray

    def __getitem__(self, u: SigmaLetter | str) -> float:
        if isinstance(u, str):
            u = SigmaLetter(u[:-1], True) if u.endswith("D") else SigmaLetter(u)
        return float(self.q[SIGMA_INDEX[u]])

    def of(self, x: GarsideNormalForm) -> float:
        return float(self.q[_idx(x)])

    @property
    def Q_delta(self) -> float:
        return self.q_hat_delta / (1 - self.q_hat_1)

    def as_dict(self) -> dict[str, float]:
        return {str(s): float(v) for s, v in zip(SIGMA, self.q)}


def q_hats(q: np.ndarray, mu: np.ndarray) -> tuple[float, float]:
    """Return probabilities to 1 (before Delta) and to Delta (before 1)."""
    D = element("D")
    h1 = hd = 0.0
    for v, w in zip(SIGMA, mu):
        if w:
            vinv = inverse(element(v))
            h1 += w * q[_idx(vinv)]
            hd += w * q[_idx(multiply(vinv, D))]
    return h1, hd


def solve_q(nu: StepDistribution | np.ndarray, **kw) -> QVector:
    """Minimal solution of the first-passage system plus the two return scalars.

    ``nu`` is a step distribution on the generators or directly a
    probability vector on Sigma.
    """
    if isinstance(nu, StepDistribution):
        if not nu.irreducible():
            raise ValueError("solve_q needs all four generator weights positive")
        mu = nu.pushforward()
    else:
        mu = np.asarray(nu, dtype=float)
    q = solve_traffic(mu, **kw)
    h1, hd = q_hats(q, mu)
    if h1 + hd >= 1 - 1e-12:
        raise TransienceViolation(f"return probability {h1 + hd} is not < 1")
    return QVector(q, h1, hd, mu)


# --- Green function ---------------------------------------------------------


def gamma_one(q_hat_1: float, q_hat_delta: float) -> float:
    """Expected number of visits to 1 (time 0 included)."""
    den = (1 - q_hat_1) ** 2 - q_hat_delta**2
    if den <= 0 or q_hat_1 >= 1:
        raise TransienceViolation("Green function diverges")
    return (1 - q_hat_1) / den


def psi_preimage(v: GarsideNormalForm) -> list[list[SigmaLetter]]:
    """Sigma words u_1..u_k whose successive prefixes land in the cosets of
    v_1, v_1 v_2, ..., with the full product equal to v.

    u_i = (prefix so far)^-1 (v_1 .. v_i) Delta^(eps_i) for eps in {0,1}^(k-1),
    and the last letter chosen so the product is exactly v.
    """
    letters = sigma_word(v)
    k = len(letters)
    if k > MAX_PSI_LENGTH:
        raise ValueError(f"psi preimage enumeration capped at length {MAX_PSI_LENGTH}")
    ctx = v.context
    D = element("D", ctx)
    prefixes = []
    acc = identity(ctx)
    for s in letters[:-1]:
        acc = multiply(acc, element(SigmaLetter(s.syllable), ctx))
        prefixes.append(acc)
    out = []
    for eps in itertools.product((0, 1), repeat=k - 1):
        word, cur = [], identity(ctx)
        for target, e in zip(prefixes, eps):
            t = multiply(target, D) if e else target
            u = multiply(inverse(cur), t)
            word.append(_as_letter(u))
            cur = t
        word.append(_as_letter(multiply(inverse(cur), v)))
        out.append(word)
    return out


def _as_letter(x: GarsideNormalForm) -> SigmaLetter:
    s = as_sigma(x)
    if s is None:
        raise StructureError(f"{x} is not a Sigma letter")
    return s


def _toggle(u: SigmaLetter) -> SigmaLetter:
    return SigmaLetter(u.syllable, not u.delta)


def ever_reach(qv: QVector, v: GarsideNormalForm) -> float:
    """Probability Q(v) that the walk from 1 ever visits v (v != 1)."""
    if not v.word:
        if v.delta_exp == 1:
            return qv.Q_delta
        raise ValueError("Q(1) is the return probability; use return_probability")
    total = 0.0
    qd = qv.Q_delta
    for word in psi_preimage(v):
        prod = 1.0
        for u in word[:-1]:
            prod *= qv[u]
        last = word[-1]
        total += prod * (qv[last] + qv[_toggle(last)] * qd)
    return total


def ever_reach_matrix(qv: QVector, v: GarsideNormalForm) -> float:
    """Same quantity as :func:`ever_reach` through 2x2 transfer matrices.

    The sheet (Delta parity relative to the target coset representative)
    is a two-state chain; the psi-enumeration is the expansion of this
    matrix product.
    """
    if not v.word:
        return ever_reach(qv, v)
    letters = sigma_word(v)
    state = np.array([1.0, 0.0])
    for s in letters[:-1]:
        state = state @ transfer_matrix(qv, s.syllable)
    u = letters[-1]
    qd = qv.Q_delta
    # sheet 0: reach u directly or via u.D then Delta; sheet 1 uses iota(u)
    term0 = qv[u] + qv[_toggle(u)] * qd
    w = SigmaLetter(iota(u.syllable), not u.delta)
    term1 = qv[w] + qv[_toggle(w)] * qd
    return float(state @ np.array([term0, term1]))


def transfer_matrix(qv: QVector, syllable: str) -> np.ndarray:
    """[[q(u), q(uD)], [q(iota(u) D), q(iota(u))]]."""
    u = SigmaLetter(syllable)
    w = SigmaLetter(iota(syllable))
    return np.array([
        [qv[u], qv[_toggle(u)]],
        [qv[_toggle(w)], qv[w]],
    ])


@dataclasses.dataclass(frozen=True)
class GreenReport:
    Q_delta: float
    Gamma_1: float
    table: dict  # GarsideNormalForm -> (Q(v), Gamma(v))


def green_function(qv: QVector, targets: Sequence[GarsideNormalForm]) -> GreenReport:
    g1 = gamma_one(qv.q_hat_1, qv.q_hat_delta)
    table = {}
    for v in targets:
        if v.is_identity():
            table[v] = (1.0, g1)
            continue
        Q = ever_reach(qv, v)
        table[v] = (Q, g1 * Q)
    return GreenReport(qv.Q_delta, g1, table)


def return_probability(qv: QVector) -> float:
    """P(walk returns to 1) = q^(1) + q^(Delta) Q(Delta)."""
    return qv.q_hat_1 + qv.q_hat_delta * qv.Q_delta
