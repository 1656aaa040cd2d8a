"""Harmonic measure on infinite normal forms and quantities built on it.

Boundary points of the walk on B3/Z are infinite chained words over
T = {a, b, ab, ba}.  Two-state bookkeeping tracks the Delta parity with
which the walk first enters the coset {g, g.Delta} of each prefix g:

    cylinder(u_1 ... u_l) = e0 . M(u_1) ... M(u_{l-1}) . beta(u_l)

with e0 = [1, 0], M(u) = [[q(u), q(uD)], [q(i(u)D), q(i(u))]] and
beta(u) = [R(u), R(i(u))]^T, where R(u) is the law of the first syllable
and i swaps a and b.  M(i(u)) = P M(u) P and beta(i(u)) = P beta(u) for
the swap P, which is how twisted tails are handled.

Matrices are kept as 4-tuples (m11, m12, m21, m22) of floats; products of
a few hundred 2x2 matrices are much faster this way than through numpy.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Sequence

import numpy as np

from .braid_core import (
    B3_MOD_Z,
    GarsideNormalForm,
    SigmaLetter,
    T_ALPHABET,
    first,
    inverse,
    iota,
    last,
    multiply,
    normal_form,
)
from .passage_green import QVector, StepDistribution, StructureError, ever_reach

MAX_DEPTH = 10_000

Mat = tuple[float, float, float, float]
Vec = tuple[float, float]


class PositivityError(ValueError):
    pass


class ChainError(ValueError):
    pass


class NotStabilized(RuntimeError):
    pass


class DepthExceeded(RuntimeError):
    pass


# --- 2x2 helpers ------------------------------------------------------------


def _mm(x: Mat, y: Mat) -> Mat:
    return (
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    )


def _vm(v: Vec, m: Mat) -> Vec:
    return (v[0] * m[0] + v[1] * m[2], v[0] * m[1] + v[1] * m[3])


def _mv(m: Mat, v: Vec) -> Vec:
    return (m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1])


def _dot(x: Vec, y: Vec) -> float:
    return x[0] * y[0] + x[1] * y[1]


def _scaled(m: Mat) -> Mat:
    s = max(m)
    return (m[0] / s, m[1] / s, m[2] / s, m[3] / s)


E0: Vec = (1.0, 0.0)


def check_chain(word: Sequence[str]) -> None:
    for u in word:
        if u not in T_ALPHABET:
            raise ChainError(f"{u!r} is not a syllable of T")
    for x, y in zip(word, word[1:]):
        if last(x) != first(y):
            raise ChainError(f"{x}.{y} violates the chaining rule")


def continuations(u: str) -> tuple[str, str]:
    """The two syllables that may follow u."""
    x = last(u)
    y = "b" if x == "a" else "a"
    return x, x + y


# --- first-syllable law -------------------------------------------------------


def exact_R(qv: QVector) -> dict[str, float]:
    """First-syllable law R of the limit word, computed from q.

    With S_x the probability that the limit starts with letter x,
    R(u) = q(u) S_last(u) + q(uD) S_i(last(u)), and summing over u starting
    with x gives a 2x2 eigen-equation S = A S with S_a + S_b = 1.
    """
    idx = {"a": 0, "b": 1}
    A = np.zeros((2, 2))
    for u in T_ALPHABET:
        x = idx[first(u)]
        y = idx[last(u)]
        A[x, y] += qv[SigmaLetter(u)]
        A[x, 1 - y] += qv[SigmaLetter(u, True)]
    w, V = np.linalg.eig(A)
    i = int(np.argmin(np.abs(w - 1)))
    if abs(w[i] - 1) > 1e-8:
        raise StructureError(f"first-letter system has no unit eigenvalue ({w})")
    S = np.real(V[:, i])
    S = S / S.sum()
    return {
        u: float(qv[SigmaLetter(u)] * S[idx[last(u)]] + qv[SigmaLetter(u, True)] * S[1 - idx[last(u)]])
        for u in T_ALPHABET
    }


# --- automaton ----------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class RTAutomaton:
    q: QVector
    R: dict[str, float]
    M_tilde: dict[str, Mat]
    delta: float
    K_const: float
    alpha_tilde: Vec = (1.0, 1.0)
    betas: dict = dataclasses.field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.betas.update({u: (self.R[u], self.R[iota(u)]) for u in T_ALPHABET})

    def beta(self, u: str) -> Vec:
        return self.betas[u]

    def beta_tilde(self, u: str) -> Vec:
        return (self.R[u], self.R[u])

    def matrix(self, u: str) -> np.ndarray:
        m = self.M_tilde[u]
        return np.array([[m[0], m[1]], [m[2], m[3]]])

    def product(self, word: Sequence[str]) -> Mat:
        out: Mat = (1.0, 0.0, 0.0, 1.0)
        for u in word:
            out = _mm(out, self.M_tilde[u])
        return out


def contraction_constants(mats: Sequence[Mat]) -> tuple[float, float]:
    """delta = min_u min/max entry; K = max_u max_ij (max_k - min_k) M_ik / M_jk."""
    delta = min(min(m) / max(m) for m in mats)
    K = 0.0
    for m in mats:
        rows = ((m[0], m[1]), (m[2], m[3]))
        for i in range(2):
            for j in range(2):
                r = [rows[i][k] / rows[j][k] for k in range(2)]
                K = max(K, max(r) - min(r))
    return delta, K


def build_automaton(qv: QVector, R: dict[str, float] | None = None) -> RTAutomaton:
    if R is None:
        R = exact_R(qv)
    mats = {}
    for u in T_ALPHABET:
        w = iota(u)
        m = (qv[SigmaLetter(u)], qv[SigmaLetter(u, True)], qv[SigmaLetter(w, True)], qv[SigmaLetter(w)])
        if min(m) <= 0:
            raise PositivityError(f"M({u}) has a non-positive entry; step distribution must charge a and b")
        mats[u] = m
    if min(R.values()) <= 0 or not math.isclose(sum(R.values()), 1.0, abs_tol=1e-9):
        raise PositivityError("R must be a positive probability vector on T")
    delta, K = contraction_constants(list(mats.values()))
    return RTAutomaton(qv, dict(R), mats, delta, K)


def cylinder_measure(aut: RTAutomaton, word: Sequence[str]) -> float:
    """mu_infinity of the set of limit words starting with ``word``."""
    word = list(word)
    check_chain(word)
    if not word:
        return 1.0
    v = _vm(E0, aut.product(word[:-1]))
    return _dot(v, aut.beta(word[-1]))


def log_cylinder_measure(aut: RTAutomaton, word: Sequence[str]) -> float:
    """log of :func:`cylinder_measure`, rescaled at every step so long words do not underflow."""
    word = list(word)
    check_chain(word)
    if not word:
        return 0.0
    v, logs = E0, 0.0
    for u in word[:-1]:
        v = _vm(v, aut.M_tilde[u])
        s = v[0] + v[1]
        v, logs = (v[0] / s, v[1] / s), logs + math.log(s)
    return logs + math.log(_dot(v, aut.beta(word[-1])))


def printed_cylinder(aut: RTAutomaton, word: Sequence[str]) -> float:
    """[1,1] M(u_1 ... u_{l-1}) [R(u_l), R(u_l)]^T, kept for comparison."""
    word = list(word)
    check_chain(word)
    v = _vm(aut.alpha_tilde, aut.product(word[:-1]))
    return _dot(v, aut.beta_tilde(word[-1]))


def column_ratios(aut: RTAutomaton, word: Sequence[str]) -> tuple[float, float]:
    """M(x)_{2k} / M(x)_{1k} for k = 1, 2."""
    m = aut.product(word)
    return m[2] / m[0], m[3] / m[1]


def seneta_bound(aut: RTAutomaton, n: int) -> float:
    return aut.K_const * (1 - aut.delta**2) ** (n - 1)


# --- boundary words -----------------------------------------------------------


class BoundaryWord:
    """A lazily extended infinite chained word over T."""

    def __init__(self, prefix: Sequence[str] = (), extender: Callable[[list[str]], str] | None = None):
        self.prefix = list(prefix)
        check_chain(self.prefix)
        self.extender = extender

    def extend(self, n: int) -> list[str]:
        while len(self.prefix) < n:
            if self.extender is None:
                raise DepthExceeded(f"boundary word has only {len(self.prefix)} syllables")
            u = self.extender(self.prefix)
            if self.prefix and last(self.prefix[-1]) != first(u):
                raise ChainError("extender broke the chaining rule")
            self.prefix.append(u)
        return self.prefix[:n]

    def __getitem__(self, i: int) -> str:
        return self.extend(i + 1)[i]

    def __len__(self):
        return len(self.prefix)

    @classmethod
    def periodic(cls, pattern: Sequence[str]) -> "BoundaryWord":
        pattern = list(pattern)
        check_chain(pattern + pattern[:1])
        return cls(pattern, lambda pre: pattern[len(pre) % len(pattern)])


class _MeasureSampler:
    """Extends a prefix with the conditional law cylinder(w.v) / cylinder(w)."""

    def __init__(self, aut: RTAutomaton, rng: np.random.Generator):
        self.aut = aut
        self.rng = rng
        self.state: Vec = E0  # e0 M(prefix[:-1]) up to scale
        self.n = 0

    def __call__(self, prefix: list[str]) -> str:
        aut = self.aut
        if not prefix:
            cands, base = T_ALPHABET, E0
        else:
            if len(prefix) != self.n:
                self.state = _vm(E0, _scaled(aut.product(prefix[:-1])))
            base = _vm(self.state, aut.M_tilde[prefix[-1]])
            t = base[0] + base[1]
            base = (base[0] / t, base[1] / t)
            cands = continuations(prefix[-1])
        w = [_dot(base, aut.betas[v]) for v in cands]
        x = self.rng.random() * sum(w)
        u = cands[-1]
        for v, wv in zip(cands, w):
            if x < wv:
                u = v
                break
            x -= wv
        self.state = base  # e0 M(prefix), up to scale, for the next call
        self.n = len(prefix) + 1
        return u


def sample_boundary(aut: RTAutomaton, length: int, seed) -> BoundaryWord:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    xi = BoundaryWord((), _MeasureSampler(aut, rng))
    xi.extend(length)
    return xi


# --- boundary action and Radon-Nikodym derivatives -----------------------------


def _prefix_element(xi: BoundaryWord, n: int) -> GarsideNormalForm:
    return GarsideNormalForm(B3_MOD_Z, tuple(xi.extend(n)), 0)


def _decompose(W: tuple[str, ...], twisted: bool, tail: list[str]):
    """Longest suffix of W equal to the (twisted) tail of xi; returns (v, l)."""
    n = len(tail)
    t = [iota(x) for x in tail] if twisted else tail
    best = None
    for l in range(n, 0, -1):
        m = n - l + 1
        if m > len(W):
            break
        if list(W[len(W) - m :]) == t[l - 1 :]:
            best = (W[: len(W) - m], l)
        else:
            break
    return best


def _action_at(u: GarsideNormalForm, xi: BoundaryWord, n: int):
    w = multiply(inverse(u), _prefix_element(xi, n))
    twisted = w.delta_exp % 2 == 1
    return _decompose(w.word, twisted, xi.extend(n)), twisted


def boundary_action(u: GarsideNormalForm, xi: BoundaryWord, n: int | None = None):
    """Stable (v, l, twisted) with u^-1 . xi_1...xi_n = v . (i)xi_l ... (i)xi_n.

    The triple is computed at depths n and 2n and must agree.
    """
    if n is None:
        n = 2 * len(u.word) + 6
    d1, t1 = _action_at(u, xi, n)
    d2, t2 = _action_at(u, xi, 2 * n)
    if d1 is None or d1 != d2 or t1 != t2:
        raise NotStabilized(f"action of {u} on the boundary word not stable at depth {n}")
    v, l = d1
    return GarsideNormalForm(B3_MOD_Z, v, 0), l, t1


@dataclasses.dataclass(frozen=True)
class CertifiedValue:
    """A value with a guaranteed enclosure [lower, upper].

    ``half_width`` is the larger distance from ``value`` to an endpoint.
    """

    value: float
    half_width: float
    n_used: int
    lower: float | None = None
    upper: float | None = None

    def __post_init__(self):
        if self.lower is None:
            object.__setattr__(self, "lower", self.value - self.half_width)
        if self.upper is None:
            object.__setattr__(self, "upper", self.value + self.half_width)

    @property
    def interval(self) -> tuple[float, float]:
        return self.lower, self.upper

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= x <= self.upper + slack

    def inside(self, other: "CertifiedValue", slack: float = 0.0) -> bool:
        return other.lower - slack <= self.lower and self.upper <= other.upper + slack


def _stable_action(u, xi):
    n = 2 * len(u.word) + 6
    while True:
        try:
            return boundary_action(u, xi, n)
        except NotStabilized:
            n *= 2
            if n > MAX_DEPTH:
                raise


def rn_alphas(aut: RTAutomaton, u: GarsideNormalForm, xi: BoundaryWord):
    """(alpha_1, alpha_2, l): the ratio is alpha_1 X / alpha_2 X with X = M(xi_l..)beta."""
    v, l, twisted = _stable_action(u, xi)
    a1 = _vm(E0, aut.product(v.word))
    if twisted:
        a1 = (a1[1], a1[0])
    a2 = _vm(E0, aut.product(xi.extend(l - 1)))
    return a1, a2, l


def _ratio_interval(a1: Vec, a2: Vec, rho: float, eps: float) -> tuple[float, float, float]:
    f = lambda c: (a1[0] + a1[1] * c) / (a2[0] + a2[1] * c)  # noqa: E731  monotone in c
    lo = f(max(rho - eps, 0.0))
    if math.isfinite(eps):
        hi = f(rho + eps)
    else:
        hi = a1[1] / a2[1] if a2[1] > 0 else math.inf
    if lo > hi:
        lo, hi = hi, lo
    return f(rho), lo, hi


def rn_derivative(
    aut: RTAutomaton,
    u: GarsideNormalForm,
    xi: BoundaryWord,
    target_eps: float = 1e-10,
    depth: int | None = None,
) -> CertifiedValue:
    """d(u * mu_inf)/d mu_inf at xi, i.e. lim cyl(u^-1 . xi_1..n) / cyl(xi_1..n).

    The tail direction c(eta) of eta = xi_l xi_{l+1} ... is pinned to within
    eps = K (1 - delta^2)^(m - 2) after m tail matrices, and the ratio is a
    monotone Moebius function of it.  The reported enclosure is the
    intersection of the enclosures at all depths used, hence nested in the
    depth.  With ``depth`` the truncation is fixed instead of chosen by
    ``target_eps``.
    """
    if target_eps <= 0:
        raise ValueError("target_eps must be positive")
    a1, a2, l = rn_alphas(aut, u, xi)
    if a1 == a2:
        return CertifiedValue(1.0, 0.0, l)
    contraction = 1 - aut.delta**2
    P: Mat = (1.0, 0.0, 0.0, 1.0)
    lower, upper, hw = 0.0, math.inf, math.inf
    m = 0
    eps = math.inf
    while True:
        n_used = l + m
        done = depth is not None and n_used >= depth
        if depth is not None or eps < 1.0 or m == 0:
            x = _mv(P, aut.betas[xi[l - 1 + m]])
            val, lo, hi = _ratio_interval(a1, a2, x[1] / x[0], eps)
            lower, upper = max(lower, lo), min(upper, hi)
            if lower > upper:  # rounding once fully converged
                lower = upper = val
            val = min(max(val, lower), upper)
            hw = max(val - lower, upper - val)
            if done or (depth is None and hw <= target_eps):
                return CertifiedValue(val, hw, n_used, lower, upper)
        if n_used >= MAX_DEPTH:
            raise DepthExceeded(f"half width {hw:.3g} > {target_eps:.3g} at depth {MAX_DEPTH}")
        P = _scaled(_mm(P, aut.M_tilde[xi[l - 1 + m]]))
        m += 1
        eps = aut.K_const * contraction ** (m - 2)


def rn_truncated(aut: RTAutomaton, u: GarsideNormalForm, xi: BoundaryWord, n: int) -> float:
    """The raw ratio cyl(normal form of u^-1 xi_1..n) / cyl(xi_1..n)."""
    w = multiply(inverse(u), _prefix_element(xi, n))
    return math.exp(log_cylinder_measure(aut, w.word) - log_cylinder_measure(aut, xi.extend(n)))


def harmonic_function(aut: RTAutomaton, xi: BoundaryWord, g: GarsideNormalForm, eps: float = 1e-10) -> CertifiedValue:
    """Minimal harmonic function K_xi(g) = d(g * mu_inf)/d mu_inf (xi)."""
    return rn_derivative(aut, g, xi, eps)


def harmonic_green_ratio(qv: QVector, xi: BoundaryWord, g: GarsideNormalForm, n: int) -> float:
    """Green-function route Q(g^-1 . xi_1..n) / Q(xi_1..n) at depth n."""
    x = _prefix_element(xi, n)
    y = multiply(inverse(g), x)
    if y.is_identity() or x.is_identity():
        raise ValueError("depth too small: prefix coincides with the identity")
    return ever_reach(qv, y) / ever_reach(qv, x)


# --- entropy --------------------------------------------------------------------


STEP_ELEMENTS = {s: normal_form(s) for s in ("a", "A", "b", "B")}


@dataclasses.dataclass(frozen=True)
class EntropyReport:
    value: float
    se: float
    bias: float  # certified bound on the truncation error of the mean
    n_samples: int
    seed: int | None

    def as_json(self) -> dict:
        return dataclasses.asdict(self)


def entropy(
    aut: RTAutomaton,
    nu: StepDistribution | dict,
    n_samples: int = 10_000,
    eps_rn: float = 1e-8,
    seed: int = 0,
) -> EntropyReport:
    """h = -sum_s nu(s) E log d(s^-1 * mu_inf)/d mu_inf (xi), xi ~ mu_inf."""
    if n_samples < 1000:
        raise ValueError("n_samples must be at least 1000")
    nu = nu if isinstance(nu, dict) else nu.as_dict()
    inv = {s: inverse(g) for s, g in STEP_ELEMENTS.items()}
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    vals = np.empty(n_samples)
    bias = 0.0
    for i in range(n_samples):
        xi = sample_boundary(aut, 8, rng)
        tot = 0.0
        b = 0.0
        for s, w in nu.items():
            if w == 0:
                continue
            c = rn_derivative(aut, inv[s], xi, eps_rn)
            tot -= w * math.log(c.value)
            b += w * c.half_width / max(c.value - c.half_width, 1e-300)
        vals[i] = tot
        bias = max(bias, b)
    return EntropyReport(float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n_samples)), bias, n_samples, seed)
