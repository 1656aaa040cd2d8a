"""Closed-form drifts of nearest-neighbour walks on B3 and A_k.

Drifts: ``gamma`` (word length), ``gamma_sigma`` (syllable count of the
Delta-free part), ``gamma_delta`` (Garside exponent) and ``gamma_splus``
(positive-letter length), all as almost-sure limits of length / n.

Every formula with a 1/(1-4p) factor is evaluated in a rationalized form
(multiply by the conjugate radical), which is algebraically identical and
has no singularity at the uniform point p = 1/4.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np

from .free_product import fp_drift, symmetric_mu, uniform_mu


# within this distance of 1/4 the exact limits are used; the drifts are
# smooth there with error O((p - 1/4)^2)
NEAR_UNIFORM = 1e-9


class DomainError(ValueError):
    pass


class RootSelectionError(ArithmeticError):
    pass


class Method(str, enum.Enum):
    CLOSED_FORM = "closed-form"
    SOLVER = "solver"
    MONTE_CARLO = "monte-carlo"
    UNAVAILABLE = "monte-carlo only"


@dataclasses.dataclass(frozen=True)
class Tagged:
    value: float | None
    method: Method
    se: float | None = None

    def __float__(self):
        if self.value is None:
            raise TypeError("no analytic value; use Monte Carlo")
        return float(self.value)


class Kind(str, enum.Enum):
    INVERSE_SYMMETRIC = "inverse-symmetric"
    POSITIVE_SYMMETRIC = "positive-symmetric"
    SIMPLE_AK = "simple-Ak"


@dataclasses.dataclass(frozen=True)
class SymmetricFamily:
    kind: Kind
    p: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        check_p(self.p)

    def step_distribution(self) -> dict[str, float]:
        p, q = self.p, 0.5 - self.p
        if self.kind is Kind.INVERSE_SYMMETRIC:
            return {"a": p, "A": p, "b": q, "B": q}
        if self.kind is Kind.POSITIVE_SYMMETRIC:
            return {"a": p, "b": p, "A": q, "B": q}
        raise DomainError("simple A_k walks are not parametrized by p")


@dataclasses.dataclass(frozen=True)
class DriftReport:
    gamma_sigma: Tagged
    gamma_delta: Tagged
    gamma_splus: Tagged
    gamma: Tagged
    family: Kind
    p: float | None = None
    k: int = 3

    def values(self) -> dict[str, float | None]:
        return {f: getattr(self, f).value for f in ("gamma_sigma", "gamma_delta", "gamma_splus", "gamma")}


def check_p(p: float) -> float:
    p = float(p)
    if not (0.0 < p < 0.5) or math.isnan(p):
        raise DomainError(f"p must lie in the open interval (0, 1/2), got {p}")
    return p


def _cf(x: float) -> Tagged:
    return Tagged(float(x), Method.CLOSED_FORM)


# --- inverse-symmetric family ----------------------------------------------


def cubic_coefficients(p: float) -> tuple[float, float, float, float]:
    """Coefficients (x^3, x^2, x, 1) of the cubic whose root gives R(a)."""
    return (2 * (4 * p - 1), 24 * p * p - 18 * p + 1, p * (7 - 12 * p), p * (2 * p - 1))


def _poly(c, x):
    return ((c[0] * x + c[1]) * x + c[2]) * x + c[3]


def _dpoly(c, x):
    return (3 * c[0] * x + 2 * c[1]) * x + c[2]


def _bisect(c, lo, hi, iters=200):
    flo = _poly(c, lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = _poly(c, mid)
        if fm == 0 or hi - lo < 1e-16:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cubic_roots_in_unit_interval(p: float) -> list[float]:
    """Real roots of the cubic in (0, 1), each bracketed by a sign change."""
    c = cubic_coefficients(p)
    # candidate locations from the companion matrix, then a sign-change
    # bracket and bisection with a Newton polish on each
    cand = np.roots(c) if c[0] != 0 else np.roots(c[1:])
    real = sorted(z.real for z in cand if abs(z.imag) <= 1e-6 * max(1.0, abs(z)))
    roots = []
    for i, x0 in enumerate(real):
        if not (-1e-9 < x0 < 1 + 1e-9):
            continue
        # bracket by the midpoints to the neighbouring candidates
        lo = 0.5 * (real[i - 1] + x0) if i else x0 - 1.0
        hi = 0.5 * (x0 + real[i + 1]) if i + 1 < len(real) else x0 + 1.0
        lo, hi = max(lo, 0.0), min(hi, 1.0)
        if not _poly(c, lo) * _poly(c, hi) < 0:
            continue
        x = _bisect(c, lo, hi)
        d = _dpoly(c, x)
        if d != 0:
            y = x - _poly(c, x) / d
            if lo <= y <= hi and abs(_poly(c, y)) <= abs(_poly(c, x)):
                x = y
        if 0 < x < 1:
            roots.append(float(x))
    return sorted(roots)


def inverse_symmetric_root(p: float) -> float:
    """u = smallest root in (0, 1) of the cubic, for p <= 1/4."""
    p = check_p(p)
    if p > 0.25:
        raise DomainError("the cubic root is used only for p <= 1/4; reflect first")
    if abs(p - 0.25) <= NEAR_UNIFORM:
        return 0.25  # double root of -2x^2 + x - 1/8
    roots = cubic_roots_in_unit_interval(p)
    if not roots:
        raise RootSelectionError(f"no bracketed root of the cubic in (0,1) at p={p}")
    return roots[0]


def drift_inverse_symmetric(p: float) -> DriftReport:
    """nu(a) = nu(a^-1) = p, nu(b) = nu(b^-1) = 1/2 - p."""
    p0 = check_p(p)
    pr = 0.5 - p0 if p0 > 0.25 else p0  # gamma(p) = gamma(1/2 - p)
    u = inverse_symmetric_root(pr)
    g = pr + (1 - 4 * pr) * u
    return DriftReport(_cf(g), _cf(-g / 2), _cf(1.5 * g), _cf(g), Kind.INVERSE_SYMMETRIC, p0)


# --- positive-symmetric family ---------------------------------------------


def _s(p: float) -> float:
    return math.sqrt(16 * p * p - 8 * p + 5)


def R_positive_symmetric(p: float) -> float:
    """The root in (0,1) of 4(1-4p)x^2 + 2(4p-3)x + 1, rationalized."""
    return 1.0 / (3 - 4 * p + _s(check_p(p)))


def gamma_sigma_positive(p: float) -> float:
    return (-1 + _s(check_p(p))) / 4


def gamma_splus_positive(p: float) -> float:
    return 0.5 - 2 * p + 6 * p * R_positive_symmetric(p)


def gamma_delta_positive(p: float) -> float:
    """From the derivation chain 2p - 1/2 - 2p R(a)."""
    return 2 * p - 0.5 - 2 * p * R_positive_symmetric(p)


def printed_gamma_delta_positive(p: float) -> float:
    """(12p^2 - 5p + 1 - p s) / (2(1-4p)) as printed; singular at 1/4."""
    return (12 * p * p - 5 * p + 1 - p * _s(p)) / (2 * (1 - 4 * p))


def printed_gamma_sigma_chain(p: float) -> float:
    """1 - 2p + (4p-1) R(a) as printed in the derivation chain."""
    return 1 - 2 * p + (4 * p - 1) * R_positive_symmetric(p)


def four_branch_terms(p: float, rationalized: bool = True) -> tuple[float, float, float, float]:
    p = check_p(p)
    s = _s(p)
    if rationalized:
        b2 = 2 * (1 - 2 * p) / (s + 1 + 4 * p)
        b3 = 4 * p / (s + 3 - 4 * p)
    else:
        b2 = (1 - 2 * p) * (-1 - 4 * p + s) / (2 * (1 - 4 * p))
        b3 = p * (-3 + 4 * p + s) / (-1 + 4 * p)
    return (1 - 4 * p, b2, b3, -1 + 4 * p)


def four_branch_max(p: float, rationalized: bool = True) -> float:
    return max(four_branch_terms(p, rationalized))


def gamma_piecewise(p: float) -> float:
    """Word-length drift: 4p-1 or 4pR(a) by the sign of gamma_delta, reflected below 1/4."""
    p = check_p(p)
    if p < 0.25:
        p = 0.5 - p
    if gamma_delta_positive(p) >= 0:
        return 4 * p - 1
    return 4 * p * R_positive_symmetric(p)


def drift_positive_symmetric(p: float) -> DriftReport:
    """nu(a) = nu(b) = p, nu(a^-1) = nu(b^-1) = 1/2 - p."""
    p = check_p(p)
    if abs(p - 0.25) <= NEAR_UNIFORM:
        return DriftReport(_cf(0.25), _cf(-0.125), _cf(0.375), _cf(0.25), Kind.POSITIVE_SYMMETRIC, p)
    return DriftReport(
        _cf(gamma_sigma_positive(p)),
        _cf(gamma_delta_positive(p)),
        _cf(gamma_splus_positive(p)),
        _cf(gamma_piecewise(p)),
        Kind.POSITIVE_SYMMETRIC,
        p,
    )


def gamma_sigma_solver(p: float) -> float:
    """gamma_sigma of the positive-symmetric walk via the quotient walk on Z/3 * Z/3."""
    return fp_drift(3, symmetric_mu(check_p(p)))


# --- dihedral Artin groups -------------------------------------------------


def drift_simple_Ak(k: int) -> DriftReport:
    """Simple random walk on A_k, through the quotient walk on Z/k * Z/k."""
    if int(k) != k or k < 3:
        raise DomainError("k must be an integer >= 3")
    k = int(k)
    gs = fp_drift(k, uniform_mu())
    if k == 3:
        gamma = _cf(drift_inverse_symmetric(0.25).gamma.value)
    else:
        gamma = Tagged(None, Method.UNAVAILABLE)
    return DriftReport(
        Tagged(gs, Method.SOLVER),
        Tagged(-gs / 2, Method.SOLVER),
        Tagged(None, Method.UNAVAILABLE),
        gamma,
        Kind.SIMPLE_AK,
        None,
        k,
    )
