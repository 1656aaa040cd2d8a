"""Seeded Monte Carlo estimators built on :class:`BatchWalk`.

Trials are split into fixed-size chunks and chunk ``i`` draws from the
``i``-th child of ``SeedSequence(seed)``, so results depend only on
(seed, trials, CHUNK), never on how chunks are scheduled.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Sequence

import numpy as np
from scipy import stats

from ..braid_core import (
    B3,
    B3_MOD_Z,
    GarsideNormalForm,
    GroupContext,
    SigmaLetter,
)
from .walker import BatchWalk, sample_generators, word_code

CHUNK = 1000


@dataclasses.dataclass(frozen=True)
class EstimatorReport:
    estimate: float
    se: float
    n: int
    trials: int
    seed: int | None

    @classmethod
    def from_samples(cls, x: np.ndarray, n: int, seed=None) -> "EstimatorReport":
        x = np.asarray(x, dtype=float)
        se = float(x.std(ddof=1) / math.sqrt(len(x))) if len(x) > 1 else float("nan")
        return cls(float(x.mean()), se, n, len(x), seed)

    def z(self, target: float) -> float:
        if self.se == 0:
            return 0.0 if math.isclose(self.estimate, target, abs_tol=1e-15) else math.inf
        return (self.estimate - target) / self.se

    def within(self, target: float, nse: float = 3.0) -> bool:
        return abs(self.z(target)) <= nse


def chunk_rngs(seed: int, trials: int, chunk: int = CHUNK):
    """Yield (size, Generator) per chunk."""
    n_chunks = -(-trials // chunk)
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(n_chunks)):
        size = min(chunk, trials - i * chunk)
        yield size, np.random.Generator(np.random.PCG64(child))


def _nu_dict(nu) -> dict[str, float]:
    return nu if isinstance(nu, dict) else nu.as_dict()


@dataclasses.dataclass(frozen=True)
class Trajectory:
    steps: str
    syllable_counts: np.ndarray
    delta_exps: np.ndarray
    positive_lengths: np.ndarray
    final: GarsideNormalForm


def run_walk(nu, n: int, seed: int, ctx: GroupContext = B3) -> Trajectory:
    """A single trajectory with its per-step observables."""
    nu = _nu_dict(nu)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    gens = sample_generators(rng, nu, n)
    w = BatchWalk(ctx, 1)
    syl, de, pl = np.zeros(n, int), np.zeros(n, int), np.zeros(n, int)
    for t in range(n):
        w.step(gens[t : t + 1])
        syl[t], de[t], pl[t] = w.syllable_count()[0], w.e[0], w.length[0]
    return Trajectory("".join("aAbB"[g] for g in gens), syl, de, pl, w.element(0))


def walk_endpoints(nu, n: int, trials: int, seed: int, ctx: GroupContext = B3) -> dict[str, np.ndarray]:
    """Observables of X_n over independent trials."""
    nu = _nu_dict(nu)
    out = {"syllables": [], "delta": [], "positive": [], "long": [], "geodesic": []}
    for size, rng in chunk_rngs(seed, trials):
        w = BatchWalk(ctx, size, capacity=max(16, n // 2))
        for _ in range(n):
            w.step(sample_generators(rng, nu, size))
        out["syllables"].append(w.syllable_count())
        out["delta"].append(w.delta_exp())
        out["positive"].append(w.length.copy())
        out["long"].append(w.long_count())
        if ctx.k == 3 and ctx.delta_modulus is None:
            out["geodesic"].append(w.geodesic_b3())
    return {k: np.concatenate(v) for k, v in out.items() if v}


@dataclasses.dataclass(frozen=True)
class MCDrifts:
    gamma_sigma: EstimatorReport
    gamma_delta: EstimatorReport
    gamma_splus: EstimatorReport
    gamma: EstimatorReport | None
    ratio_delta_sigma: tuple[float, float]  # estimate, propagated SE


def estimate_drifts(nu, n: int, trials: int, seed: int, ctx: GroupContext = B3) -> MCDrifts:
    if n < 1000:
        raise ValueError("drift estimation needs n >= 1000")
    obs = walk_endpoints(nu, n, trials, seed, ctx)
    rep = lambda key: EstimatorReport.from_samples(obs[key] / n, n, seed)  # noqa: E731
    gs, gd = rep("syllables"), rep("delta")
    g = rep("geodesic") if "geodesic" in obs else None
    # ratio with delta-method SE using the sample covariance
    xs, xd = obs["syllables"] / n, obs["delta"] / n
    r = gd.estimate / gs.estimate
    cov = np.cov(np.vstack([xs, xd]))
    grad = np.array([-gd.estimate / gs.estimate**2, 1 / gs.estimate])
    r_se = float(math.sqrt(grad @ cov @ grad / len(xs)))
    return MCDrifts(gs, gd, rep("positive"), g, (r, r_se))


# --- first passage and Green function --------------------------------------

_SINGLE = {word_code(s): s for s in ("a", "b", "ab", "ba")}


@dataclasses.dataclass(frozen=True)
class PassageReport:
    q_hat: dict[SigmaLetter, EstimatorReport]
    q_hat_1: EstimatorReport
    q_hat_delta: EstimatorReport
    visits_to_1: EstimatorReport
    ever: dict  # target -> EstimatorReport
    horizon: int
    escape_depth: int
    late_fraction: float  # share of recorded events in the last half of the horizon


def estimate_qhat(
    nu,
    trials: int,
    horizon: int,
    seed: int,
    targets: Sequence[GarsideNormalForm] = (),
    escape_depth: int = 30,
) -> PassageReport:
    """Frequency estimates of the passage quantities of the walk on B3/Z.

    A trajectory is frozen once its syllable count reaches ``escape_depth``
    (returning from there has probability far below the statistical error)
    or at ``horizon`` steps.  Events are counted for times n >= 1.
    """
    nu = _nu_dict(nu)
    ctx = B3_MOD_Z
    tcodes = np.array([word_code(t.letters) for t in targets], dtype=np.int64)
    tpar = np.array([t.delta_exp for t in targets], dtype=np.int64)
    first_coset = {s: [] for s in _SINGLE.values()}  # parity at first visit, -1 = never
    home, visits, ever = [], [], []
    late = total = 0
    for size, rng in chunk_rngs(seed, trials):
        w = BatchWalk(ctx, size, capacity=2 * escape_depth + 8, track_codes=True)
        cos = {s: np.full(size, -1) for s in first_coset}
        h = np.full(size, -1)
        v = np.ones(size)
        hit = np.zeros((size, len(targets)), dtype=bool)
        active = np.arange(size)
        for t in range(1, horizon + 1):
            gens = sample_generators(rng, nu, size)
            w.step(gens, active)
            L = w.length[active]
            par = w.e[active] & 1
            code = w.codes[active, L]
            before = sum(int((c >= 0).sum()) for c in cos.values()) + int((h >= 0).sum()) + int(hit.sum())
            for c, s in _SINGLE.items():
                arr = cos[s]
                m = (code == c) & (arr[active] < 0)
                arr[active[m]] = par[m]
            at_home = L == 0
            m = at_home & (h[active] < 0)
            h[active[m]] = par[m]
            v[active[at_home & (par == 0)]] += 1
            if len(targets):
                eq = (code[:, None] == tcodes[None, :]) & (par[:, None] == tpar[None, :])
                hit[active] |= eq
            after = sum(int((c >= 0).sum()) for c in cos.values()) + int((h >= 0).sum()) + int(hit.sum())
            total += after - before
            if t > horizon // 2:
                late += after - before
            if t % 16 == 0:
                active = active[w.syllable_count()[active] < escape_depth]
                if active.size == 0:
                    break
        for s in first_coset:
            first_coset[s].append(cos[s])
        home.append(h)
        visits.append(v)
        ever.append(hit)
    first_coset = {s: np.concatenate(a) for s, a in first_coset.items()}
    home = np.concatenate(home)
    visits = np.concatenate(visits)
    ever = np.concatenate(ever) if targets else np.zeros((trials, 0), bool)
    q_hat = {}
    for s, arr in first_coset.items():
        q_hat[SigmaLetter(s)] = EstimatorReport.from_samples(arr == 0, horizon, seed)
        q_hat[SigmaLetter(s, True)] = EstimatorReport.from_samples(arr == 1, horizon, seed)
    return PassageReport(
        q_hat,
        EstimatorReport.from_samples(home == 0, horizon, seed),
        EstimatorReport.from_samples(home == 1, horizon, seed),
        EstimatorReport.from_samples(visits, horizon, seed),
        {t: EstimatorReport.from_samples(ever[:, i], horizon, seed) for i, t in enumerate(targets)},
        horizon,
        escape_depth,
        late / total if total else 0.0,
    )


# --- central limit theorem --------------------------------------------------


@dataclasses.dataclass(frozen=True)
class CLTReport:
    sigma_sigma: EstimatorReport
    sigma_delta: EstimatorReport
    ks_pvalue_sigma: float
    ks_pvalue_delta: float
    n: int


def _sigma_report(z: np.ndarray, n: int, seed) -> EstimatorReport:
    s = float(z.std(ddof=1))
    # SE of the sample std under normality
    return EstimatorReport(s, s / math.sqrt(2 * (len(z) - 1)), n, len(z), seed)


def _ks(z: np.ndarray) -> float:
    s = z.std(ddof=1)
    if s == 0:
        return float("nan")
    return float(stats.kstest(z / s, "norm").pvalue)


def clt_check(nu, n: int, trials: int, seed: int, gamma_sigma: float, gamma_delta: float) -> CLTReport:
    """Spread of the syllable length and Delta exponent around their drifts."""
    obs = walk_endpoints(nu, n, trials, seed, B3)
    zs = (obs["syllables"] - n * gamma_sigma) / math.sqrt(n)
    zd = (obs["delta"] - n * gamma_delta) / math.sqrt(n)
    return CLTReport(_sigma_report(zs, n, seed), _sigma_report(zd, n, seed), _ks(zs), _ks(zd), n)
