"""Named validation gates: analytic vs solver vs Monte Carlo, oracles, structure."""

from __future__ import annotations

import dataclasses
import itertools
from typing import Callable

import numpy as np

from . import drift_analytic as da
from .boundary import build_automaton, continuations, cylinder_measure, check_chain, ChainError
from .braid_core import B3_MOD_Z, Family, GroupContext, T_ALPHABET
from .free_product import closed_form_r, harmonic_weights, symmetric_mu
from .graphs import isomorphic_balls, projection_is_isomorphism
from .montecarlo.estimators import estimate_drifts
from .montecarlo.oracles import geodesic_vs_bfs, normal_form_vs_burau
from .passage_green import StepDistribution, eval_traffic_rhs, solve_q, solve_traffic


@dataclasses.dataclass(frozen=True)
class Gate:
    name: str
    passed: bool
    detail: str


@dataclasses.dataclass(frozen=True)
class Hooks:
    """Test hooks that deliberately corrupt an input, to prove the gates bite."""

    flip_gamma_delta: bool = False


def gate_uniform_point() -> Gate:
    vals = [
        da.drift_inverse_symmetric(0.25),
        da.drift_positive_symmetric(0.25),
        da.drift_simple_Ak(3),
    ]
    err = max(max(abs(v.gamma_sigma.value - 0.25), abs(v.gamma.value - 0.25)) for v in vals)
    return Gate("uniform-point consistency", err < 1e-9, f"max deviation {err:.2e}")


def gate_fp_closed_form() -> Gate:
    err = 0.0
    for p in np.arange(0.05, 0.451, 0.05):
        r = harmonic_weights(3, symmetric_mu(float(p))).r_tilde
        c, c2 = closed_form_r(float(p))
        err = max(err, abs(r[(0, 1)] - c), abs(r[(0, 2)] - c2))
    return Gate("free-product r~ closed form", err < 1e-9, f"max deviation {err:.2e}")


def gate_branch_max() -> Gate:
    grid = np.linspace(0.01, 0.49, 50)
    err = max(abs(da.four_branch_max(float(p), rationalized=False) - da.gamma_piecewise(float(p))) for p in grid)
    return Gate("four-branch max = piecewise gamma", err < 1e-9, f"max deviation {err:.2e}")


def gate_traffic_fixture() -> Gate:
    mu = np.full(8, 1 / 8)
    res = max(
        np.max(np.abs(eval_traffic_rhs(np.full(8, c), mu) - c)) for c in (0.5, 0.25)
    )
    lo = solve_traffic(mu)
    hi = solve_traffic(mu, start=np.ones(8))
    ok = res < 1e-15 and np.allclose(lo, 0.25) and np.allclose(hi, 0.5)
    return Gate("traffic fixture 1/2 and 1/4", bool(ok), f"residual {res:.1e}, from 0 -> {lo[0]:.4f}, from 1 -> {hi[0]:.4f}")


def gate_kolmogorov(max_len: int = 4) -> Gate:
    worst = 0.0
    for nu in (StepDistribution.uniform(), StepDistribution.inverse_symmetric(0.1), StepDistribution.positive_symmetric(0.3)):
        aut = build_automaton(solve_q(nu))
        for L in range(1, max_len + 1):
            for w in itertools.product(T_ALPHABET, repeat=L):
                try:
                    check_chain(w)
                except ChainError:
                    continue
                s = sum(cylinder_measure(aut, list(w) + [v]) for v in continuations(w[-1]))
                worst = max(worst, abs(s - cylinder_measure(aut, w)))
    return Gate("cylinder Kolmogorov consistency", worst < 1e-12, f"max defect {worst:.1e}")


def gate_mc_drift(n: int, trials: int, seed: int, hooks: Hooks) -> list[Gate]:
    out = []
    for kind, p in (("positive-symmetric", 0.3), ("inverse-symmetric", 0.1)):
        fam = da.SymmetricFamily(kind, p)
        ref = da.drift_positive_symmetric(p) if kind == "positive-symmetric" else da.drift_inverse_symmetric(p)
        mc = estimate_drifts(fam.step_distribution(), n, trials, seed)
        gd_ref = ref.gamma_delta.value * (-1 if hooks.flip_gamma_delta else 1)
        zs, zd = mc.gamma_sigma.z(ref.gamma_sigma.value), mc.gamma_delta.z(gd_ref)
        out.append(Gate(f"MC gamma_sigma {kind} p={p}", abs(zs) < 3, f"z = {zs:+.2f}"))
        out.append(Gate(f"MC gamma_delta {kind} p={p}", abs(zd) < 3, f"z = {zd:+.2f}"))
        if kind == "inverse-symmetric":
            out.append(Gate("gamma_delta sign (inverse-symmetric)", gd_ref < 0, f"gamma_delta = {gd_ref:+.5f}"))
    return out


def gate_oracles(n_pairs: int, radius: int, seed: int) -> list[Gate]:
    r = normal_form_vs_burau(n_pairs, seed)
    bad, size = geodesic_vs_bfs(radius)
    return [
        Gate("normal form = Burau equality", r.agree == r.n, f"{r.agree}/{r.n} agree"),
        Gate("geodesic length = BFS", bad == 0, f"{bad} mismatches on {size} elements"),
    ]


def gate_schreier(radius: int) -> Gate:
    ok = True
    for k in (3, 4, 5):
        ctx = B3_MOD_Z if k == 3 else GroupContext(Family.AkmodZ, k)
        ok &= isomorphic_balls(ctx, radius) and projection_is_isomorphism(ctx, radius)
    return Gate("Schreier ball isomorphic to free-product ball", bool(ok), f"k = 3, 4, 5, radius {radius}")


def run_gates(quick: bool = True, seed: int = 12345, hooks: Hooks = Hooks()) -> list[Gate]:
    steps: list[Callable[[], Gate | list[Gate]]] = [
        gate_uniform_point,
        gate_fp_closed_form,
        gate_branch_max,
        gate_traffic_fixture,
        lambda: gate_kolmogorov(3 if quick else 5),
        lambda: gate_mc_drift(1000 if quick else 2000, 100 if quick else 200, seed, hooks),
        lambda: gate_oracles(2000 if quick else 100_000, 8 if quick else 12, seed),
        lambda: gate_schreier(4 if quick else 6),
    ]
    gates: list[Gate] = []
    for step in steps:
        g = step()
        gates.extend(g if isinstance(g, list) else [g])
    return gates


def summary_table(gates: list[Gate]) -> str:
    width = max(len(g.name) for g in gates)
    lines = [f"{'PASS' if g.passed else 'FAIL'}  {g.name:<{width}}  {g.detail}" for g in gates]
    return "\n".join(lines)


def all_passed(gates: list[Gate]) -> bool:
    return all(g.passed for g in gates)


__all__ = ["Gate", "Hooks", "run_gates", "summary_table", "all_passed"]
