"""Command-line front end: ``braidwalk <subcommand> ...``.

Subcommands: drift, simulate, green, entropy, export-graph, validate.
Tables are CSV, certified values JSON, graphs plain edge lists.  The
default seed comes from $BRAIDWALK_SEED (else 12345); ``--config`` reads a
JSON object whose keys mirror the long flags.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
from pathlib import Path


from . import drift_analytic as da
from .boundary import build_automaton, entropy
from .braid_core import B3, B3_MOD_Z, Family, GroupContext, normal_form
from .graphs import cayley_ball, free_product_ball, isomorphic_balls, schreier_ball, write_edge_list
from .montecarlo.balls import exact_convolution
from .montecarlo.estimators import estimate_drifts, estimate_qhat
from .passage_green import StepDistribution, green_function, solve_q
from .validation import Hooks, all_passed, run_gates, summary_table

DEFAULT_SEED = 12345
FAMILIES = [k.value for k in da.Kind]


class ConfigError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class RunConfig:
    subcommand: str
    family: str | None = None
    nu: dict | None = None
    k: int = 3
    p: list | None = None
    n: int = 2000
    trials: int = 200
    seed: int = DEFAULT_SEED
    output: str | None = None

    def step_distribution(self, p: float | None = None) -> StepDistribution:
        if self.nu is not None:
            return StepDistribution.from_mapping(self.nu)
        if self.family is None:
            return StepDistribution.uniform()
        if p is None:
            if not self.p:
                raise ConfigError("--p is required with --family")
            p = self.p[0]
        return StepDistribution.from_mapping(da.SymmetricFamily(self.family, p).step_distribution())


def parse_grid(text: str) -> list[float]:
    try:
        a, b, c = (float(x) for x in text.split(":"))
    except ValueError:
        raise ConfigError(f"--p-grid expects start:stop:step, got {text!r}") from None
    if c <= 0:
        raise ConfigError("--p-grid step must be positive")
    n = int(math.floor((b - a) / c + 1e-9)) + 1
    return [round(a + i * c, 12) for i in range(n)]


def parse_nu(text: str) -> dict[str, float]:
    out = {}
    for part in text.split(","):
        try:
            g, w = part.split("=")
            out[g.strip()] = float(w)
        except ValueError:
            raise ConfigError(f"--nu expects a=..,A=..,b=..,B=.., got {text!r}") from None
    if set(out) - set("aAbB"):
        raise ConfigError("--nu keys must be among a, A, b, B")
    return out


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    env = os.environ.get("BRAIDWALK_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"BRAIDWALK_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def build_config(args) -> RunConfig:
    p = None
    if getattr(args, "p_grid", None):
        p = parse_grid(args.p_grid)
    elif getattr(args, "p", None) is not None:
        p = [float(args.p)]
    for x in p or []:
        da.check_p(x)
    nu = parse_nu(args.nu) if getattr(args, "nu", None) else None
    return RunConfig(
        subcommand=args.command,
        family=getattr(args, "family", None),
        nu=nu,
        k=getattr(args, "k", 3) or 3,
        p=p,
        n=getattr(args, "n", 2000),
        trials=getattr(args, "trials", 200),
        seed=_seed(args),
        output=getattr(args, "output", None),
    )


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


# --- subcommands ---------------------------------------------------------------


def cmd_drift(cfg: RunConfig, args) -> int:
    rows = []
    if cfg.family == da.Kind.SIMPLE_AK.value or cfg.family is None:
        reports = [(None, da.drift_simple_Ak(cfg.k))]
    else:
        if not cfg.p:
            raise ConfigError("--p or --p-grid is required for symmetric families")
        fn = da.drift_inverse_symmetric if cfg.family == da.Kind.INVERSE_SYMMETRIC.value else da.drift_positive_symmetric
        reports = [(p, fn(p)) for p in cfg.p]
    for p, rep in reports:
        row = {"family": rep.family.value, "p": _fmt(p), "k": rep.k}
        for f in ("gamma_sigma", "gamma_delta", "gamma_splus", "gamma"):
            row[f] = _fmt(getattr(rep, f).value)
        row["method"] = rep.gamma_sigma.method.value
        row["se"] = ""
        rows.append(row)
        if args.monte_carlo:
            nu = cfg.step_distribution(p).as_dict() if p is not None else {g: 0.25 for g in "aAbB"}
            ctx = B3 if rep.k == 3 else GroupContext(Family.Ak, rep.k)
            mc = estimate_drifts(nu, cfg.n, cfg.trials, cfg.seed, ctx)
            for f in ("gamma_sigma", "gamma_delta", "gamma_splus", "gamma"):
                r = getattr(mc, f)
                if r is None:
                    continue
                rows.append({
                    "family": rep.family.value, "p": _fmt(p), "k": rep.k,
                    **{g: "" for g in ("gamma_sigma", "gamma_delta", "gamma_splus", "gamma")},
                    "method": f"monte-carlo:{f}", "se": _fmt(r.se),
                })
                rows[-1][f] = _fmt(r.estimate)
    _emit(_csv(rows), cfg.output)
    return 0


def cmd_simulate(cfg: RunConfig, args) -> int:
    nu = cfg.step_distribution()
    mc = estimate_drifts(nu.as_dict(), cfg.n, cfg.trials, cfg.seed)
    ref = None
    if cfg.family == da.Kind.INVERSE_SYMMETRIC.value:
        ref = da.drift_inverse_symmetric(cfg.p[0])
    elif cfg.family == da.Kind.POSITIVE_SYMMETRIC.value:
        ref = da.drift_positive_symmetric(cfg.p[0])
    rows = []
    for f in ("gamma_sigma", "gamma_delta", "gamma_splus", "gamma"):
        r = getattr(mc, f)
        target = getattr(ref, f).value if ref else None
        rows.append({
            "parameter": f,
            "estimate": _fmt(r.estimate),
            "se": _fmt(r.se),
            "target": _fmt(target),
            "z": _fmt(r.z(target)) if target is not None else "",
        })
    _emit(_csv(rows), cfg.output)
    return 0


def cmd_green(cfg: RunConfig, args) -> int:
    nu = cfg.step_distribution()
    qv = solve_q(nu)
    targets = [normal_form(w) for w in args.targets]
    rep = green_function(qv, targets)
    mc = estimate_qhat(nu, args.mc_trials, args.horizon, cfg.seed, [t for t in targets if not t.is_identity()]) if args.mc_trials else None
    rows = [{"target": "Q(Delta)", "value": _fmt(rep.Q_delta), "gamma": "", "mc": "", "se": "", "z": ""},
            {"target": "Gamma(1)", "value": _fmt(rep.Gamma_1), "gamma": _fmt(rep.Gamma_1),
             "mc": _fmt(mc.visits_to_1.estimate) if mc else "", "se": _fmt(mc.visits_to_1.se) if mc else "",
             "z": _fmt(mc.visits_to_1.z(rep.Gamma_1)) if mc else ""}]
    for t in targets:
        Q, G = rep.table[t]
        row = {"target": str(t), "value": _fmt(Q), "gamma": _fmt(G), "mc": "", "se": "", "z": ""}
        if mc and t in mc.ever:
            e = mc.ever[t]
            row.update(mc=_fmt(e.estimate), se=_fmt(e.se), z=_fmt(e.z(Q)))
        rows.append(row)
    _emit(_csv(rows), cfg.output)
    return 0


def cmd_entropy(cfg: RunConfig, args) -> int:
    nu = cfg.step_distribution()
    aut = build_automaton(solve_q(nu))
    rep = entropy(aut, nu, args.samples, args.eps_rn, cfg.seed)
    _, ratios = exact_convolution(nu.as_dict(), args.upper_n, B3_MOD_Z)
    out = rep.as_json()
    out["upper_bounds"] = ratios
    _emit(json.dumps(out, indent=2) + "\n", cfg.output)
    return 0


def cmd_export_graph(cfg: RunConfig, args) -> int:
    k = cfg.k
    if args.graph == "free-product":
        dist, edges = free_product_ball(k, args.radius)
    else:
        ctx = B3_MOD_Z if k == 3 else GroupContext(Family.AkmodZ, k)
        dist, edges = (cayley_ball if args.graph == "cayley" else schreier_ball)(ctx, args.radius)
    text = "".join(f"{u} {v} {lab}\n" for u, v, lab in sorted(edges))
    if cfg.output:
        write_edge_list(cfg.output, edges)
    else:
        sys.stdout.write(text)
    if args.check and args.graph == "schreier":
        ctx = B3_MOD_Z if k == 3 else GroupContext(Family.AkmodZ, k)
        ok = isomorphic_balls(ctx, args.radius)
        print(f"isomorphic to Z/{k} * Z/{k} ball: {ok}", file=sys.stderr)
        return 0 if ok else 1
    return 0


def cmd_validate(cfg: RunConfig, args) -> int:
    gates = run_gates(quick=args.quick, seed=cfg.seed, hooks=Hooks(flip_gamma_delta=args.inject_sign_flip))
    _emit(summary_table(gates) + "\n", cfg.output)
    return 0 if all_passed(gates) else 1


COMMANDS = {
    "drift": cmd_drift,
    "simulate": cmd_simulate,
    "green": cmd_green,
    "entropy": cmd_entropy,
    "export-graph": cmd_export_graph,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="braidwalk", description="Random walks on B3 and dihedral Artin groups")
    ap.add_argument("--config", help="JSON file whose keys mirror the long flags")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, walk=True):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--output", "-o", default=None)
        if walk:
            p.add_argument("--family", choices=FAMILIES)
            p.add_argument("--p", type=float)
            p.add_argument("--nu", help="explicit step law, e.g. a=0.1,A=0.2,b=0.3,B=0.4")

    d = sub.add_parser("drift", help="closed-form drifts, optionally with Monte Carlo rows")
    common(d)
    d.add_argument("--p-grid", help="start:stop:step")
    d.add_argument("--k", type=int, default=3)
    d.add_argument("--monte-carlo", action="store_true")
    d.add_argument("--n", type=int, default=2000)
    d.add_argument("--trials", type=int, default=200)

    s = sub.add_parser("simulate", help="Monte Carlo drifts with targets and z-scores")
    common(s)
    s.add_argument("--n", type=int, default=2000)
    s.add_argument("--trials", type=int, default=200)

    g = sub.add_parser("green", help="Green function and ever-reach probabilities")
    common(g)
    g.add_argument("--targets", nargs="*", default=["a", "ab", "aab", "D"])
    g.add_argument("--mc-trials", type=int, default=0)
    g.add_argument("--horizon", type=int, default=1000)

    e = sub.add_parser("entropy", help="asymptotic entropy with certified truncation bias")
    common(e)
    e.add_argument("--samples", type=int, default=10_000)
    e.add_argument("--eps-rn", type=float, default=1e-8)
    e.add_argument("--upper-n", type=int, default=10)

    x = sub.add_parser("export-graph", help="edge list of a Cayley or Schreier ball")
    common(x, walk=False)
    x.add_argument("--graph", choices=["cayley", "schreier", "free-product"], default="schreier")
    x.add_argument("--k", type=int, default=3)
    x.add_argument("--radius", type=int, default=4)
    x.add_argument("--check", action="store_true", help="also check the isomorphism with the free product")

    v = sub.add_parser("validate", help="run the validation gates")
    common(v, walk=False)
    v.add_argument("--quick", action="store_true")
    v.add_argument("--inject-sign-flip", action="store_true", help="test hook: corrupt gamma_delta")
    return ap


def _apply_config(ap: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = ap.parse_args(argv)
    if not args.config:
        return args
    try:
        conf = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(conf, dict):
        raise ConfigError("config file must hold a JSON object")
    # explicit flags win over the file
    defaults = vars(ap.parse_args([args.command]))
    for key, val in conf.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"unknown config key {key!r} for {args.command}")
        if getattr(args, attr) == defaults.get(attr):
            setattr(args, attr, val)
    return args


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = _apply_config(ap, sys.argv[1:] if argv is None else argv)
        cfg = build_config(args)
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, da.DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
