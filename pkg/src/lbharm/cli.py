"""Command-line front end.

    lbharm <subcommand> [--config FILE] [flags]

Subcommands: specfun, transform, plancherel, convolve, young, heat,
constants, verify, sweep.  Exit codes: 0 all asserted properties pass,
1 strictness/tolerance failure (report still written), 2 configuration
error, 3 I/O failure.  The sweep driver runs reports in parallel when
LBHARM_THREADS is set; aggregation is keyed by name so the output is
order-independent.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import numpy as np

from . import heat as heatmod
from . import testfamily
from .config import ConfigError, RunConfig, parse_config, validate_verify_params
from .context import make_context
from .measure import (
    SampledFunction,
    SpectralSet,
    build_graded_space_grid,
    build_space_grid,
    gamma_measure_of_set,
    lp_norm_space,
)
from .report import InequalityReport, reports_to_csv, reports_to_json
from .specfun import bessel_normalized, laguerre_poly, pde_residuals
from .transform import convolve_direct_alpha0, default_plan, plancherel_defect, young_check
from .uncertainty import (
    ORACLE,
    PAPER,
    bound_profile,
    bound_profile_argmin,
    constant_C_critical,
    constant_K,
    constant_M,
    constant_N,
    heisenberg_ratio,
    interpolation_check,
    lemma_l1_l2_ratio,
    local_critical,
    local_large_s,
    local_small_s,
)

_SUBCOMMANDS = ("specfun", "transform", "plancherel", "convolve", "young",
                "heat", "constants", "verify", "sweep")


def _worker_count() -> int:
    raw = os.environ.get("LBHARM_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"LBHARM_THREADS must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError("LBHARM_THREADS must be a positive integer")
    return n


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    ms = (time.perf_counter() - t0) * 1000.0
    if isinstance(out, InequalityReport):
        out.runtime_ms = ms
        return out
    return out


def _plan_from_config(cfg: RunConfig):
    ctx = make_context(cfg.alpha)
    g = cfg.grid
    return ctx, default_plan(ctx, x_max=g["x_max"], t_max=g["t_max"],
                             lambda_max=g["lambda_max"], m_max=g["m_max"],
                             panels=g["panels"], nodes_per_panel=g["nodes_per_panel"])


def _family(cfg: RunConfig):
    members = testfamily.default_family(cfg.alpha)
    if cfg.test_family:
        members = [m for m in members if m.name in set(cfg.test_family)]
    return members


def _norm_grid_for(cfg: RunConfig, member, ctx):
    if member.decay == "slow" or cfg.grid.get("graded_tail"):
        return build_graded_space_grid(ctx)
    g = cfg.grid
    return build_space_grid(ctx, g["x_max"], g["t_max"], g["panels"], g["panels"],
                            g["nodes_per_panel"])


# ---------------------------------------------------------------------------
# subcommand implementations; each returns (reports, ok)
# ---------------------------------------------------------------------------

def _cmd_specfun(cfg: RunConfig, args):
    ctx = make_context(cfg.alpha)
    xs = np.linspace(0.0, 20.0, 100)
    err_cos = float(np.max(np.abs(bessel_normalized(-0.5, xs) - np.cos(xs))))
    sinc = np.where(xs > 0, np.sin(np.maximum(xs, 1e-300)) / np.maximum(xs, 1e-300), 1.0)
    err_sinc = float(np.max(np.abs(bessel_normalized(0.5, xs) - sinc)))
    worst = [0.0, 0.0]
    for lam in (0.5, 1.0, 2.0, 3.0, 4.0):
        for m in (0, 1, 2, 3, 5):
            for x in (0.5, 1.5, 3.0):
                for t in (0.5, 1.5, 3.0):
                    r1, r2 = pde_residuals(ctx, lam, m, x, t)
                    worst[0] = max(worst[0], abs(r1) / (1 + lam ** 2))
                    worst[1] = max(worst[1], abs(r2) / (1 + 2 * lam * (2 * m + ctx.alpha + 1)))
    ok = err_cos <= 1e-12 and err_sinc <= 1e-12 and worst[0] <= 1e-5 and worst[1] <= 1e-4
    rep = {"name": "specfun", "params": {"alpha": cfg.alpha},
           "bessel_cos_abs_err": err_cos, "bessel_sinc_abs_err": err_sinc,
           "pde_residual_d1": worst[0], "pde_residual_d2": worst[1], "pass": ok}
    return [rep], ok


def _cmd_transform(cfg: RunConfig, args):
    ctx, p = _plan_from_config(cfg)
    member = testfamily.by_name("gauss-mod3", cfg.alpha)
    fs = SampledFunction.from_callable(p.space_grid, member)
    rt = p.inverse(p.forward(fs))
    err = lp_norm_space(rt - fs, 2) / lp_norm_space(fs, 2)
    ok = err <= cfg.tolerances["roundtrip"]
    rep = {"name": "transform-roundtrip", "params": {"alpha": cfg.alpha, "f": member.name},
           "relative_l2_error": err, "pass": ok,
           "grid": {"space": p.space_grid.meta(), "spectral": p.spectral_grid.meta()}}
    return [rep], ok


def _cmd_plancherel(cfg: RunConfig, args):
    ctx, p = _plan_from_config(cfg)
    reports, ok = [], True
    for member in _family(cfg) or [testfamily.GAUSS]:
        if member.decay == "slow":
            continue
        fs = SampledFunction.from_callable(p.space_grid, member)
        d = plancherel_defect(p, fs)
        good = d <= cfg.tolerances["plancherel"]
        ok = ok and good
        reports.append({"name": f"plancherel-{member.name}",
                        "params": {"alpha": cfg.alpha, "f": member.name},
                        "defect": d, "pass": good})
    return reports, ok


def _cmd_convolve(cfg: RunConfig, args):
    if cfg.alpha != 0.0:
        raise ConfigError("convolve cross-check requires alpha = 0 (direct route)")
    ctx, p = _plan_from_config(cfg)
    f = testfamily.by_name("gauss-mod3", 0.0)
    g = testfamily.by_name("gauss", 0.0)
    from .measure import SpectralFunction
    fs = SampledFunction.from_callable(p.space_grid, f)
    gs = SampledFunction.from_callable(p.space_grid, g)
    product = SpectralFunction(grid=p.spectral_grid,
                               values=p.forward(fs).values * p.forward(gs).values)
    coarse = build_space_grid(ctx, 6.0, 6.0, 4, 4, 8)
    direct = convolve_direct_alpha0(ctx, f, g, coarse.x_nodes, coarse.t_nodes,
                                    build_space_grid(ctx, 8.0, 8.0, 4, 4, 16))
    spec_conv_at = p.synthesize_at(product, coarse.x_nodes, coarse.t_nodes)
    # weighted relative L2 distance over the coarse sample
    w = coarse.weights_2d()
    num = math.sqrt(float(np.sum(w * (direct - spec_conv_at) ** 2)))
    den = math.sqrt(float(np.sum(w * direct ** 2)))
    err = num / den
    ok = err <= 1e-2
    rep = {"name": "convolve-direct-vs-spectral",
           "params": {"alpha": 0.0, "f": f.name, "g": g.name},
           "relative_l2_error": err, "pass": ok}
    return [rep], ok


_YOUNG_PAIRS = [
    ("gauss-mod3", "gauss", 1.0, 1.0, 1.0),
    ("laguerre-gauss", "gauss-wide", 1.0, 1.0, 1.0),
    ("gauss", "gauss", 1.0, 2.0, 2.0),
    ("gauss", "gauss-narrow", 1.0, 2.0, 2.0),
    ("gauss-wide", "gauss-mod3", 1.0, 2.0, 2.0),
]


def _cmd_young(cfg: RunConfig, args):
    ctx, p = _plan_from_config(cfg)
    reports, ok = [], True
    for fname, gname, pe, qe, re_ in _YOUNG_PAIRS:
        f = testfamily.by_name(fname, cfg.alpha)
        g = testfamily.by_name(gname, cfg.alpha)
        rep = _timed(young_check, p, f, g, pe, qe, re_,
                     name=f"young-{fname}-{gname}-p{pe:g}q{qe:g}r{re_:g}")
        ok = ok and rep.ratio_paper <= 1.0
        reports.append(rep)
    return reports, ok


def _cmd_heat(cfg: RunConfig, args):
    ctx, p = _plan_from_config(cfg)
    s = args.s
    if s is None or s <= 0:
        raise ConfigError("heat requires --s > 0")
    checks = [args.check] if args.check else ["mass", "semigroup", "norm", "pde"]
    reports, ok = [], True
    for check in checks:
        if check == "mass":
            audit = heatmod.heat_kernel_mass(p, s)
            good = abs(audit["total"] - 1.0) <= cfg.tolerances["mass"]
            reports.append({"name": "heat-mass", "params": {"alpha": cfg.alpha, "s": s},
                            **audit, "pass": good})
        elif check == "semigroup":
            g = p.spectral_grid
            m1 = heatmod.heat_multiplier(ctx, s, g.lambda_nodes[:, None], g.m_list[None, :])
            m2 = heatmod.heat_multiplier(ctx, 2 * s, g.lambda_nodes[:, None], g.m_list[None, :])
            gap = float(np.max(np.abs(m1 * m1 - m2)))
            good = gap <= 1e-15
            reports.append({"name": "heat-semigroup", "params": {"alpha": cfg.alpha, "s": s},
                            "max_defect": gap, "pass": good})
        elif check == "norm":
            v1 = heatmod.heat_l2_norm_sq(ctx, s)
            scaled = [heatmod.heat_l2_norm_sq(ctx, sv) * sv ** (3 * cfg.alpha + 2)
                      for sv in (0.25, 1.0, 4.0)]
            spread = max(scaled) - min(scaled)
            good = spread <= 1e-12 * max(scaled)
            reports.append({"name": "heat-norm", "params": {"alpha": cfg.alpha, "s": s},
                            "value": v1, "scaled_spread": spread, "pass": good})
        elif check == "pde":
            from .measure import SpectralFunction
            h = 1e-3
            hp = heatmod.heat_kernel(p, s + h)
            hm = heatmod.heat_kernel(p, s - h)
            ds = (hp.values - hm.values) / (2 * h)
            g = p.spectral_grid
            eig = 2.0 * np.outer(g.lambda_nodes, 2.0 * g.m_list + ctx.alpha + 1.0)
            mult = np.exp(-eig * s) * g.band
            Lh = p.inverse(SpectralFunction(grid=g, values=eig * mult)).values
            hs = heatmod.heat_kernel(p, s)
            X, T = p.space_grid.meshes()
            interior = (X >= 0.5) & (T >= 0.5)
            resid = float(np.max(np.abs((Lh + ds)[interior])))
            bound = 1e-2 * float(np.max(np.abs(hs.values)))
            good = resid <= bound
            reports.append({"name": "heat-pde", "params": {"alpha": cfg.alpha, "s": s},
                            "max_residual": resid, "bound": bound, "pass": good})
        else:
            raise ConfigError(f"unknown heat check {check!r}")
        ok = ok and reports[-1]["pass"]
    return reports, ok


def _cmd_constants(cfg: RunConfig, args):
    ctx = make_context(cfg.alpha)
    s = args.s
    d = 3 * cfg.alpha + 2
    rep = {"name": "constants", "params": {"alpha": cfg.alpha, "s": s}}
    if s is not None and 0 < s < d:
        rep["K_paper"] = constant_K(ctx, s, PAPER)
        rep["K_oracle"] = constant_K(ctx, s, ORACLE)
    if s is not None and s > d:
        n_paper, n_oracle = constant_N(ctx, s)
        rep.update({"N_paper": n_paper, "N_oracle": n_oracle,
                    "M_paper": constant_M(ctx, s, PAPER),
                    "M_oracle": constant_M(ctx, s, ORACLE)})
    rep["C_critical_paper"] = constant_C_critical(ctx, PAPER)
    rep["C_critical_oracle"] = constant_C_critical(ctx, ORACLE)
    rep["pass"] = True
    return [rep], True


def _default_E(cfg: RunConfig, fallback_mset=(0, 1, 2, 3, 4)) -> SpectralSet:
    E = cfg.spectral_set()
    if E is None:
        E = SpectralSet(0.0, 1.0, fallback_mset)
    return E


def baseline_path():
    return resources.files("lbharm.data").joinpath("heisenberg_baseline.json")


def _cmd_verify(cfg: RunConfig, args):
    check = args.check
    if check is None:
        raise ConfigError("verify requires a check name: local-small | local-large | "
                          "local-critical | lemma-extremal | heisenberg | interpolation | profile")
    s = args.s
    validate_verify_params(cfg, check, s)
    ctx = make_context(cfg.alpha)
    reports, ok = [], True

    if check in ("local-small", "local-large", "local-critical"):
        _, p = _plan_from_config(cfg)
        E = _default_E(cfg)
        for member in _family(cfg):
            if check == "local-small":
                rep = _timed(local_small_s, p, member, E, s,
                             name=f"local-small-{member.name}")
            elif check == "local-large":
                grid = _norm_grid_for(cfg, member, ctx)
                rep = _timed(local_large_s, p, grid, member, E, s,
                             name=f"local-large-{member.name}")
            else:
                rep = _timed(local_critical, p, member, E,
                             name=f"local-critical-{member.name}")
            ok = ok and rep.strict
            reports.append(rep)
    elif check == "lemma-extremal":
        grid = build_graded_space_grid(ctx)
        member = testfamily.EXTREMAL_S4
        rep = _timed(lemma_l1_l2_ratio, grid, member, s,
                     name=f"lemma-moment-{member.name}",
                     tail_decay_power=4 * s - (6 * cfg.alpha + 4))
        ratio = rep.extra["cs_lhs"] / rep.extra["cs_rhs_oracle"]
        ok = abs(ratio - 1.0) <= cfg.tolerances["extremal_ratio"] and \
            abs(rep.ratio_oracle - 1.0) <= cfg.tolerances["extremal_ratio"]
        reports.append(rep)
    elif check == "heisenberg":
        _, p = _plan_from_config(cfg)
        try:
            baseline = json.loads(baseline_path().read_text())
        except FileNotFoundError:
            baseline = {}
        for a in (args.a,) if args.a else (0.5, 1.0, 2.0):
            for b in (args.b,) if args.b else (0.5, 1.0, 2.0):
                worst = math.inf
                for member in _family(cfg):
                    if member.decay == "slow":
                        continue
                    rep = _timed(heisenberg_ratio, p, member, a, b,
                                 name=f"heisenberg-{member.name}-a{a:g}-b{b:g}")
                    worst = min(worst, rep.ratio_paper)
                    reports.append(rep)
                key = f"alpha{cfg.alpha:g}-a{a:g}-b{b:g}"
                floor = baseline.get(key)
                if floor is not None and worst < cfg.tolerances["baseline_fraction"] * floor:
                    ok = False
    elif check == "interpolation":
        grid = build_space_grid(ctx, cfg.grid["x_max"], cfg.grid["t_max"],
                                cfg.grid["panels"], cfg.grid["panels"],
                                cfg.grid["nodes_per_panel"])
        for member in _family(cfg):
            if member.decay == "slow":
                continue
            rep = _timed(interpolation_check, grid, member, s or 2.0,
                         name=f"interpolation-{member.name}")
            ok = ok and rep.ratio_paper <= 1.0
            reports.append(rep)
    elif check == "profile":
        sv = s if s is not None else 1.0
        d = 3 * cfg.alpha + 2
        if not (0 < sv < d):
            raise ConfigError(f"profile requires 0 < s < 3*alpha + 2 = {d}")
        E = _default_E(cfg, fallback_mset=(0,))
        ge = gamma_measure_of_set(ctx, E, "literal")
        r0 = bound_profile_argmin(ctx, sv, ge)
        gmin = bound_profile(ctx, sv, ge, r0)
        target = constant_K(ctx, sv, PAPER) * ge ** (sv / (2 * d))
        gap = abs(gmin - target) / target
        ok = gap <= 1e-12
        reports.append({"name": "profile-identity",
                        "params": {"alpha": cfg.alpha, "s": sv, "gamma_E": ge},
                        "r0": r0, "g_at_r0": gmin, "target": target,
                        "relative_gap": gap, "pass": ok})
    else:
        raise ConfigError(f"unknown verify check {check!r}")
    return reports, ok


def _cmd_sweep(cfg: RunConfig, args):
    jobs = []

    def add(fn, *a):
        jobs.append((fn, a))

    ns = argparse.Namespace(s=None, check=None, a=None, b=None)
    add(_cmd_specfun, cfg, ns)
    add(_cmd_plancherel, cfg, ns)
    add(_cmd_transform, cfg, ns)
    add(_cmd_young, cfg, ns)
    add(_cmd_heat, cfg, argparse.Namespace(s=1.0, check=None))
    for s in cfg.sweeps.get("s", [1.0]):
        d = 3 * cfg.alpha + 2
        if 0 < s < d:
            add(_cmd_verify, cfg, argparse.Namespace(s=s, check="local-small", a=None, b=None))
        elif s > d:
            add(_cmd_verify, cfg, argparse.Namespace(s=s, check="local-large", a=None, b=None))
    add(_cmd_verify, cfg, argparse.Namespace(s=None, check="local-critical", a=None, b=None))

    workers = _worker_count()
    results = []
    if workers == 1:
        for fn, a in jobs:
            results.append(fn(*a))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, *a) for fn, a in jobs]
            results = [f.result() for f in futures]
    reports, ok = [], True
    for reps, good in results:
        reports.extend(reps)
        ok = ok and good
    key = lambda r: r.name if isinstance(r, InequalityReport) else r["name"]
    reports.sort(key=key)
    return reports, ok


_DISPATCH = {
    "specfun": _cmd_specfun,
    "transform": _cmd_transform,
    "plancherel": _cmd_plancherel,
    "convolve": _cmd_convolve,
    "young": _cmd_young,
    "heat": _cmd_heat,
    "constants": _cmd_constants,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lbharm",
                                 description="Laguerre-Bessel harmonic analysis toolkit")
    ap.add_argument("subcommand", choices=_SUBCOMMANDS)
    ap.add_argument("check", nargs="?", default=None,
                    help="verification or heat check name")
    ap.add_argument("--config", default=None, help="path to JSON config file")
    ap.add_argument("--alpha", type=float, default=None)
    ap.add_argument("--s", type=float, default=None)
    ap.add_argument("--a", type=float, default=None)
    ap.add_argument("--b", type=float, default=None)
    ap.add_argument("--output", default=None, help="report file path")
    ap.add_argument("--format", choices=("json", "csv"), default=None)
    ap.add_argument("--check", dest="check_flag", default=None,
                    help="alternative to the positional check name")
    return ap


def run(cfg: RunConfig, subcommand: str, args) -> int:
    """Execute a subcommand; returns the exit code and writes the report."""
    try:
        reports, ok = _DISPATCH[subcommand](cfg, args)
    except ConfigError:
        raise
    doc_reports = [r.to_dict() if isinstance(r, InequalityReport) else r for r in reports]
    try:
        if cfg.format == "csv":
            text = reports_to_csv(reports)
        else:
            text = reports_to_json(doc_reports, config=cfg.resolved())
        with open(cfg.output, "w") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return 3
    print(f"{subcommand}: {'pass' if ok else 'FAIL'} "
          f"({len(reports)} report(s) -> {cfg.output})")
    return 0 if ok else 1


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.check_flag and not args.check:
        args.check = args.check_flag
    try:
        text = ""
        if args.config:
            try:
                with open(args.config) as fh:
                    text = fh.read()
            except OSError as exc:
                print(f"error: cannot read config: {exc}", file=sys.stderr)
                return 3
        cfg = parse_config(text)
        if args.alpha is not None:
            if args.alpha < 0:
                raise ConfigError("alpha must satisfy alpha >= 0")
            cfg.alpha = args.alpha
        if args.output:
            cfg.output = args.output
        if args.format:
            cfg.format = args.format
        _worker_count()
        return run(cfg, args.subcommand, args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
