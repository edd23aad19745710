"""Command-line driver: `kernel <pipeline> ...` for single runs, `kernel sweep ...` for grids."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
import time

from . import graph as gmod
from .biclique_free import compute_core, core_bound, psaks_kdd
from .errors import InputError, ResourceError, VerificationError
from .framework import (
    ENUM_CAP,
    AnnotatedInstance,
    ds_bikernel,
    lift_solution,
    lossy_cds_kernel,
    objective_value,
    trivial_negative,
)
from .graph import INF, Graph
from .oracles import (
    N_CAP,
    certified_core,
    exact_min_dominator,
    exact_set_cover,
    parse_set_cover,
)
from .reductions import membership_check_Hp, reduce_to_rds
from .rkernel import RKernelParams, one_approx_ds_bikernel, r_lift, r_lossy_kernel

SCHEMA = 1
PIPELINES = ("kdd-psaks", "cds-framework", "rds-nowhere-dense", "ds-bikernel", "reduce-setcover")
EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_VERIFY = 0, 2, 3, 4

GENERATORS = {
    "path": (gmod.path, 1),
    "cycle": (gmod.cycle, 1),
    "star": (gmod.star, 1),
    "complete": (gmod.complete, 1),
    "grid": (gmod.grid, 2),
    "grid_apex": (gmod.grid_apex, 2),
    "random_degenerate": (gmod.random_degenerate, 2),
    "random_connected": (gmod.random_connected, 2),
}
SEEDED = {"random_degenerate", "random_connected"}


def generate(spec: str, seed: int) -> Graph:
    name, _, args = spec.partition(":")
    if name not in GENERATORS:
        raise InputError(f"unknown generator {name!r}; choose from {', '.join(sorted(GENERATORS))}")
    fn, arity = GENERATORS[name]
    try:
        vals = [int(a) for a in args.split(",")] if args else []
    except ValueError:
        raise InputError(f"generator arguments must be integers: {args!r}") from None
    if len(vals) != arity:
        raise InputError(f"{name} takes {arity} argument(s), got {len(vals)}")
    if name in SEEDED:
        return fn(*vals, seed=seed)
    return fn(*vals)


def _num(x):
    """JSON-friendly number: infinity becomes None."""
    return None if x == INF else x


def _reduced_optimum(out, k, n_cap):
    """Exact reduced optimum when it fits the budget, else a valid larger solution.

    Returns (size or None when above k, solution).
    """
    inst = out.reduced
    objective = out.params.get("objective", "cds")
    if objective == "cds":
        res = exact_min_dominator(inst.graph, None, r=inst.r, connected=True, k=k, n_cap=n_cap)
        spare = frozenset(range(inst.graph.n))
    else:
        res = exact_min_dominator(inst.graph, inst.Z, r=inst.r, connected=objective == "scds", k=k, n_cap=n_cap)
        spare = inst.Z
    if res.feasible:
        return res.size, res.vertices
    return None, spare


def _verify_kernel(g, k, r, out, bound, connected, n_cap, lift):
    """Solve both sides exactly (up to the budget), lift the reduced optimum and check the ratio.

    Values follow the capped objective min(|D|, k+1), so optima above k show as null.
    """
    opt = exact_min_dominator(g, None, r=r, connected=connected, k=k, n_cap=n_cap)
    opt_value = min(opt.size, k + 1)
    red_size, red_sol = _reduced_optimum(out, k, n_cap)
    lifted = lift(AnnotatedInstance(g, frozenset(range(g.n)), k, r), out, red_sol)
    ratio = lifted.value / opt_value
    ok = lifted.valid and ratio <= bound
    if out.trivial_negative:
        ok = ok and opt.size > k
    if lifted.valid:
        # the lifted set must really solve the original instance
        real = objective_value(g, k, lifted.solution, r=r, connected=connected)
        ok = ok and real == lifted.value
    return {
        "opt_original": _num(opt.size),
        "opt_reduced": red_size,
        "lifted_value": _num(lifted.value),
        "ratio": _num(ratio),
        "bound": bound,
        "ok": bool(ok),
    }


def run(cfg: dict) -> dict:
    """Execute one pipeline run and return its report (raises on invalid input, caps, failed checks)."""
    pipeline = cfg["pipeline"]
    if pipeline not in PIPELINES:
        raise InputError(f"unknown pipeline {pipeline!r}")
    seed = cfg.get("seed", 0)
    n_cap = cfg.get("oracle_cap", N_CAP)
    enum_cap = cfg.get("enum_cap", ENUM_CAP)
    report = {"schema": SCHEMA, "pipeline": pipeline, "seed": seed}
    started = time.perf_counter()

    if pipeline == "reduce-setcover":
        if not cfg.get("input"):
            raise InputError("reduce-setcover needs --in with a set cover file")
        with open(cfg["input"]) as fh:
            sc = parse_set_cover(fh.read())
        r = cfg.get("r", 1)
        red = reduce_to_rds(sc, r)
        report["input"] = {"universe": sc.universe, "families": len(sc.families), "k": sc.k, "r": r}
        report["reduced"] = {"n": red.graph.n, "m": red.graph.m, "k_prime": red.k_prime}
        report["roles"] = red.roles
        report["graph"] = gmod.format_edge_list(red.graph)
        report["in_Hp"] = membership_check_Hp(red.graph, r)
        if cfg.get("verify"):
            lhs = exact_set_cover(sc.universe, sc.families, sc.k)
            rhs = exact_min_dominator(red.graph, None, r=r, k=red.k_prime, n_cap=n_cap, prune=True).feasible
            report["verify"] = {"set_cover": lhs, "rds_within_k_prime": rhs, "ok": lhs == rhs and report["in_Hp"]}
    else:
        g = load_graph(cfg, seed)
        k = cfg.get("k")
        if k is None:
            raise InputError("--k is required")
        r = cfg.get("r", 1)
        fallback = cfg.get("fallback", True)
        report["input"] = {"n": g.n, "m": g.m, "k": k, "r": r, "source": cfg.get("gen") or cfg.get("input")}
        if pipeline == "kdd-psaks":
            d = cfg.get("d")
            if d is None:
                raise InputError("kdd-psaks needs --d")
            eps = _eps(cfg)
            out = psaks_kdd(g, k, eps, d, cap=enum_cap, fallback=fallback)
            bound, connected, lift = 1 + eps, True, lift_solution
            # the core is reported even when the kernel took the exact fallback
            core = compute_core(g, k, d)
            report["core_bound"] = core_bound(k, d)
            report["core_within_bound"] = None if core is None else len(core) <= core_bound(k, d)
        elif pipeline == "cds-framework":
            eps = _eps(cfg)
            out = lossy_cds_kernel(g, k, eps, lambda h, kk: certified_core(h, kk, 1, n_cap), cap=enum_cap,
                                   fallback=fallback)
            bound, connected, lift = 1 + eps, True, lift_solution
        elif pipeline == "rds-nowhere-dense":
            alpha = cfg.get("alpha")
            if alpha is None:
                raise InputError("rds-nowhere-dense needs --alpha")
            params = RKernelParams.from_alpha(r, alpha)
            out = r_lossy_kernel(g, k, params, lambda h, kk, rr: certified_core(h, kk, rr, n_cap), fallback, enum_cap)
            bound, connected, lift = alpha, True, r_lift
        else:
            provider = lambda h, kk, rr: certified_core(h, kk, rr, n_cap)  # noqa: E731
            if r == 1:
                Z = provider(g, k, 1)
                out = ds_bikernel(g, Z, k) if Z is not None else _ds_negative()
                if Z is not None:
                    out.params["core_size"] = len(Z)
            else:
                out = one_approx_ds_bikernel(g, k, r, provider)
            bound, connected, lift = 1, False, lift_solution
        red_g = out.reduced.graph
        report["core_size"] = out.params.get("core_size")
        report["reduced"] = {"n": red_g.n, "m": red_g.m, "Z": len(out.reduced.Z)}
        report["classes"] = out.params.get("classes")
        report["trivial_negative"] = out.trivial_negative
        report["params"] = out.params
        report["output"] = out.to_json()
        if cfg.get("verify"):
            report["verify"] = _verify_kernel(g, k, r, out, bound, connected, n_cap, lift)
            if pipeline == "kdd-psaks" and report["core_within_bound"] is False:
                report["verify"]["ok"] = False
    if cfg.get("timing"):
        report["wall_time"] = round(time.perf_counter() - started, 6)
    if cfg.get("verify") and not report["verify"]["ok"]:
        raise VerificationError(json.dumps(report, sort_keys=True))
    return report


def _ds_negative():
    return trivial_negative({"pipeline": "ds-bikernel", "objective": "ds"})


def _eps(cfg) -> float:
    eps = cfg.get("eps")
    if eps is None or eps <= 0:
        raise InputError("--eps must be given and positive")
    return eps


def load_graph(cfg: dict, seed: int) -> Graph:
    if bool(cfg.get("gen")) == bool(cfg.get("input")):
        raise InputError("give exactly one of --gen and --in")
    if cfg.get("gen"):
        return generate(cfg["gen"], seed)
    return gmod.read_edge_list(cfg["input"])


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# sweeps

CSV_COLUMNS = ["config", "n", "m", "k", "core_size", "reduced_n", "reduced_m", "classes",
               "opt_original", "opt_reduced", "lifted_value", "ratio", "bound", "ok", "error"]


def parse_grid(items) -> dict:
    grid = {}
    for item in items or ():
        key, sep, vals = item.partition("=")
        if not sep:
            raise InputError(f"grid entry {item!r} must look like key=v1,v2")
        key = key.strip().replace("-", "_")
        grid[key] = [_coerce(v) for v in vals.split(",") if v.strip()]
    return grid


def _coerce(v: str):
    v = v.strip()
    for cast in (int, float):
        try:
            return cast(v)
        except ValueError:
            pass
    return v


def sweep(base: dict, grid: dict) -> list[dict]:
    """One row per point of the Cartesian product of the grid, sorted by config key."""
    if not grid or any(not vals for vals in grid.values()):
        return []
    keys = sorted(grid)
    rows = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        cfg = dict(base)
        cfg.update(zip(keys, combo))
        cfg["verify"] = True
        label = ";".join(f"{k}={v}" for k, v in zip(keys, combo))
        row = {c: "" for c in CSV_COLUMNS}
        row["config"] = label
        try:
            rep = run(cfg)
        except VerificationError as exc:
            rep = json.loads(str(exc))
            row["error"] = "verification failed"
        except (InputError, ResourceError) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
            rows.append(((combo, label), row))
            continue
        inp, red = rep.get("input", {}), rep.get("reduced", {})
        row.update(n=inp.get("n", ""), m=inp.get("m", ""), k=inp.get("k", ""),
                   core_size=rep.get("core_size", ""), reduced_n=red.get("n", ""),
                   reduced_m=red.get("m", ""), classes=rep.get("classes", ""))
        for key, val in rep.get("verify", {}).items():
            if key in row:
                row[key] = val
        rows.append(((combo, label), row))
    rows.sort(key=lambda x: x[0])
    return [r for _, r in rows]


def format_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


# argument handling

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kernel", description="Lossy kernels for connected (distance-r) domination.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--gen", help="generator, e.g. grid_apex:2,6 or random_degenerate:20,2")
        sp.add_argument("--in", dest="input", help="edge-list file (set cover file for reduce-setcover)")
        sp.add_argument("--k", type=int)
        sp.add_argument("--eps", type=float)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--r", type=int, default=1)
        sp.add_argument("--d", type=int)
        sp.add_argument("--seed", type=int, default=None, help="defaults to $KERNEL_SEED, then 0")
        sp.add_argument("--verify", action="store_true", help="check against exact oracles (exit 4 on failure)")
        sp.add_argument("--oracle-cap", type=int, default=N_CAP, help="max vertices for exhaustive oracles")
        sp.add_argument("--enum-cap", type=int, default=ENUM_CAP, help="max enumerated connected sets")
        sp.add_argument("--no-fallback", dest="fallback", action="store_false",
                        help="always build the kernel, even when a tiny optimum could be found exactly")
        sp.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical reports)")
        sp.add_argument("--out", help="output path (stdout if omitted)")

    for name in PIPELINES:
        common(sub.add_parser(name, help=f"run the {name} pipeline"))
    sw = sub.add_parser("sweep", help="Cartesian sweep, CSV output")
    common(sw)
    sw.add_argument("--pipeline", required=True, choices=PIPELINES)
    sw.add_argument("--grid", action="append", default=[], help="key=v1,v2,... (repeatable)")
    return p


def _config(ns) -> dict:
    seed = ns.seed
    if seed is None:
        env = os.environ.get("KERNEL_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise InputError(f"KERNEL_SEED must be an integer, got {env!r}") from None
    cfg = {k: v for k, v in vars(ns).items() if v is not None}
    cfg["seed"] = seed
    cfg["pipeline"] = ns.pipeline if ns.command == "sweep" else ns.command
    return cfg


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    ns = _parser().parse_args(argv)
    try:
        cfg = _config(ns)
        print(f"caps: oracle-n={cfg['oracle_cap']} enum={cfg['enum_cap']} seed={cfg['seed']}", file=sys.stderr)
        if ns.command == "sweep":
            _write(format_csv(sweep(cfg, parse_grid(ns.grid))), ns.out)
            return EXIT_OK
        report = run(cfg)
        if ns.command == "reduce-setcover" and ns.out:
            stem = ns.out[:-5] if ns.out.endswith(".json") else ns.out
            with open(stem + ".edges", "w") as fh:
                fh.write(report.pop("graph"))
            with open(stem + ".roles.json", "w") as fh:
                fh.write(json.dumps(report["roles"], sort_keys=True, indent=2) + "\n")
            report["graph_file"] = os.path.basename(stem + ".edges")
            report["roles_file"] = os.path.basename(stem + ".roles.json")
        _write(dumps(report), ns.out if ns.command != "reduce-setcover" or not ns.out else
               (ns.out if ns.out.endswith(".json") else ns.out + ".json"))
        return EXIT_OK
    except InputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except OSError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
