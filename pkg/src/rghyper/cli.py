"""Command-line interface: ``rghyper {generate,critical,sweep,theory,validate}``.

Exit codes: 0 success, 2 invalid input, 3 graph never connects, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import secrets
import sys
from pathlib import Path

from rghyper import __version__, _backend
from rghyper.experiments import (EXACT, SweepConfig, aggregates_csv, default_n_values,
                                 nondecreasing_within_ci, result_json, run_sweep,
                                 theorem_validation, trials_csv, validation_csv)
from rghyper.formats import edges_csv, points_csv, read_points_file
from rghyper.geometry import FIXED, MODES, Box, trial_samples
from rghyper.hypergraph import build_bipartite, is_connected, to_hypergraph
from rghyper.plotting import sweep_svg
from rghyper.theory import TheoryParams, radius_strong, radius_weak
from rghyper.threshold import ALGORITHMS, critical_radius_bisection, critical_radius_exact

EXIT_OK, EXIT_INVALID, EXIT_NEVER, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("rghyper")


class InvalidInput(Exception):
    pass


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = secrets.randbits(63)
        print(f"seed: {seed}", file=sys.stderr)
    return seed


def _fraction(text: str) -> float:
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError("split must lie strictly between 0 and 1")
    return v


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")


def _write_files(out_dir: Path, files: dict[str, str]):
    """Write all files or none: partial output is removed on failure."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    try:
        for name, text in files.items():
            tmp = out_dir / (name + ".tmp")
            tmp.write_text(text)
            written.append(tmp)
        for tmp in written:
            os.replace(tmp, tmp.with_suffix(""))
    except BaseException:
        for tmp in written:
            for p in (tmp, tmp.with_suffix("")):
                p.unlink(missing_ok=True)
        raise


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- subcommands ------------------------------------------------------------

def cmd_generate(args) -> int:
    if not args.radius > 0:
        raise InvalidInput("radius must be positive")
    if args.n < 0:
        raise InvalidInput("n must be non-negative")
    seed = _resolve_seed(args.seed)
    domain = Box.unit(args.d)
    _, nodes, centers = trial_samples(domain, args.n, args.split, args.mode, seed, 0)
    g = build_bipartite(nodes, centers, args.radius)
    h = to_hypergraph(g)
    config = {"command": "generate", "d": args.d, "n": args.n, "split": args.split,
              "mode": args.mode, "radius": args.radius, "seed": seed, "format": args.format}
    files = {"nodes.csv": points_csv(nodes), "centers.csv": points_csv(centers),
             "edges.csv": edges_csv(g), "config.json": _dump(config)}
    if args.format in ("text", "both"):
        files["hypergraph.txt"] = h.to_text()
    if args.format in ("json", "both"):
        files["hypergraph.json"] = h.to_json() + "\n"
    _write_files(Path(args.out), files)
    print(_dump({**config, "n1": len(nodes), "n2": len(centers), "edges": g.n_edges,
                 "connected": is_connected(g, args.ignore_empty_centers), "out": str(args.out)}), end="")
    return EXIT_OK


def cmd_critical(args) -> int:
    if not args.tol > 0:
        raise InvalidInput("tol must be positive")
    config = {"command": "critical", "method": args.method, "tol": args.tol,
              "algorithm": args.algorithm}
    if args.points_file:
        nodes, centers = read_points_file(args.points_file)
        config["points_file"] = str(args.points_file)
    else:
        seed = _resolve_seed(args.seed)
        _, nodes, centers = trial_samples(Box.unit(args.d), args.n, args.split, args.mode, seed, 0)
        config.update(d=args.d, n=args.n, split=args.split, mode=args.mode, seed=seed)
    try:
        if args.method == "exact":
            res = critical_radius_exact(nodes, centers, args.algorithm)
        else:
            res = critical_radius_bisection(nodes, centers, tol=args.tol)
    except ValueError as exc:
        raise InvalidInput(str(exc))
    print(_dump({"config": config, "n1": len(nodes), "n2": len(centers), **res.to_dict()}), end="")
    if res.never_connects:
        print("never connects: a bipartite graph needs both nodes and centres", file=sys.stderr)
        return EXIT_NEVER
    return EXIT_OK


_SWEEP_FLAGS = {"d": "d", "n_values": "n_values", "trials": "trials", "mode": "mode",
                "seed": "master_seed", "method": "method", "tol": "bisection_tol",
                "algorithm": "algorithm"}


def _sweep_config(args) -> SweepConfig:
    data = _load_config(args.config)
    for flag, key in _SWEEP_FLAGS.items():
        v = getattr(args, flag)
        if v is not None:
            data[key] = v
    if args.split is not None:
        data["split"] = [args.split, 1.0 - args.split]
    if data.get("method") == "exact":
        data["method"] = EXACT
    data["master_seed"] = _resolve_seed(data.get("master_seed"))
    try:
        return SweepConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(str(exc))


def cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    result = run_sweep(cfg, threads=args.threads)
    files = {"trials.csv": trials_csv(result, timing=args.timing),
             "aggregates.csv": aggregates_csv(result),
             "result.json": result_json(result)}
    if any(s.mean is not None for s in result.levels):
        files["plot.svg"] = sweep_svg(result)
    _write_files(Path(args.out), files)
    fit = result.slope_fit
    summary = {"out": str(args.out), "d": cfg.d, "master_seed": cfg.master_seed,
               "slope": None if fit is None else fit.slope,
               "reference_slope": -1.0 / cfg.d,
               "never_connects": sum(s.never_connects for s in result.levels)}
    print(_dump(summary), end="")
    return EXIT_OK


_THEORY_FLAGS = {"d": "d", "split": "node_fraction", "C": "C", "f_min": "f_min",
                 "epsilon": "epsilon", "w": "w"}


def _load_config(path) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise InvalidInput("config file must hold a JSON object")
    return data


def _theory_params(args) -> TheoryParams:
    data = {k: v for k, v in _load_config(args.config).items() if k not in ("K", "gamma")}
    for flag, key in _THEORY_FLAGS.items():
        v = getattr(args, flag)
        if v is not None:
            data[key] = v
    data.setdefault("d", 2)
    w = data.get("w", "loglog")
    try:
        data["w"] = float(w)
    except (TypeError, ValueError):
        pass
    unknown = set(data) - set(_THEORY_FLAGS.values())
    if unknown:
        raise InvalidInput(f"unknown config keys: {sorted(unknown)}")
    try:
        return TheoryParams(**data)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(str(exc))


def cmd_theory(args) -> int:
    p = _theory_params(args)
    if args.n < 3:
        raise InvalidInput("n must be at least 3")
    print(_dump({"n": args.n, **p.to_dict(),
                 "radius_weak": radius_weak(args.n, p),
                 "radius_strong": radius_strong(args.n, p)}), end="")
    return EXIT_OK


def cmd_validate(args) -> int:
    p = _theory_params(args)
    seed = _resolve_seed(args.seed)
    try:
        rows = theorem_validation(args.n_values, p.d, args.trials, seed, p,
                                  bound=args.bound, threads=args.threads)
    except ValueError as exc:
        raise InvalidInput(str(exc))
    print(f"seed={seed} d={p.d} bound={args.bound} trials={args.trials}")
    print(f"{'n':>8} {'r':>10} {'coverage':>9} {'conn@2r':>9} {'95% CI':>17} {'violations':>10}")
    for row in rows:
        lo, hi = row.connected_interval()
        print(f"{row.n:>8} {row.r:>10.5f} {row.coverage_fraction:>9.3f} "
              f"{row.connected_fraction:>9.3f} [{lo:.3f}, {hi:.3f}] {row.violations:>10}")
    print(f"trend non-decreasing within 95% CI: {nondecreasing_within_ci(rows)}")
    if args.out:
        out = Path(args.out)
        config = {"command": "validate", "n_values": args.n_values, "trials": args.trials,
                  "seed": seed, "bound": args.bound, "params": p.to_dict()}
        _write_files(out.parent, {out.name: validation_csv(rows),
                                  out.stem + ".config.json": _dump(config)})
    if any(r.violations for r in rows):
        print("coverage held without connectivity at 2r", file=sys.stderr)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _add_common_sampling(p, n_default):
    p.add_argument("--d", type=int, default=2, help="dimension (default: 2)")
    p.add_argument("--n", type=int, default=n_default, help=f"total points n (default: {n_default})")
    p.add_argument("--split", type=_fraction, default=0.8,
                   help="node fraction; centres get the rest (default: 0.8)")
    p.add_argument("--mode", choices=MODES, default=FIXED, help="sampling mode (default: fixed)")
    p.add_argument("--seed", type=int, default=None,
                   help="master seed (default: random, printed and recorded)")


def _add_theory_flags(p):
    # defaults are applied after merging the optional config file
    p.add_argument("--config", default=None,
                   help="JSON file of TheoryParams fields; flags override it (default: none)")
    p.add_argument("--d", type=int, default=None, help="dimension (default: 2)")
    p.add_argument("--split", type=_fraction, default=None, help="node fraction (default: 0.8)")
    p.add_argument("--C", type=float, default=None, help="diameter constant (default: 3*sqrt(d))")
    p.add_argument("--f-min", type=float, default=None, help="density lower bound (default: 1.0)")
    p.add_argument("--epsilon", type=float, default=None, help="strong-bound epsilon (default: 1.0)")
    p.add_argument("--w", default=None,
                   help="w(n): loglog, sqrtlog, const:<v> or a number (default: loglog)")


def build_parser() -> argparse.ArgumentParser:
    defaults = SweepConfig(master_seed=0)
    parser = argparse.ArgumentParser(prog="rghyper", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--backend", choices=("auto", "cython", "python"), default="auto",
                        help="kernel backend (default: auto)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a bipartite geometric graph and its hypergraph")
    _add_common_sampling(p, 100)
    p.add_argument("--radius", type=float, required=True, help="connection radius (> 0)")
    p.add_argument("--out", default=".", help="output directory (default: .)")
    p.add_argument("--format", choices=("text", "json", "both"), default="both",
                   help="hypergraph file format (default: both)")
    p.add_argument("--ignore-empty-centers", action="store_true",
                   help="report connectivity without degree-0 centres (default: off)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("critical", help="critical connectivity radius of one instance")
    _add_common_sampling(p, 1000)
    p.add_argument("--method", choices=("exact", "bisection"), default="exact",
                   help="exact bottleneck or bisection (default: exact)")
    p.add_argument("--tol", type=float, default=1e-9, help="bisection tolerance (default: 1e-09)")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="auto",
                   help="exact-method algorithm (default: auto)")
    p.add_argument("--points-file", default=None,
                   help='JSON {"nodes": [[..]], "centers": [[..]]} overriding sampling (default: none)')
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("sweep", help="Monte Carlo sweep of the critical radius over n")
    p.add_argument("--config", default=None, help="JSON file of SweepConfig fields; flags override it (default: none)")
    p.add_argument("--d", type=int, default=None, help=f"dimension (default: {defaults.d})")
    p.add_argument("--n-values", type=_int_list, default=None,
                   help="comma-separated n values (default: "
                        f"{','.join(map(str, default_n_values()))})")
    p.add_argument("--trials", type=int, default=None, help=f"trials per n (default: {defaults.trials})")
    p.add_argument("--split", type=_fraction, default=None, help="node fraction (default: 0.8)")
    p.add_argument("--mode", choices=MODES, default=None, help=f"sampling mode (default: {defaults.mode})")
    p.add_argument("--seed", type=int, default=None,
                   help="master seed (default: random, printed and recorded)")
    p.add_argument("--method", choices=("exact", "bisection"), default=None,
                   help="critical radius method (default: exact)")
    p.add_argument("--tol", type=float, default=None,
                   help=f"bisection tolerance (default: {defaults.bisection_tol:g})")
    p.add_argument("--algorithm", choices=ALGORITHMS, default=None,
                   help=f"exact-method algorithm (default: {defaults.algorithm})")
    p.add_argument("--threads", type=int, default=1, help="worker threads, 0 = all cores (default: 1)")
    p.add_argument("--out", default="sweep-out", help="output directory (default: sweep-out)")
    p.add_argument("--timing", action="store_true",
                   help="fill wall_time_ms in trials.csv (output then differs run to run)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("theory", help="radius bounds for given n as JSON")
    p.add_argument("--n", type=int, required=True, help="total expected points n (>= 3)")
    _add_theory_flags(p)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("validate", help="check coverage => connectivity at 2r over n")
    p.add_argument("--n-values", type=_int_list, default=[1000, 3000, 10000],
                   help="comma-separated n values (default: 1000,3000,10000)")
    p.add_argument("--trials", type=int, default=100, help="trials per n (default: 100)")
    p.add_argument("--seed", type=int, default=None,
                   help="master seed (default: random, printed and recorded)")
    p.add_argument("--bound", choices=("strong", "weak"), default="strong",
                   help="radius bound used for r (default: strong)")
    p.add_argument("--threads", type=int, default=1, help="worker threads, 0 = all cores (default: 1)")
    p.add_argument("--out", default=None, help="CSV output path (default: none)")
    _add_theory_flags(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.backend != "auto":
        try:
            _backend.use(args.backend)
        except ImportError:
            print("compiled backend not available", file=sys.stderr)
            return EXIT_INVALID
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
