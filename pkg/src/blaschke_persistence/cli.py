"""Command-line front end: barcode, distance, scan, verify, critical, eval.

Reads product specs as JSON ({"phase": [re, im], "zeros": [[re, im, mult],
...]}), prints a JSON report to stdout and optionally writes it (plus SVG
figures) under --out.  Exit codes: 0 ok, 1 property violation, 2 input
error, 3 numerical failure.  Identical spec + flags + seed produce
byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .barcode import from_product
from .blaschke import BlaschkeProduct, evaluate, sup_norm_diff
from .critical import critical_points
from .distance import bottleneck_matching, degree2_distance
from .errors import DomainError, NonConvergenceError, PreconditionError, SingularityError
from .hyperbolic import rho
from .levelset import (
    build_grid,
    clamp_births,
    component_diameter,
    euler_characteristic,
    sublevel_components,
    sweep,
    write_grid,
)
from . import verify as verify_mod

DEFAULT_THRESHOLDS = (0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9)


@dataclass
class RunConfig:
    """Defaults for every tunable; each field maps to one CLI flag."""

    grid_n: int = 1024
    samples: int = 16384
    tol: float = 1e-10
    seed: int = 0
    out_dir: Path | None = None
    svg: bool = False
    thresholds: tuple = DEFAULT_THRESHOLDS


def _dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def load_product(path: str) -> BlaschkeProduct:
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read product spec {path!r}: {exc}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON in {path!r}: {exc}") from None
    return BlaschkeProduct.from_dict(data)


def _death_json(death: float):
    return "inf" if math.isinf(death) else death


def cmd_barcode(spec_path: str, config: RunConfig) -> dict:
    B = load_product(spec_path)
    bc = from_product(B, config.tol)
    return {
        "schema_version": 1,
        "command": "barcode",
        "degree": B.degree,
        "bars": [
            {"birth": b.birth, "death": _death_json(b.death), "mult": b.multiplicity}
            for b in bc.bars
        ],
        "deaths_theta": [
            math.tanh(0.5 * b.death) if b.finite else None for b in bc.bars
        ],
    }


def cmd_distance(spec_a: str, spec_b: str, config: RunConfig) -> dict:
    B1 = load_product(spec_a)
    B2 = load_product(spec_b)
    bc1 = from_product(B1, config.tol)
    bc2 = from_product(B2, config.tol)
    value, witness = bottleneck_matching(bc1, bc2)
    sup_diff = sup_norm_diff(B1, B2, config.samples)
    witness_json = None
    if witness is not None:
        witness_json = {
            "delta": witness.delta,
            "pairs": [list(p) for p in witness.pairs],
            "deleted1": list(witness.deleted1),
            "deleted2": list(witness.deleted2),
        }
    closed = None
    if B1.degree == 2 and B2.degree == 2:
        pts1 = B1.zero_points()
        pts2 = B2.zero_points()
        formula = degree2_distance(rho(pts1[0], pts1[1]), rho(pts2[0], pts2[1]))
        closed = {"value": formula, "abs_difference": abs(formula - value)}
    return {
        "schema_version": 1,
        "command": "distance",
        "value": "inf" if math.isinf(value) else value,
        "sup_norm_diff": sup_diff,
        "witness": witness_json,
        "closed_formula": closed,
    }


def cmd_scan(spec_path: str, config: RunConfig) -> dict:
    B = load_product(spec_path)
    grid = build_grid(B, config.grid_n)
    bc, events = sweep(grid)
    rows = []
    for theta in config.thresholds:
        snap = sublevel_components(grid, theta)
        delta = component_diameter(snap, grid) if snap.component_count else 0.0
        chi = euler_characteristic(grid, theta)
        rows.append(
            {
                "theta": theta,
                "t": 2.0 * math.atanh(theta),
                "component_count": snap.component_count,
                "delta_estimate": delta,
                "euler_characteristic": chi,
                "chi_equals_components": chi == snap.component_count,
                "zero_assignment": [snap.zero_assignment[k] for k in sorted(snap.zero_assignment)],
            }
        )
    clamped = clamp_births(bc, config.grid_n)
    return {
        "schema_version": 1,
        "command": "scan",
        "resolution": config.grid_n,
        "thresholds": rows,
        "merge_events": [
            {"theta": e.theta_merge, "t": 2.0 * math.atanh(e.theta_merge),
             "components_absorbed": e.components_absorbed}
            for e in events
        ],
        "grid_bars": [
            {"birth": b.birth, "death": _death_json(b.death), "mult": b.multiplicity}
            for b in clamped.bars
        ],
    }, grid


def cmd_critical(spec_path: str, config: RunConfig) -> dict:
    B = load_product(spec_path)
    cps = critical_points(B, config.tol)
    return {
        "schema_version": 1,
        "command": "critical",
        "degree": B.degree,
        "order_sum": sum(cp.order for cp in cps),
        "critical_points": [
            {
                "location": [cp.location.real, cp.location.imag],
                "order": cp.order,
                "critical_value": cp.critical_value,
                "death_time": cp.death_time,
                "at_zero": cp.at_zero,
            }
            for cp in cps
        ],
    }


def cmd_eval(spec_path: str, at: list[str], config: RunConfig) -> dict:
    B = load_product(spec_path)
    points = []
    for text in at:
        parts = text.split(",")
        if len(parts) != 2:
            raise DomainError(f"--at expects 're,im', got {text!r}")
        try:
            z = complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise DomainError(f"--at expects numbers, got {text!r}") from None
        value = evaluate(B, z)
        points.append(
            {"z": [z.real, z.imag], "value": [value.real, value.imag], "modulus": abs(value)}
        )
    return {"schema_version": 1, "command": "eval", "points": points}


def cmd_verify(config: RunConfig, suites: list[str] | None) -> dict:
    report = verify_mod.run_suites(suites, seed=config.seed)
    return {"schema_version": 1, "command": "verify", **report}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=1024, metavar="N",
                        help="grid resolution for level-set commands (default 1024)")
    common.add_argument("--samples", type=int, default=16384, metavar="M",
                        help="boundary samples for sup-norm estimates (default 16384)")
    common.add_argument("--tol", type=float, default=1e-10, metavar="T",
                        help="root-finding tolerance (default 1e-10)")
    common.add_argument("--seed", type=int, default=0, metavar="S",
                        help="seed for randomized suites (default 0)")
    common.add_argument("--out", type=Path, default=None, metavar="DIR",
                        help="directory for JSON/SVG outputs")
    common.add_argument("--svg", action="store_true", help="also render SVG figures")

    parser = argparse.ArgumentParser(
        prog="blaschke-persistence",
        description="Barcodes, distances and level-set diagnostics of finite Blaschke products",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("barcode", parents=[common], help="barcode of a product")
    p.add_argument("spec", help="product spec JSON file")

    p = sub.add_parser("distance", parents=[common], help="distance between two products")
    p.add_argument("spec_a")
    p.add_argument("spec_b")

    p = sub.add_parser("scan", parents=[common], help="level-set scan of a product")
    p.add_argument("spec")
    p.add_argument("--thresholds", default=",".join(str(t) for t in DEFAULT_THRESHOLDS),
                   help="comma-separated thresholds in (0,1)")
    p.add_argument("--dump-grid", type=Path, default=None, metavar="FILE",
                   help="write the binary grid dump to FILE")

    p = sub.add_parser("verify", parents=[common], help="run the property suites")
    p.add_argument("--suite", action="append", default=None,
                   help="run only the named suite (repeatable)")

    p = sub.add_parser("critical", parents=[common], help="critical points of a product")
    p.add_argument("spec")

    p = sub.add_parser("eval", parents=[common], help="evaluate a product at points")
    p.add_argument("spec")
    p.add_argument("--at", action="append", required=True, metavar="RE,IM",
                   help="evaluation point (repeatable)")

    return parser


def _config_from(args) -> RunConfig:
    thresholds = DEFAULT_THRESHOLDS
    if getattr(args, "thresholds", None):
        try:
            thresholds = tuple(float(x) for x in str(args.thresholds).split(",") if x)
        except ValueError:
            raise DomainError(f"--thresholds expects numbers, got {args.thresholds!r}") from None
        if any(not 0.0 < t < 1.0 for t in thresholds):
            raise DomainError("--thresholds entries must lie in (0, 1)")
    return RunConfig(
        grid_n=args.grid, samples=args.samples, tol=args.tol, seed=args.seed,
        out_dir=args.out, svg=args.svg, thresholds=thresholds,
    )


def _emit(payload: dict, config: RunConfig, stem: str) -> None:
    sys.stdout.write(_dumps(payload))
    if config.out_dir is not None:
        config.out_dir.mkdir(parents=True, exist_ok=True)
        name = f"{stem}.{payload['command']}.json"
        (config.out_dir / name).write_text(_dumps(payload))


def _svg_dir(config: RunConfig) -> Path:
    out = config.out_dir if config.out_dir is not None else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from(args)
        if args.command == "barcode":
            payload = cmd_barcode(args.spec, config)
            stem = Path(args.spec).stem
            _emit(payload, config, stem)
            if config.svg:
                from .figures import save_barcode_figure

                bc = from_product(load_product(args.spec), config.tol)
                save_barcode_figure(bc, _svg_dir(config) / f"{stem}.barcode.svg", title=stem)
        elif args.command == "distance":
            payload = cmd_distance(args.spec_a, args.spec_b, config)
            _emit(payload, config, f"{Path(args.spec_a).stem}__{Path(args.spec_b).stem}")
        elif args.command == "scan":
            payload, grid = cmd_scan(args.spec, config)
            stem = Path(args.spec).stem
            _emit(payload, config, stem)
            if args.dump_grid is not None:
                write_grid(grid, args.dump_grid)
            if config.svg:
                from .figures import save_scan_figure, save_scan_series_figure

                out = _svg_dir(config)
                save_scan_figure(grid, config.thresholds, out / f"{stem}.scan.svg", title=stem)
                save_scan_series_figure(payload["thresholds"],
                                        out / f"{stem}.scan_series.svg", title=stem)
        elif args.command == "critical":
            payload = cmd_critical(args.spec, config)
            _emit(payload, config, Path(args.spec).stem)
        elif args.command == "eval":
            payload = cmd_eval(args.spec, args.at, config)
            _emit(payload, config, Path(args.spec).stem)
        elif args.command == "verify":
            payload = cmd_verify(config, args.suite)
            _emit(payload, config, "report")
            if not payload["all_passed"]:
                return 1
        else:  # pragma: no cover - argparse enforces the choices
            raise DomainError(f"unknown command {args.command!r}")
    except (DomainError, PreconditionError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except (NonConvergenceError, SingularityError, FloatingPointError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3
    return 0


def console() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console()
