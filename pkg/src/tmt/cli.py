"""Command-line interface: catalog, verify, expand, sd, export-dot.

Every run writes a manifest JSON (resolved configuration plus the toolkit
version) into the output directory.  Exit codes: 0 pass, 1 counterexample or
non-convergence, 2 usage error.  The TMT_THREADS environment variable caps
worker-pool parallelism in campaigns and scans.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bubbles import (
    NecklaceTreeSpec,
    bubble_from_spec_string,
    build_necklace,
    canonical_form,
    melon,
)
from .criticality import (
    critical_point,
    find_transition,
    gamma_of_potential,
    transition_scan,
)
from .feynman import (
    ModelSpec,
    expectation_series,
    free_energy_series,
    model_from_json,
    _PRESETS,
)
from .ifmaps import StrandedMap, classify_lo, omega
from .laurent import monomial_name
from .mapgen import enumerate_maps
from .sd import (
    NonConvergenceError,
    Potential,
    solve_formal,
    solve_numeric,
    transition_potential,
)
from .verify import (
    bounds_campaign,
    classifier_campaign,
    deletion_campaign,
    oracle_campaign,
    qmap_campaign,
    representation_campaign,
)


@dataclasses.dataclass
class RunConfig:
    command: str
    model: str | None = None
    max_edges: int = 3
    max_order: int = 4
    p_max: int = 20
    tolerance: float = 1e-12
    seed: int = 20240
    out_dir: str = "."
    out: str | None = None
    fmt: str = "json"
    extra: dict = dataclasses.field(default_factory=dict)

    def validate(self):
        if self.max_edges < 0 or self.max_order < 0 or self.p_max <= 0:
            raise ValueError("budgets must be positive")
        if not os.access(self.out_dir, os.W_OK):
            raise ValueError(f"output directory {self.out_dir!r} is not writable")


def _write_manifest(cfg: RunConfig) -> None:
    path = Path(cfg.out_dir) / "tmt-manifest.json"
    data = dataclasses.asdict(cfg)
    data["version"] = __version__
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, default=str)


def _emit(cfg: RunConfig, payload, csv_rows=None, csv_header=None) -> None:
    if cfg.out:
        path = Path(cfg.out_dir) / cfg.out
        if cfg.fmt == "csv":
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh)
                if csv_header:
                    w.writerow(csv_header)
                for row in csv_rows or []:
                    w.writerow(row)
        else:
            with open(path, "w") as fh:
                json.dump(payload, fh, indent=2, default=str)
        print(f"wrote {path}")
    else:
        if cfg.fmt == "csv" and csv_rows is not None:
            w = csv.writer(sys.stdout)
            if csv_header:
                w.writerow(csv_header)
            for row in csv_rows:
                w.writerow(row)
        else:
            json.dump(payload, sys.stdout, indent=2, default=str)
            print()


def _load_model(text: str | None) -> ModelSpec:
    if text is None:
        return _PRESETS["restricted"]()
    if text in _PRESETS:
        return _PRESETS[text]()
    with open(text) as fh:
        return model_from_json(json.load(fh))


def cmd_catalog(args) -> int:
    cfg = RunConfig(
        command="catalog", out_dir=args.out_dir, out=args.out, fmt=args.format
    )
    cfg.validate()
    _write_manifest(cfg)
    entries = []
    if args.melons:
        for i in (1, 2, 3, 4):
            b = melon(i)
            entries.append(
                {"name": f"melon{i}", "omega": 3, "bubble": b.to_json(),
                 "canonical": str(canonical_form(b))}
            )
    for spec in args.necklace or []:
        pair, _, size = spec.partition(":")
        size = int(size) if size else 2
        b = build_necklace(int(pair), size)
        tree = NecklaceTreeSpec.from_sizes([size])
        entries.append(
            {"name": f"necklace{pair}:{size}", "omega": tree.omega,
             "bubble": b.to_json(), "canonical": str(canonical_form(b))}
        )
    for spec in args.tree or []:
        sizes = [int(s) for s in spec.split(",")]
        tree = NecklaceTreeSpec.from_sizes(sizes)
        from .bubbles import realize_tree_of_necklaces

        b = realize_tree_of_necklaces(tree)
        entries.append(
            {"name": f"tree:{spec}", "omega": tree.omega, "bubble": b.to_json(),
             "canonical": str(canonical_form(b))}
        )
    if not entries:
        print("nothing requested: use --melons, --necklace or --tree", file=sys.stderr)
        return 2
    rows = [(e["name"], e["omega"]) for e in entries]
    _emit(cfg, entries, rows, ("name", "omega"))
    return 0


def cmd_verify(args) -> int:
    cfg = RunConfig(
        command="verify",
        model=args.model,
        max_edges=args.edges,
        seed=args.seed,
        out_dir=args.out_dir,
        out=args.out,
        fmt=args.format,
        extra={"cilia": args.cilia, "oracle": args.oracle, "max_vertices": args.max_vertices},
    )
    cfg.validate()
    _write_manifest(cfg)
    results = []
    if args.oracle:
        results.append(oracle_campaign(max_vertices=args.max_vertices))
    else:
        results.append(bounds_campaign(args.model, args.edges, cilia=args.cilia))
        if args.cilia == 0:
            results.append(deletion_campaign(args.model, args.edges))
            results.append(classifier_campaign(args.model, args.edges))
            results.append(representation_campaign(min(args.edges, 3)))
            results.append(qmap_campaign(args.qmap_graphs, seed=args.seed))
    all_pass = all(r.passed for r in results)
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: {r.cases} cases. {r.details}")
        if not r.passed:
            print(json.dumps(r.counterexample, indent=2, default=str))
    if cfg.out and not args.oracle:
        rows = []
        for m in enumerate_maps(args.model, args.edges, cilia=args.cilia):
            om = omega(m)
            verdict = classify_lo(m, args.model).verdict
            rows.append((m.num_edges, ";".join(m.edge_labels), om, verdict))
        path = Path(cfg.out_dir) / cfg.out
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("edges", "labels", "omega", "lo"))
            w.writerows(rows)
        print(f"wrote {path}")
    return 0 if all_pass else 1


def cmd_expand(args) -> int:
    cfg = RunConfig(
        command="expand",
        model=args.model,
        max_order=args.order,
        out_dir=args.out_dir,
        out=args.out,
        fmt=args.format,
        extra={"observable": args.observable, "free_energy": args.free_energy},
    )
    cfg.validate()
    _write_manifest(cfg)
    model = _load_model(args.model)
    if args.free_energy:
        series = free_energy_series(model, args.order)
    else:
        obs = bubble_from_spec_string(args.observable)
        series = expectation_series(model, obs, args.order)
    _emit(cfg, series.to_json(), series.to_csv_rows(), ("monomial", "n_power", "coefficient"))
    return 0


def cmd_sd(args) -> int:
    cfg = RunConfig(
        command="sd",
        max_order=args.order,
        p_max=args.pmax,
        tolerance=args.tol,
        out_dir=args.out_dir,
        out=args.out,
        fmt=args.format,
        extra={"potential": args.potential, "scan": args.scan},
    )
    cfg.validate()
    _write_manifest(cfg)
    if args.scan:
        with open(args.scan) as fh:
            sc = json.load(fh)
        lo, hi = float(sc["ratio_min"]), float(sc["ratio_max"])
        points = int(sc.get("points", 7))
        order = int(sc.get("order", 220))
        ratios = [lo + (hi - lo) * i / (points - 1) for i in range(points)]
        grid = transition_scan(transition_potential, ratios, order=order)
        rows = [
            (p.ratio, p.fit.gamma, p.fit.mu, p.fit.theta, p.fit.residual) for p in grid
        ]
        payload = {"grid": [dict(zip(("ratio", "gamma", "mu", "theta", "residual"), r)) for r in rows]}
        if sc.get("bisect", True):
            try:
                r_star, fit = find_transition(transition_potential, lo, hi, order=order)
                payload["transition"] = {
                    "ratio": r_star,
                    "gamma": fit.gamma,
                    "mu": fit.mu,
                    "residual": fit.residual,
                }
            except ValueError as exc:
                payload["transition"] = {"error": str(exc)}
        _emit(cfg, payload, rows, ("ratio", "gamma", "mu", "theta", "residual"))
        return 0

    if not args.potential:
        print("need --potential (or --scan)", file=sys.stderr)
        return 2
    with open(args.potential) as fh:
        V = Potential.from_json(json.load(fh))
    try:
        if args.numeric:
            series = solve_numeric(V, args.pmax, tolerance=args.tol)
        else:
            if V.numeric() and V.monomials:
                print("formal mode needs coupling symbols in the potential", file=sys.stderr)
                return 2
            series = solve_formal(V, args.order, p_max=args.pmax)
        rows = series.to_csv_rows()
        payload = series.to_json()
        reports = {}
        if args.gc:
            est = critical_point(V, order=args.series_order)
            reports["gc"] = {
                "radius": est.radius,
                "uncertainty": est.uncertainty,
                "growth": est.growth,
                "oscillating": est.oscillating,
            }
        if args.gamma:
            fit = gamma_of_potential(V, order=args.series_order)
            reports["gamma"] = {
                "gamma": fit.gamma,
                "mu": fit.mu,
                "residual": fit.residual,
            }
        if reports:
            payload["reports"] = reports
        _emit(cfg, payload, rows, ("p", "monomial", "coefficient") if not args.numeric else ("p", "C_p"))
        return 0
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc} (residual={exc.residual})", file=sys.stderr)
        return 1


def cmd_export_dot(args) -> int:
    cfg = RunConfig(command="export-dot", out_dir=args.out_dir, out=args.out)
    cfg.validate()
    _write_manifest(cfg)
    if args.bubble:
        dot = bubble_from_spec_string(args.bubble).to_dot()
    elif args.map:
        with open(args.map) as fh:
            dot = StrandedMap.from_json(json.load(fh)).to_dot()
    else:
        print("need --bubble or --map", file=sys.stderr)
        return 2
    if args.out:
        path = Path(cfg.out_dir) / args.out
        path.write_text(dot)
        print(f"wrote {path}")
    else:
        print(dot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tmt", description="enhanced rank-4 tensor model toolkit"
    )
    ap.add_argument("--out-dir", default=".", help="directory for outputs and the run manifest")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list preset bubbles with enhancements")
    p.add_argument("--melons", action="store_true")
    p.add_argument("--necklace", action="append", metavar="PAIR:SIZE")
    p.add_argument("--tree", action="append", metavar="P1,P2,...")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", help="run invariant campaigns")
    p.add_argument("--model", choices=("restricted", "full"), default="restricted")
    p.add_argument("--edges", type=int, default=3)
    p.add_argument("--cilia", type=int, choices=(0, 1), default=0)
    p.add_argument("--oracle", action="store_true", help="wick vs direct moment oracle")
    p.add_argument("--max-vertices", type=int, default=6)
    p.add_argument("--qmap-graphs", type=int, default=50)
    p.add_argument("--seed", type=int, default=20240)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expand", help="perturbative expectation / free-energy series")
    p.add_argument("--model", help="preset name or model JSON path")
    p.add_argument("--observable", default="dipole", help="bubble spec, e.g. necklace12:2")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--free-energy", action="store_true")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("sd", help="solve the disk recursion")
    p.add_argument("--potential", help="potential JSON path")
    p.add_argument("--formal", action="store_true")
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--pmax", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--gc", action="store_true", help="critical coupling report")
    p.add_argument("--gamma", action="store_true", help="entropy exponent report")
    p.add_argument("--series-order", type=int, default=220)
    p.add_argument("--scan", help="transition scan config JSON")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sd)

    p = sub.add_parser("export-dot", help="DOT export of bubbles and maps")
    p.add_argument("--bubble", help="bubble spec string")
    p.add_argument("--map", help="stranded map JSON path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
