"""Command line interface.

    torusk compute --preset sp4-case1
    torusk compute --scenario my-component.json --report json
    torusk presets
    torusk crossed [NAME]

``compute`` runs the full pipeline on a built-in preset or a scenario
file and prints the K-theory report as an aligned table or as JSON;
both renderings are deterministic so they can be diffed or golden-file
tested.  Errors exit with the code carried by the raised error class.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .errors import TorusKError
from .ktheory import KReport
from .presets import crossed_diagnostic, list_presets, preset
from .scenario import load_scenario, make_options, run_scenario


def _group_str(g) -> str:
    return str(g)


def _group_json(g):
    if g is None:
        return None
    return {"rank": g.rank, "torsion": list(g.torsion)}


def render_table(report: KReport) -> str:
    rows = [
        ("scenario", report.scenario),
        ("dimension", str(report.dim)),
    ]
    for name in sorted(report.bredon):
        groups = ", ".join(_group_str(g) for g in report.bredon[name])
        rows.append((f"H* ({name})", groups))
    if report.verdict is not None:
        rows.append(("cross-check", str(report.verdict)))
    e2 = ", ".join(
        f"E2[{p},{q}] = {_group_str(g)}" for (p, q), g in sorted(report.e2.items())
    )
    rows.append(("E2 page", e2 if e2 else "trivial"))
    if report.exact:
        rows.append(("K0", _group_str(report.k0)))
        rows.append(("K1", _group_str(report.k1)))
    else:
        rows.append(("K0 rank", str(report.rank0)))
        rows.append(("K1 rank", str(report.rank1)))
        rows.append(("caveat", report.caveat))
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label:<{width}}  {value}" for label, value in rows) + "\n"


def render_json(report: KReport) -> str:
    payload = {
        "scenario": report.scenario,
        "dimension": report.dim,
        "bredon": {
            name: [_group_json(g) for g in groups]
            for name, groups in report.bredon.items()
        },
        "e2": {f"{p},{q}": _group_json(g) for (p, q), g in report.e2.items()},
        "k0": _group_json(report.k0),
        "k1": _group_json(report.k1),
        "rank0": report.rank0,
        "rank1": report.rank1,
        "exact": report.exact,
        "caveat": report.caveat,
        "cross_check": None
        if report.verdict is None
        else {
            "ok": report.verdict.ok,
            "degree": report.verdict.degree,
            "left": _group_json(report.verdict.left),
            "right": _group_json(report.verdict.right),
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_crossed(diag) -> str:
    rows = [
        ("diagnostic", diag.name),
        ("group order", str(diag.group_order)),
        ("points", str(diag.points)),
        ("dimension", str(diag.dimension)),
        ("orbit sizes", ", ".join(str(n) for n in diag.orbits)),
        ("block dims", ", ".join(str(d) for d in diag.block_dims)),
    ]
    if diag.summand_rank is not None:
        rows.append(("summand rank", str(diag.summand_rank)))
        rows.append(("summand dim", str(diag.summand_dimension)))
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label:<{width}}  {value}" for label, value in rows) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusk",
        description="Equivariant K-theory of sliced torus quotients.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("compute", help="run the pipeline and print a K-theory report")
    src = comp.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", metavar="FILE", help="scenario JSON file")
    src.add_argument("--preset", metavar="NAME", help="built-in scenario name")
    comp.add_argument(
        "--systems",
        choices=["both", "blowup", "x-side"],
        help="which coefficient systems to compute (default: scenario setting, usually both)",
    )
    comp.add_argument(
        "--check-invariants",
        choices=["fast", "full"],
        dest="check",
        help="full re-validates every module invariant on this scenario",
    )
    comp.add_argument(
        "--max-group-order",
        type=int,
        metavar="N",
        help="abort if the generated group exceeds N elements (default 64)",
    )
    comp.add_argument(
        "--report",
        choices=["table", "json"],
        default="table",
        help="output format",
    )

    sub.add_parser("presets", help="list the built-in presets")

    crossed = sub.add_parser("crossed", help="run crossed-product diagnostics")
    crossed.add_argument("name", nargs="?", help="diagnostic name (default: all)")
    return parser


def _cmd_compute(args) -> int:
    sc = preset(args.preset) if args.preset else load_scenario(args.scenario)
    opts = sc.options
    opts = make_options(
        args.systems or opts.systems,
        args.check or opts.check,
        args.max_group_order or opts.max_group_order,
    )
    report = run_scenario(replace(sc, options=opts))
    render = render_json if args.report == "json" else render_table
    sys.stdout.write(render(report))
    return 0


def _cmd_presets() -> int:
    catalog = list_presets()
    width = max(len(p.name) for p in catalog)
    for p in catalog:
        sys.stdout.write(f"{p.name:<{width}}  {p.kind:<8}  {p.description}\n")
    return 0


def _cmd_crossed(args) -> int:
    names = [args.name] if args.name else [p.name for p in list_presets() if p.kind == "crossed"]
    out = [render_crossed(crossed_diagnostic(n)) for n in names]
    sys.stdout.write("\n".join(out))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "compute":
            return _cmd_compute(args)
        if args.command == "presets":
            return _cmd_presets()
        return _cmd_crossed(args)
    except TorusKError as e:
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
