"""Command-line front end: generate, solve, verify and sweep.

Exit codes are stable: 0 success, 2 malformed input or arguments,
3 instance exceeds an enumeration cap, 4 a computed gap violated a
bound it should satisfy (always a bug, never silently accepted).
Standard output carries only machine-readable payloads; everything
meant for humans goes to standard error.

Instance files are JSON with exact float round-tripping::

    {"num_relays": 2, "power": 1.0, "alpha": 1.0, "beta": 0.0,
     "links": [{"from": 0, "to": 1, "re": 1.0, "im": 0.0}, ...],
     "metadata": {...}}

Report files are CSV, one row per verified instance (or per sweep
point), floats at 12 significant digits.  Column order is fixed; see
REPORT_COLUMNS.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import replace

from .bounds import GapReport, TheoremViolationError, verify_instance
from .capacity import CapacityResult, capacity_ideal, capacity_imperfect, rate_tsn
from .enumeration import EnumerationCapError, build_state_space
from .instancegen import GenSpec, generate
from .model import NetworkInstance, validate_instance

__all__ = [
    "InstanceFormatError",
    "load_instance",
    "save_instance",
    "instance_to_json",
    "main",
    "entry",
    "REPORT_COLUMNS",
]


class InstanceFormatError(ValueError):
    """An instance file does not match the documented schema."""


REPORT_COLUMNS = [
    "row",
    "seed",
    "sweep_param",
    "sweep_value",
    "relays",
    "power",
    "alpha",
    "beta",
    "max_degree",
    "c_imperfect",
    "c_ideal",
    "r_tsn",
    "support_imperfect",
    "support_ideal",
    "support_tsn",
    "ideal_gap",
    "ideal_gap_bound",
    "dominance_penalty",
    "max_rho",
    "main_lobe_stronger",
    "diagonally_dominant",
    "ratio",
    "ratio_threshold",
    "ratio_applicable",
    "ratio_satisfied",
    "tsn_gap",
    "tsn_gap_bound",
    "wall_ms",
]


# -- instance (de)serialization -------------------------------------------


def instance_to_json(inst: NetworkInstance) -> str:
    links = [
        {
            "from": i,
            "to": j,
            "re": float(inst.channel[j, i].real),
            "im": float(inst.channel[j, i].imag),
        }
        for i, j in inst.links()
    ]
    doc = {
        "num_relays": inst.num_relays,
        "power": inst.power,
        "alpha": inst.alpha,
        "beta": inst.beta,
        "links": links,
        "metadata": inst.metadata,
    }
    return json.dumps(doc, indent=2)


def save_instance(inst: NetworkInstance, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(instance_to_json(inst))
        fh.write("\n")


def instance_from_doc(doc: dict) -> NetworkInstance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance file must hold a JSON object")
    for key in ("num_relays", "power", "alpha", "beta", "links"):
        if key not in doc:
            raise InstanceFormatError(f"missing required field {key!r}")
    n = doc["num_relays"]
    if not isinstance(n, int) or n < 0:
        raise InstanceFormatError(f"num_relays must be a nonnegative integer, got {n!r}")
    links: dict[tuple[int, int], complex] = {}
    for entry_ in doc["links"]:
        try:
            i, j = int(entry_["from"]), int(entry_["to"])
            gain = complex(float(entry_["re"]), float(entry_["im"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceFormatError(f"malformed link entry {entry_!r}") from exc
        if (i, j) in links:
            raise InstanceFormatError(f"duplicate link ({i}, {j})")
        if not (0 <= i <= n and 1 <= j <= n + 1 and i != j):
            raise InstanceFormatError(f"link ({i}, {j}) outside valid index ranges")
        links[(i, j)] = gain
    try:
        inst = NetworkInstance.from_links(
            n,
            links,
            doc["power"],
            doc["alpha"],
            doc["beta"],
            metadata=doc.get("metadata") or {},
        )
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(str(exc)) from exc
    report = validate_instance(inst)
    if not report.ok:
        raise InstanceFormatError("; ".join(report.violations))
    return inst


def load_instance(path: str) -> NetworkInstance:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path} is not valid JSON: {exc}") from exc
    return instance_from_doc(doc)


# -- report rows ----------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.12g}"
    if value is None:
        return ""
    return str(value)


def report_row(
    inst: NetworkInstance,
    report: GapReport,
    row: int,
    wall_ms: float,
    seed: int | None = None,
    sweep_param: str | None = None,
    sweep_value: float | None = None,
) -> dict[str, str]:
    rc = report.ratio_condition
    values = {
        "row": row,
        "seed": seed,
        "sweep_param": sweep_param,
        "sweep_value": sweep_value,
        "relays": report.num_relays,
        "power": inst.power,
        "alpha": inst.alpha,
        "beta": inst.beta,
        "max_degree": report.max_degree,
        "c_imperfect": report.c_imperfect,
        "c_ideal": report.c_ideal,
        "r_tsn": report.r_tsn,
        "support_imperfect": report.schedule_supports["imperfect"],
        "support_ideal": report.schedule_supports["ideal"],
        "support_tsn": report.schedule_supports["tsn"],
        "ideal_gap": report.ideal_gap,
        "ideal_gap_bound": report.ideal_gap_bound,
        "dominance_penalty": report.dominance_penalty,
        "max_rho": report.assumptions.max_rho,
        "main_lobe_stronger": report.assumptions.main_lobe_stronger,
        "diagonally_dominant": report.assumptions.diagonally_dominant,
        "ratio": rc.ratio,
        "ratio_threshold": rc.threshold,
        "ratio_applicable": rc.applicable,
        "ratio_satisfied": rc.satisfied,
        "tsn_gap": report.tsn_gap,
        "tsn_gap_bound": report.tsn_gap_bound,
        "wall_ms": wall_ms,
    }
    return {k: _fmt(values[k]) for k in REPORT_COLUMNS}


class _ReportWriter:
    def __init__(self, path: str | None):
        self._own = path is not None
        self._fh = open(path, "w", newline="") if path else sys.stdout
        self._writer = csv.DictWriter(self._fh, fieldnames=REPORT_COLUMNS)
        self._writer.writeheader()

    def write(self, row: dict[str, str]) -> None:
        self._writer.writerow(row)

    def close(self) -> None:
        if self._own:
            self._fh.close()


# -- commands -------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = GenSpec(
        topology=args.topology,
        relays=args.relays,
        channel=args.channel,
        power=args.power,
        alpha=args.alpha,
        beta=args.beta,
        seed=args.seed,
        edge_probability=args.edge_prob,
        scale=args.scale,
        spacing_m=args.spacing,
    )
    inst = generate(spec)
    if args.output:
        save_instance(inst, args.output)
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        print(instance_to_json(inst))
    return 0


def _schedule_payload(inst: NetworkInstance, result: CapacityResult) -> list[dict]:
    space = build_state_space(inst)
    payload = []
    for idx in sorted(result.schedule.weights):
        payload.append(
            {
                "pattern": [list(pair) for pair in space.patterns[idx].pairs],
                "weight": result.schedule.weights[idx],
            }
        )
    return payload


def cmd_capacity(args) -> int:
    inst = load_instance(args.instance)
    space = build_state_space(inst)
    models = ["imperfect", "ideal", "tsn"] if args.model == "all" else [args.model]
    results = []
    for model in models:
        if model == "imperfect":
            results.append(capacity_imperfect(inst, space))
        elif model == "ideal":
            results.append(capacity_ideal(inst, space=space))
        else:
            results.append(rate_tsn(inst, space))

    if args.format == "json":
        doc = {
            "instance": args.instance,
            "results": [
                {
                    "model": r.model_tag,
                    "value_bits": r.value,
                    "schedule": _schedule_payload(inst, r),
                }
                for r in results
            ],
        }
        out = json.dumps(doc, indent=2)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["model", "value_bits", "support_size", "schedule"])
        for r in results:
            packed = ";".join(
                "+".join(f"{i}-{j}" for i, j in entry_["pattern"]) + f"@{entry_['weight']:.12g}"
                for entry_ in _schedule_payload(inst, r)
            )
            writer.writerow([r.model_tag, f"{r.value:.12g}", r.schedule.support_size, packed])
        out = buf.getvalue().rstrip("\n")

    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        print(out)
    return 0


def cmd_verify(args) -> int:
    writer = _ReportWriter(args.output) if args.output else None
    passed = 0
    max_ideal_gap = -math.inf
    max_tsn_gap = -math.inf
    min_ideal_margin = math.inf
    min_tsn_margin = math.inf
    try:
        for k in range(args.trials):
            seed = args.seed + k
            spec = GenSpec(
                topology=args.topology,
                relays=args.relays,
                channel=args.channel,
                power=args.power,
                alpha=args.alpha,
                beta=args.beta,
                seed=seed,
                edge_probability=args.edge_prob,
                scale=args.scale,
                spacing_m=args.spacing,
            )
            inst = generate(spec)
            start = time.perf_counter()
            try:
                report = verify_instance(inst)
            except TheoremViolationError as exc:
                print(f"theorem violation at seed {seed}: {exc}", file=sys.stderr)
                return 4
            wall_ms = (time.perf_counter() - start) * 1e3
            if writer:
                writer.write(report_row(inst, report, row=k, wall_ms=wall_ms, seed=seed))
            max_tsn_gap = max(max_tsn_gap, report.tsn_gap)
            min_tsn_margin = min(min_tsn_margin, report.tsn_gap_bound - report.tsn_gap)
            if report.assumptions.both_hold and math.isfinite(report.ideal_gap_bound):
                passed += 1
                max_ideal_gap = max(max_ideal_gap, report.ideal_gap)
                min_ideal_margin = min(
                    min_ideal_margin, report.ideal_gap_bound - report.ideal_gap
                )
    finally:
        if writer:
            writer.close()
    print(
        f"trials={args.trials} assumptions_passed={passed} "
        f"max_ideal_gap={_fmt(max_ideal_gap if passed else math.nan)} "
        f"min_ideal_margin={_fmt(min_ideal_margin if passed else math.nan)} "
        f"max_tsn_gap={_fmt(max_tsn_gap if args.trials else math.nan)} "
        f"min_tsn_margin={_fmt(min_tsn_margin if args.trials else math.nan)}"
    )
    return 0


def cmd_sweep(args) -> int:
    inst = load_instance(args.instance)
    if args.steps < 2:
        raise InstanceFormatError("sweep needs at least 2 steps")
    if args.stop < args.start:
        raise InstanceFormatError("sweep range must have start <= stop")
    writer = _ReportWriter(args.output)
    try:
        for k in range(args.steps):
            value = args.start + (args.stop - args.start) * k / (args.steps - 1)
            swept = replace(inst, **{args.param: value})
            report_check = validate_instance(swept)
            if not report_check.ok:
                raise InstanceFormatError(
                    f"sweep value {value:.12g} invalid: {'; '.join(report_check.violations)}"
                )
            start = time.perf_counter()
            try:
                report = verify_instance(swept)
            except TheoremViolationError as exc:
                print(
                    f"theorem violation at {args.param}={value:.12g}: {exc}",
                    file=sys.stderr,
                )
                return 4
            wall_ms = (time.perf_counter() - start) * 1e3
            writer.write(
                report_row(
                    swept,
                    report,
                    row=k,
                    wall_ms=wall_ms,
                    sweep_param=args.param,
                    sweep_value=value,
                )
            )
    finally:
        writer.close()
    return 0


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otocap",
        description="Capacity and gap-bound toolkit for 1-2-1 relay networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_genspec_flags(p, for_verify=False):
        p.add_argument("--topology", choices=["line", "diamond", "full", "random"], default="line")
        p.add_argument("--relays", type=int, default=1)
        p.add_argument("--channel", choices=["unit", "rayleigh", "los"], default="unit")
        p.add_argument("--power", type=float, default=1.0)
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--beta", type=float, default=0.0)
        p.add_argument("--seed", type=int, default=0,
                       help="base seed; trial k uses seed+k" if for_verify else "generator seed")
        p.add_argument("--edge-prob", type=float, default=1.0,
                       help="link keep probability for random topology")
        p.add_argument("--scale", type=float, default=1.0, help="rayleigh E|h|^2")
        p.add_argument("--spacing", type=float, default=10.0, help="los hop spacing in metres")

    p_gen = sub.add_parser("gen", help="generate an instance file")
    add_genspec_flags(p_gen)
    p_gen.add_argument("-o", "--output", help="write JSON here instead of stdout")
    p_gen.set_defaults(func=cmd_gen)

    p_cap = sub.add_parser("capacity", help="solve capacities of an instance file")
    p_cap.add_argument("instance")
    p_cap.add_argument("--model", choices=["imperfect", "ideal", "tsn", "all"], default="all")
    p_cap.add_argument("--format", choices=["json", "csv"], default="json")
    p_cap.add_argument("-o", "--output")
    p_cap.set_defaults(func=cmd_capacity)

    p_ver = sub.add_parser("verify", help="verify gap bounds over generated trials")
    p_ver.add_argument("--trials", type=int, default=10)
    add_genspec_flags(p_ver, for_verify=True)
    p_ver.add_argument("-o", "--output", help="write per-trial CSV report here")
    p_ver.set_defaults(func=cmd_verify)

    p_swp = sub.add_parser("sweep", help="sweep one parameter of an instance file")
    p_swp.add_argument("instance")
    p_swp.add_argument("--param", choices=["alpha", "beta", "power"], required=True)
    p_swp.add_argument("--from", dest="start", type=float, required=True)
    p_swp.add_argument("--to", dest="stop", type=float, required=True)
    p_swp.add_argument("--steps", type=int, default=5)
    p_swp.add_argument("-o", "--output", help="write CSV report here instead of stdout")
    p_swp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except TheoremViolationError as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return 4
    except (InstanceFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main(sys.argv[1:]))
