"""Command line entry point.

Subcommands: moments, traces, expect, oracle, simulate, trend. Output goes
to stdout in json, csv, or table form; a one-line run manifest (resolved
config, version, seed, wall time, output digest) goes to stderr on success,
so any exact output can be reproduced from the manifest alone.

Exit codes: 0 success, 1 cross-path verification mismatch, 2 usage or
parse error, 3 resource guard exceeded.

Flags can be defaulted through environment variables with the GRAMEXPECT_
prefix: GRAMEXPECT_OUTPUT, GRAMEXPECT_DECIMALS, GRAMEXPECT_SEED,
GRAMEXPECT_THREADS, GRAMEXPECT_GUARD_OPS. An explicit flag always wins.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .matrices import ExactMatrix, matrix_from_json_str, matrix_to_json_str
from .models import (
    InvalidModelError,
    Model,
    model_from_json_str,
    model_to_dict,
    moment_matrix,
    paper_model,
)
from .montecarlo import SimulationConfig, SimulationReport, simulate, stddev_trend
from .oracles import (
    GuardExceeded,
    OP_BUDGET,
    brute_force_expectation,
    char_poly_coeffs_of_gram,
    det_bareiss,
    det_expansion,
    gram,
    perm_expansion,
    perm_ryser,
    permanental_poly_coeffs,
)
from .scalars import canonical_json, decimal_string, format_float, format_rational
from .sequences import (
    char_coeffs,
    det_sequence_from_char,
    egf_expand_det,
    egf_expand_perm,
    expected_det_recursion,
    expected_perm_from_char,
    expected_perm_recursion,
)
from .traces import traces_by_power, traces_from_char_coeffs

ENV_PREFIX = "GRAMEXPECT_"
OUTPUT_CHOICES = ("json", "csv", "table")


class UsageError(Exception):
    """Bad arguments or unreadable/malformed input files (exit 2)."""


class VerificationMismatch(Exception):
    """Two computation paths disagreed (exit 1)."""


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce a run, emitted to stderr as one line."""

    subcommand: str
    config: dict
    version: str
    seed: int | None
    wall_time_s: float
    output_sha256: str

    def to_json(self) -> str:
        return canonical_json(
            {
                "subcommand": self.subcommand,
                "config": self.config,
                "version": self.version,
                "seed": self.seed,
                "wall_time_s": self.wall_time_s,
                "output_sha256": self.output_sha256,
            }
        )


def _env(name: str) -> str | None:
    return os.environ.get(ENV_PREFIX + name)


def _resolve_int(flag_value: int | None, env_name: str, fallback: int, minimum: int, what: str) -> int:
    if flag_value is not None:
        value = flag_value
    else:
        raw = _env(env_name)
        if raw is None:
            value = fallback
        else:
            try:
                value = int(raw)
            except ValueError:
                raise UsageError(f"{ENV_PREFIX}{env_name} must be an integer, got {raw!r}")
    if value < minimum:
        raise UsageError(f"{what} must be >= {minimum}, got {value}")
    return value


def _resolve_common(args: argparse.Namespace, default_output: str) -> None:
    output = args.output or _env("OUTPUT") or default_output
    if output not in OUTPUT_CHOICES:
        raise UsageError(f"output must be one of {', '.join(OUTPUT_CHOICES)}, got {output!r}")
    args.output = output
    args.decimals = _resolve_int(args.decimals, "DECIMALS", 2, 0, "decimals")
    args.seed = _resolve_int(args.seed, "SEED", 0, 0, "seed")
    args.threads = _resolve_int(args.threads, "THREADS", 1, 1, "threads")
    args.guard_ops = _resolve_int(args.guard_ops, "GUARD_OPS", OP_BUDGET, 1, "guard-ops")


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def _load_model(args: argparse.Namespace) -> tuple[Model, dict | str]:
    if args.paper and args.model:
        raise UsageError("--paper and --model are mutually exclusive")
    if args.paper:
        return paper_model(), "builtin:paper"
    if args.model:
        model = model_from_json_str(_read_file(args.model))
        return model, model_to_dict(model)
    raise UsageError("a model is required: pass --model FILE or --paper")


def _load_matrix(args: argparse.Namespace) -> ExactMatrix:
    if not args.matrix:
        raise UsageError("this oracle requires --matrix FILE")
    text = _read_file(args.matrix)
    try:
        return matrix_from_json_str(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"matrix file is not valid JSON: {exc}")
    except ValueError as exc:
        raise UsageError(str(exc))


def _render_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- moments


def cmd_moments(args: argparse.Namespace) -> tuple[str, dict]:
    model, model_desc = _load_model(args)
    matrix = moment_matrix(model).as_exact_matrix()
    if args.output == "json":
        payload = matrix_to_json_str(matrix)
    elif args.output == "csv":
        payload = "".join(",".join(format_rational(v) for v in row) + "\n" for row in matrix.entries)
    else:
        rows = [[format_rational(v) for v in row] for row in matrix.entries]
        payload = _render_table([f"col{j}" for j in range(matrix.cols)], rows)
    return payload, {"model": model_desc, "output": args.output}


# ----------------------------------------------------------------- traces


def cmd_traces(args: argparse.Namespace) -> tuple[str, dict]:
    model, model_desc = _load_model(args)
    if args.terms < 1:
        raise UsageError("--terms must be >= 1")
    matrix = moment_matrix(model)
    traces = traces_by_power(matrix, args.terms)
    # Silent cross-check through Newton's identities; a disagreement here
    # means a real bug, and exit code 1 reports it as such.
    recovered = traces_from_char_coeffs(char_coeffs(matrix), args.terms)
    if traces.values != recovered.values:
        raise VerificationMismatch(
            "trace mismatch between the power route and Newton's identities"
        )
    strings = [format_rational(v) for v in traces.values]
    if args.output == "json":
        payload = canonical_json({"t": strings}) + "\n"
    elif args.output == "csv":
        payload = "n,trace\n" + "".join(f"{i},{s}\n" for i, s in enumerate(strings, start=1))
    else:
        payload = _render_table(["n", "trace"], [[str(i), s] for i, s in enumerate(strings, start=1)])
    return payload, {"model": model_desc, "terms": args.terms, "output": args.output}


# ----------------------------------------------------------------- expect


def _expect_sequences(model: Model, terms: int, kind: str, path: str) -> dict[str, tuple]:
    matrix = moment_matrix(model)
    traces = traces_by_power(matrix, terms)
    coeffs = char_coeffs(matrix)
    out: dict[str, tuple] = {}
    kinds = ("det", "perm") if kind == "both" else (kind,)
    for k in kinds:
        if k == "det":
            routes = {
                "recursion": lambda: expected_det_recursion(traces, terms),
                "char": lambda: det_sequence_from_char(coeffs, terms),
                "egf": lambda: egf_expand_det(traces, terms),
            }
        else:
            routes = {
                "recursion": lambda: expected_perm_recursion(traces, terms),
                "char": lambda: expected_perm_from_char(coeffs, terms),
                "egf": lambda: egf_expand_perm(traces, terms),
            }
        if path == "all":
            computed = {name: fn().values for name, fn in routes.items()}
            reference = computed["recursion"]
            for name, values in computed.items():
                if values != reference:
                    first_bad = next(
                        n for n, (a, b) in enumerate(zip(reference, values)) if a != b
                    )
                    raise VerificationMismatch(
                        f"{k} paths disagree: recursion vs {name} first differ at "
                        f"n = {first_bad} ({format_rational(reference[first_bad])} vs "
                        f"{format_rational(values[first_bad])})"
                    )
            out[k] = reference
        else:
            out[k] = routes[path]().values
    return out


def cmd_expect(args: argparse.Namespace) -> tuple[str, dict]:
    model, model_desc = _load_model(args)
    if args.terms < 0:
        raise UsageError("--terms must be >= 0")
    values = _expect_sequences(model, args.terms, args.kind, args.path)
    config = {
        "model": model_desc,
        "terms": args.terms,
        "kind": args.kind,
        "path": args.path,
        "decimals": args.decimals,
        "output": args.output,
    }
    if args.output == "json":
        body = {
            "kind": args.kind,
            "path": args.path,
            "terms": args.terms,
            "values": {
                k: [
                    {"n": n, "exact": format_rational(v), "decimal": decimal_string(v, args.decimals)}
                    for n, v in enumerate(seq)
                ]
                for k, seq in values.items()
            },
        }
        return canonical_json(body) + "\n", config
    if args.output == "csv":
        lines = ["kind,n,exact,decimal"]
        for k, seq in values.items():
            for n, v in enumerate(seq):
                lines.append(f"{k},{n},{format_rational(v)},{decimal_string(v, args.decimals)}")
        return "\n".join(lines) + "\n", config
    headers = ["n"]
    for k in values:
        headers += [k, f"{k} ~"]
    rows = []
    for n in range(args.terms + 1):
        row = [str(n)]
        for seq in values.values():
            row += [format_rational(seq[n]), decimal_string(seq[n], args.decimals)]
        rows.append(row)
    return _render_table(headers, rows), config


# ----------------------------------------------------------------- oracle

ORACLE_NAMES = (
    "det-expansion",
    "perm-expansion",
    "ryser",
    "bareiss",
    "charpoly",
    "permpoly",
    "gram",
    "brute-det",
    "brute-perm",
)


def _scalar_payload(args: argparse.Namespace, name: str, value: Fraction) -> str:
    if args.output == "json":
        return canonical_json({"oracle": name, "result": value}) + "\n"
    if args.output == "csv":
        return f"result\n{format_rational(value)}\n"
    return f"{format_rational(value)}\n"


def _coeff_payload(args: argparse.Namespace, name: str, coeffs: tuple[Fraction, ...]) -> str:
    if args.output == "json":
        return canonical_json({"oracle": name, "coeffs": list(coeffs)}) + "\n"
    if args.output == "csv":
        return "i,coeff\n" + "".join(f"{i},{format_rational(c)}\n" for i, c in enumerate(coeffs))
    return _render_table(["i", "coeff"], [[str(i), format_rational(c)] for i, c in enumerate(coeffs)])


def cmd_oracle(args: argparse.Namespace) -> tuple[str, dict]:
    name = args.oracle
    config: dict = {"oracle": name, "output": args.output}
    if name in ("brute-det", "brute-perm"):
        model, model_desc = _load_model(args)
        if not hasattr(model, "atoms"):
            raise UsageError("brute-force oracles need an atoms model")
        if args.n is None:
            raise UsageError("brute-force oracles need -n")
        kind = "det" if name == "brute-det" else "perm"
        value = brute_force_expectation(model, args.n, kind)
        config.update({"model": model_desc, "n": args.n})
        return _scalar_payload(args, name, value), config
    matrix = _load_matrix(args)
    config["matrix"] = {"rows": [[format_rational(v) for v in row] for row in matrix.entries]}
    if name == "gram":
        result = gram(matrix)
        if args.output == "json":
            return matrix_to_json_str(result), config
        if args.output == "csv":
            return (
                "".join(",".join(format_rational(v) for v in row) + "\n" for row in result.entries),
                config,
            )
        rows = [[format_rational(v) for v in row] for row in result.entries]
        return _render_table([f"col{j}" for j in range(result.cols)], rows), config
    if name == "charpoly":
        return _coeff_payload(args, name, char_poly_coeffs_of_gram(matrix)), config
    if name == "permpoly":
        max_index = args.max_index if args.max_index is not None else matrix.rows
        config["max_index"] = max_index
        coeffs = permanental_poly_coeffs(matrix, max_index, op_budget=args.guard_ops)
        return _coeff_payload(args, name, coeffs), config
    scalar = {
        "det-expansion": det_expansion,
        "perm-expansion": perm_expansion,
        "ryser": perm_ryser,
        "bareiss": det_bareiss,
    }[name]
    return _scalar_payload(args, name, scalar(matrix)), config


# --------------------------------------------------------------- simulate


def _report_json(report: SimulationReport) -> str:
    stats = {}
    for kind in ("det", "perm"):
        source = report.det_stats if kind == "det" else report.perm_stats
        if source is None:
            continue
        stats[kind] = [
            {
                "i": s.index,
                "normalized_mean": s.normalized_mean,
                "normalized_stddev": s.normalized_stddev,
                "exact": s.exact_value,
                "z_score": s.z_score,
            }
            for s in source
        ]
    body = {
        "n": report.n,
        "reps": report.reps,
        "seed": report.seed,
        "max_index": report.max_index,
        "kind": report.kind,
        "mode": report.mode,
        "stats": stats,
    }
    return canonical_json(body) + "\n"


def _report_csv(report: SimulationReport) -> str:
    """Per-replicate normalized coefficients for external boxplot tooling."""
    kinds = [k for k in ("det", "perm") if (report.det_replicates if k == "det" else report.perm_replicates) is not None]
    both = len(kinds) > 1
    lines = ["kind,replicate,i,value" if both else "replicate,i,value"]
    for kind in kinds:
        rows = report.replicates_for(kind)
        for r, row in enumerate(rows):
            for i, value in enumerate(row, start=1):
                cell = format_float(float(value))
                lines.append(f"{kind},{r},{i},{cell}" if both else f"{r},{i},{cell}")
    return "\n".join(lines) + "\n"


def _report_table(report: SimulationReport, decimals: int) -> str:
    headers = ["kind", "i", "mean", "stddev", "exact", "z"]
    rows = []
    for kind in ("det", "perm"):
        source = report.det_stats if kind == "det" else report.perm_stats
        if source is None:
            continue
        for s in source:
            rows.append(
                [
                    kind,
                    str(s.index),
                    format_float(s.normalized_mean),
                    "-" if s.normalized_stddev is None else format_float(s.normalized_stddev),
                    decimal_string(s.exact_value, decimals),
                    "-" if s.z_score is None else format_float(s.z_score),
                ]
            )
    return _render_table(headers, rows)


def cmd_simulate(args: argparse.Namespace) -> tuple[str, dict]:
    model, model_desc = _load_model(args)
    try:
        config = SimulationConfig(
            model=model,
            n=args.n,
            reps=args.reps,
            max_index=args.max_index,
            kind=args.kind,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    report = simulate(config, threads=args.threads, op_budget=args.guard_ops)
    manifest_config = {
        "model": model_desc,
        "n": args.n,
        "reps": args.reps,
        "max_index": args.max_index,
        "kind": args.kind,
        "threads": args.threads,
        "guard_ops": args.guard_ops,
        "output": args.output,
    }
    if args.output == "json":
        return _report_json(report), manifest_config
    if args.output == "csv":
        return _report_csv(report), manifest_config
    return _report_table(report, args.decimals), manifest_config


# ------------------------------------------------------------------ trend


def cmd_trend(args: argparse.Namespace) -> tuple[str, dict]:
    model, model_desc = _load_model(args)
    try:
        n_list = [int(part) for part in args.n_list.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"--n-list must be comma-separated integers, got {args.n_list!r}")
    try:
        points = stddev_trend(
            model,
            n_list,
            args.reps,
            args.index,
            args.kind,
            args.seed,
            threads=args.threads,
            op_budget=args.guard_ops,
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    config = {
        "model": model_desc,
        "n_list": n_list,
        "reps": args.reps,
        "index": args.index,
        "kind": args.kind,
        "threads": args.threads,
        "guard_ops": args.guard_ops,
        "output": args.output,
    }
    if args.output == "json":
        body = {
            "kind": args.kind,
            "i": args.index,
            "reps": args.reps,
            "seed": args.seed,
            "points": [{"n": n, "stddev": s} for n, s in points],
        }
        return canonical_json(body) + "\n", config
    if args.output == "csv":
        return "n,stddev\n" + "".join(f"{n},{format_float(s)}\n" for n, s in points), config
    return _render_table(["n", "stddev"], [[str(n), format_float(s)] for n, s in points]), config


# ------------------------------------------------------------------- main


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--model", metavar="FILE", help="model JSON file")
    sub.add_argument("--paper", action="store_true", help="use the built-in worked-example model")
    sub.add_argument("--output", choices=OUTPUT_CHOICES, default=None)
    sub.add_argument("--decimals", type=int, default=None, metavar="K")
    sub.add_argument("--seed", type=int, default=None, metavar="S")
    sub.add_argument("--threads", type=int, default=None, metavar="W")
    sub.add_argument("--guard-ops", type=int, default=None, metavar="B", dest="guard_ops")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gramexpect",
        description="Exact expected determinants and permanents of random Gram matrices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sub = subs.add_parser("moments", help="print the second-moment matrix M")
    _add_common_flags(sub)
    sub.set_defaults(handler=cmd_moments, default_output="table")

    sub = subs.add_parser("traces", help="print traces of powers of M")
    _add_common_flags(sub)
    sub.add_argument("-N", "--terms", type=int, default=7, metavar="N")
    sub.set_defaults(handler=cmd_traces, default_output="json")

    sub = subs.add_parser("expect", help="expected determinants and permanents")
    _add_common_flags(sub)
    sub.add_argument("-N", "--terms", type=int, default=6, metavar="N")
    sub.add_argument("--kind", choices=("det", "perm", "both"), default="both")
    sub.add_argument("--path", choices=("recursion", "char", "egf", "all"), default="all")
    sub.set_defaults(handler=cmd_expect, default_output="table")

    sub = subs.add_parser("oracle", help="run a brute-force reference computation")
    _add_common_flags(sub)
    sub.add_argument("oracle", choices=ORACLE_NAMES)
    sub.add_argument("--matrix", metavar="FILE", help="matrix JSON file")
    sub.add_argument("-n", type=int, default=None, help="columns for brute-force oracles")
    sub.add_argument("--max-index", type=int, default=None, dest="max_index")
    sub.set_defaults(handler=cmd_oracle, default_output="table")

    sub = subs.add_parser("simulate", help="sample Gram matrices and report coefficient statistics")
    _add_common_flags(sub)
    sub.add_argument("-n", "--columns", type=int, required=True, dest="n")
    sub.add_argument("--reps", type=int, default=100)
    sub.add_argument("--max-index", type=int, default=4, dest="max_index")
    sub.add_argument("--kind", choices=("det", "perm", "both"), default="det")
    sub.set_defaults(handler=cmd_simulate, default_output="json")

    sub = subs.add_parser("trend", help="normalized stddev of one coefficient across n")
    _add_common_flags(sub)
    sub.add_argument("--n-list", default="50,100,200,400", dest="n_list")
    sub.add_argument("--reps", type=int, default=200)
    sub.add_argument("--index", type=int, default=2)
    sub.add_argument("--kind", choices=("det", "perm"), default="det")
    sub.set_defaults(handler=cmd_trend, default_output="json")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        _resolve_common(args, args.default_output)
        payload, config = args.handler(args)
    except UsageError as exc:
        print(f"gramexpect: {exc}", file=sys.stderr)
        return 2
    except InvalidModelError as exc:
        print(f"gramexpect: invalid model: {exc}", file=sys.stderr)
        return 2
    except GuardExceeded as exc:
        print(f"gramexpect: {exc}", file=sys.stderr)
        return 3
    except VerificationMismatch as exc:
        print(f"gramexpect: verification mismatch: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"gramexpect: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(payload)
    manifest = RunManifest(
        subcommand=args.subcommand,
        config=config,
        version=__version__,
        seed=args.seed if args.subcommand in ("simulate", "trend") else None,
        wall_time_s=round(time.perf_counter() - start, 6),
        output_sha256=hashlib.sha256(payload.encode("utf-8")).hexdigest(),
    )
    print(manifest.to_json(), file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
