"""Command-line front end.

Verbs: validate (input checking only), construct (identity checks),
decompose (block structure and d), graph (coset graph construction),
quotient (full pipeline including cover quotients), suite (named job
collections with regression baselines).

Exit codes: 0 every requested check passed; 1 a check failed; 2 the job was
rejected during validation; 3 a capacity cap blocked a requested stage.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from ._version import __version__
from .catalog import resolve_group
from .cosetgraph import VERTEX_CAP_DEFAULT
from .errors import CapacityExceeded, ValidationError
from .groups import ENUM_CAP_DEFAULT
from .perm import parse_cycles
from .report import (
    SUITE_NAMES,
    Certificate,
    JobSpec,
    run_job,
    run_suite,
)
from .wreath import CoverJob

_PHASE_OF_VERB = {
    "construct": "construct",
    "decompose": "decompose",
    "graph": "graph",
    "quotient": "full",
}

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_REJECTED = 2
EXIT_CAPACITY = 3


def _add_job_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, help="arity of the complete graph K_n")
    sub.add_argument("--group", help="name of T in the catalog")
    sub.add_argument("--x", help="involution of T, in cycle notation")
    sub.add_argument("--y", help="odd-prime-order element of T, in cycle notation")
    sub.add_argument("--job", help="JSON job file instead of the four flags above")
    sub.add_argument("--vertex-cap", type=int, default=None,
                     help=f"largest graph to build (default {VERTEX_CAP_DEFAULT})")
    sub.add_argument("--enum-cap", type=int, default=None,
                     help=f"largest enumeration allowed (default {ENUM_CAP_DEFAULT})")
    sub.add_argument("--seed", type=int, default=None,
                     help="seed for sampled spot checks (default 0)")
    sub.add_argument("--catalog", default=None, help="extra group catalog JSON file")
    sub.add_argument("--out", default=None, help="directory for certificate and exports")
    sub.add_argument("--format", action="append", default=None,
                     choices=["edge-list", "adjacency-text"],
                     help="graph export format (repeatable)")


def _spec_from_args(args: argparse.Namespace) -> JobSpec:
    flag_values = {
        "vertex_cap": args.vertex_cap,
        "enum_cap": args.enum_cap,
        "seed": args.seed,
        "catalog": args.catalog,
        "out_dir": args.out,
        "formats": tuple(args.format) if args.format else None,
    }
    if args.job:
        if any(v is not None for v in (args.n, args.group, args.x, args.y)):
            raise ValidationError("pass either --job or the --n/--group/--x/--y flags")
        spec = JobSpec.from_file(args.job)
        overrides = {k: v for k, v in flag_values.items() if v is not None}
        return replace(spec, **overrides) if overrides else spec
    missing = [
        name
        for name, v in (("--n", args.n), ("--group", args.group),
                        ("--x", args.x), ("--y", args.y))
        if v is None
    ]
    if missing:
        raise ValidationError(f"missing required flags: {', '.join(missing)}")
    defaults = {
        "vertex_cap": VERTEX_CAP_DEFAULT,
        "enum_cap": ENUM_CAP_DEFAULT,
        "seed": 0,
        "catalog": None,
        "out_dir": None,
        "formats": (),
    }
    filled = {k: (v if v is not None else defaults[k]) for k, v in flag_values.items()}
    return JobSpec(n=args.n, group=args.group, x=args.x, y=args.y, **filled)


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _run_validate(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    group = resolve_group(spec.group, spec.catalog)
    x = parse_cycles(spec.x, group.degree)
    y = parse_cycles(spec.y, group.degree)
    job = CoverJob(n=spec.n, group=group, x=x, y=y, group_name=spec.group)
    problems = job.problems()
    if problems:
        _emit({"valid": False, "job": spec.echo(), "problems": problems})
        return EXIT_REJECTED
    _emit(
        {
            "valid": True,
            "job": spec.echo(),
            "group_order": group.order(),
            "x_order": x.order(),
            "y_order": y.order(),
        }
    )
    return EXIT_OK


def _run_pipeline(args: argparse.Namespace, verb: str) -> int:
    spec = _spec_from_args(args)
    cert = run_job(spec, phase=_PHASE_OF_VERB[verb])
    if spec.out_dir:
        out = Path(spec.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        cert.write(out / f"{spec.job_name()}.json")
    sys.stdout.write(cert.to_bytes().decode())
    sys.stderr.write(cert.summary_line() + "\n")
    if not cert.ok:
        return EXIT_CHECK_FAILED
    if cert.capacity_blocked():
        return EXIT_CAPACITY
    return EXIT_OK


def _run_suite_verb(args: argparse.Namespace) -> int:
    result = run_suite(
        args.name,
        out_dir=args.out,
        catalog=args.catalog,
        seed=args.seed if args.seed is not None else 0,
        parallel=args.parallel,
        baselines_path=args.baselines,
    )
    sys.stdout.write(result.summary_table())
    return EXIT_OK if result.ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arccover",
        description="2-arc-transitive covers of complete graphs: construction, "
        "decomposition, and certificates",
    )
    parser.add_argument("--version", action="version", version=f"arccover {__version__}")
    verbs = parser.add_subparsers(dest="verb", required=True)

    for verb, blurb in (
        ("validate", "check the job inputs and report the validated facts"),
        ("construct", "verify the defining identities of the construction"),
        ("decompose", "compute the block structure and d"),
        ("graph", "additionally build the coset graph (capped)"),
        ("quotient", "full pipeline including quotients down to K_n"),
    ):
        sub = verbs.add_parser(verb, help=blurb)
        _add_job_arguments(sub)

    suite = verbs.add_parser("suite", help="run a named job collection")
    suite.add_argument("name", choices=SUITE_NAMES)
    suite.add_argument("--out", default=None, help="directory for certificates")
    suite.add_argument("--catalog", default=None, help="extra group catalog JSON file")
    suite.add_argument("--seed", type=int, default=None)
    suite.add_argument("--parallel", action="store_true", help="run jobs in processes")
    suite.add_argument("--baselines", default=None,
                       help="regression baselines JSON (frozen on first run)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verb == "validate":
            return _run_validate(args)
        if args.verb == "suite":
            return _run_suite_verb(args)
        return _run_pipeline(args, args.verb)
    except ValidationError as exc:
        _emit({"rejected": True, "reason": str(exc)})
        return EXIT_REJECTED
    except CapacityExceeded as exc:
        _emit({"capacity_exceeded": True, "reason": str(exc)})
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
