"""Command-line front end.

Every subcommand prints one report (JSON by default) and exits with

* 0 when every asserted identity holds exactly,
* 1 when some identity fails (the report says which),
* 2 on usage errors (unknown flags, malformed candidate JSON),
* 3 when the truncation is too small for the requested check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import checks
from . import conformal as cf
from .cache import CacheMismatch, OperatorCache, default_cache_dir
from .fock import Sector, Truncation
from .scalar import Scalar, format_scalar, half

OK, FAILED, USAGE, TRUNCATION = 0, 1, 2, 3
SINGLE_DEFAULT = Fraction(8)
TENSOR_DEFAULT = Fraction(6)


@dataclass
class Config:
    max_weight: Fraction | None = None
    cache_dir: Path | None = None
    output_format: str = "json"
    sample_count: int = 200
    seed: int = 0
    verify_cache: bool = False

    def truncation(self, tensor: bool = False) -> Truncation:
        default = TENSOR_DEFAULT if tensor else SINGLE_DEFAULT
        return Truncation(self.max_weight if self.max_weight is not None else default)

    def cache(self) -> OperatorCache:
        return OperatorCache(self.cache_dir or default_cache_dir(), verify=self.verify_cache)


# --- serialization ---------------------------------------------------------


def to_jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (Fraction, Scalar)):
        return format_scalar(obj)
    if isinstance(obj, Sector):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render(report: dict, fmt: str) -> str:
    data = to_jsonable(report)
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    # CSV: the row table if there is one, otherwise the scalar fields
    buf = io.StringIO()
    rows = data.get("rows")
    if isinstance(rows, list) and rows and isinstance(rows[0], dict):
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: " ".join(v) if isinstance(v, list) else v for k, v in r.items()})
    else:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for k, v in data.items():
            writer.writerow([k, v if not isinstance(v, (dict, list)) else json.dumps(v)])
    return buf.getvalue()


# --- argument parsing ----------------------------------------------------------


def _weight(text: str) -> Fraction:
    try:
        return half(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a half-integer weight: {text}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-weight", type=_weight, default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cache-dir", type=Path, default=None)
    common.add_argument("--verify-cache", action="store_true")

    p = argparse.ArgumentParser(prog="ising-svoa", description="Exact checks for the Ising SVOA.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dims", parents=[common], help="graded dimensions")
    d.add_argument("--sector", choices=("ns", "r"), default=None)
    d.add_argument("--space", choices=checks.SPACES, default=None)
    d.add_argument("--basis", action="store_true", help="include the monomial basis")

    v = sub.add_parser("virasoro-check", parents=[common], help="Virasoro brackets")
    v.add_argument("--sector", choices=("ns", "r", "both"), default="both")
    v.add_argument("--range", type=int, default=4, dest="mode_range")

    j = sub.add_parser("jacobi-check", parents=[common], help="randomized Jacobi identities")
    j.add_argument("--variant", choices=("ns", "twisted"), default="ns")
    j.add_argument("--samples", type=int, default=200)
    j.add_argument("--seed", type=int, default=0)

    sub.add_parser("zhu", parents=[common], help="untwisted Zhu algebra")
    sub.add_parser("zhu-twisted", parents=[common], help="twisted Zhu algebra")
    sub.add_parser("fusion", parents=[common], help="fusion dimensions")
    sub.add_parser("twisted-action", parents=[common], help="top-level actions on N")

    f = sub.add_parser("form-check", parents=[common], help="invariant bilinear form")
    f.add_argument("--samples", type=int, default=50)
    f.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("conformal", parents=[common], help="conformal vectors in tensor powers")
    c.add_argument("--test", choices=("axioms", "rational", "decompose", "commutant"), default="axioms")
    c.add_argument("--candidate", default=None, help="candidate JSON text or a path to a JSON file")
    c.add_argument("--factors", type=int, default=2, help="factors of the default candidate omega (x) 1")
    c.add_argument("--h", choices=("0", "1/2", "1/16"), action="append", default=None)
    return p


def _candidate(args) -> cf.Vector:
    if args.candidate is None:
        return checks.default_candidate(args.factors)
    text = args.candidate
    path = Path(text)
    if not text.lstrip().startswith("{") and path.exists():
        text = path.read_text()
    try:
        return cf.parse_candidate(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed candidate JSON: {exc}") from exc


def dispatch(args, cfg: Config) -> dict:
    cmd = args.command
    if cmd == "dims":
        if args.space and args.sector:
            raise ValueError("give --sector or --space, not both")
        space = args.space or {"ns": "M", "r": "N", None: "M"}[args.sector]
        return checks.dims_report(space, cfg.truncation(), args.basis)
    if cmd == "virasoro-check":
        sectors = [Sector.NS, Sector.R] if args.sector == "both" else [Sector.parse(args.sector)]
        return checks.virasoro_report(sectors, cfg.truncation(), args.mode_range, cfg.cache())
    if cmd == "jacobi-check":
        return checks.jacobi_report(args.variant, cfg.truncation(), cfg.sample_count, cfg.seed)
    if cmd == "zhu":
        return checks.zhu_report(cfg.truncation())
    if cmd == "zhu-twisted":
        return checks.zhu_twisted_report(cfg.truncation())
    if cmd == "fusion":
        return checks.fusion_report()
    if cmd == "twisted-action":
        return checks.twisted_action_report(cfg.truncation(), cfg.cache())
    if cmd == "form-check":
        return checks.form_report(cfg.truncation(), cfg.sample_count, cfg.seed)
    if cmd == "conformal":
        hs = tuple(args.h) if args.h else ("0", "1/2", "1/16")
        return checks.conformal_report(_candidate(args), args.test, cfg.truncation(tensor=True), hs)
    raise ValueError(f"unknown command {cmd}")  # pragma: no cover - argparse guards this


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    cfg = Config(
        max_weight=args.max_weight,
        cache_dir=args.cache_dir,
        output_format=args.format,
        sample_count=getattr(args, "samples", 200),
        seed=getattr(args, "seed", 0),
        verify_cache=args.verify_cache,
    )
    try:
        report = dispatch(args, cfg)
    except (checks.InsufficientTruncation, cf.TruncationError) as exc:
        stdout.write(render({"command": args.command, "ok": False, "error": "truncation", "detail": str(exc)}, cfg.output_format))
        return TRUNCATION
    except CacheMismatch as exc:
        stdout.write(render({"command": args.command, "ok": False, "error": "cache", "detail": str(exc)}, cfg.output_format))
        return FAILED
    except ValueError as exc:
        stdout.write(render({"command": args.command, "ok": False, "error": "usage", "detail": str(exc)}, cfg.output_format))
        return USAGE
    stdout.write(render(report, cfg.output_format))
    return OK if report["ok"] else FAILED


def main(argv=None) -> None:
    sys.exit(run(argv))
