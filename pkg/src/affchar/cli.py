"""Batch command-line interface: ``affchar <command> [options]``.

Standard output carries only the artifact; progress goes to standard error.
Exit codes: 0 success, 1 verification failure, 2 invalid job, 3 violated
mathematical precondition.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .cache import SCHEMA_VERSION, CharacterCache, default_cache_dir, dumps
from .cartan import RootSystem, build_root_system, finite_irrep_char
from .charring import GradedCharacter, irreducible_multiplicities, serialize
from .demazure import projective_gch, thick_weyl_gch, thin_gch, weyl_gch
from .expand import Expansion, NonSimplyLacedKostka, branching_weyl, expand_symmetric, expand_thin, kostka
from .afweight import orbit_equiv

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_MATH = 0, 1, 2, 3
CHAR_FAMILIES = ("thin", "weyl", "thick", "irrep", "projective")
BASES = ("V", "W", "D", "thick")
SUITE_NAMES = ("sl2-paper", "corollary-num", "positivity", "support", "reciprocity",
               "oracle", "demext", "kostka", "properties", "all")


class JobError(Exception):
    """An invalid job specification (exit status 2)."""


@dataclass
class JobSpec:
    command: str
    type_label: str = "A"
    rank: int = 1
    levels: list[int] = field(default_factory=list)
    weights: list[tuple[int, ...]] = field(default_factory=list)
    qmax: Optional[int] = None
    output_format: str = "json"
    cache_dir: Optional[Path] = None
    seed: int = 0

    def validate(self) -> None:
        if self.rank < 1:
            raise JobError("rank must be >= 1")
        try:
            build_root_system(self.type_label, self.rank)
        except ValueError as exc:
            raise JobError(str(exc)) from None
        for w in self.weights:
            if len(w) != self.rank:
                raise JobError(f"weight {list(w)} has length {len(w)}, expected rank {self.rank}")
        if self.qmax is not None and self.qmax < 0:
            raise JobError("qmax must be >= 0")
        if any(level < 1 for level in self.levels):
            raise JobError("levels must be >= 1")


def parse_weight(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weight must be comma-separated integers, got {text!r}") from None


def parse_factor(text: str) -> tuple[int, tuple[int, ...]]:
    level, sep, weight = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"factor must look like LEVEL:W1,W2,..., got {text!r}")
    try:
        return int(level), parse_weight(weight)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad factor level in {text!r}") from None


def progress(message: str) -> None:
    print(message, file=sys.stderr, flush=True)


# rendering ----------------------------------------------------------------------

def _fmt_weight(w) -> str:
    return "(" + ",".join(str(x) for x in w) + ")"


def _latex_q(e: int) -> str:
    return "" if e == 0 else ("q" if e == 1 else f"q^{{{e}}}")


def _latex_coeff(c: int, e: int) -> str:
    q = _latex_q(e)
    if c == 1:
        return q
    if c == -1:
        return "-" + q
    return f"{c}{q}"


def _scaled(c: int, e: int, body: str) -> str:
    coeff = _latex_coeff(c, e)
    if coeff in ("", "-"):
        return coeff + body
    return f"{coeff}\\,{body}"


def _latex_poly(p: dict[int, int]) -> str:
    parts = []
    for e, c in sorted(p.items()):
        term = _latex_coeff(c, e) or "1"
        if term == "-":
            term = "-1"
        parts.append(term)
    return " + ".join(parts).replace("+ -", "- ")


def _latex_sum(terms: list[str]) -> str:
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def render_character(f: GradedCharacter, header: dict, fmt: str, rs: RootSystem, symmetric: bool) -> str:
    if fmt == "json":
        return dumps(serialize(f, header))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"w{i + 1}" for i in range(f.rank)] + ["q", "coeff"])
        for (w, e), c in f.terms.items():
            writer.writerow([*w, e, c])
        return buf.getvalue()
    if symmetric and (len(f) == 0 or f.min_exp() >= 0):
        vm = irreducible_multiplicities(rs, f)
        terms = [_scaled(c, e, f"\\mathrm{{ch}}\\,V_{{{_fmt_weight(nu)}}}")
                 for (nu, e), c in sorted(vm.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
    else:
        terms = [_scaled(c, e, f"e^{{{_fmt_weight(w)}}}") for (w, e), c in f.terms.items()]
    return _latex_sum(terms) + "\n"


def _family_symbol(basis: dict) -> str:
    family, level = basis["family"], basis["level"]
    if family == "V":
        return "\\mathrm{ch}\\,V"
    symbol = {"W": "W", "D": "D", "thick": "\\mathbb{W}"}[family]
    return f"\\mathrm{{gch}}\\,{symbol}^{{({level})}}"


def render_coefficients(data: dict, fmt: str) -> str:
    """Render ``{"basis": ..., "coeffs": [{"weight", "poly"}]}``."""
    if fmt == "json":
        return dumps(data)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["weight", "q", "coeff"])
        for entry in data["coeffs"]:
            for e, c in entry["poly"]:
                writer.writerow([",".join(str(x) for x in entry["weight"]), e, c])
        return buf.getvalue()
    symbol = _family_symbol(data["basis"])
    terms = []
    for entry in data["coeffs"]:
        poly = dict(entry["poly"])
        body = f"{symbol}_{{{_fmt_weight(entry['weight'])}}}"
        if poly == {0: 1}:
            terms.append(body)
        elif len(poly) == 1:
            (e, c), = poly.items()
            terms.append(_scaled(c, e, body))
        else:
            terms.append(f"({_latex_poly(poly)})\\,{body}")
    return _latex_sum(terms) + "\n"


# commands -----------------------------------------------------------------------

def _header(job: JobSpec, **extra) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": job.command, "type": job.type_label,
            "rank": job.rank, **extra}


def compute_character(rs: RootSystem, family: str, weight, level: Optional[int],
                      qmax: Optional[int]) -> GradedCharacter:
    if family == "irrep":
        return finite_irrep_char(rs, weight)
    if family == "projective":
        if qmax is None:
            raise JobError("the projective family needs --qmax")
        return projective_gch(rs, weight, qmax)
    if level is None:
        raise JobError(f"the {family} family needs --level")
    if family == "thin":
        return thin_gch(rs, weight, level)
    if family == "weyl":
        return weyl_gch(rs, weight, level)
    if qmax is None:
        raise JobError("the thick family needs --qmax")
    return thick_weyl_gch(rs, weight, level, qmax)


def _character(job: JobSpec, rs: RootSystem, family: str, weight, level) -> GradedCharacter:
    trunc = job.qmax if family in ("thick", "projective") else None
    if job.cache_dir is None:
        return compute_character(rs, family, weight, level, job.qmax)
    store = CharacterCache(job.cache_dir)
    return store.get_or_compute(rs, family, weight, level or 0, trunc,
                                lambda: compute_character(rs, family, weight, level, job.qmax))


def cmd_char(job: JobSpec, args) -> tuple[int, str]:
    rs = build_root_system(job.type_label, job.rank)
    level = job.levels[0] if job.levels else None
    f = _character(job, rs, args.family, job.weights[0], level)
    header = _header(job, family=args.family, weight=list(job.weights[0]))
    return EXIT_OK, render_character(f, header, job.output_format, rs, args.family != "thin")


def _expansion_payload(job: JobSpec, exp: Expansion, **extra) -> dict:
    return {**_header(job, **extra), **exp.to_json()}


def cmd_expand(job: JobSpec, args) -> tuple[int, str]:
    rs = build_root_system(job.type_label, job.rank)
    if args.basis_level is None and args.basis != "V":
        raise JobError(f"basis {args.basis} needs --basis-level")
    level = job.levels[0] if job.levels else None
    f = _character(job, rs, args.family, job.weights[0], level)
    if args.basis == "D":
        exp = expand_thin(rs, f, args.basis_level, job.qmax)
    else:
        exp = expand_symmetric(rs, f, args.basis, args.basis_level, job.qmax)
    payload = _expansion_payload(job, exp, family=args.family, weight=list(job.weights[0]), level=level)
    return EXIT_OK, render_coefficients(payload, job.output_format)


def cmd_branch(job: JobSpec, args) -> tuple[int, str]:
    rs = build_root_system(job.type_label, job.rank)
    exp = branching_weyl(rs, job.weights[0], job.levels[0])
    payload = _expansion_payload(job, exp, weight=list(job.weights[0]), level=job.levels[0])
    return EXIT_OK, render_coefficients(payload, job.output_format)


def cmd_kostka(job: JobSpec, args) -> tuple[int, str]:
    rs = build_root_system(job.type_label, job.rank)
    k = job.levels[-1]
    factors = list(zip(job.levels[:-1], job.weights))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonSimplyLacedKostka)
        coeffs = kostka(rs, factors, k, job.qmax)
    if rs.lacing != 1:
        progress(f"note: {rs.name} is not simply laced; see the simply_laced flag")
    payload = {
        **_header(job, level=k, factors=[{"level": l, "weight": list(w)} for l, w in factors],
                  simply_laced=rs.lacing == 1),
        "basis": {"family": "W", "level": k + 1,
                  "truncation": "exact" if job.qmax is None else job.qmax},
        "coeffs": [{"weight": list(lam), "poly": p.pairs()} for lam, p in sorted(coeffs.items())],
    }
    return EXIT_OK, render_coefficients(payload, job.output_format)


def cmd_orbit(job: JobSpec, args) -> tuple[int, str]:
    rs = build_root_system(job.type_label, job.rank)
    m = orbit_equiv(rs, job.weights[0], job.weights[1], job.levels[0])
    return EXIT_OK, ("none" if m is None else str(m)) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {(k if isinstance(k, str) else str(k)): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (int, float, bool, str)) or obj is None:
        return obj
    return str(obj)


def cmd_verify(job: JobSpec, args) -> tuple[int, str]:
    from .verify import run_suite

    results = run_suite(args.suite, progress=progress, seed=job.seed)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "suite": args.suite,
        "passed": all(r.passed for r in results),
        "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail,
                    "failures": _jsonable(r.failures[:20])}
                   for r in results],
    }
    if job.output_format == "json":
        text = dumps(report)
    else:
        text = "".join(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}\n" for r in results)
        if not report["passed"]:
            text += dumps({"mismatches": [c for c in report["checks"] if not c["passed"]]})
    return (EXIT_OK if report["passed"] else EXIT_VERIFY), text


# argument parsing -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="affchar", description="Graded characters of Demazure, Weyl "
                                     "and thick Weyl modules for twisted affine root systems.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="type_label", default="A", help="Cartan type letter (A-G)")
    common.add_argument("--rank", type=int, default=1)
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "latex"), default="json")
    common.add_argument("--cache-dir", type=Path, default=None,
                        help="character cache directory (default: $AFFCHAR_CACHE_DIR)")
    common.add_argument("--qmax", type=int, default=None, help="truncation degree")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("char", parents=[common], help="graded character of one module")
    p.add_argument("--family", choices=CHAR_FAMILIES, required=True)
    p.add_argument("--level", type=int)
    p.add_argument("--weight", type=parse_weight, required=True)

    p = sub.add_parser("expand", parents=[common], help="expand a module character in a basis family")
    p.add_argument("--family", choices=CHAR_FAMILIES, required=True)
    p.add_argument("--level", type=int)
    p.add_argument("--weight", type=parse_weight, required=True)
    p.add_argument("--basis", choices=BASES, required=True)
    p.add_argument("--basis-level", type=int)

    p = sub.add_parser("branch", parents=[common], help="expand W^(k)_mu in level k+1 Weyl modules")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--weight", type=parse_weight, required=True)

    p = sub.add_parser("kostka", parents=[common], help="expand a product of Weyl modules")
    p.add_argument("--factor", type=parse_factor, action="append", required=True,
                   help="LEVEL:WEIGHT, repeatable")
    p.add_argument("--level", type=int, required=True)

    p = sub.add_parser("orbit", parents=[common], help="extremal-orbit shift m, or none")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=parse_weight, required=True)
    p.add_argument("--mu", type=parse_weight, required=True)

    p = sub.add_parser("verify", parents=[common], help="run an acceptance suite")
    p.add_argument("--suite", choices=SUITE_NAMES, default="all")
    p.add_argument("--seed", type=int, default=0, help="seed for property-test sampling")
    return parser


def job_from_args(args) -> JobSpec:
    job = JobSpec(command=args.command, type_label=args.type_label, rank=args.rank,
                  qmax=args.qmax, output_format=args.output_format,
                  cache_dir=args.cache_dir if args.cache_dir is not None else default_cache_dir(),
                  seed=getattr(args, "seed", 0))
    if args.command in ("char", "expand"):
        job.weights = [args.weight]
        job.levels = [args.level] if args.level is not None else []
        if args.command == "expand" and args.basis_level is not None:
            if args.basis_level < 1:
                raise JobError("levels must be >= 1")
    elif args.command == "branch":
        job.weights, job.levels = [args.weight], [args.level]
    elif args.command == "kostka":
        job.levels = [l for l, _ in args.factor] + [args.level]
        job.weights = [w for _, w in args.factor]
    elif args.command == "orbit":
        job.weights, job.levels = [args.lam, args.mu], [args.level]
    job.validate()
    return job


COMMANDS = {"char": cmd_char, "expand": cmd_expand, "branch": cmd_branch,
            "kostka": cmd_kostka, "orbit": cmd_orbit, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        job = job_from_args(args)
        code, text = COMMANDS[job.command](job, args)
    except JobError as exc:
        print(f"affchar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"affchar: precondition violated: {exc}", file=sys.stderr)
        return EXIT_MATH
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
