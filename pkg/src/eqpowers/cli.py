"""Command-line tools for equal sums of like powers.

Exit status: 0 on success, 1 when a verification or certification fails,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
import uuid
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from . import __version__
from .combinatorics import (
    RnLedger,
    bound_witness,
    residue_distribution,
    rn_ledger_update,
    sign_identity_check,
)
from .concerted import (
    ConcertedSet,
    build_n2,
    build_pair,
    build_triple,
    certify,
    dumps_set,
    extend,
    loads_set,
    mixed_tensor,
    explicit_triple_n3,
)
from .cyclotomic import parse_cycint
from .literals import LiteralError, parse_solution_literal
from .parametrize import cramer_parametrize, closed_form_n3, rational_slice, relating_unit
from .search import Mode, SearchConfig, VerificationError, parse_algo, run_search, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_LEDGER = "rn_ledger.jsonl"


class UsageError(Exception):
    pass


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    subcommand: str
    params: dict
    seed: int | None = None
    version: str = __version__
    id: str = field(default_factory=lambda: uuid.uuid4().hex[:12])
    started: str = field(default_factory=_now)
    finished: str | None = None

    def row(self) -> dict:
        return {"type": "manifest", **asdict(self)}


def _emit(args, record: dict, text: str) -> None:
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


# -- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    status = EXIT_OK
    for literal in args.literal:
        n, lhs, rhs = parse_solution_literal(literal)
        try:
            sol = verify(n, lhs, rhs)
        except VerificationError as exc:
            status = EXIT_FAIL
            _emit(
                args,
                {
                    "literal": literal,
                    "valid": False,
                    "lhs_sum": exc.lhs_sum,
                    "rhs_sum": exc.rhs_sum,
                    "difference": exc.lhs_sum - exc.rhs_sum,
                },
                f"FAIL {literal}: {exc}",
            )
            continue
        total = sum(x**n for x in lhs)
        _emit(
            args,
            {"literal": literal, "valid": True, "sum": total, **sol.as_dict()},
            f"ok   {sol.render()}: both sides = {total}, r = {sol.r_value}, "
            f"{'nontrivial' if sol.nontrivial else 'trivial'}",
        )
    return status


# -- search ------------------------------------------------------------------


def cmd_search(args) -> int:
    m, k = parse_algo(args.algo)
    seed = args.seed
    if args.randomize and seed is None:
        seed = secrets.randbits(32)
    cfg = SearchConfig(
        n=args.n,
        m=m,
        k=k,
        a_max=args.a_max,
        a_min=args.a_min,
        c=args.c,
        iter_cap=args.iter_cap,
        mode=Mode.RANDOMIZED if args.randomize else Mode.EXHAUSTIVE,
        seed=seed,
        samples=args.samples,
        window_terms=args.window_terms,
        backtrack=args.backtrack,
        nontrivial_only=not args.all,
    )
    manifest = RunManifest("search", {**asdict(cfg), "mode": cfg.mode.value}, seed)
    out = open(args.out, "a") if args.out else None
    ledger = RnLedger.seeded().load(args.ledger) if args.ledger else None
    found = []

    def sink(sol):
        found.append(sol)
        row = {
            "type": "solution",
            **sol.as_dict(),
            "algo": cfg.algo,
            "seed": seed,
            "timestamp": _now(),
            "manifest": manifest.id,
        }
        if out:
            out.write(json.dumps(row, sort_keys=True) + "\n")
            out.flush()
        if args.json:
            print(json.dumps(row, sort_keys=True))
        else:
            print(f"{sol.render()} = 0   r = {sol.r_value}")
        if ledger is not None and sol.nontrivial:
            before = ledger.bound(sol.n)
            rn_ledger_update(ledger, sol, source=f"search {cfg.algo}", manifest=manifest.id)
            entry = ledger.entries[sol.n]
            if entry.bound < before:
                ledger.append(args.ledger, entry)

    try:
        if out:
            out.write(json.dumps(manifest.row(), sort_keys=True) + "\n")
        stats = run_search(cfg, sink, workers=args.threads)
        manifest.finished = _now()
        if out:
            end = {"type": "manifest-end", "id": manifest.id, "finished": manifest.finished,
                   "stats": stats.as_dict()}
            out.write(json.dumps(end, sort_keys=True) + "\n")
    finally:
        if out:
            out.close()
    summary = {"type": "summary", "manifest": manifest.id, "seed": seed, **stats.as_dict()}
    _emit(
        args,
        summary,
        f"# {cfg.algo} n={cfg.n}: {stats.tuples_tried} tuples, {stats.traces_solved} solved traces, "
        f"{stats.nontrivial} nontrivial solutions, best r = {stats.best_r}"
        + (f", seed = {seed}" if seed is not None else ""),
    )
    return EXIT_OK


# -- concerted ------------------------------------------------------------------


def _build_named(name: str, n: int) -> ConcertedSet:
    if name == "pair":
        return build_pair(n)
    if name == "triple":
        return build_triple(n)
    if name == "n2":
        return build_n2()
    if name == "explicit-n3":
        return explicit_triple_n3()
    raise UsageError(f"unknown base recipe {name!r}")


def _build_from_args(args) -> ConcertedSet:
    recipe = args.recipe
    if recipe in ("pair", "triple", "n2", "explicit-n3"):
        return _build_named(recipe, args.n)
    base = _build_named(args.base, args.n)
    if recipe == "extend":
        return extend(base, args.l, reading=args.reading, workers=args.threads)
    if recipe == "mixed":
        right = _build_named(args.right, args.n)
        return mixed_tensor(base, right, args.l, reading=args.reading, workers=args.threads)
    raise UsageError(f"unknown recipe {recipe!r}")


def _report_set(args, s: ConcertedSet, show: bool) -> int:
    cert = s.certificate
    record = {
        "n": s.n,
        "k": s.k,
        "dim": s.dim,
        "recipe": s.provenance,
        "certified": cert.status.value,
        "witness": list(cert.witness) if cert.witness else None,
        "failing_power": None if cert.failing_power is None else cert.failing_power + 1,
        "patterns_checked": cert.patterns_checked,
    }
    if show:
        record["matrices"] = [[[e.render() for e in r] for r in m.rows] for m in s.matrices]
    lines = [f"# n={s.n} k={s.k} dim={s.dim} recipe={s.provenance}: {cert.describe()}"]
    if show:
        for i, m in enumerate(s.matrices, 1):
            lines.append(f"A{i} =")
            lines.append(m.pretty())
    _emit(args, record, "\n".join(lines))
    return EXIT_OK if cert.verified else EXIT_FAIL


def cmd_concerted(args) -> int:
    if args.action == "build":
        s = _build_from_args(args)
        if args.out:
            Path(args.out).write_text(dumps_set(s))
        return _report_set(args, s, show=not args.out)
    if args.action == "certify":
        s = loads_set(Path(args.input).read_text())
        certify(s, workers=args.threads)
        return _report_set(args, s, show=False)
    if args.action == "show":
        if args.input:
            s = loads_set(Path(args.input).read_text())
            certify(s, workers=args.threads)
        else:
            s = _build_from_args(args)
        return _report_set(args, s, show=True)
    raise UsageError(f"unknown action {args.action!r}")


# -- parametrize ----------------------------------------------------------------


def cmd_parametrize(args) -> int:
    n = args.n
    parts = [p for p in args.psi.split(";")] if ";" in args.psi else args.psi.split(",")
    psi = [parse_cycint(p, n) for p in parts]
    if n == 2:
        s = build_n2()
    elif n == 3:
        s = explicit_triple_n3() if args.set == "explicit-n3" else build_triple(3)
    else:
        raise UsageError("square concerted systems are available for n = 2 and n = 3 only")
    if args.method == "closed-form":
        if n != 3:
            raise UsageError("the closed-form formulas exist for n = 3 only")
        sol = closed_form_n3(psi)
    else:
        sol = cramer_parametrize(s, psi)
    record = sol.as_dict()
    record["xs_text"] = [str(x) for x in sol.xs]
    record["y_text"] = str(sol.y)
    if args.method == "closed-form" and args.set == "explicit-n3":
        unit = relating_unit(sol, cramer_parametrize(s, psi))
        record["unit_vs_cramer"] = None if unit is None else list(unit.coeffs)
    sl = rational_slice(sol)
    record["rational"] = sl.accepted
    record["non_rational"] = list(sl.non_rational)
    if sl.solution is not None:
        record["display"] = f"{sl.solution.render()} = 0"
    if args.rational_only and not sl.accepted:
        record["rejected"] = sl.note or "not rational"
        print(json.dumps(record, sort_keys=True))
        return EXIT_FAIL
    print(json.dumps(record, sort_keys=True))
    return EXIT_OK if sol.identity_holds else EXIT_FAIL


# -- combinatorics ------------------------------------------------------------------


def cmd_bounds(args) -> int:
    w = bound_witness(args.n)
    d = w.as_dict()
    _emit(
        args,
        d,
        f"n = {w.n}: k0 = {w.k0}, minimal A = {w.A} "
        f"(N(A,k0) = {d['N(A,k0)']} > {d['k0*A^n']}), bound r(n) <= {w.implied_bound}"
        + (f"; pigeonhole A = {w.A_pigeonhole}" if w.A_pigeonhole != w.A else "")
        + (f"; collision {d['collision']}" if "collision" in d else ""),
    )
    return EXIT_OK


def cmd_residue(args) -> int:
    ms = [args.m] if args.m is not None else list(range(1, args.n))
    status = EXIT_OK
    for m in ms:
        h = residue_distribution(args.n, m)
        if h.hypothesis_ok and not h.uniform:
            status = EXIT_FAIL
        note = "" if h.hypothesis_ok else "  (n not prime: hypothesis violated)"
        _emit(
            args,
            {"n": h.n, "m": h.m, "counts": list(h.counts), "uniform": h.uniform, "prime": h.hypothesis_ok},
            f"n={h.n} m={h.m}: {list(h.counts)} {'uniform' if h.uniform else 'NOT uniform'}{note}",
        )
    return status


def cmd_identity(args) -> int:
    if args.a:
        a = [int(v) for v in args.a.replace(" ", "").split(",") if v]
    else:
        import random

        if args.n is None:
            raise UsageError("give --a or --n")
        rng = random.Random(args.seed)
        a = [rng.randint(-20, 20) for _ in range(args.n)]
    if args.n is not None and len(a) != args.n:
        raise UsageError(f"--n {args.n} but {len(a)} values given")
    inst = sign_identity_check(a)
    _emit(
        args,
        {"n": inst.n, "a": list(inst.a), "lhs": inst.lhs, "rhs": inst.rhs, "holds": inst.holds},
        f"n={inst.n} a={list(inst.a)}: lhs = {inst.lhs}, 2^n n! prod(a) = {inst.rhs}: "
        f"{'equal' if inst.holds else 'DIFFERENT'}",
    )
    return EXIT_OK if inst.holds else EXIT_FAIL


def cmd_ledger(args) -> int:
    path = args.ledger or DEFAULT_LEDGER
    ledger = RnLedger.seeded().load(path)
    if args.action == "import":
        improved = 0
        for lineno, line in enumerate(Path(args.input).read_text().splitlines(), 1):
            if not line.strip():
                continue
            row = json.loads(line)
            if row.get("type") != "solution":
                continue
            sol = verify(row["n"], row["lhs"], row["rhs"])
            if not sol.nontrivial:
                continue
            before = ledger.bound(sol.n)
            rn_ledger_update(ledger, sol, source=f"import {args.input}", manifest=row.get("manifest"))
            if ledger.entries[sol.n].bound < before:
                ledger.append(path, ledger.entries[sol.n])
                improved += 1
        print(f"# imported {args.input}: {improved} improved bound(s)", file=sys.stderr)
    rows = ledger.rows()
    if args.json:
        for row in rows:
            print(json.dumps(row, sort_keys=True))
        print(json.dumps({"summary": ledger.summary()}))
    else:
        for row in rows:
            head = f"r({row['n']}) {'=' if row['exact'] else '<='} {row['bound']}"
            print(
                f"{head:<12} {row['solution']:<58} "
                f"r<=n {row['rn_le_n']:<9} r/ln n = {row['r_over_ln_n']:.3f}"
            )
        print(f"# {ledger.summary()}")
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import write_report

    paths = write_report(args.out_dir, ledger_path=args.ledger, max_prime=args.max_prime,
                         bounds_nmax=args.bounds_nmax)
    for p in paths:
        print(p)
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    parser.add_argument("--seed", type=int, default=d(None), help="random seed")
    parser.add_argument("--threads", type=int, default=d(1), help="worker processes")
    parser.add_argument("--ledger", default=d(None), help=f"r(n) ledger file (default {DEFAULT_LEDGER})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eqpowers", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("verify", parents=[common], help="check solution literals like (3,5,8;7,7)^4")
    p.add_argument("literal", nargs="+")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="LmRk greedy search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--algo", default="L2R3", help="L<m>R<k>: m enumerated left terms, k greedy terms")
    p.add_argument("--a-max", type=int, required=True)
    p.add_argument("--a-min", type=int, default=1)
    p.add_argument("--c", type=int, default=2, help="window shrink constant")
    p.add_argument("--iter-cap", type=int, default=64)
    p.add_argument("--window-terms", type=int, default=0, help="right terms enumerated over their window")
    p.add_argument("--backtrack", action="store_true", help="bounded backtracking over the window")
    p.add_argument("--randomize", action="store_true", help="sample left tuples instead of enumerating")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--all", action="store_true", help="also emit trivial solutions")
    p.add_argument("--out", help="append JSONL rows here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("concerted", parents=[common], help="build, certify or show concerted sets")
    p.add_argument("action", choices=["build", "certify", "show"])
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--recipe", default="triple", choices=["pair", "triple", "n2", "explicit-n3", "extend", "mixed"])
    p.add_argument("--base", default="pair", choices=["pair", "triple", "n2", "explicit-n3"])
    p.add_argument("--right", default="pair", choices=["pair", "triple", "n2", "explicit-n3"])
    p.add_argument("--l", type=int, default=2, help="1-based index of the second left factor")
    p.add_argument("--reading", default="proof", choices=["proof", "literal"])
    p.add_argument("--input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_concerted)

    p = sub.add_parser("parametrize", parents=[common], help="parametrized solutions from psi")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--psi", required=True, help='components separated by ";", e.g. "1+z; 2; -z"')
    p.add_argument("--method", default="cramer", choices=["cramer", "closed-form"])
    p.add_argument("--set", default="explicit-n3", choices=["explicit-n3", "triple"])
    p.add_argument("--rational-only", action="store_true")
    p.set_defaults(func=cmd_parametrize)

    p = sub.add_parser("bounds", parents=[common], help="counting witness for r(n) <= 2n+1")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("residue", parents=[common], help="subset sums modulo n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.set_defaults(func=cmd_residue)

    p = sub.add_parser("identity", parents=[common], help="signed power-sum identity")
    p.add_argument("--n", type=int)
    p.add_argument("--a", help="comma-separated integers")
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("ledger", parents=[common], help="the r(n) ledger")
    p.add_argument("action", choices=["show", "import"])
    p.add_argument("--input", help="solutions JSONL for import")
    p.set_defaults(func=cmd_ledger)

    p = sub.add_parser("report", parents=[common], help="CSV tables and figures")
    p.add_argument("--out-dir", default="report")
    p.add_argument("--max-prime", type=int, default=13)
    p.add_argument("--bounds-nmax", type=int, default=8)
    p.set_defaults(func=cmd_report)
    return parser


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "ledger" and args.action == "import" and not args.input:
        print("eqpowers: ledger import needs --input", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except LiteralError as exc:
        print(f"eqpowers: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, FileNotFoundError) as exc:
        print(f"eqpowers: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
