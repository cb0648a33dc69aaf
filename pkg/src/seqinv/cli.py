"""Command-line entry point.  Every command prints one JSON object on stdout.

Bit strings are written with the leftmost character as index 0 (s_0, or
coordinate bit 0 for states).  Exit codes: 0 ok, 2 bad input, 3 no solution.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

from . import __version__
from .complexity import berlekamp_massey, lc_inverse, moc, moc_is_degenerate, pci
from .experiments import ExperimentConfig, run_config
from .gf2 import BitVec
from .golomb import solve_golomb
from .hankel import BitSequence, MonomialSet, VectorSequence, build_any, build_system_custom
from .inversion import solve_invertible, status as system_status
from .localinv import local_invert, parse_map_spec

SCHEMA = "seqinv.report/1"
EXIT_OK, EXIT_BAD_INPUT, EXIT_NO_SOLUTION = 0, 2, 3


class BadInput(Exception):
    pass


def read_sequence(path: str) -> BitSequence | VectorSequence:
    """One coordinate per line; whitespace inside a line is ignored."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise BadInput(f"cannot read {path}: {exc}") from exc
    lines = ["".join(ln.split()) for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise BadInput(f"{path}: no sequence lines")
    for i, ln in enumerate(lines, 1):
        if set(ln) - {"0", "1"}:
            raise BadInput(f"{path}: line {i} contains characters other than 0/1")
    if len({len(ln) for ln in lines}) != 1:
        raise BadInput(f"{path}: lines have different lengths")
    if len(lines) == 1:
        return BitSequence.from_str(lines[0])
    return VectorSequence.from_lines(lines)


def _echo(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func",)}


def _solution_fields(sol) -> dict:
    return {
        "inverse": str(sol.inverse),
        "polynomial": str(sol.polynomial),
        "family_size": {
            "lower": sol.count_lower,
            "upper": sol.count_upper,
            "saturated": sol.bounds.saturated,
            "exact_log2": sol.family_log2,
        },
        "rank": sol.bounds.rr_rank,
        "common_inverse": sol.common_inverse,
    }


def cmd_invert(args) -> dict:
    s = read_sequence(args.seq)
    if args.m >= len(s):
        raise BadInput(f"order {args.m} must be below the sequence length {len(s)}")
    if args.mset:
        mset = MonomialSet.parse(args.mset, args.m)
        system = build_system_custom(s, mset)
    else:
        if not 1 <= args.d <= args.m:
            raise BadInput("need 1 <= d <= m")
        system = build_any(s, args.m, args.d, args.allow_constant)
    sol = solve_invertible(system)
    out = {"m": args.m, "d": system.d, "n_C": system.n_c}
    if sol is None:
        out["status"] = "no_solution"
        out["reason"] = system_status(system)
        return out
    out["status"] = "ok"
    out.update(_solution_fields(sol))
    return out


def cmd_pci(args) -> dict:
    s = read_sequence(args.seq)
    rep = pci(s, args.d, args.allow_constant)
    out = {
        "d": args.d,
        "pci_status": rep.status,
        "m": rep.m,
        "n_C": rep.n_c,
        "feasible_range": list(rep.feasible_range) if rep.feasible_range else None,
        "max_rank": rep.max_rank,
        "rank_profile": [list(p) for p in rep.rank_profile],
        "pruned": rep.pruned,
    }
    if rep.solution is None:
        out["status"] = "no_solution"
        return out
    out["status"] = "ok"
    out.update(_solution_fields(rep.solution))
    return out


def _scalar(args) -> BitSequence:
    s = read_sequence(args.seq)
    if not isinstance(s, BitSequence):
        raise BadInput("this command takes a single-line (scalar) sequence")
    return s


def cmd_lc(args) -> dict:
    s = _scalar(args)
    res = lc_inverse(s)
    out = {"lc": berlekamp_massey(s)}
    if res is None:
        out.update(status="no_solution", m=None)
        return out
    m, poly, inv = res
    out.update(status="ok", m=m, d=1, polynomial=str(poly), inverse=str(inv))
    return out


def cmd_moc(args) -> dict:
    s = _scalar(args)
    if len(s) < 2:
        raise BadInput("maximal order complexity needs at least two symbols")
    value = moc(s)
    return {"status": "ok", "moc": value, "degenerate": moc_is_degenerate(s, value)}


def cmd_golomb(args) -> dict:
    s = read_sequence(args.seq)
    if not 1 <= args.d <= args.m < len(s):
        raise BadInput("need 1 <= d <= m < sequence length")
    members = solve_golomb(s, args.m, args.d, allow_constant=not args.no_constant, limit=args.limit)
    out = {"m": args.m, "d": args.d, "count": len(members)}
    if not members:
        out["status"] = "no_solution"
        return out
    out["status"] = "ok"
    out["specs"] = [{"fsr": str(mb.spec), "inverse": str(mb.inverse)} for mb in members]
    out["polynomial"] = str(members[0].spec.f)
    out["inverse"] = str(members[0].inverse)
    return out


def cmd_localinv(args) -> dict:
    fmap = parse_map_spec(args.map)
    y = args.y.strip()
    if len(y) != fmap.n or set(y) - {"0", "1"}:
        raise BadInput(f"--y must be {fmap.n} bits of 0/1")
    res = local_invert(fmap, BitVec.from_str(y), args.steps, args.d, args.allow_constant)
    out = {"n": fmap.n, "length": res.length, "m": res.pci_used.m, "d": args.d, "pci_status": res.pci_used.status}
    out["candidate"] = str(res.candidate) if res.candidate is not None else None
    out["verified"] = res.verified
    out["status"] = "ok" if res.verified else "no_solution"
    return out


def cmd_conjecture(args) -> dict:
    try:
        cfg = ExperimentConfig.parse(Path(args.config).read_text())
    except OSError as exc:
        raise BadInput(f"cannot read {args.config}: {exc}") from exc
    records, report = run_config(cfg)
    return {"status": "ok", "config": vars(cfg) | {"moc_lengths": list(cfg.moc_lengths)}, "report": report.to_dict()}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="seqinv",
        description="Inverses of binary sequences from polynomial recurrence relations over GF(2).",
        epilog="Bit strings: the leftmost character is index 0 (s_0, or bit 0 of a state). "
        "Exit codes: 0 ok, 2 bad input, 3 no solution.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def seq_arg(sp):
        sp.add_argument("--seq", required=True, help="file with one 0/1 line per coordinate")

    sp = sub.add_parser("invert", help="solve for an invertible associated polynomial at fixed (m, d)")
    seq_arg(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--allow-constant", action="store_true")
    sp.add_argument("--mset", help='custom monomial list, e.g. "x0*x1, x0*x2, x1*x2" (overrides --d)')
    sp.set_defaults(func=cmd_invert)

    sp = sub.add_parser("pci", help="polynomial complexity of inversion at degree d")
    seq_arg(sp)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--allow-constant", action="store_true")
    sp.set_defaults(func=cmd_pci)

    sp = sub.add_parser("lc", help="linear complexity and degree-1 inverse")
    seq_arg(sp)
    sp.set_defaults(func=cmd_lc)

    sp = sub.add_parser("moc", help="maximal order complexity")
    seq_arg(sp)
    sp.set_defaults(func=cmd_moc)

    sp = sub.add_parser("golomb", help="non-singular (Golomb form) FSRs generating the sequence")
    seq_arg(sp)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--no-constant", action="store_true", help="exclude a constant term from g")
    sp.add_argument("--limit", type=int, default=64, help="maximum number of specs listed")
    sp.set_defaults(func=cmd_golomb)

    sp = sub.add_parser("localinv", help="local inversion of a black-box map at a point")
    sp.add_argument("--map", required=True, help='"fsr:m=<k>;g=<ANF>", "perm:seed=<u64>;n=<k>" or "table:<path>"')
    sp.add_argument("--y", required=True, help="target state as n bits")
    sp.add_argument("--steps", type=int, required=True, help="length of the iterate sequence")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--allow-constant", action="store_true")
    sp.set_defaults(func=cmd_localinv)

    sp = sub.add_parser("conjecture", help="run the partial-sequence Monte-Carlo experiment")
    sp.add_argument("--config", required=True, help="key=value experiment file")
    sp.set_defaults(func=cmd_conjecture)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        out = args.func(args)
    except (BadInput, ValueError) as exc:
        out = {"status": "bad_input", "error": str(exc)}
        print(f"seqinv: {exc}", file=sys.stderr)
    report = {"schema": SCHEMA, "command": args.command, "inputs": _echo(args)}
    report.update(out)
    report["timing_s"] = round(time.perf_counter() - start, 6)
    print(json.dumps(report, separators=(",", ":")))
    if report["status"] == "ok":
        return EXIT_OK
    return EXIT_BAD_INPUT if report["status"] == "bad_input" else EXIT_NO_SOLUTION


if __name__ == "__main__":
    sys.exit(main())
