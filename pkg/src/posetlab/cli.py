"""Command-line entry point: ``posetlab <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 integer overflow.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import io, ln
from .complex import euler_characteristic, f_vector, nerve
from .errors import MobiusOverflow, PosetError
from .incidence import MobiusTable, mobius_by_inversion
from .layered import LayerStructure, double
from .poset import FinitePoset, RankFunction, grading, height, interval
from .surgery import EmbeddedSubposet, connect_sum, mobius_conn_sum, mobius_cross_closed_form
from .verify import SUITES, run


class UsageError(Exception):
    pass


def _element(P: FinitePoset, token: str) -> int:
    if token in P.labels:
        return P.labels.index(token)
    try:
        x = int(token)
    except ValueError:
        raise UsageError(f"unknown element {token!r}") from None
    if not 0 <= x < P.size:
        raise UsageError(f"element index {x} out of range")
    return x


def _pairs(text: str) -> list[tuple[int, int]]:
    try:
        return [tuple(int(v) for v in item.split(":")) for item in text.split(",") if item]
    except ValueError:
        raise UsageError(f"expected comma-separated a:b pairs, got {text!r}") from None


def _ranks(P: FinitePoset) -> list[int]:
    rank = grading(P)
    if isinstance(rank, RankFunction):
        return [rank[x] for x in range(P.size)]
    return height(P)


def _mobius_rows(mu: MobiusTable, ranks: Sequence[int]) -> list[str]:
    labels = mu.poset.labels
    rows = sorted(mu.items(), key=lambda r: (ranks[r[0]], r[0], r[1]))
    return [f"{labels[x]}\t{labels[y]}\t{v}" for x, y, v in rows]


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- ln ------------------------------------------------------------------------


def _cmd_ln_hasse(args) -> int:
    P = ln.build_ln(args.n)
    _emit(io.dumps(P) if args.json else io.to_dot(P, name=f"L{args.n}"))
    return 0


def _cmd_ln_mobius(args) -> int:
    if (args.from_ is None) != (args.to is None):
        raise UsageError("--from and --to go together")
    if args.from_ is not None:
        S, T = ln.LnElement.parse(args.n, args.from_), ln.LnElement.parse(args.n, args.to)
        _emit(f"{S}\t{T}\t{ln.mobius_closed(S, T)}")
        return 0
    if args.n > ln.DEFAULT_CAP:
        raise UsageError(f"listing all pairs needs --n <= {ln.DEFAULT_CAP}")
    elems = ln.elements(args.n)
    rows = []
    for S in sorted(elems, key=lambda e: (ln.rho(e), e.bits)):
        for T in elems:
            if ln.leq(S, T):
                rows.append(f"{S}\t{T}\t{ln.mobius_closed(S, T)}")
    _emit("\n".join(rows))
    return 0


def _cmd_ln_interval(args) -> int:
    P = ln.build_ln(args.n)
    S, T = ln.LnElement.parse(args.n, args.from_), ln.LnElement.parse(args.n, args.to)
    sub, _ = interval(P, S.bits, T.bits, open=args.open)
    _emit(io.to_dot(sub, name="interval") if args.dot else io.dumps(sub))
    return 0


def _cmd_ln_slides(args) -> int:
    T = ln.LnElement.parse(args.n, args.set)
    _emit("\n".join(str(S) for S in ln.elementary_left_slides(T)))
    return 0


def _cmd_ln_joinmeet(args) -> int:
    S, T = ln.LnElement.parse(args.n, args.S), ln.LnElement.parse(args.n, args.T)
    _emit(f"join={ln.join(S, T)} meet={ln.meet(S, T)}")
    return 0


# -- general posets ----------------------------------------------------------------


def _cmd_mobius(args) -> int:
    P = io.read_poset(args.input)
    _emit("\n".join(_mobius_rows(mobius_by_inversion(P), _ranks(P))))
    return 0


def _embedding(text: str, size: int, name: str) -> list[int]:
    pairs = dict(_pairs(text))
    if sorted(pairs) != list(range(size)):
        raise UsageError(f"{name} must map every element 0..{size - 1} of q exactly once")
    return [pairs[q] for q in range(size)]


def _cmd_connect_sum(args) -> int:
    P0, P1, Q = io.read_poset(args.p0), io.read_poset(args.p1), io.read_poset(args.q)
    E = EmbeddedSubposet(Q, _embedding(args.i0, Q.size, "--i0"), _embedding(args.i1, Q.size, "--i1"))
    P, _ = connect_sum(P0, P1, E)
    out = io.poset_to_dict(P)
    if args.closed_form:
        block = mobius_conn_sum(P0, P1, E)
        closed = mobius_cross_closed_form(P0, P1, E)
        out["mobius"] = {
            "conn_sum": [list(r) for r in block.items()],
            "closed_form": [list(r) for r in closed.items()],
            "diff": [list(r) for r in block.differences(closed)],
        }
    _emit(json.dumps(out))
    return 0


def _signs(text: str) -> list[int]:
    table = {"+": 1, "-": -1, "+1": 1, "-1": -1, "1": 1, "u": 1, "l": -1}
    try:
        return [table[token.strip()] for token in text.split(",")]
    except KeyError as exc:
        raise UsageError(f"bad sign {exc.args[0]!r}; use -1/+1") from None


def _cmd_double(args) -> int:
    P = io.read_poset(args.input)
    layer = LayerStructure(_signs(args.sign), dict(_pairs(args.lift)))
    D, canonical = double(P, layer)
    out = io.poset_to_dict(D)
    out["layer"] = {"sign": list(canonical.sign), "lift": [[a, b] for a, b in sorted(canonical.lift.items())]}
    _emit(json.dumps(out))
    return 0


def _cmd_complex(args) -> int:
    P = io.read_poset(args.input)
    if args.open_interval:
        x, y = (_element(P, token) for token in args.open_interval)
        if x == y or not P.leq[x, y]:
            raise UsageError("--open-interval needs x < y")
        P, _ = interval(P, x, y, open=True)
    K = nerve(P)
    rows = [f"f{i}\t{count}" for i, count in enumerate(f_vector(K))]
    rows.append(f"chi\t{euler_characteristic(K)}")
    _emit("\n".join(rows))
    return 0


def _cmd_verify(args) -> int:
    report = run(args.suite, args.max_n, args.seed)
    if args.no_timing:
        report.elapsed_ms = 0
    if args.json:
        _emit(json.dumps(report.to_dict(), indent=2))
    else:
        status = "ok" if report.ok else "FAILED"
        lines = [f"suite={report.suite} cases={report.cases} failures={len(report.failures)} elapsed_ms={report.elapsed_ms} {status}"]
        lines += ["  " + json.dumps(f) for f in report.failures]
        _emit("\n".join(lines))
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="posetlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    lnp = sub.add_parser("ln", help="the Bruhat-like lattice on subsets of 1..n")
    lnsub = lnp.add_subparsers(dest="ln_command", required=True)

    p = lnsub.add_parser("hasse", help="Hasse diagram")
    p.add_argument("--n", type=int, required=True)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true", help="DOT output (default)")
    fmt.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_ln_hasse)

    p = lnsub.add_parser("mobius", help="Möbius values as TSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--from", dest="from_")
    p.add_argument("--to")
    p.set_defaults(func=_cmd_ln_mobius)

    p = lnsub.add_parser("interval", help="closed or open interval")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--from", dest="from_", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--open", action="store_true")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=_cmd_ln_interval)

    p = lnsub.add_parser("slides", help="configurations one elementary left slide below")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set", required=True)
    p.set_defaults(func=_cmd_ln_slides)

    p = lnsub.add_parser("joinmeet", help="join and meet of two subsets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("S")
    p.add_argument("T")
    p.set_defaults(func=_cmd_ln_joinmeet)

    p = sub.add_parser("mobius", help="Möbius function of a JSON poset as TSV")
    p.add_argument("input")
    p.set_defaults(func=_cmd_mobius)

    p = sub.add_parser("connect-sum", help="glue two posets along a common subposet")
    p.add_argument("p0")
    p.add_argument("p1")
    p.add_argument("q")
    p.add_argument("--i0", required=True, help="q:p0 pairs, comma separated")
    p.add_argument("--i1", required=True, help="q:p1 pairs, comma separated")
    p.add_argument("--closed-form", action="store_true", help="also emit both Möbius tables and their diff")
    p.set_defaults(func=_cmd_connect_sum)

    p = sub.add_parser("double", help="double of a layered poset")
    p.add_argument("input")
    p.add_argument("--sign", required=True, help="-1/+1 (or l/u) per element, comma separated; write --sign=-1,... when the first is negative")
    p.add_argument("--lift", required=True, help="lower:upper pairs, comma separated")
    p.set_defaults(func=_cmd_double)

    p = sub.add_parser("complex", help="f-vector and Euler characteristic of the nerve")
    p.add_argument("--input", required=True)
    p.add_argument("--open-interval", nargs=2, metavar=("X", "Y"))
    p.set_defaults(func=_cmd_complex)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0 for byte-stable output")
    p.set_defaults(func=_cmd_verify)
    return parser


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except MobiusOverflow as exc:
        print(f"error: {exc} (pair {exc.pair})", file=sys.stderr)
        return 3
    except (UsageError, PosetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
