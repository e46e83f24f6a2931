"""Command line interface: ``wmin <command> ...``.

Exit codes: 0 unitary (or conditionally unitary) / identity equal / success,
2 a necessary condition fails, 3 open or unknown status / identity not equal,
1 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .arith import get_monomial_limit, rat, set_monomial_limit
from .catalog import CatalogError, all_ids, lookup
from .identities import IdentityError, list_ids, verify
from .unitarity import Status, UnitarityError, table_rows, verdict
from .wchar import CharacterError, CharRequest, char_request

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILS = 2
EXIT_OPEN = 3

_STATUS_EXIT = {
    Status.UNITARY: EXIT_OK,
    Status.UNITARY_CONDITIONAL: EXIT_OK,
    Status.FAILS_NECESSARY: EXIT_FAILS,
    Status.NOT_DOMINANT: EXIT_FAILS,
    Status.NOT_LEVEL_ADMISSIBLE: EXIT_FAILS,
    Status.UNKNOWN_CONDITIONAL: EXIT_OPEN,
    Status.EXTREMAL_BOUNDARY_OPEN: EXIT_OPEN,
    Status.NS_REPORT_ONLY: EXIT_OPEN,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    threads: int = 1
    monomial_limit: int = get_monomial_limit()
    default_order: Fraction = Fraction(6)
    output: str = "text"

    def validate(self) -> "RunConfig":
        if self.threads < 1:
            raise UsageError("threads must be at least 1")
        if self.monomial_limit < 1:
            raise UsageError("monomial_limit must be positive")
        if self.default_order <= 0:
            raise UsageError("default_order must be positive")
        if self.output not in ("json", "csv", "text"):
            raise UsageError("output must be json, csv or text")
        return self


def load_config(path: Optional[str], env=None) -> RunConfig:
    """Defaults, then the JSON file, then ``WMIN_THREADS``."""
    env = os.environ if env is None else env
    cfg = RunConfig()
    if path:
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise UsageError("config must be a JSON object")
        unknown = set(raw) - {"threads", "monomial_limit", "default_order", "output"}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        try:
            if "threads" in raw:
                cfg.threads = int(raw["threads"])
            if "monomial_limit" in raw:
                cfg.monomial_limit = int(raw["monomial_limit"])
            if "default_order" in raw:
                cfg.default_order = rat(str(raw["default_order"]))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad config value: {exc}") from exc
        cfg.output = raw.get("output", cfg.output)
    if env.get("WMIN_THREADS"):
        try:
            cfg.threads = int(env["WMIN_THREADS"])
        except ValueError as exc:
            raise UsageError("WMIN_THREADS must be an integer") from exc
    return cfg.validate()


# ------------------------------------------------------------ parsing helpers


def parse_rat(text: str) -> Fraction:
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational: {text!r}") from exc


def parse_weight(text: str, n: int) -> tuple:
    """Comma separated rationals in catalog coordinate order; ``0`` means the zero weight."""
    parts = [p for p in text.split(",")]
    if len(parts) == 1 and parse_rat(parts[0]) == 0:
        return tuple([Fraction(0)] * n)
    vals = tuple(parse_rat(p) for p in parts)
    if len(vals) != n:
        raise UsageError(f"weight needs {n} coordinates, got {len(vals)}")
    return vals


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wmin", description="Unitarity, characters and denominator identities of minimal W-algebras.")
    p.add_argument("--config", help="JSON file with threads, monomial_limit, default_order, output")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def fmt(sp, choices=("json", "text")):
        sp.add_argument("--format", choices=choices, default=None)

    u = sub.add_parser("unitarity", help="unitarity verdict for one highest weight")
    u.add_argument("--algebra", required=True)
    u.add_argument("--k", required=True)
    u.add_argument("--nu", required=True)
    u.add_argument("--ell", required=True)
    u.add_argument("--sector", choices=("ramond", "ns"), default="ramond")
    u.add_argument("--eta-choice", type=int, default=0)
    u.add_argument("--assume-conjecture", action="store_true")
    fmt(u)

    t = sub.add_parser("table", help="A, B and extremality over the dominant weights at level k")
    t.add_argument("--algebra", required=True)
    t.add_argument("--k", required=True)
    t.add_argument("--eta-choice", type=int, default=0)
    fmt(t, ("json", "csv", "text"))

    c = sub.add_parser("character", help="truncated character")
    c.add_argument("--algebra", required=True)
    c.add_argument("--k", required=True)
    c.add_argument("--nu", required=True)
    c.add_argument("--ell", required=True)
    c.add_argument("--sector", choices=("ramond", "ns"), default="ramond")
    c.add_argument("--order", default=None)
    c.add_argument("--eta-choice", type=int, default=0)
    fmt(c)

    i = sub.add_parser("identity", help="denominator identities")
    isub = i.add_subparsers(dest="action", parser_class=_Parser)
    iv = isub.add_parser("verify")
    iv.add_argument("--id", required=True)
    iv.add_argument("--order", default=None)
    iv.add_argument("--variant", default="default")
    iv.add_argument("--allow-large", action="store_true", help="allow deligne(E7) and deligne(E8)")
    fmt(iv)
    il = isub.add_parser("list")
    fmt(il)

    g = sub.add_parser("catalog", help="algebra data")
    gsub = g.add_subparsers(dest="action", parser_class=_Parser)
    gd = gsub.add_parser("dump")
    gd.add_argument("--algebra", default="all")
    return p


# ------------------------------------------------------------ commands


def _emit(out, obj, as_json: bool, text: str) -> None:
    if as_json:
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _format(args, cfg: RunConfig) -> str:
    return args.format or cfg.output


def cmd_unitarity(args, cfg: RunConfig, out) -> int:
    data = lookup(args.algebra)
    nu = parse_weight(args.nu, data.n)
    v = verdict(data, parse_rat(args.k), nu, parse_rat(args.ell), args.sector,
                assume_conjecture=args.assume_conjecture, choice=args.eta_choice)
    js = v.to_json()
    text = f"{v.status.value}\nA = {v.A}\nB = {v.B}\nbasis: {v.basis}"
    _emit(out, js, _format(args, cfg) == "json", text)
    return _STATUS_EXIT[v.status]


def cmd_table(args, cfg: RunConfig, out) -> int:
    data = lookup(args.algebra)
    k = parse_rat(args.k)
    rows: List[dict] = []
    notes = []
    for i, ideal in enumerate(data.ideals):
        m = ideal.M(k)
        if m.denominator != 1 or m < 0:
            notes.append(f"M_{i + 1}(k) = {m} is not a nonnegative integer")
    if not notes:
        rows = table_rows(data, k, args.eta_choice)
    form = _format(args, cfg)
    if form == "json":
        _emit(out, {"algebra": data.id, "k": str(k), "rows": rows, "notes": notes}, True, "")
    elif form == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["nu", "dynkin", "A", "B", "ramond_extremal"])
        for r in rows:
            w.writerow([" ".join(r["nu"]), " ".join(map(str, r["dynkin"])), r["A"], r["B"], r["ramond_extremal"]])
        out.write(buf.getvalue())
        for n in notes:
            out.write(f"# {n}\n")
    else:
        lines = [f"{data.name}  k = {k}"]
        for r in rows:
            lines.append(f"nu=({', '.join(r['nu'])})  A={r['A']}  B={r['B']}  extremal={r['ramond_extremal']}")
        lines += notes
        _emit(out, None, False, "\n".join(lines))
    return EXIT_OK


def cmd_character(args, cfg: RunConfig, out) -> int:
    data = lookup(args.algebra)
    order = parse_rat(args.order) if args.order else cfg.default_order
    req = CharRequest(data.id, parse_rat(args.k), parse_weight(args.nu, data.n), parse_rat(args.ell),
                      args.sector, order, args.eta_choice)
    res = char_request(req, data)
    js = res.to_json()
    js.update({"algebra": data.id, "k": str(req.k), "nu": [str(x) for x in req.nu], "sector": req.sector,
               "order": str(order)})
    _emit(out, js, _format(args, cfg) == "json", f"{res.kind} character, ell = {res.ell}\n{res.series!r}")
    return EXIT_OK


def cmd_identity(args, cfg: RunConfig, out) -> int:
    if args.action == "list":
        ids = list_ids()
        _emit(out, ids, _format(args, cfg) == "json", "\n".join(ids))
        return EXIT_OK
    if args.action != "verify":
        raise UsageError("identity needs 'verify' or 'list'")
    order = parse_rat(args.order) if args.order else cfg.default_order
    rep = verify(args.id, order, args.variant, allow_large=args.allow_large)
    js = rep.to_json()
    text = f"{rep.id} order {rep.order}: {'equal' if rep.equal else 'NOT equal'}"
    if rep.first_mismatch is not None:
        q, m, a, b = rep.first_mismatch
        text += f"\nfirst mismatch at q^{q} {m}: lhs {a}, rhs {b}"
    _emit(out, js, _format(args, cfg) == "json", text)
    return EXIT_OK if rep.equal else EXIT_OPEN


def cmd_catalog(args, cfg: RunConfig, out) -> int:
    if args.action != "dump":
        raise UsageError("catalog needs 'dump'")
    if args.algebra == "all":
        obj = [lookup(a).to_json() for a in all_ids()]
    else:
        obj = lookup(args.algebra).to_json()
    out.write(json.dumps(obj, sort_keys=True) + "\n")
    return EXIT_OK


_COMMANDS = {
    "unitarity": cmd_unitarity,
    "table": cmd_table,
    "character": cmd_character,
    "identity": cmd_identity,
    "catalog": cmd_catalog,
}


_VALUE_OPTS = {"--k", "--nu", "--ell", "--order"}


def _join_negative(argv: Sequence[str]) -> List[str]:
    """Turn ``--k -3/4`` into ``--k=-3/4`` so argparse does not read it as an option."""
    out: List[str] = []
    it = iter(range(len(argv)))
    for i in it:
        a = argv[i]
        if a in _VALUE_OPTS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            next(it, None)
        else:
            out.append(a)
    return out


def main(argv: Optional[Sequence[str]] = None, out=None, err=None, env=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_join_negative(argv))
        if not args.command:
            raise UsageError("a command is required: " + ", ".join(_COMMANDS))
        cfg = load_config(args.config, env)
        set_monomial_limit(cfg.monomial_limit)
        return _COMMANDS[args.command](args, cfg, out)
    except (UsageError, CatalogError, UnitarityError, CharacterError, IdentityError) as exc:
        err.write(f"wmin: error: {exc}\n")
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
