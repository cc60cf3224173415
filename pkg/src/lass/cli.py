"""Command-line front end.

Exit status: 0 success, 1 failed mathematical precondition or verification,
2 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import catalog
from .catalog import CatalogEntry, Expected
from .ce import Subalgebra, ce_complex, check_flat, check_jacobi
from .cochain import betti
from .errors import LassError, PreconditionError, Verdict
from .spectral import render_ss


class InputError(Exception):
    pass


# input handling

def detect_kind(data: dict) -> str:
    if "fiber_dim" in data:
        return "jet"
    if "subalgebra" in data:
        return "hs"
    return "lie"


def read_input(source: str) -> CatalogEntry:
    """A JSON file (bare payload or catalog entry) or the name of a catalog entry."""
    path = Path(source)
    if path.is_file():
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
        if not isinstance(data, dict):
            raise InputError(f"{source}: top level must be a JSON object")
        if "schema" in data:
            try:
                return CatalogEntry.from_json(data)
            except (KeyError, LassError) as exc:
                raise InputError(f"{source}: {exc}")
        return CatalogEntry(path.stem, detect_kind(data), "", data, Expected())
    try:
        return catalog.load(source)
    except catalog.UnknownEntry:
        raise InputError(f"{source}: no such file or catalog entry")


def parsed(entry: CatalogEntry, what: str):
    """Build objects from the payload; malformed data becomes an InputError."""
    try:
        if what == "lie":
            g = entry.lie_algebra()
            return g, entry.representation(g)
        if what == "jet":
            return entry.jet_algebroid(), entry.jet_representation()
        raise ValueError(what)
    except PreconditionError:
        raise
    except KeyError as exc:
        raise InputError(f"{entry.name}: missing field {exc}")
    except (TypeError, ValueError, IndexError, ZeroDivisionError) as exc:
        raise InputError(f"{entry.name}: {exc}")


def subalgebra_vectors(entry: CatalogEntry, g):
    try:
        return catalog.subalgebra_vectors(entry.payload["subalgebra"], g.dim)
    except KeyError:
        raise InputError(f"{entry.name}: no subalgebra block")
    except (TypeError, ValueError) as exc:
        raise InputError(f"{entry.name}: {exc}")


def jet_order(entry: CatalogEntry, args) -> int:
    if args.order is not None:
        return args.order
    return max(entry.orders)


# output

def emit(args, table_text: str, payload: dict) -> None:
    if args.out == "json":
        print(json.dumps(payload, indent=1, ensure_ascii=False))
    else:
        print(table_text)


def verdict_lines(verdicts) -> str:
    return "\n".join(f"{'PASS' if v.ok else 'FAIL'}  {name}: {v.message}" for name, v in verdicts)


def verdicts_json(verdicts) -> list:
    return [dict(name=name, **v.to_json()) for name, v in verdicts]


def pages_to_show(ss, spec: str) -> int:
    if spec == "auto":
        return ss.stabilization()
    try:
        n = int(spec)
    except ValueError:
        raise InputError(f"--pages expects an integer or 'auto', got {spec!r}")
    if n < 0:
        raise InputError("--pages must be nonnegative")
    return n


def ss_report(args, title: str, ss, verdicts, extra: dict) -> int:
    r_max = pages_to_show(ss, args.pages)
    stab = ss.stabilization()
    text = [title, render_ss(ss, r_max), f"stabilization page: {stab}"]
    for key, val in extra.items():
        text.append(f"{key}: {val}")
    if verdicts:
        text.append(verdict_lines(verdicts))
    payload = {"name": title, "stabilization": stab,
               "pages": [ss.page(r).to_json() for r in range(r_max + 1)], **extra}
    if verdicts:
        payload["verdicts"] = verdicts_json(verdicts)
    emit(args, "\n".join(text), payload)
    return 0 if all(v.ok for _, v in verdicts) else 1


def engine_verdicts(ss, seed: int) -> list:
    rng = random.Random(seed)
    out = []
    for r in range(ss.stabilization() + 1):
        out.append((f"turn page {r}", ss.turn_page_check(r)))
        if r >= 1:
            out.append((f"d_{r} squared", ss.d_squared_check(r)))
            out.append((f"d_{r} representatives", ss.well_defined_check(r, rng)))
    out.append(("convergence", ss.convergence_check()))
    return out


# verbs

def cmd_check(args) -> int:
    entry = read_input(args.input)
    verdicts = []
    if entry.kind == "jet":
        from .jets import check_axioms_mod
        A, V = parsed(entry, "jet")
        verdicts.append(("algebroid axioms", check_axioms_mod(A.with_order(jet_order(entry, args)))))
        L, _ = A.linearization()
        verdicts.append(("coefficients flat at 0", check_flat(L, V)))
    else:
        g, V = parsed(entry, "lie")
        verdicts.append(("jacobi", check_jacobi(g)))
        verdicts.append(("representation flat", check_flat(g, V)))
        if "subalgebra" in entry.payload:
            h = Subalgebra(g, subalgebra_vectors(entry, g), check=False)
            verdicts.append(("subalgebra closed", Verdict(h.is_closed(), "closed under the bracket"
                                                         if h.is_closed() else "not closed")))
            if entry.kind == "extension":
                ok = h.is_ideal() and h.is_abelian()
                verdicts.append(("abelian ideal", Verdict(ok, "abelian ideal" if ok else "not an abelian ideal")))
    emit(args, verdict_lines(verdicts), {"name": entry.name, "verdicts": verdicts_json(verdicts)})
    return 0 if all(v.ok for _, v in verdicts) else 1


def cmd_betti(args) -> int:
    entry = read_input(args.input)
    if entry.kind == "jet":
        from .jets import jet_complex
        A, V = parsed(entry, "jet")
        b = betti(jet_complex(A, V, jet_order(entry, args)).complex)
    else:
        g, V = parsed(entry, "lie")
        for v in (check_jacobi(g), check_flat(g, V)):
            if not v:
                raise PreconditionError(v.message)
        b = betti(ce_complex(g, V))
    emit(args, " ".join(map(str, b)), {"betti": list(b)})
    return 0


def cmd_ss_hs(args) -> int:
    from .serre import e1_table_oracle, hs_filtration, verify
    entry = read_input(args.input)
    g, V = parsed(entry, "lie")
    for v in (check_jacobi(g), check_flat(g, V)):
        if not v:
            raise PreconditionError(v.message)
    h = Subalgebra(g, subalgebra_vectors(entry, g))
    inst = hs_filtration(g, h, V)
    verdicts = []
    if args.verify:
        verdicts = verify(inst) + engine_verdicts(inst.ss, args.seed)
    extra = {"betti": list(betti(inst.filtered.complex))}
    if args.verify:
        extra["e1_oracle"] = catalog.table_to_json(e1_table_oracle(inst))
    return ss_report(args, entry.name, inst.ss, verdicts, extra)


def cmd_ss_jet(args) -> int:
    from .jets import e1_invariant_check, jet_complex, linearisable_stabilization_check
    entry = read_input(args.input)
    if entry.kind != "jet":
        raise InputError(f"{entry.name}: not a jet algebroid")
    A, V = parsed(entry, "jet")
    k = jet_order(entry, args)
    jc = jet_complex(A, V, k)
    verdicts = []
    if args.verify:
        verdicts.append(("e1 invariant", e1_invariant_check(jc.algebroid, V)[0]))
        if jc.algebroid.is_linear():
            verdicts.append(("linearisable degeneration", linearisable_stabilization_check(jc.algebroid, V)))
        verdicts += engine_verdicts(jc.ss, args.seed)
    extra = {"order": k, "betti": list(betti(jc.complex)), "linear": jc.algebroid.is_linear()}
    return ss_report(args, f"{entry.name} (order {k})", jc.ss, verdicts, extra)


def cmd_d2check(args) -> int:
    from .extension import d2_check
    entry = read_input(args.input)
    g, _ = parsed(entry, "lie")
    subalgebra_vectors(entry, g)
    try:
        ext = entry.extension()
    except (TypeError, IndexError) as exc:
        raise InputError(f"{entry.name}: {exc}")
    verdict, cells = d2_check(ext)
    lines = [f"{entry.name}: d_2 against (-1)^p i_[γ]"]
    for c in cells:
        lines.append(f"  (p,q)=({c.pq[0]},{c.pq[1]}): engine rank {c.engine_rank}, "
                     f"oracle rank {c.oracle_rank}, equal={str(c.equal).lower()}")
    lines.append(verdict_lines([("d2", verdict)]))
    emit(args, "\n".join(lines), {"name": entry.name, "cells": [c.to_json() for c in cells],
                                 "verdict": verdict.to_json()})
    return 0 if verdict.ok else 1


def cmd_catalog_list(args) -> int:
    entries = catalog.load_all()
    text = "\n".join(f"{e.name:<28} {e.kind:<10} {e.description}" for e in entries)
    emit(args, text, {"entries": [{"name": e.name, "kind": e.kind} for e in entries]})
    return 0


def cmd_catalog_show(args) -> int:
    try:
        e = catalog.load(args.name)
    except catalog.UnknownEntry as exc:
        raise InputError(str(exc))
    text = [f"{e.name} ({e.kind}): {e.description}"]
    for key, val in e.expected.items():
        text.append(f"  {key}: {json.dumps(val, ensure_ascii=False)}")
    emit(args, "\n".join(text), e.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", choices=("table", "json"), default="table")
    common.add_argument("--pages", default="auto", help="last page to print, or 'auto'")
    common.add_argument("--order", type=int, default=None, help="jet order")
    common.add_argument("--verify", action="store_true", help="run the oracle identifications")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    parser = argparse.ArgumentParser(prog="lass", description="Exact Lie algebra cohomology and spectral sequences")
    sub = parser.add_subparsers(dest="verb", required=True)
    for name, fn, helptext in (("check", cmd_check, "structural checks"),
                               ("betti", cmd_betti, "Betti numbers"),
                               ("d2check", cmd_d2check, "compare d_2 with the extension class")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("input", help="JSON file or catalog entry name")
        p.set_defaults(func=fn)

    ss = sub.add_parser("ss", help="spectral sequences")
    ss_sub = ss.add_subparsers(dest="family", required=True)
    for name, fn in (("hs", cmd_ss_hs), ("jet", cmd_ss_jet)):
        p = ss_sub.add_parser(name, parents=[common])
        p.add_argument("input")
        p.set_defaults(func=fn)

    cat = sub.add_parser("catalog", help="built-in instances")
    cat_sub = cat.add_subparsers(dest="action", required=True)
    p = cat_sub.add_parser("list", parents=[common])
    p.set_defaults(func=cmd_catalog_list)
    p = cat_sub.add_parser("show", parents=[common])
    p.add_argument("name")
    p.set_defaults(func=cmd_catalog_show)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.order is not None and args.order < 0:
        print("error: --order must be nonnegative", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
