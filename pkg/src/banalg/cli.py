"""banalg command line: NDJSON reports on stdout, diagnostics on stderr.

Exit codes: 0 when every check passes, 1 on a failed check (or an unsupported
input), 2 on a parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from fractions import Fraction

from .complexes import AlgebraMap, TruncatedAlgebra
from .division import (
    certify_formal_weight_transform,
    certify_poly_bound,
    certify_stein,
    certify_tate_coefficientwise,
    disc_counterexample,
)
from .errors import BanalgError, ParseError
from .hepi import check_strictness_condition, verify_hepi
from .hochschild import FiniteAlgebra, ci_order, hh_bar, hh_complete_intersection, hh_koszul, hkr_expected
from .localization import (
    adic_spec,
    laurent_spec,
    quotient_spec,
    rational_spec,
    verify_localization,
    weierstrass_spec,
)
from .sampling import random_diagonal_vanishing, random_psi, trial_rng
from .scalars import BanachRingDescriptor
from .series import Dagger, Disc, FormalPS, Polynomial, Stein, Tate, parse_flavor

SCHEMA = 1
DEFAULT_ORDER = 8
DEFAULT_TRIALS = 200
DEFAULT_PRIME = 2


def default_order() -> int:
    env = os.environ.get("BANALG_ORDER")
    if env is None:
        return DEFAULT_ORDER
    if not env.strip().isdigit():
        raise ParseError("BANALG_ORDER is not a non-negative integer", env, 0)
    return int(env)


def parse_ring(text: str) -> BanachRingDescriptor:
    """``int``, ``rat``, ``padic[:p[:prec]]`` or ``trivial:int``."""
    parts = text.strip().split(":")
    head = parts[0]
    if head in ("int", "integer", "Z") and len(parts) == 1:
        return BanachRingDescriptor.integer()
    if head in ("rat", "rational", "Q") and len(parts) == 1:
        return BanachRingDescriptor.rational()
    if head == "padic" and len(parts) <= 3:
        pos = len(head) + 1
        nums = []
        for tok in parts[1:]:
            if not tok.isdigit():
                raise ParseError("expected an integer in ring literal", tok, pos)
            nums.append(int(tok))
            pos += len(tok) + 1
        p = nums[0] if nums else DEFAULT_PRIME
        try:
            return BanachRingDescriptor.padic(p, *nums[1:2])
        except ValueError as e:
            raise ParseError(str(e), text, 0) from None
    if head == "trivial" and len(parts) == 2:
        return BanachRingDescriptor.trivial(parts[1])
    raise ParseError("unknown ring literal", head, 0)


def _flavor(text: str):
    try:
        return parse_flavor(text)
    except ParseError:
        raise
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"invalid flavor ({e})", text, 0) from None


def _plain(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


class Emitter:
    def __init__(self, capture: bool):
        self.capture = capture
        self.lines: list[str] = []

    def emit(self, obj: dict) -> None:
        line = json.dumps(_plain({"schema": SCHEMA, **obj}), sort_keys=True, default=str)
        if self.capture:
            self.lines.append(line)
        else:
            print(line, flush=True)


def note(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- subcommands --------------------------------------------------------------------------
def cmd_certify(args, out: Emitter) -> tuple[bool, list]:
    ring = parse_ring(args.ring)
    fl = _flavor(args.flavor)
    results = []
    if isinstance(fl, Disc) or args.counterexample is not None:
        if not isinstance(fl, Disc):
            raise ParseError("--counterexample needs the disc flavor", args.flavor, 0)
        top = args.counterexample if args.counterexample is not None else min(args.degree, args.order)
        for n in range(2, top + 1):
            c = disc_counterexample(n, max(args.order, n))
            rec = {"index": n - 2, **c.to_dict(), "expected_failure": True,
                   "reproduced": c.input_norm == 2 and c.output_norm == n}
            results.append(rec)
            out.emit({"kind": "record", **rec})
        return all(r["reproduced"] for r in results), results
    for i in range(args.trials):
        rng = trial_rng(args.seed, i)
        f = random_diagonal_vanishing(rng, args.degree, order=max(args.order, args.degree))
        if ring != f.ring:
            f = f.change_ring(ring)
        if isinstance(fl, Polynomial):
            c = certify_poly_bound(f)
        elif isinstance(fl, Tate):
            c = certify_tate_coefficientwise(f, fl)
        elif isinstance(fl, Dagger):
            c = certify_tate_coefficientwise(f, Tate(fl.rho))
        elif isinstance(fl, FormalPS):
            c = certify_formal_weight_transform(f, fl if fl.table else random_psi(rng, args.degree))
        elif isinstance(fl, Stein):
            c = certify_stein(f, fl)
        else:
            raise ParseError("flavor has no division certificate", args.flavor, 0)
        rec = {"index": i, **c.to_dict()}
        results.append(rec)
        out.emit({"kind": "record", **rec})
    passed = sum(r["pass"] for r in results)
    note(f"certify {fl.literal()}: {passed}/{len(results)} certificates pass")
    return passed == len(results), results


def cmd_check_strictness(args, out: Emitter) -> tuple[bool, list]:
    ring = parse_ring(args.ring)
    C = TruncatedAlgebra(ring, 1, args.order, _flavor(args.flavor))
    res = check_strictness_condition(C, C.var(0), args.samples, args.seed)
    rec = {"index": 0, "flavor": C.flavor.literal(), **res.to_dict()}
    out.emit({"kind": "record", **rec})
    note(f"strictness {C.flavor.literal()}: {'ok' if res.ok else 'fails'} {res.reason}")
    return res.ok, [rec]


def cmd_verify_hepi(args, out: Emitter) -> tuple[bool, list]:
    ring = parse_ring(args.ring)
    A = TruncatedAlgebra(ring, args.nvars, args.order, _flavor(args.source))
    B = TruncatedAlgebra(ring, args.nvars, args.order, _flavor(args.target))
    v = verify_hepi(AlgebraMap.canonical(A, B), args.samples, args.seed)
    rec = {"index": 0, "source": A.flavor.literal(), "target": B.flavor.literal(), **v.to_dict()}
    out.emit({"kind": "record", **rec})
    note(f"verify-hepi {A.flavor.literal()} -> {B.flavor.literal()}: verdict {v.verdict}")
    for n in v.notes:
        note(f"  {n}")
    return v.verdict, [rec]


_LOCAL_DEFAULTS = {
    # kind: (ring, base flavor or None for no base variable, extra flavor, element)
    "weierstrass": ("int", None, "dagger(1/2)", "2"),
    "laurent": ("padic:2", "tate:1", "tate:1", "x"),
    "rational": ("padic:2", "tate:1", "tate:1", None),
    "adic": ("rat", "poly", None, "x"),
    "quotient": ("rat", "poly", None, "x^2"),
}


def cmd_localize(args, out: Emitter) -> tuple[bool, list]:
    d_ring, d_base, d_extra, d_elem = _LOCAL_DEFAULTS[args.kind]
    ring = parse_ring(args.ring or d_ring)
    base = args.base if args.base is not None else d_base
    nb = 0 if base in (None, "none") else 1
    A = TruncatedAlgebra(ring, nb, args.order, _flavor(base) if nb else Polynomial())
    extra = args.extra or d_extra
    C = TruncatedAlgebra(ring, 1, args.order, _flavor(extra)) if extra else None
    el = lambda s: A.series(s)  # noqa: E731
    if args.kind == "weierstrass":
        spec = weierstrass_spec(A, C, el(args.element or d_elem))
    elif args.kind == "laurent":
        spec = laurent_spec(A, C, el(args.element or d_elem))
    elif args.kind == "rational":
        g = el(args.g or "1 + x")
        fs = [el(s) for s in (args.f or ["1"])]
        ws = []
        for w in args.witness or ["1;0"]:
            parts = w.split(";")
            if len(parts) != 2:
                raise ParseError("witness must be 'a;b'", w, 0)
            ws.append((el(parts[0]), el(parts[1])))
        spec = rational_spec(A, [C] * len(fs), g, fs, ws)
    elif args.kind == "adic":
        spec = adic_spec(A, [el(args.element or d_elem)])
    else:
        spec = quotient_spec(A, [el(args.element or d_elem)])
    v = verify_localization(spec, args.samples, args.seed)
    rec = {"index": 0, **v.to_dict()}
    out.emit({"kind": "record", **rec})
    note(f"localize {args.kind}: verdict {v.verdict} on band {v.band}")
    return v.verdict, [rec]


_ALG = re.compile(r"(poly|jet|field|split|ci)(?::(.*))?\Z")


def parse_algebra(text: str, ring, order: int, flavor):
    """``poly:n``, ``jet:n:k``, ``field``, ``split:k``, ``ci:n:f1;f2``."""
    m = _ALG.match(text.strip())
    if not m:
        raise ParseError("unknown algebra literal", text.split(":")[0], 0)
    kind, rest = m.group(1), m.group(2) or ""
    parts = rest.split(":") if rest else []
    pos = len(kind) + 1

    def num(i):
        if i >= len(parts) or not parts[i].isdigit():
            tok = parts[i] if i < len(parts) else ""
            raise ParseError("expected an integer", tok, pos + sum(len(p) + 1 for p in parts[:i]))
        return int(parts[i])

    if kind == "field":
        return ("finite", FiniteAlgebra.field())
    if kind == "split":
        return ("finite", FiniteAlgebra.split(num(0)))
    if kind == "jet":
        return ("finite", FiniteAlgebra.jet(num(0), num(1)))
    if kind == "poly":
        return ("smooth", TruncatedAlgebra(ring, num(0), order, flavor))
    n = num(0)
    rels = ":".join(parts[1:]).split(";") if len(parts) > 1 else []
    rels = [r for r in rels if r.strip()]
    return ("ci", (n, rels))


def cmd_hh(args, out: Emitter) -> tuple[bool, list]:
    ring = parse_ring(args.ring)
    fl = _flavor(args.flavor)
    kind, alg = parse_algebra(args.algebra, ring, args.order, fl)
    ok = True
    if args.model == "bar":
        if kind == "smooth":
            if alg.nvars:
                raise BanalgError("the bar model needs a finite-dimensional algebra (field, split, jet, ci)")
            alg = FiniteAlgebra.field()
        elif kind == "ci":
            alg = FiniteAlgebra.quotient(*alg)
        rep = hh_bar(alg, args.cutoff)
        rec = {"index": 0, **rep.to_dict()}
    elif kind == "smooth":
        rep = hh_koszul(alg)
        expected = hkr_expected(alg.nvars, rep.band)
        ok = rep.stable == expected
        rec = {"index": 0, **rep.to_dict(), "hkr_expected": expected, "hkr_ok": ok}
    elif kind == "ci":
        n, rels = alg
        P0 = TruncatedAlgebra(ring, n, args.order)
        fs = [P0.series(r) for r in rels]
        order = max(args.order, ci_order([f.degree() for f in fs], n, args.cutoff))
        P = P0.with_order(order)
        fs = [f.with_order(order) for f in fs]
        analytic = None if isinstance(fl, Polynomial) else fl
        rep, bc = hh_complete_intersection(P, fs, args.cutoff, analytic)
        rec = {"index": 0, **rep.to_dict(), "base_change": bc}
        ok = bc is not False
    else:
        raise BanalgError(f"the Koszul model needs a polynomial or complete-intersection algebra, got {args.algebra}")
    out.emit({"kind": "record", **rec})
    note(f"hh {args.model} {args.algebra}: ranks {rep.ranks}")
    return ok, [rec]


def cmd_matrix(args, out: Emitter) -> tuple[bool, list]:
    from .acceptance import run_matrix

    results = []
    for r in run_matrix(args.seed, args.trials, args.workers, determinism=not args.skip_determinism):
        rec = r.to_dict()
        results.append(rec)
        out.emit({"kind": "record", **rec})
        note(r.line())
    return all(r["pass"] for r in results), results


COMMANDS = {
    "certify": cmd_certify,
    "check-strictness": cmd_check_strictness,
    "verify-hepi": cmd_verify_hepi,
    "localize": cmd_localize,
    "hh": cmd_hh,
    "matrix": cmd_matrix,
}


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="banalg", description="Truncated checks for division bounds, homotopy epimorphisms and HH.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, ring="int"):
        sp.add_argument("--order", type=int, default=None, help="truncation order N (default 8 or $BANALG_ORDER)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--ring", default=ring, help="int | rat | padic[:p[:prec]] | trivial:int")
        return sp

    c = common(sub.add_parser("certify", help="randomized division-bound certificates"))
    c.add_argument("--flavor", default="poly")
    c.add_argument("--degree", type=int, default=10)
    c.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    c.add_argument("--counterexample", type=int, default=None, metavar="N",
                   help="disc only: reproduce y^n - z^n for n = 2..N")

    s = common(sub.add_parser("check-strictness", help="strictness of the diagonal sequence"), ring="padic:2")
    s.add_argument("--flavor", default="tate:1")
    s.add_argument("--samples", type=int, default=8)

    h = common(sub.add_parser("verify-hepi", help="homotopy-epimorphism verdict for a flavor map"), ring="padic:2")
    h.add_argument("--source", default="poly")
    h.add_argument("--target", required=True)
    h.add_argument("--nvars", type=int, default=1)
    h.add_argument("--samples", type=int, default=8)

    lo = common(sub.add_parser("localize", help="selfproduct test for a derived localization"), ring=None)
    lo.add_argument("--kind", choices=sorted(_LOCAL_DEFAULTS), required=True)
    lo.add_argument("--base", default=None, help="flavor of the base variable x, or 'none'")
    lo.add_argument("--extra", default=None, help="flavor of the adjoined variable y")
    lo.add_argument("--element", default=None, help="a (in x) for weierstrass, laurent, adic, quotient")
    lo.add_argument("--g", default=None)
    lo.add_argument("--f", action="append", default=None)
    lo.add_argument("--witness", action="append", default=None, help="a;b with a*f + b*g = 1")
    lo.add_argument("--samples", type=int, default=4)

    hh = common(sub.add_parser("hh", help="Hochschild homology ranks"), ring="rat")
    hh.add_argument("--algebra", required=True, help="poly:n | jet:n:k | field | split:k | ci:n:f1;f2")
    hh.add_argument("--model", choices=("koszul", "bar"), default="koszul")
    hh.add_argument("--cutoff", type=int, default=4)
    hh.add_argument("--flavor", default="poly", help="flavor of poly:n, or the analytification for ci")

    m = common(sub.add_parser("matrix", help="full acceptance suite"))
    m.add_argument("--trials", type=int, default=None, help="override campaign sizes")
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--skip-determinism", action="store_true", help=argparse.SUPPRESS)
    return p


def _offending(message: str, argv: list[str]) -> tuple[str | None, int | None]:
    """Best guess at the argv entry an argparse message complains about."""
    for tok in re.findall(r"'([^']*)'", message) + message.split():
        tok = tok.rstrip(":,")
        if tok in argv:
            return tok, argv.index(tok)
    return (argv[-1], len(argv) - 1) if argv else (None, None)


def run(argv: list[str], capture: bool = False) -> tuple[int, list[str]]:
    out = Emitter(capture)
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
    except _ArgError as e:
        token, pos = _offending(str(e), argv)
        note(f"banalg: {e} (argument {pos}: {token!r})")
        out.emit({"kind": "error", "error": "ParseError", "message": str(e), "token": token, "position": pos})
        return 2, out.lines
    try:
        if args.order is None:
            args.order = default_order()
        ok, results = COMMANDS[args.command](args, out)
        code = 0 if ok else 1
    except ParseError as e:
        note(f"banalg: parse error: {e}")
        out.emit({"kind": "error", "error": "ParseError", "message": str(e), "token": e.token, "position": e.position})
        return 2, out.lines
    except BanalgError as e:
        note(f"banalg: {type(e).__name__}: {e}")
        out.emit({"kind": "error", "error": type(e).__name__, "message": str(e)})
        return 1, out.lines
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "seed", "order")}
    out.emit({
        "kind": "report",
        "command": args.command,
        "inputs": inputs,
        "seed": args.seed,
        "truncation_order": args.order,
        "results": results,
        "pass": ok,
        "wall_time_ms": round(1000 * (time.perf_counter() - t0), 3),
    })
    return code, out.lines


def main(argv: list[str] | None = None) -> int:
    try:
        code, _ = run(sys.argv[1:] if argv is None else argv)
    except BrokenPipeError:
        # downstream closed the pipe (e.g. ``| head``); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
