"""Command-line entry point: ``ffcurves <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 mathematical inconsistency,
3 budget or precision exhausted.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from . import arcs, numsg, weierstrass, zeta
from .curve import COUNT_LIMIT, count_points
from .errors import BudgetExceeded, FFCurvesError, UsageError
from .specdoc import load_curve_spec

PROG = "ffcurves"


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= 2**53 else obj
    if isinstance(obj, (Fraction, zeta.QuadExt)):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in items]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _int_list(text: str) -> list[int]:
    return numsg.parse_int_list(text)


_QUAD_TERM = re.compile(
    r"(?P<sign>[+-]?)(?:(?P<coef>\d+(?:/\d+)?)\*?)?(?:sqrt\((?P<m>\d+)\))?(?:/(?P<den>\d+))?")


def parse_quad(text: str) -> zeta.QuadExt:
    """'1/4', 'sqrt(2)/2', '3*sqrt(3)/6', '1/2+sqrt(2)/4'."""
    s = text.replace(" ", "")
    if not s:
        raise UsageError("empty coefficient")
    total = zeta.QuadExt(Fraction(0))
    pos = 0
    while pos < len(s):
        m = _QUAD_TERM.match(s, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("m") is None):
            raise UsageError(f"cannot parse coefficient {text!r}")
        c = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("den"):
            c /= int(m.group("den"))
        if m.group("sign") == "-":
            c = -c
        term = zeta.QuadExt(c) if m.group("m") is None else c * zeta.QuadExt.sqrt(int(m.group("m")))
        total = total + term
        pos = m.end()
    return total


# ---------------------------------------------------------------------------
# subcommands


def cmd_count(args) -> tuple[dict, str]:
    model, _ = load_curve_spec(args.curve)
    exts = _int_list(args.ext)
    counts = {i: count_points(model, i, threads=args.threads) for i in exts}
    res = {"q": model.q, "genus": model.genus, "counts": {str(i): str(n) for i, n in counts.items()}}
    return res, "\n".join(str(n) for n in counts.values())


def _zeta_result(zd: zeta.ZetaData) -> dict:
    label, notes = zeta.classify(zd)
    return {**zd.as_dict(), "classification": label, "classification_notes": notes,
            "bounds": zeta.bound_table(zd.q, zd.g)}


def cmd_zeta(args) -> tuple[dict, str]:
    if args.curve:
        model, _ = load_curve_spec(args.curve)
        q, g = model.q, model.genus
        if q**g > COUNT_LIMIT:
            raise BudgetExceeded(f"zeta needs counts over F_{q}^{g}, beyond the budget of {COUNT_LIMIT} elements")
        counts = [count_points(model, i, threads=args.threads) for i in range(1, g + 1)]
    else:
        if args.q is None or args.g is None:
            raise UsageError("zeta needs --curve or both --q and --g")
        q, g = args.q, args.g
        counts = _int_list(args.counts or "")
    zd = zeta.numerator_from_counts(q, g, counts)
    res = _zeta_result(zd)
    if args.extra:
        res["predicted_counts"] = {str(i): str(zeta.counts_from_numerator(zd, i))
                                   for i in range(1, g + args.extra + 1)}
    text = f"a = {list(zd.a)}\nh(t) = {_format_h(zd.h_coeffs)}\nclassification = {res['classification']}"
    return res, text


def _format_h(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        body = str(abs(c)) if not mono else (mono if abs(c) == 1 else f"{abs(c)}*{mono}")
        terms.append(("-" if c < 0 else "+") + body)
    s = "".join(terms).lstrip("+")
    return s or "0"


def _series(args):
    model, ls = load_curve_spec(args.curve)
    if ls is None:
        raise UsageError("series: the curve spec has no series block")
    return model, ls


def cmd_orders(args) -> tuple[dict, str]:
    model, ls = _series(args)
    rep = weierstrass.analyze(ls, args.mode)
    res = rep.as_dict()
    text = (f"epsilon = {rep.epsilon}\nnu = {rep.nu} (removed index {rep.removed_index})\n"
            f"deg R = {rep.deg_R}\ndeg S = {rep.deg_S}\nsv bound = {rep.sv_bound}")
    return res, text


def cmd_svbound(args) -> tuple[dict, str]:
    if args.curve:
        model, ls = _series(args)
        rep = weierstrass.analyze(ls, args.mode, with_rational=False)
        nu, g, d, r, q = rep.nu, rep.g, rep.d, rep.r, rep.q
        n1 = count_points(model, 1, threads=args.threads)
    else:
        if None in (args.nu, args.g, args.d, args.q):
            raise UsageError("svbound needs --curve or all of --nu, --g, --d, --q")
        nu = tuple(_int_list(args.nu))
        g, d, q, r = args.g, args.d, args.q, len(nu)
        n1 = None
    bound = weierstrass.sv_bound(nu, g, d, r, q)
    res = {"nu": list(nu), "g": g, "d": d, "r": r, "q": q, "sv_bound": bound}
    if n1 is not None:
        res["N1"] = n1
        res["attained"] = n1 == bound
    return res, str(bound)


def cmd_semigroup(args) -> tuple[dict, str]:
    if (args.gens is None) == (args.gaps is None):
        raise UsageError("give exactly one of --gens and --gaps")
    H = numsg.from_generators(_int_list(args.gens)) if args.gens else numsg.from_gaps(_int_list(args.gaps))
    res = {"generators": list(H.generators), "gaps": list(H.gaps), "genus": H.genus,
           "frobenius_number": H.frobenius_number, "weight": numsg.weight(H)}
    lines = [f"generators = {list(H.generators)}", f"genus = {H.genus}",
             f"frobenius number = {H.frobenius_number}", f"weight = {res['weight']}"]
    if args.buchweitz is not None:
        b = numsg.buchweitz_check(H, args.buchweitz)
        res["buchweitz"] = b
        lines.append(f"buchweitz n={b['n']}: card={b['card']} bound={b['bound']} pass={str(b['pass']).lower()}")
    if args.classify:
        c = numsg.classify_symmetry(H)
        res["classification"] = c
        lines.append(f"class = {c['class']}, hyperelliptic = {str(c['hyperelliptic']).lower()}")
    return res, "\n".join(lines)


def _read_points(q: int, path: str | None):
    if path is None:
        return []
    ctx = arcs.field_for(q)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return arcs.parse_points(ctx, text)


def cmd_arc(args) -> tuple[dict, str]:
    q = args.q
    ctx = arcs.field_for(q)
    fmt = lambda P: arcs.format_point(ctx, P)  # noqa: E731
    if args.action == "bounds":
        res = arcs.arc_bounds(q, args.nu4)
        if args.k is not None:
            res["envelope_degree"] = arcs.envelope_degree(q, args.k)
        text = "\n".join(f"{k} = {v['floor']} ({v['exact']})" for k, v in res.items()
                         if isinstance(v, dict))
        return res, text
    if args.action == "greedy":
        arc = arcs.greedy_complete_arc(q, _read_points(q, args.start))
        res = {"q": q, "k": arc.k, "points": [fmt(P) for P in arc.points], "complete": True}
        return res, "\n".join(res["points"])
    if args.points is None:
        raise UsageError(f"arc {args.action} needs --points")
    arc = arcs.ArcInstance.build(q, _read_points(q, args.points))
    if args.action == "verify":
        ok, bad = arcs.is_arc(arc)
        res = {"q": q, "k": arc.k, "is_arc": ok,
               "violation": [fmt(P) for P in bad] if bad else None}
        if ok:
            res["secants"] = arcs.secant_stats(arc)
        return res, f"arc: {str(ok).lower()}" + ("" if ok else " " + " ".join(res["violation"]))
    ok, ext = arcs.is_complete(arc)
    res = {"q": q, "k": arc.k, "complete": ok, "extending_point": fmt(ext) if ext else None}
    return res, f"complete: {str(ok).lower()}" + ("" if ok else f" (extend by {fmt(ext)})")


def cmd_bounds(args) -> tuple[dict, str]:
    res = zeta.bound_table(args.q, args.g, args.n1)
    if args.c:
        coeffs = [parse_quad(s) for s in args.c.split(",")]
        b = zeta.explicit_formula_bound(args.q, args.g, coeffs)
        res["explicit_formula"] = {"exact": str(b), "floor": b.floor()}
    text = "\n".join(f"{k} = {v}" for k, v in res.items() if k != "notes")
    return res, text


COMMANDS = {"count": cmd_count, "zeta": cmd_zeta, "orders": cmd_orders, "svbound": cmd_svbound,
            "semigroup": cmd_semigroup, "arc": cmd_arc, "bounds": cmd_bounds}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--no-timing", action="store_true", help="omit the timing field")
    common.add_argument("--threads", type=int, default=1, help="worker cap for point counting")

    p = _Parser(prog=PROG, description="Curves over finite fields: counts, zeta, orders, bounds.")
    p.add_argument("--version", action="version", version=f"{PROG} {tool_version()}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("count", parents=[common], help="count points over F_{q^i}")
    s.add_argument("--curve", required=True)
    s.add_argument("--ext", default="1", help="extension degrees, e.g. 1 or 1..3")

    s = sub.add_parser("zeta", parents=[common], help="zeta numerator and classification")
    s.add_argument("--curve")
    s.add_argument("--q", type=int)
    s.add_argument("--g", type=int)
    s.add_argument("--counts", help="N_1,...,N_g")
    s.add_argument("--extra", type=int, default=0, help="predict this many counts past g")

    for name in ("orders", "svbound"):
        s = sub.add_parser(name, parents=[common],
                           help="order sequences and divisor degrees" if name == "orders"
                           else "Stohr-Voloch bound")
        s.add_argument("--curve", required=name == "orders")
        s.add_argument("--mode", choices=[weierstrass.STATISTICAL, weierstrass.CERTIFIED],
                       default=weierstrass.STATISTICAL)
        if name == "svbound":
            s.add_argument("--nu")
            s.add_argument("--g", type=int)
            s.add_argument("--d", type=int)
            s.add_argument("--q", type=int)

    s = sub.add_parser("semigroup", parents=[common], help="numerical semigroup data")
    s.add_argument("--gens")
    s.add_argument("--gaps")
    s.add_argument("--buchweitz", type=int)
    s.add_argument("--classify", action="store_true")

    s = sub.add_parser("arc", parents=[common], help="arcs in PG(2,q)")
    s.add_argument("action", choices=["verify", "complete", "bounds", "greedy"])
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--points")
    s.add_argument("--start")
    s.add_argument("--nu4", type=int)
    s.add_argument("--k", type=int, help="arc size for the envelope degree")

    s = sub.add_parser("bounds", parents=[common], help="Weil, Serre, Ihara, Lewittes, explicit formula")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--n1", type=int)
    s.add_argument("--c", help="explicit-formula coefficients, e.g. sqrt(2)/2,1/4")
    return p


def dispatch(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        t0 = time.perf_counter()
        results, text = COMMANDS[args.command](args)
        elapsed = time.perf_counter() - t0
        if args.json:
            inputs = {k: v for k, v in vars(args).items()
                      if k not in ("json", "no_timing", "command") and v is not None}
            report = {"subcommand": args.command, "inputs": inputs, "results": results,
                      "version": tool_version()}
            if not args.no_timing:
                report["timing"] = round(elapsed, 6)
            out.write(json.dumps(_jsonable(report), sort_keys=True) + "\n")
        else:
            out.write(text + "\n")
        return 0
    except FFCurvesError as exc:
        msg = " ".join(str(exc).split())
        err.write(f"{PROG}: error: {msg}\n")
        return exc.exit_code
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
