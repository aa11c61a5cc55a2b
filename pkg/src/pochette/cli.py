"""Command-line front end.

Exit codes: 0 success, 1 a verification or consistency check failed,
2 bad usage or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from math import gcd
from pathlib import Path

import jsonschema

from . import diagram as dg
from . import families
from .gluing import (
    compose_h1,
    compose_h2_magnitudes,
    exponent_sums,
    natural_lift,
    synthesize_word,
    verify_word,
    word_text,
)
from .intlin import Z, AbelianGroup
from .slope import SlopeError, SlopeFraction, parse_slope, slope_text
from .surgery import (
    HypothesesNotMet,
    NotSimplyConnected,
    SurgeryHypotheses,
    certificate,
    surgery_homology,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _emit(text: str, out: str | None) -> None:
    print(text)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _slope_arg(text: str) -> SlopeFraction:
    try:
        return parse_slope(text)
    except SlopeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(path: str) -> dg.HandleDiagram:
    try:
        return dg.load_diagram(path)
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError, dg.DiagramError) as exc:
        raise UsageError(f"cannot load diagram {path}: {exc}") from None


# --- homology ---------------------------------------------------------------

def cmd_homology(args) -> int:
    d = _load(args.path)
    if args.cancel:
        d = dg.cancel_chain_pairs(d)
    profile = dg.homology_closed(d)
    if args.json:
        _emit(_dump({
            "name": d.name,
            "profile": profile.to_json(),
            "euler_characteristic": dg.euler_characteristic(d),
            "homology_sphere": profile == dg.S4_PROFILE,
        }), args.out)
    else:
        lines = [f"{d.name or args.path}"]
        lines += [f"H_{n} = {g}" for n, g in enumerate(profile.groups)]
        lines.append(f"homology 4-sphere: {'yes' if profile == dg.S4_PROFILE else 'no'}")
        _emit("\n".join(lines), args.out)
    return EXIT_OK


# --- surgery ----------------------------------------------------------------

def cmd_surgery(args) -> int:
    d = _load(args.path)
    try:
        circle, knot = args.pochette.split(",")
    except ValueError:
        raise UsageError("--pochette expects <1-handle id>,<2-handle id>") from None
    poch = dg.PochetteDesignation(circle.strip(), knot.strip())
    sc = {"yes": True, "no": False, "unknown": None}[args.simply_connected]
    hyp = SurgeryHypotheses(args.t2, args.l, args.h2, sc)
    try:
        dg.check_pochette(d, poch)
    except dg.PatternPreconditionFailed as exc:
        raise UsageError(str(exc)) from None
    x_profile = dg.homology_closed(d)
    ext = dg.exterior_check(d, poch)
    meta = {
        "diagram": d.name or args.path,
        "pochette": [poch.one_handle_id, poch.two_handle_id],
        "mode": args.mode,
        "diagram_checks": {
            "pochette_column_zero": True,
            "exterior_h1": ext.h1.to_json(),
            "l_nullhomologous": ext.l_nullhomologous,
        },
    }
    try:
        result = surgery_homology(x_profile, args.slope, args.eps, hyp)
    except (HypothesesNotMet, NotSimplyConnected) as exc:
        print(f"hypotheses not met: {exc}", file=sys.stderr)
        _emit(_dump(certificate(None, args.slope, args.eps, hyp, x_profile, **meta)), args.out)
        return EXIT_FAIL

    status = EXIT_OK
    if args.mode == "diagram":
        try:
            out = dg.transform_diagram(d, poch, args.slope, args.eps)
        except dg.DiagramError as exc:
            raise UsageError(str(exc)) from None
        profile = dg.homology_closed(out)
        meta["diagram_profile"] = profile.to_json()
        meta["diagram_consistent"] = result.profile.agrees_with(profile)
        if not meta["diagram_consistent"]:
            status = EXIT_FAIL
    _emit(_dump(certificate(result, args.slope, args.eps, hyp, x_profile, **meta)), args.out)
    return status


# --- word -------------------------------------------------------------------

def cmd_word(args) -> int:
    word = synthesize_word(args.slope, args.eps)
    action = compose_h1(word)
    report = {
        "slope": slope_text(args.slope),
        "representative": [args.slope.p, args.slope.q],
        "eps": args.eps,
        "word": word_text(word),
        "h1_action": action.to_rows(),
        "image_of_m": action.column(0),
        "verified": verify_word(args.slope, args.eps),
    }
    if args.lift:
        report["lift"] = str(natural_lift(args.slope))
    if args.json:
        _emit(_dump(report), args.out)
    else:
        (a, b), (c, d) = report["h1_action"]
        lines = [
            report["word"],
            f"[m] -> {a}[m] + {c}[l]",
            f"[l] -> {b}[m] + {d}[l]",
        ]
        if args.lift:
            lines.append(f"lift: {report['lift']}")
        _emit("\n".join(lines), args.out)
    return EXIT_OK if report["verified"] else EXIT_FAIL


# --- verify -----------------------------------------------------------------

def _check_pair(p: int, q: int) -> list[str]:
    """Every per-slope invariant for one coprime pair; returns failure messages."""
    fails = []
    s = SlopeFraction(p, q)
    hyp = SurgeryHypotheses()
    ap = abs(p)
    actions = []
    for eps in (0, 1):
        if not verify_word(s, eps):
            fails.append(f"word {p}/{q} eps={eps}")
        actions.append(compose_h1(synthesize_word(s, eps)))
        mags = compose_h2_magnitudes(synthesize_word(s, eps))
        if (mags[0, 0], mags[1, 0]) != (ap, abs(q)):
            fails.append(f"H2 magnitudes {p}/{q} eps={eps}")
    if actions[0] != actions[1]:
        fails.append(f"H1 action depends on eps at {p}/{q}")

    w = natural_lift(s)
    if exponent_sums(w) != (p, q):
        fails.append(f"lift abelianization {p}/{q}")
    if p * q != 0 and w.letter_count("m") != ap:
        fails.append(f"lift m-count {p}/{q}")

    results = [surgery_homology(dg.S4_PROFILE, s, eps, hyp) for eps in (0, 1)]
    flipped = surgery_homology(dg.S4_PROFILE, SlopeFraction(-p, -q), 0, hyp)
    r = results[0]
    want_h1 = Z if p == 0 else AbelianGroup.from_orders(0, [ap])
    if r.profile[0] != Z or r.profile[4] != Z or r.profile[1] != want_h1:
        fails.append(f"surgery H0/H1/H4 {p}/{q}")
    if ap == 1 and r.profile != dg.S4_PROFILE:
        fails.append(f"surgery |p|=1 profile {p}/{q}")
    if results[0] != results[1]:
        fails.append(f"surgery depends on eps at {p}/{q}")
    if flipped.profile != r.profile or flipped.classification != r.classification:
        fails.append(f"surgery depends on sign representative at {p}/{q}")
    if sorted(r.mv_divisors) != sorted((1, ap)):
        fails.append(f"MV divisors {p}/{q}: {r.mv_divisors}")
    return fails


def _check_row(args) -> list[str]:
    p, n = args
    fails = []
    for q in range(-n, n + 1):
        if gcd(p, q) == 1:
            fails += _check_pair(p, q)
    return fails


def _check_templates(n: int) -> list[str]:
    fails = []
    instances = [families.fig1(2), families.fig1(3), families.fig2(1, 1), families.fig2(2, 2, [1, -1])]
    slopes = [SlopeFraction(1, q) for q in range(-n, n + 1)]
    for d in instances:
        for s in slopes:
            for eps in (0, 1):
                out = dg.transform_diagram(d, families.POCHETTE, s, eps)
                if dg.homology_closed(out) != dg.S4_PROFILE:
                    fails.append(f"{d.name} slope {s} eps={eps}")
    return fails


def cmd_verify(args) -> int:
    n = args.range
    if n < 1:
        raise UsageError("--range must be positive")
    rows = [(p, n) for p in range(-n, n + 1)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(_check_row, rows))
    else:
        chunks = [_check_row(r) for r in rows]
    fails = sorted(f for chunk in chunks for f in chunk)
    fails += _check_templates(min(n, 10))
    pairs = sum(1 for p in range(-n, n + 1) for q in range(-n, n + 1) if gcd(p, q) == 1)
    summary = {"range": n, "pairs": pairs, "cases": 2 * pairs, "failures": fails}
    if args.json:
        _emit(_dump(summary), args.out)
    else:
        _emit(
            f"checked {pairs} coprime pairs x eps in {{0,1}} with |p|,|q| <= {n}: "
            + ("all invariants hold" if not fails else f"{len(fails)} failures")
            + "".join(f"\n  FAIL {f}" for f in fails),
            args.out,
        )
    return EXIT_OK if not fails else EXIT_FAIL


# --- family -----------------------------------------------------------------

def cmd_family(args) -> int:
    try:
        if args.name == "fig1":
            if args.k is None:
                raise UsageError("fig1 needs --k")
            d = families.fig1(args.k, args.n, args.signs, meridians=args.meridians)
        else:
            if args.s is None or args.t is None:
                raise UsageError("fig2 needs --s and --t")
            d = families.fig2(args.s, args.t, args.m, args.n, meridians=args.meridians)
    except families.FamilyParameterError as exc:
        raise UsageError(str(exc)) from None
    text = _dump(d.to_json())
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pochette",
        description="Gluing words, handle-diagram homology and pochette surgery homology.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, json_flag=True):
        if json_flag:
            p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--out", help="also write the report to this path")

    p = sub.add_parser("homology", help="homology of a closed handle diagram")
    p.add_argument("path")
    p.add_argument("--cancel", action="store_true", help="cancel handle pairs first")
    common(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("surgery", help="homology certificate for a pochette surgery")
    p.add_argument("path")
    p.add_argument("--pochette", required=True, help="<1-handle id>,<2-handle id>")
    p.add_argument("--slope", required=True, type=_slope_arg, help="p/q or inf")
    p.add_argument("--eps", required=True, type=int, choices=(0, 1))
    p.add_argument("--mode", choices=("algebraic", "diagram"), default="algebraic")
    p.add_argument("--simply-connected", choices=("yes", "no", "unknown"), default="unknown",
                   help="declared simple connectivity of the result")
    p.add_argument("--no-t2", dest="t2", action="store_false", help="H_2(X) -> H_2(X,E) is nonzero")
    p.add_argument("--no-l", dest="l", action="store_false", help="[l] survives in H_1(E)")
    p.add_argument("--no-h2", dest="h2", action="store_false", help="H_2 image condition fails")
    common(p, json_flag=False)
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("word", help="gluing word E_{p/q,eps}")
    p.add_argument("--slope", required=True, type=_slope_arg)
    p.add_argument("--eps", required=True, type=int, choices=(0, 1))
    p.add_argument("--lift", action="store_true", help="also print the natural lift")
    common(p)
    p.set_defaults(func=cmd_word)

    p = sub.add_parser("verify", help="sweep all gluing and surgery invariants")
    p.add_argument("--range", type=int, default=30, help="bound N on |p| and |q|")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("family", help="instantiate a diagram family")
    p.add_argument("name", choices=sorted(families.FAMILIES))
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--m", type=_int_list)
    p.add_argument("--n", type=_int_list)
    p.add_argument("--signs", type=_int_list)
    p.add_argument("--meridians", action="store_true", help="give every knot a 0-framed meridian")
    p.add_argument("--out")
    p.set_defaults(func=cmd_family)
    return parser


# options whose values may start with a minus sign, e.g. --slope -3/2
_SIGNED_OPTIONS = ("--slope", "--m", "--n", "--signs")


def _attach_signed_values(argv: list[str]) -> list[str]:
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _SIGNED_OPTIONS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_signed_values(argv))
    try:
        return args.func(args)
    except (UsageError, dg.DiagramError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
