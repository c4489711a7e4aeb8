"""Command line front end: ``otk analyze|construct|verify-geometry|units|recheck``.

Exit codes: 0 success, 2 parse error, 3 signature gate, 4 undecided,
5 construction error, 6 geometry check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from otk import construct as C
from otk.geomverify import GeometryError, run_suite
from otk.lckrank import GateError, classify
from otk.numfield import NumberField
from otk.poly import IntPolynomial, PolynomialError, is_irreducible_over_Q, parse_poly, to_string
from otk.realroots import ReducibleError, signature
from otk.report import num, poly_json, rank_report_json, recheck, witness_json
from otk.units import (
    dilation_factor,
    is_unimodular_at_complex_place,
    positive_unit_rank,
    quadratic_fundamental_unit,
    unit_search_bounded,
)

EXIT_PARSE, EXIT_GATE, EXIT_UNDECIDED, EXIT_CONSTRUCT, EXIT_GEOMETRY = 2, 3, 4, 5, 6


class CliExit(Exception):
    def __init__(self, code: int, payload: dict):
        super().__init__(payload.get("error", ""))
        self.code = code
        self.payload = payload


def monicize(P: IntPolynomial) -> IntPolynomial:
    """A monic integral polynomial with the same root field: a^(n-1) P(X/a), a = lc."""
    P = P.primitive_part()
    a = P.lc
    n = P.degree
    return IntPolynomial([c * a ** (n - 1 - k) for k, c in enumerate(P.coeffs[:-1])] + [1])


def _parse(text: str) -> IntPolynomial:
    try:
        P = parse_poly(text)
    except PolynomialError as exc:
        raise CliExit(EXIT_PARSE, {"error": f"parse error: {exc}", "input": text})
    if P.degree < 1:
        raise CliExit(EXIT_PARSE, {"error": "need a polynomial of positive degree", "input": text})
    return P


def _field(P: IntPolynomial) -> tuple[NumberField, dict]:
    inputs = {}
    f = monicize(P)
    if f != P:
        inputs["monicized"] = poly_json(f)
    res = is_irreducible_over_Q(f)
    if not res.irreducible:
        raise CliExit(
            EXIT_GATE,
            {"error": "polynomial is reducible", "factor": poly_json(res.factor) if res.factor else None},
        )
    return NumberField(f, check=False), inputs


def _analysis(F: NumberField, args, inputs: dict) -> dict:
    try:
        rep = classify(F, seed=args.seed, units_bound=args.units_bound)
    except GateError as exc:
        raise CliExit(
            EXIT_GATE,
            {"error": str(exc), "field": {"poly": poly_json(F.defining)}, "signature": {"s": exc.s, "t": exc.t}},
        )
    out = {"command": "analyze", "inputs": inputs, **rank_report_json(rep), "seed": args.seed}
    if args.units_bound is not None:
        out["units"] = _units_summary(F, args.units_bound)
    if getattr(args, "verify_geometry", False):
        out["geometry"] = run_suite(F, args.samples, args.seed, args.tol)
    if getattr(args, "recheck", False):
        out["recheck"] = recheck(out)
    return out


def cmd_analyze(args) -> dict:
    P = _parse(args.poly)
    F, inputs = _field(P)
    out = _analysis(F, args, {"poly": args.poly, **inputs})
    if out["case"] == "undecided":
        raise CliExit(EXIT_UNDECIDED, out)
    if "geometry" in out and not out["geometry"]["passed"]:
        raise CliExit(EXIT_GEOMETRY, out)
    return out


def _units_summary(F: NumberField, bound: int) -> dict:
    units = unit_search_bounded(F, bound)
    sig = F.signature
    rows = []
    for u in units:
        row = {"coords": [num(c) for c in u.element.coords], "norm": u.norm, "totally_positive": u.totally_positive}
        if sig.t == 1 and sig.s and u.element not in (1, -1):
            if u.totally_positive:
                df = dilation_factor(u)
                row["dilation_factor"] = df.value
                row["dilation_error"] = df.error
            row["unimodular"] = bool(is_unimodular_at_complex_place(u))
        rows.append(row)
    out = {"bound": bound, "count": len(units), "units": rows}
    if sig.s:
        pr = positive_unit_rank(F, bound)
        out["positive_rank"] = pr.rank
        out["exhibited_independent"] = [[num(c) for c in u.element.coords] for u in pr.exhibited]
    return out


def cmd_units(args) -> dict:
    out = {"command": "units", "inputs": {"poly": args.poly, "bound": args.bound}}
    if args.quadratic is not None:
        try:
            u = quadratic_fundamental_unit(args.quadratic)
        except ValueError as exc:
            raise CliExit(EXIT_PARSE, {"error": str(exc)})
        out["fundamental_unit"] = {
            "d": args.quadratic,
            "field": poly_json(u.field.defining),
            "coords": [num(c) for c in u.element.coords],
            "norm": u.norm,
        }
    if args.poly:
        F, inputs = _field(_parse(args.poly))
        out["inputs"].update(inputs)
        out["field"] = {"poly": poly_json(F.defining), "text": to_string(F.defining)}
        out["signature"] = {"s": F.signature.s, "t": F.signature.t}
        out.update(_units_summary(F, args.bound))
    return out


def _self_analysis(f: IntPolynomial, args) -> dict:
    F = NumberField(f, check=False)
    ns = argparse.Namespace(seed=args.seed, units_bound=None)
    return _analysis(F, ns, {"poly": poly_json(f)})


def cmd_construct(args) -> dict:
    out = {"command": "construct", "kind": args.kind}
    try:
        if args.kind == "maximal":
            spec = C.MaximalFamilySpec.parse(args.n, args.f1, args.f2, args.f3, args.g)
            out["inputs"] = {"n": args.n, "f1": args.f1, "f2": args.f2, "f3": args.f3, "g": args.g}
            if args.search_g is not None:
                hit = C.search_g_for_signature(spec, args.search_g)
                if not hit:
                    raise C.ConstructionError(f"no g with |coefficients| <= {args.search_g} gives signature (2n-2, 1)")
                g, f = hit
                out["g"] = poly_json(g)
            else:
                f = C.make_maximal(spec)
            out["witnesses"] = [witness_json(w) for w in C.family_witnesses(spec)]
        elif args.kind == "half":
            q = "auto" if args.q == "auto" else Fraction(args.q)
            E = parse_poly(args.subfield)
            f = C.make_half(E, q)
            out["inputs"] = {"subfield": args.subfield, "q": args.q}
            out["q"] = num(C.auto_q(E) if q == "auto" else q)
        else:
            f = C.make_totally_real(args.n)
            out["inputs"] = {"n": args.n}
            out["conductor"] = C.conductor_for(args.n) if args.n > 1 else None
    except (C.ConstructionError, ReducibleError, PolynomialError, ValueError) as exc:
        raise CliExit(EXIT_CONSTRUCT, {**out, "error": str(exc)})
    out["poly"] = poly_json(f)
    out["text"] = to_string(f)
    if args.kind == "totally-real":
        sig = signature(f, check=False)
        out["analysis"] = {"signature": {"s": sig.s, "t": sig.t}, "totally_real": sig.t == 0, "degree": f.degree}
    else:
        out["analysis"] = _self_analysis(f, args)
    return out


def cmd_verify_geometry(args) -> dict:
    F, inputs = _field(_parse(args.poly))
    sig = F.signature
    if sig.t != 1 or sig.s < 1:
        raise CliExit(EXIT_GATE, {"error": f"need signature (s, 1), got ({sig.s}, {sig.t})"})
    try:
        rep = run_suite(F, args.samples, args.seed, args.tol)
    except GeometryError as exc:
        raise CliExit(EXIT_GEOMETRY, {"error": str(exc)})
    out = {"command": "verify-geometry", "inputs": {"poly": args.poly, **inputs}, **rep}
    if not rep["passed"]:
        failed = [c for c in rep["checks"] if not c["passed"]]
        out["worst_offender"] = max(failed, key=lambda c: c["worst"] / max(c["tol"], 1e-300)) if failed else None
        raise CliExit(EXIT_GEOMETRY, out)
    return out


def cmd_recheck(args) -> dict:
    try:
        with open(args.report) as fh:
            report = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliExit(EXIT_PARSE, {"error": f"cannot read report: {exc}"})
    if "analysis" in report and "certificate" not in report:
        report = report["analysis"]
    res = recheck(report)
    out = {"command": "recheck", "report": args.report, **res}
    if not res["ok"]:
        raise CliExit(1, out)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="otk", description="LCK rank of OT manifolds from a defining polynomial")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--pretty", action="store_true", help="indented JSON")
    fmt.add_argument("--json", action="store_true", help="compact JSON (default)")
    fmt.add_argument("--seed", type=int, default=0)
    fmt.add_argument("--timings", action="store_true", help="add wall-clock timings (breaks byte-identical output)")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[fmt], help="classify Q[X]/(f)")
    a.add_argument("poly")
    a.add_argument("--units-bound", type=int, default=None)
    a.add_argument("--verify-geometry", action="store_true")
    a.add_argument("--samples", type=int, default=1000)
    a.add_argument("--tol", type=float, default=1e-9)
    a.add_argument("--recheck", action="store_true", help="re-run the exact verification of the certificate")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("construct", help="build example fields")
    csub = c.add_subparsers(dest="kind", required=True)
    m = csub.add_parser("maximal", parents=[fmt])
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--f1", required=True)
    m.add_argument("--f2", required=True)
    m.add_argument("--f3", required=True)
    m.add_argument("--g", default="0")
    m.add_argument("--search-g", type=int, default=None, metavar="BOUND")
    h = csub.add_parser("half", parents=[fmt])
    h.add_argument("--subfield", required=True)
    h.add_argument("--q", default="auto")
    t = csub.add_parser("totally-real", parents=[fmt])
    t.add_argument("--n", type=int, required=True)
    for sp in (m, h, t):
        sp.set_defaults(func=cmd_construct)

    g = sub.add_parser("verify-geometry", parents=[fmt], help="numerical checks on H^s x C")
    g.add_argument("poly")
    g.add_argument("--samples", type=int, default=1000)
    g.add_argument("--tol", type=float, default=1e-9)
    g.set_defaults(func=cmd_verify_geometry)

    u = sub.add_parser("units", parents=[fmt], help="bounded unit search")
    u.add_argument("poly", nargs="?")
    u.add_argument("--bound", type=int, default=2)
    u.add_argument("--quadratic", type=int, default=None, metavar="D", help="fundamental unit of Q(sqrt D)")
    u.set_defaults(func=cmd_units)

    r = sub.add_parser("recheck", parents=[fmt], help="re-verify a saved analysis report")
    r.add_argument("report")
    r.set_defaults(func=cmd_recheck)
    return p


def _dump(payload: dict, pretty: bool) -> str:
    if pretty:
        return json.dumps(payload, indent=2)
    return json.dumps(payload, separators=(",", ":"))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    code = 0
    try:
        payload = args.func(args)
    except CliExit as exc:
        payload, code = exc.payload, exc.code
    if args.timings:
        payload["timings"] = {"total_s": round(time.perf_counter() - start, 6)}
    print(_dump(payload, args.pretty))
    return code


if __name__ == "__main__":
    sys.exit(main())
