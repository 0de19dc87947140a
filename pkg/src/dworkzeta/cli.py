"""Command-line interface: ``dworkzeta <subcommand> ...``.

Exit codes: 0 success (every internal check passed), 1 validation failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .deformation import SingularHypersurfaceError, assemble_P
from .diagonal import OracleMismatchError, cubic_swap_P, fermat_quartic_P, h0_dimension
from .dwork import gamma_p
from .fredholm import direct_counts, required_precision
from .oracle import count_affine, count_projective, count_torus, ff_build
from .padic import PrecisionError, centered_lift, teichmuller
from .poly import parse_poly
from .series import newton_polygon, poly_newton_polygon
from .zeta import ZetaData, ZetaFitError, projective_denominator, verify_report, zeta_fit

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ValidationFailure(Exception):
    """An internal check did not pass; the command exits with status 1."""


def format_poly(coeffs: Sequence[int], var: str = "T") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {b}" for s, b in parts[1:])


def _denominator_text(z: ZetaData) -> str:
    out = []
    for c, j in z.denominator_factors:
        base = "1 - T" if j == 0 else (f"1 - {z.p}T" if j == 1 else f"1 - {z.p}^{j}T")
        out.append(f"({base})" + (f"^{c}" if c > 1 else ""))
    return "".join(out) or "1"


def _emit(payload: dict, text_lines: List[str], as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=False, default=str))
    else:
        print("\n".join(text_lines))


def _zeta_payload(z: ZetaData) -> tuple:
    rep = verify_report(z) if len(z.numerator) > 1 else None
    payload = z.to_json_dict()
    if rep is not None:
        payload["reciprocal_roots"] = [[r.real, r.imag] for r in rep.reciprocal_roots]
        payload["verify"] = rep.to_json_dict()
        z.checks["weil"] = rep.abs_ok
        z.checks["functional_equation"] = rep.functional_eq_ok
        z.checks["newton_symmetric"] = rep.newton_symmetric
        payload["checks"] = z.checks
    P = format_poly(z.numerator)
    den = _denominator_text(z)
    if z.numerator_is_inverted:
        ztext = f"Z(T) = 1 / ({den})" if P == "1" else f"Z(T) = 1 / (({P}){den})"
    else:
        ztext = f"Z(T) = 1 / ({den})" if P == "1" else f"Z(T) = ({P}) / ({den})"
    lines = [f"P(T) = {P}", ztext]
    if z.counts:
        lines.append("counts: " + ", ".join(f"N_{s} = {v}" for s, v in z.counts))
    for k, v in z.checks.items():
        lines.append(f"check {k}: {v}")
    ok = all(v is not False for v in z.checks.values())
    return payload, lines, ok


# subcommands -----------------------------------------------------------------


def cmd_count(args) -> int:
    f = parse_poly(args.poly, args.n)
    table = ff_build(args.p, args.s)
    if args.mode == "projective":
        value = count_projective(f, table, args.workers)
    elif args.mode == "affine":
        value = count_affine(f, table, args.workers)
    else:
        value = count_torus(f, table, workers=args.workers)
    payload = {"p": args.p, "s": args.s, "q": table.q, "mode": args.mode, "poly": str(f), "count": value}
    _emit(payload, [str(value)], args.json)
    return EXIT_OK


def cmd_zeta_direct(args) -> int:
    f = parse_poly(args.poly, args.n)
    n, d, p = f.n, f.d, args.p
    D = h0_dimension(n, d) if d >= 2 else 0
    fe = None
    if args.s_max is not None:
        s_max = args.s_max
    else:
        s_max = max(D, 1)
        if args.precision is not None and required_precision(p, n, s_max) > args.precision:
            s_max = max(1, -(-D // 2))
    if s_max < D:
        fe = (n - 2, args.sign)
    N = args.precision
    res = direct_counts(f, p, s_max, N=N)
    checks = {}
    if not args.no_oracle:
        for s, v in res.counts:
            actual = count_projective(f, ff_build(p, s), args.workers)
            checks[f"oracle_N{s}"] = actual == v
            if actual != v:
                raise ValidationFailure(f"direct N_{s} = {v} but brute force gives {actual}")
    z = zeta_fit(
        res.counts,
        projective_denominator(n),
        p,
        D,
        inverted=(n % 2 == 0),
        functional_eq=fe,
        n=n,
        d=d,
        method="direct",
    )
    z.checks.update(checks)
    z.extras.update({"precision": res.N, "truncation": res.M, "dimension": res.dim})
    payload, lines, ok = _zeta_payload(z)
    _emit(payload, lines, args.json)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_zeta_diagonal(args) -> int:
    if args.family == "quartic":
        z = fermat_quartic_P(args.p, N=args.precision)
        if args.check_n2:
            actual = count_projective(parse_poly("x1^4+x2^4+x3^4+x4^4"), ff_build(args.p, 2), args.workers)
            z.counts.append((2, actual))
            z.checks["oracle_N2"] = z.predicted_counts(2)[1] == actual
    else:
        coeffs = [int(c) for c in args.coeffs.split(",")] if args.coeffs else [1, 1, 1]
        z = cubic_swap_P(args.p, coeffs, N=args.precision)
        if args.check_n2:
            poly = parse_poly("+".join(f"{c}*x{i + 1}^3" for i, c in enumerate(coeffs)))
            actual = count_projective(poly, ff_build(args.p, 2), args.workers)
            z.counts.append((2, actual))
            z.checks["oracle_N2"] = z.predicted_counts(2)[1] == actual
    payload, lines, ok = _zeta_payload(z)
    _emit(payload, lines, args.json)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_zeta_dwork4(args) -> int:
    z = assemble_P(args.p, args.gamma, N1=args.n1, check_N2=not args.no_n2, workers=args.workers)
    payload, lines, ok = _zeta_payload(z)
    lines.insert(0, f"residual quadratic: 1 - ({z.extras['residual_a']})T + {args.p ** 2}T^2")
    _emit(payload, lines, args.json)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_teich(args) -> int:
    x = teichmuller(args.a, args.p, args.precision)
    payload = {"p": args.p, "precision": args.precision, "a": args.a, "teichmuller": x.residue}
    _emit(payload, [str(x.residue)], args.json)
    return EXIT_OK


def cmd_gamma(args) -> int:
    z = Fraction(args.z)
    methods = ["roberts", "product"] if args.method == "both" else [args.method]
    values = {m: gamma_p(z, args.p, args.precision, method=m) for m in methods}
    residues = {m: v.residue for m, v in values.items()}
    agree = len(set(residues.values())) == 1
    first = next(iter(values.values()))
    payload = {
        "p": args.p,
        "precision": args.precision,
        "z": str(z),
        "residue": first.residue,
        "centered": centered_lift(first),
        "methods": residues,
        "checks": {"routes_agree": agree},
    }
    lines = [str(first.residue)]
    if len(methods) > 1:
        lines.append(f"roberts and product agree: {agree}")
    _emit(payload, lines, args.json)
    return EXIT_OK if agree else EXIT_FAIL


def _parse_points(text: str) -> list:
    pts = []
    for item in text.split(","):
        x, _, v = item.strip().partition(":")
        pts.append((int(x), None if v.strip().lower() in ("inf", "none", "") else Fraction(v)))
    return pts


def cmd_newton_polygon(args) -> int:
    if (args.coeffs is None) == (args.points is None):
        raise ValueError("give exactly one of --coeffs or --points")
    if args.coeffs is not None:
        if args.p is None:
            raise ValueError("--coeffs needs --p")
        npoly = poly_newton_polygon([int(c) for c in args.coeffs.split(",")], args.p)
    else:
        npoly = newton_polygon(_parse_points(args.points))
    payload = {
        "vertices": [[int(x), str(y)] for x, y in npoly.vertices],
        "slopes": [[str(s), int(length)] for s, length in npoly.slopes],
    }
    lines = [f"slope {s} length {length}" for s, length in npoly.slopes] or ["no segments"]
    _emit(payload, lines, args.json)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_checks

    numbers = [int(x) for x in args.only.split(",")] if args.only else None
    echo = None if args.json else (lambda line: print(line, flush=True))
    results = run_checks(numbers, echo=echo)
    ok = all(r.passed and r.within_budget for r in results)
    if args.json:
        payload = {
            "passed": ok,
            "checks": [
                {
                    "number": r.number,
                    "name": r.name,
                    "passed": r.passed,
                    "seconds": round(r.seconds, 3),
                    "budget": r.budget,
                    "detail": r.detail,
                }
                for r in results
            ],
        }
        print(json.dumps(payload, indent=2))
    return EXIT_OK if ok else EXIT_FAIL


# parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dworkzeta",
        description="Zeta functions of hypersurfaces over F_p by p-adic methods.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, workers: bool = False):
        sp.add_argument("--json", action="store_true", help="emit JSON on stdout")
        if workers:
            sp.add_argument("--workers", type=int, default=1, help="threads for brute-force counts")

    sp = sub.add_parser("count", help="brute-force point count over F_{p^s}")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--poly", required=True, help='e.g. "x1^3+x2^3+x3^3"')
    sp.add_argument("--n", type=int, help="number of variables (default: highest index)")
    sp.add_argument("--mode", choices=("projective", "affine", "torus"), default="projective")
    common(sp, workers=True)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("zeta-direct", help="zeta function by the truncated Frobenius matrix")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--poly", required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--precision", type=int, help="p-adic precision N (default: minimal)")
    sp.add_argument("--s-max", type=int, help="number of counts to compute")
    sp.add_argument("--sign", type=int, choices=(-1, 1), default=1,
                    help="functional-equation sign when fewer counts than the degree are used")
    sp.add_argument("--no-oracle", action="store_true", help="skip the brute-force comparison")
    common(sp, workers=True)
    sp.set_defaults(func=cmd_zeta_direct)

    sp = sub.add_parser("zeta-diagonal", help="closed-form numerator for diagonal forms")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--family", choices=("quartic", "cubic"), default="quartic")
    sp.add_argument("--coeffs", help="cubic coefficients a1,a2,a3")
    sp.add_argument("--precision", type=int)
    sp.add_argument("--check-n2", action="store_true", help="compare N_2 with a count over F_{p^2}")
    common(sp, workers=True)
    sp.set_defaults(func=cmd_zeta_diagonal)

    sp = sub.add_parser("zeta-dwork4", help="Dwork quartic family x^4 sum - 4G x1x2x3x4")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--gamma", type=int, required=True)
    sp.add_argument("--n1", type=int, help="use this N_1 instead of counting")
    sp.add_argument("--no-n2", action="store_true", help="skip the N_2 check over F_{p^2}")
    common(sp, workers=True)
    sp.set_defaults(func=cmd_zeta_dwork4)

    sp = sub.add_parser("teich", help="Teichmuller lift of a mod p^N")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--precision", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_teich)

    sp = sub.add_parser("gamma", help="Morita's p-adic Gamma at a rational")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--precision", type=int, required=True)
    sp.add_argument("--z", required=True, help="p-integral rational, e.g. 1/4")
    sp.add_argument("--method", choices=("roberts", "product", "both"), default="roberts")
    common(sp)
    sp.set_defaults(func=cmd_gamma)

    sp = sub.add_parser("newton-polygon", help="Newton polygon of a polynomial or point set")
    sp.add_argument("--p", type=int)
    sp.add_argument("--coeffs", help="integer coefficients, low degree first")
    sp.add_argument("--points", help='"x:v,..." with v rational or inf')
    common(sp)
    sp.set_defaults(func=cmd_newton_polygon)

    sp = sub.add_parser("selftest", help="run the acceptance checks")
    sp.add_argument("--only", help="comma-separated check numbers")
    common(sp)
    sp.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        ValidationFailure,
        OracleMismatchError,
        PrecisionError,
        ZetaFitError,
        SingularHypersurfaceError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, MemoryError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
