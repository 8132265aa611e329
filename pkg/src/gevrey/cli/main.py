"""``gevrey`` command line: every subcommand prints one JSON document.

Exit status: 0 on success or PASS, 1 on a mathematical FAIL, 2 on usage
errors (bad flags, unparsable expressions, violated preconditions).
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from fractions import Fraction

from ..exact import QContext
from ..guess import GuessConfig, InsufficientCoefficients, guess_operator, hermite_pade, rational_reconstruct, residual_order
from ..padic_sum import GuesserFailure, example33_pipeline, telescope_decompose, verify_universal
from ..pfrac import PartialFraction
from ..poly import RationalFunction
from ..qcalc import (
    divide_relation_residual,
    lemma454_solve,
    q_divide_transform,
    q_gevrey_profile,
    q_laplace,
    qdiff_newton_polygon,
    theta_bilateral_check,
)
from ..series import arith_profile
from ..weyl import borel_transfer, indicial_polynomial, newton_polygon, op_to_recurrence, trivial_singularity_check
from . import evaluate as ev
from .parser import SpecError

FAIL = 1
USAGE = 2


class UsageError(Exception):
    pass


def _s(x) -> str:
    return str(Fraction(x))


def _default_trunc() -> int:
    raw = os.environ.get("GEVREY_DEFAULT_TRUNC")
    if raw is None:
        return 40
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"GEVREY_DEFAULT_TRUNC must be an integer, got {raw!r}") from None
    if value < 0:
        raise UsageError("GEVREY_DEFAULT_TRUNC must be nonnegative")
    return value


def _trunc(args) -> int:
    return args.trunc if args.trunc is not None else _default_trunc()


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _primes(text: str) -> list[int]:
    if not text.strip():
        return []
    out = []
    for part in text.split(","):
        try:
            out.append(int(part))
        except ValueError:
            raise UsageError(f"not an integer prime: {part!r}") from None
    return out


def _q(args) -> Fraction:
    _need(args, "q")
    return ev.number(args.q)


def _xi(args, default=None) -> Fraction:
    if args.xi is None:
        if default is None:
            raise UsageError("--xi is required")
        return Fraction(default)
    return ev.number(args.xi)


# ---------------------------------------------------------------- commands


def cmd_sum_padic(args):
    _need(args, "term")
    spec = ev.factorial_term(args.term)
    report = verify_universal(spec, _primes(args.primes or ""), args.prec, jobs=args.jobs)
    out = report.to_json()
    bad = report.agree and not all(report.agree)
    return out, FAIL if bad else 0


def cmd_telescope(args):
    _need(args, "term")
    spec = ev.factorial_term(args.term)
    if spec.s != 1 or spec.xi != 1:
        raise UsageError("telescope needs a term of the form P(n) n!")
    res = telescope_decompose(spec.P)
    out = {"P": [_s(c) for c in spec.P.coeffs], **res.to_json()}
    return out, 0


def cmd_guess(args):
    _need(args, "series")
    trunc = _trunc(args)
    f = ev.series(args.series, trunc)
    cfg = GuessConfig(args.order if args.order is not None else 2, args.degree if args.degree is not None else 3, min(trunc, f.order))
    A = guess_operator(f, cfg)
    if A is None:
        return {"found": False}, FAIL
    return {"found": True, "operator": str(A), "order": A.order, "degree": A.degree, "recurrence": str(op_to_recurrence(A))}, 0


def cmd_borel_transfer(args):
    _need(args, "op")
    A = ev.diffop(args.op)
    s = int(ev.number(args.s)) if args.s is not None else -1
    B = borel_transfer(A, s)
    return {"input": str(A), "s": s, "operator": str(B)}, 0


def cmd_singular(args):
    _need(args, "op")
    A = ev.diffop(args.op)
    xi = _xi(args)
    v = trivial_singularity_check(A, xi, vanish_order=args.vanish)
    out = v.to_json()
    return out, 0 if v.verdict == "PASS" else FAIL


def cmd_indicial(args):
    _need(args, "op")
    return indicial_polynomial(ev.diffop(args.op), _xi(args, 0)).to_json(), 0


def cmd_newton(args):
    _need(args, "op")
    return newton_polygon(ev.diffop(args.op), args.at).to_json(), 0


def cmd_hermite_pade(args):
    _need(args, "series", "order", "degree")
    trunc = max(_trunc(args), args.order)
    Z = ev.series_list(args.series, trunc)
    xi = _xi(args, 0)
    if xi != 0:
        Z = [z.translate(xi) for z in Z]
    polys = hermite_pade(Z, args.order, args.degree, xi)
    if polys is None:
        return {"found": False}, FAIL
    return {
        "found": True,
        "polynomials": [[_s(c) for c in p.coeffs] for p in polys],
        "residual_order": residual_order(polys, Z, xi),
    }, 0


def cmd_reconstruct(args):
    _need(args, "series")
    f = ev.series(args.series, _trunc(args))
    r = rational_reconstruct(f, d_max=args.degree if args.degree is not None else 10)
    if r is None:
        return {"found": False}, FAIL
    if isinstance(r, PartialFraction):
        return {"found": True, "partial_fraction": r.to_json(), "text": str(r)}, 0
    return {"found": True, "numerator": [_s(c) for c in r.num.coeffs], "denominator": [_s(c) for c in r.den.coeffs]}, 0


def cmd_q_check(args):
    kind = args.check
    if kind == "transform":
        _need(args, "series")
        q = _q(args)
        f = ev.series(args.series, _trunc(args), q)
        T = q_laplace(f, args.mode, QContext(q))
        return {"mode": args.mode, "q": _s(q), "coefficients": [_s(c) for c in T.coeffs]}, 0
    if kind == "divide":
        _need(args, "beta", "alpha")
        q = _q(args)
        beta, alpha, xi = ev.numbers(args.beta), ev.numbers(args.alpha), _xi(args)
        N = _trunc(args)
        H = q_divide_transform(beta, alpha, xi, QContext(q), args.mode, N)
        ok = divide_relation_residual(H, beta, alpha, xi, QContext(q), args.mode).truncate(N).is_zero()
        return {"mode": args.mode, "coefficients": [_s(c) for c in H.coeffs], "relation_holds": ok}, 0 if ok else FAIL
    if kind == "slopes":
        _need(args, "op")
        q = _q(args)
        env = {"xi": _xi(args, 1)}
        A = ev.qop(args.op, q, env)
        rhs = ev.rational(args.rhs, dict(env, q=q))
        poly = qdiff_newton_polygon(A, rhs if rhs else None)
        out = poly.to_json()
        return {"slopes": out["slopes"], "edges": out["edges"], "rhs": str(rhs), "operator": str(A)}, 0
    if kind == "lemma454":
        _need(args, "alpha")
        q = _q(args)
        alpha, xi = ev.number(args.alpha), _xi(args)
        M, N = args.window
        res = lemma454_solve(alpha, xi, QContext(q), M, N)
        bad = res.status == "SOLVABLE" and not res.verified
        return res.to_json(), FAIL if bad else 0
    if kind == "theta":
        _need(args, "c")
        rep = theta_bilateral_check(ev.number(args.c), _xi(args, 1), _trunc(args))
        return rep.to_json(), 0 if rep.passed else FAIL
    raise UsageError(f"unknown q-check {kind!r}")


def cmd_profile(args):
    _need(args, "series")
    trunc = _trunc(args)
    if args.q is not None:
        q = _q(args)
        f = ev.series(args.series, trunc, q)
        s = ev.number(args.s) if args.s is not None else Fraction(1)
        return q_gevrey_profile(f, QContext(q), s).to_json(), 0
    f = ev.series(args.series, trunc)
    return arith_profile(f).to_json(), 0


def cmd_example33(args):
    trunc = args.trunc if args.trunc is not None else 120
    res = example33_pipeline(trunc)
    return res.to_json(), 0 if res.verdict == "PASS" else FAIL


COMMANDS = {
    "sum-padic": cmd_sum_padic,
    "telescope": cmd_telescope,
    "guess": cmd_guess,
    "borel-transfer": cmd_borel_transfer,
    "singular": cmd_singular,
    "indicial": cmd_indicial,
    "newton": cmd_newton,
    "hermite-pade": cmd_hermite_pade,
    "reconstruct": cmd_reconstruct,
    "q-check": cmd_q_check,
    "profile": cmd_profile,
    "example33": cmd_example33,
}


def _window(text: str) -> tuple[int, int]:
    try:
        M, N = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected M,N") from None
    return M, N


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gevrey", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, *flags, help=None):
        sp = sub.add_parser(name, help=help)
        for f in flags:
            f(sp)
        return sp

    term = lambda sp: sp.add_argument("--term")  # noqa: E731
    op = lambda sp: sp.add_argument("--op")  # noqa: E731
    series = lambda sp: sp.add_argument("--series")  # noqa: E731
    trunc = lambda sp: sp.add_argument("--trunc", type=int)  # noqa: E731
    xi = lambda sp: sp.add_argument("--xi")  # noqa: E731
    q = lambda sp: sp.add_argument("--q")  # noqa: E731
    order = lambda sp: sp.add_argument("--order", type=int)  # noqa: E731
    degree = lambda sp: sp.add_argument("--degree", type=int)  # noqa: E731
    jobs = lambda sp: sp.add_argument("--jobs", type=int, default=1)  # noqa: E731

    sp = add("sum-padic", term, jobs, help="p-adic sums of a factorial series")
    sp.add_argument("--primes", default="")
    sp.add_argument("--prec", type=int, default=20)
    add("telescope", term, help="telescoping decomposition of P(n) n!")
    add("guess", series, order, degree, trunc, help="guess an annihilating operator")
    sp = add("borel-transfer", op, help="operator for the Borel-normalized series")
    sp.add_argument("--s")
    sp = add("singular", op, xi, help="trivial singularity check")
    sp.add_argument("--vanish", type=int, default=1)
    add("indicial", op, xi, help="indicial polynomial")
    sp = add("newton", op, help="Newton polygon")
    sp.add_argument("--at", default="0", choices=["0", "inf"])
    add("hermite-pade", series, order, degree, trunc, xi, help="Hermite-Pade approximants; series separated by ';'")
    add("reconstruct", series, degree, trunc, help="rational reconstruction")
    sp = add("q-check", op, series, trunc, xi, q, jobs, help="q-calculus checks")
    sp.add_argument("check", choices=["transform", "divide", "slopes", "lemma454", "theta"])
    sp.add_argument("--mode", choices=["sharp", "plus"], default="sharp")
    sp.add_argument("--beta")
    sp.add_argument("--alpha")
    sp.add_argument("--c")
    sp.add_argument("--rhs", default="1/(z-1)")
    sp.add_argument("--window", type=_window, default=(8, 8))
    sp = add("profile", series, trunc, q, help="growth profile (Gevrey or q-Gevrey)")
    sp.add_argument("--s")
    add("example33", trunc, jobs, help="guess and check the series 1 + sum n n! z^n")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        out, code = COMMANDS[args.command](args)
    except (UsageError, SpecError, ev.EvalError, InsufficientCoefficients) as e:
        print(f"gevrey {args.command}: {e}", file=stderr)
        return USAGE
    except GuesserFailure as e:
        print(json.dumps({"verdict": "FAIL", "error": str(e)}), file=stdout)
        return FAIL
    except (ValueError, ZeroDivisionError) as e:
        print(f"gevrey {args.command}: {e}", file=stderr)
        return USAGE
    print(json.dumps(out), file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
