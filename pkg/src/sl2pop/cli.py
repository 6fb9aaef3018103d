"""Command-line front end.

Exit codes: 0 success or verdict true, 1 verdict false, 2 input error,
3 an internal limit was hit.  Reports go to stdout (text by default,
``--format json`` for a stable, schema-versioned document); diagnostics go to
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .darboux import (
    NotLambdaMF, ObstructionViolated, RecoveryFailed, classify_xk, darboux_pair,
    exponents_agree, intertwiner_check, predicted_exponents, recover_line,
)
from .exactalg import NonConvergence, PoleTooHigh, Poly, RationalFunction, X, format_poly
from .expr import NonPolynomial, ParseError, parse_poly, parse_rational, parse_rationals
from .operators import (
    KernelChoice, NotTriangularNumber, SchrodingerOp, from_pair, fuchsian_check,
    is_lambda_mf, kernel_basis, poles_and_exponents, residue_check,
)
from .populations import (
    Infertile, NotGeneric, PolyPair, TPair, bethe_residuals, enumerate_population,
    is_critical, is_generic, word_pairs, wronskian_scalar,
)
from .theta import theta_sequence, verify_theta_recursion

__all__ = ["main", "build_parser", "parse_poly", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1

CONVENTION = {
    "polynomials": "monic unless stated; coefficients are exact rationals written a/b",
    "operator": "(1/P)*(d^2 - U) with P = T0*T1 monic",
    "reproduction": "new y_i = monic(particular + c*y_i); particular has zero coefficient at x^deg(y_i)",
    "scalars": "raw = monic / scalar for reproductions; raw theta_n = scalar * monic theta_n",
    "kernel": "psi = (c1*ytilde_j + c2*y_j)/(sqrt(T_j)*y_(j+1))",
}


class InputError(ValueError):
    pass


def _q(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _p(p: Poly) -> str:
    return format_poly(p)


def _r(r: RationalFunction) -> str:
    return str(r)


def _pair(pair: PolyPair) -> dict:
    return {"y0": _p(pair.y0), "y1": _p(pair.y1)}


def _tdata(t: TPair) -> dict:
    return {"T0": _p(t.T0), "T1": _p(t.T1)}


def _op(op: SchrodingerOp) -> dict:
    return {"P": _p(op.P), "U": _r(op.U), "text": str(op)}


def _class_value(v) -> str:
    """A quotient ring class as the polynomial representing it."""
    return _p(v.value)


def _poly_arg(text, name):
    try:
        return parse_poly(text)
    except (ParseError, NonPolynomial) as e:
        raise InputError(f"--{name}: {e}") from e


def _rat_arg(text, name):
    try:
        return parse_rational(text)
    except ParseError as e:
        raise InputError(f"--{name}: {e}") from e


def _constants_arg(text):
    if text is None:
        return None
    try:
        return parse_rationals(text)
    except (ParseError, NonPolynomial, ValueError) as e:
        raise InputError(f"--constants: {e}") from e


def _pair_t(args):
    t = TPair(_poly_arg(args.t0, "t0"), _poly_arg(args.t1, "t1"))
    if t.P.is_zero():
        raise InputError("T0 and T1 must be nonzero")
    y0, y1 = _poly_arg(args.y0, "y0"), _poly_arg(args.y1, "y1")
    if y0.is_zero() or y1.is_zero():
        raise InputError("y0 and y1 must be nonzero")
    return PolyPair(y0, y1), t


def _t_only(args):
    t = TPair(_poly_arg(args.t0, "t0"), _poly_arg(args.t1, "t1"))
    if t.T0.is_zero() or t.T1.is_zero():
        raise InputError("T0 and T1 must be nonzero")
    return t


def _operator_arg(args):
    P = _poly_arg(args.p, "p")
    if P.is_zero():
        raise InputError("--p must be nonzero")
    U = _rat_arg(args.u, "u")
    return SchrodingerOp(P, U)


# -- commands: each returns (result dict, exit code, text lines) -------------

def cmd_population_enumerate(args):
    t = _t_only(args)
    if args.depth < 0:
        raise InputError("--depth must be nonnegative")
    constants = _constants_arg(args.constants) or [Fraction(0), Fraction(1)]
    nodes = enumerate_population(t, args.depth, tuple(constants))
    out = []
    lines = [f"population of (1, 1) for T = {t}, depth {args.depth}: {len(nodes)} pairs"]
    for node in nodes:
        certs = []
        pairs = word_pairs(node)
        for step, before, after, s in zip(node.word, pairs, pairs[1:], node.scalars):
            i = step.direction
            W = t[i] * before[i + 1] ** 2
            kappa = wronskian_scalar(before[i], after[i], W)
            certs.append({
                "step": str(step),
                "wronskian": f"Wr(y{i}, y{i}') = kappa*T{i}*y{1 - i}^2",
                "kappa": _q(kappa),
                "scalar": _q(s),
            })
        out.append({
            "word": [str(s) for s in node.word],
            "pair": _pair(node.pair),
            "degrees": list(node.pair.degrees),
            "certificates": certs,
        })
        word = " ".join(str(s) for s in node.word) or "(root)"
        lines.append(f"  {word}: {node.pair}")
    result = {"tdata": _tdata(t), "depth": args.depth,
              "constants": [_q(c) for c in constants], "nodes": out}
    return result, 0, lines


def cmd_theta(args):
    t = _t_only(args)
    if args.n < 0:
        raise InputError("--n must be nonnegative")
    constants = _constants_arg(args.constants) or []
    seq = theta_sequence(t, args.dir, args.n, constants)
    rep = verify_theta_recursion(seq)
    result = {
        "tdata": _tdata(t),
        "direction": args.dir,
        "constants": [_q(c) for c in constants],
        "thetas": [_p(th) for th in seq.thetas],
        "scalars": [_q(s) for s in seq.scalars],
        "recursion": {
            "identity": "Wr(theta_(n-1), theta_(n+1)) = s_n * T_(n+i) * theta_n^2 (raw thetas)",
            "ok": rep.ok,
            "s": [_q(s) for s in rep.scalars],
            "failures": list(rep.failures),
        },
    }
    lines = [f"theta_{n} = {_p(th)}" for n, th in enumerate(seq.thetas)]
    lines.append(f"recursion: {'pass' if rep.ok else 'FAIL at ' + str(list(rep.failures))}")
    return result, 0 if rep.ok else 1, lines


def cmd_op_from_pair(args):
    pair, t = _pair_t(args)
    op = from_pair(pair, t, args.j)
    result = {"pair": _pair(pair), "tdata": _tdata(t), "j": args.j, "operator": _op(op)}
    return result, 0, [f"L_{args.j} = {op}", f"P = {_p(op.P)}", f"U = {_r(op.U)}"]


def _check_report(op):
    fuchs = fuchsian_check(op)
    result = {"operator": _op(op), "fuchsian": fuchs}
    lines = [f"operator: {op}", f"fuchsian: {fuchs}"]
    if not fuchs:
        result.update({"lambda_mf": False, "reason": "not Fuchsian", "classes": [], "residue": None})
        lines.append("lambda-monodromy free: False (not Fuchsian)")
        return result, 1, lines
    try:
        data = poles_and_exponents(op)
    except NotTriangularNumber as e:
        result.update({"lambda_mf": False, "reason": str(e), "classes": [], "residue": None})
        lines.append(f"lambda-monodromy free: False ({e})")
        return result, 1, lines
    verdict = is_lambda_mf(op)
    classes = []
    for d in data:
        ev = [e for e in verdict.evidence if e.modulus.gcd(d.modulus).degree > 0]
        classes.append({
            "modulus": _p(d.modulus),
            "m": _q(d.m),
            "a_minus2": _class_value(d.aMinus2),
            "a_minus1": _class_value(d.aMinus1),
            "delta": [
                {"modulus": _p(e.modulus), "vanishes": e.vanishes,
                 "coefficients": [_class_value(c) for c in e.delta.coeffs]}
                for e in ev
            ],
        })
        lines.append(f"  poles at roots of {_p(d.modulus)}: m = {_q(d.m)}, "
                     f"Delta vanishes: {all(e.vanishes for e in ev)}")
    res = residue_check(op, data)
    violations = []
    for v in res.violations:
        values = {_q(s): {"residue": _q(a), "expected": _q(b)}
                  for s, (a, b) in v.values_at_rational_roots().items()}
        violations.append({
            "modulus": _p(v.modulus), "m": _q(v.m), "reason": v.reason,
            "residue": _class_value(v.residue), "expected": _class_value(v.expected),
            "values_at_rational_roots": values,
        })
        for s, val in values.items():
            lines.append(f"  residue violation at x = {s}: a_-1 = {val['residue']}, expected {val['expected']}")
    result.update({
        "lambda_mf": verdict.value,
        "reason": verdict.reason,
        "classes": classes,
        "residue": {"ok": res.ok, "residue_sum": _q(res.residue_sum), "violations": violations},
    })
    lines.append(f"residue check: {'pass' if res.ok else 'fail'} (sum of residues {_q(res.residue_sum)})")
    lines.append(f"lambda-monodromy free: {verdict.value}")
    return result, 0 if verdict.value else 1, lines


def cmd_op_check(args):
    return _check_report(_operator_arg(args))


def _kernel_arg(text):
    try:
        vals = parse_rationals(text)
    except (ParseError, NonPolynomial, ValueError) as e:
        raise InputError(f"--kernel: {e}") from e
    if len(vals) != 2:
        raise InputError("--kernel needs two constants c1,c2")
    try:
        return KernelChoice(*vals)
    except ValueError as e:
        raise InputError(f"--kernel: {e}") from e


def cmd_op_darboux(args):
    pair, t = _pair_t(args)
    choice = _kernel_arg(args.kernel)
    op = from_pair(pair, t, args.j)
    frame = kernel_basis(pair, t, args.j)
    new_pair, new_t = darboux_pair(pair, t, args.j, choice)
    new_op = from_pair(new_pair, new_t, args.j)
    R = t[args.j] * pair[args.j + 1] ** 2
    prediction = predicted_exponents(op, frame.numerator(choice), R)
    agree = exponents_agree(new_op, prediction)
    mf = bool(is_lambda_mf(new_op))
    inter = intertwiner_check(pair, t, args.j, choice)
    ok = agree and mf and inter.ok
    result = {
        "input": {"pair": _pair(pair), "tdata": _tdata(t), "j": args.j, "kernel": str(choice)},
        "operator": _op(op),
        "kernel_numerator": _p(frame.numerator(choice)),
        "pair": _pair(new_pair),
        "tdata": _tdata(new_t),
        "transformed": _op(new_op),
        "certificate": {
            "pair_level_equals_potential_level": True,
            "exponents_match_prediction": agree,
            "lambda_mf": mf,
            "intertwiner": inter.ok,
        },
    }
    lines = [f"L = {op}", f"psi numerator: {_p(frame.numerator(choice))}",
             f"new pair: {new_pair}  T = {new_t}", f"L^psi = {new_op}",
             f"certificate: dictionary ok, exponents {agree}, lambda-mf {mf}, intertwiner {inter.ok}"]
    return result, 0 if ok else 1, lines


def cmd_op_recover(args):
    op = _operator_arg(args)
    try:
        pair, t, word = recover_line(op)
    except NotLambdaMF as e:
        return {"operator": _op(op), "lambda_mf": False, "reason": str(e)}, 1, [f"not recovered: {e}"]
    result = {
        "operator": _op(op),
        "lambda_mf": True,
        "pair": _pair(pair),
        "tdata": _tdata(t),
        "base": {"pair": _pair(word.start_pair), "tdata": _tdata(word.start_t)},
        "word": [str(c) for c in word.choices],
        "certificate": {"from_pair_equals_input": from_pair(pair, t, 1) == op},
    }
    lines = [f"y0 = {_p(pair.y0)}", f"y1 = {_p(pair.y1)}", f"T0 = {_p(t.T0)}", f"T1 = {_p(t.T1)}"]
    return result, 0, lines


def cmd_op_classify_xk(args):
    if args.k < 0:
        raise InputError("--k must be nonnegative")
    op = SchrodingerOp(X ** args.k, _rat_arg(args.u, "u"))
    try:
        cl = classify_xk(op)
    except NotLambdaMF as e:
        return {"operator": _op(op), "lambda_mf": False, "reason": str(e)}, 1, [f"not classified: {e}"]
    canonical_u = RationalFunction(Poly([cl.m * (cl.m + 1)]), X ** 2)
    result = {
        "operator": _op(op),
        "lambda_mf": True,
        "k": cl.k,
        "m": _q(cl.m),
        "m_at_zero": _q(cl.m0),
        "canonical": {"pair": _pair(cl.word.start_pair), "tdata": _tdata(cl.word.start_t),
                      "U": _r(canonical_u)},
        "word": [str(c) for c in cl.word.choices],
        "pair": _pair(cl.pair),
        "tdata": _tdata(cl.tdata),
        "reproductions": [str(s) for s in cl.reproductions],
        "certificate": {"replay_equals_input": cl.word.operator() == op},
    }
    lines = [f"m = {_q(cl.m)} (exponent at 0: {_q(cl.m0)})",
             f"Darboux word from x^-{cl.k}*(d^2 - ({canonical_u})): "
             + (" ".join(f"[{c}]" for c in cl.word.choices) or "(empty)")]
    return result, 0, lines


def cmd_bethe_check(args):
    pair, t = _pair_t(args)
    gen = is_generic(pair, t)
    if not gen:
        names = [n for n, _ in gen.failures]
        return ({"pair": _pair(pair), "tdata": _tdata(t), "generic": False, "failures": names},
                1, [f"pair is not generic: {', '.join(names)}"])
    residual = bethe_residuals(pair, t, tol=min(args.tol, 1e-10))
    critical = is_critical(pair, t)
    ok = residual < args.tol
    result = {
        "pair": _pair(pair),
        "tdata": _tdata(t),
        "generic": True,
        "critical_exact": critical,
        "residual": float(f"{residual:.3e}"),
        "tol": args.tol,
        "ok": ok,
    }
    lines = [f"max BAE residual: {residual:.3e} (tol {args.tol})",
             f"exact criticality (Wronskian divisibility): {critical}"]
    return result, 0 if ok else 1, lines


# -- parser ------------------------------------------------------------------

def _add_t(p):
    p.add_argument("--t0", required=True, help="polynomial T0")
    p.add_argument("--t1", required=True, help="polynomial T1")


def _add_pair(p):
    p.add_argument("--y0", required=True)
    p.add_argument("--y1", required=True)
    _add_t(p)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="sl2pop", description="Populations, Schrödinger operators and Darboux transformations.")
    parser.add_argument("--version", action="version", version=f"sl2pop {__version__}")
    sub = parser.add_subparsers(dest="group", required=True)

    pop = sub.add_parser("population", help="populations of critical points")
    pop_sub = pop.add_subparsers(dest="action", required=True)
    en = pop_sub.add_parser("enumerate", parents=[common])
    _add_t(en)
    en.add_argument("--depth", type=int, required=True)
    en.add_argument("--constants", help="comma separated reproduction constants (default 0,1)")
    en.set_defaults(func=cmd_population_enumerate, command="population enumerate")

    th = sub.add_parser("theta", parents=[common], help="theta sequence and its recursion")
    _add_t(th)
    th.add_argument("--dir", type=int, choices=(0, 1), required=True)
    th.add_argument("--n", type=int, required=True)
    th.add_argument("--constants", help="comma separated inner integration constants")
    th.set_defaults(func=cmd_theta, command="theta")

    op = sub.add_parser("op", help="Schrödinger operators")
    op_sub = op.add_subparsers(dest="action", required=True)
    fp = op_sub.add_parser("from-pair", parents=[common])
    _add_pair(fp)
    fp.add_argument("--j", type=int, choices=(0, 1), required=True)
    fp.set_defaults(func=cmd_op_from_pair, command="op from-pair")

    ck = op_sub.add_parser("check", parents=[common])
    ck.add_argument("--p", required=True)
    ck.add_argument("--u", required=True, help="rational function, e.g. '2/(x^2*(x-1)^2)'")
    ck.set_defaults(func=cmd_op_check, command="op check")

    db = op_sub.add_parser("darboux", parents=[common])
    _add_pair(db)
    db.add_argument("--j", type=int, choices=(0, 1), default=1)
    db.add_argument("--kernel", required=True, help="c1,c2")
    db.set_defaults(func=cmd_op_darboux, command="op darboux")

    rc = op_sub.add_parser("recover", parents=[common])
    rc.add_argument("--p", required=True)
    rc.add_argument("--u", required=True)
    rc.set_defaults(func=cmd_op_recover, command="op recover")

    cx = op_sub.add_parser("classify-xk", parents=[common])
    cx.add_argument("--k", type=int, required=True)
    cx.add_argument("--u", required=True)
    cx.set_defaults(func=cmd_op_classify_xk, command="op classify-xk")

    be = sub.add_parser("bethe", help="Bethe ansatz equations")
    be_sub = be.add_subparsers(dest="action", required=True)
    bc = be_sub.add_parser("check", parents=[common])
    _add_pair(bc)
    bc.add_argument("--tol", type=float, default=1e-8)
    bc.set_defaults(func=cmd_bethe_check, command="bethe check")
    return parser


def _inputs(args) -> dict:
    skip = {"func", "command", "group", "action", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def render_json(args, result, code, seconds) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "inputs": _inputs(args),
        "convention": CONVENTION,
        "result": result,
        "exit_code": code,
        "timing": {"seconds": round(seconds, 6)},
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    start = time.perf_counter()
    try:
        result, code, lines = args.func(args)
    except (InputError, ParseError, NonPolynomial, Infertile, NotGeneric, PoleTooHigh) as e:
        print(f"sl2pop: input error: {e}", file=sys.stderr)
        return 2
    except (RecoveryFailed, ObstructionViolated, NonConvergence) as e:
        print(f"sl2pop: limit reached: {e}", file=sys.stderr)
        return 3
    seconds = time.perf_counter() - start
    if args.format == "json":
        sys.stdout.write(render_json(args, result, code, seconds))
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    return code
