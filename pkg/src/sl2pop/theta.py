"""The population of the trivial pair (1, 1), written through Wronskians.

``φ_1 = 1`` and ``φ_{k+1} = ∫ T_i (∫ T_{i+1} φ_k + a_k) + b_k``.  The inner
constants ``a_k`` are the genuine parameters.  An outer constant ``b_k`` adds a
multiple of ``φ_1`` to ``φ_{k+1}``, so it leaves ``θ_{k+1}`` alone; in later
``θ``'s it only moves the point inside the same family, which is reached
again by other inner constants.  ``θ_n`` is
``Wr(φ_1..φ_n) / (T_i^{a_n} T_{i-1}^{a_{n-1}})``, stored monic together with
the scalar that was divided out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactalg import Poly, as_fraction, linear_solve, NoSolution, wronskian2, wronskian_n
from .populations import PolyPair, PopulationNode, TPair

__all__ = [
    "InexactDivision", "PhiSequence", "ThetaSequence", "RecursionReport",
    "a_seq", "phi_sequence", "theta_n", "theta_raw", "theta_sequence",
    "verify_theta_recursion", "adler_moser", "compose_change_of_variables",
    "change_tdata", "theta_pair", "match_word", "ThetaMatch",
]


class InexactDivision(ArithmeticError):
    pass


def a_seq(n: int) -> int:
    """``a_{2r} = r^2`` and ``a_{2r+1} = r(r+1)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    r, odd = divmod(n, 2)
    return r * (r + 1) if odd else r * r


def _split_constants(constants, count: int) -> tuple:
    out = []
    for k in range(count):
        c = constants[k] if k < len(constants) else 0
        if isinstance(c, (tuple, list)):
            out.append((as_fraction(c[0]), as_fraction(c[1])))
        else:
            out.append((as_fraction(c), Fraction(0)))
    return tuple(out)


@dataclass(frozen=True)
class PhiSequence:
    tdata: TPair
    direction: int
    phis: tuple
    constants: tuple  # (inner, outer) per step


@lru_cache(maxsize=4096)
def _phis(t: TPair, i: int, constants: tuple) -> tuple:
    phis = [Poly([1])]
    for inner, outer in constants:
        g = (t[i + 1] * phis[-1]).antiderivative(inner)
        phis.append((t[i] * g).antiderivative(outer))
    return tuple(phis)


def phi_sequence(t: TPair, i: int, n: int, constants=()) -> PhiSequence:
    if n < 1:
        raise ValueError("n must be at least 1")
    cs = _split_constants(constants, n - 1)
    return PhiSequence(t, i, _phis(t, i, cs), cs)


@lru_cache(maxsize=4096)
def _theta_raw(t: TPair, i: int, n: int, cs: tuple) -> Poly:
    if n == 0:
        return Poly([1])
    phis = _phis(t, i, cs[: n - 1])
    w = wronskian_n(phis[:n])
    den = t[i] ** a_seq(n) * t[i - 1] ** a_seq(n - 1)
    q, r = divmod(w, den)
    if r:
        raise InexactDivision(f"theta_{n} is not a polynomial")
    return q


def theta_raw(t: TPair, i: int, n: int, constants=()) -> Poly:
    """``θ_n`` before monic normalization."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _theta_raw(t, i, n, _split_constants(constants, max(n - 1, 0)))


def theta_n(t: TPair, i: int, n: int, constants=()) -> Poly:
    return theta_raw(t, i, n, constants).monic()


@dataclass(frozen=True)
class ThetaSequence:
    tdata: TPair
    direction: int
    thetas: tuple  # monic
    scalars: tuple  # raw θ_n = scalar * thetas[n]
    constants: tuple


def theta_sequence(t: TPair, i: int, n: int, constants=()) -> ThetaSequence:
    """``θ_0 .. θ_n``."""
    cs = _split_constants(constants, max(n - 1, 0))
    raws = [_theta_raw(t, i, k, cs[: max(k - 1, 0)]) for k in range(n + 1)]
    return ThetaSequence(t, i, tuple(r.monic() for r in raws), tuple(r.lc for r in raws), cs)


@dataclass(frozen=True)
class RecursionReport:
    ok: bool
    scalars: tuple  # Wr(θ_{n-1}, θ_{n+1}) = s_n T_{n+i} θ_n^2 on the raw θ's
    failures: tuple

    def __bool__(self):
        return self.ok


def verify_theta_recursion(seq: ThetaSequence) -> RecursionReport:
    """Check ``Wr(θ_{n-1}, θ_{n+1}) = s_n T_{n+i} θ_n^2`` for every inner ``n``.

    The check runs on the un-normalized θ's, where ``s_n`` is a nonzero
    rational; ``s_n`` is reported per ``n``.
    """
    t, i = seq.tdata, seq.direction
    raw = [th * s for th, s in zip(seq.thetas, seq.scalars)]
    scalars, failures = [], []
    for n in range(1, len(raw) - 1):
        lhs = wronskian2(raw[n - 1], raw[n + 1])
        rhs = t[n + i] * raw[n] ** 2
        s = lhs.lc / rhs.lc if not lhs.is_zero() else Fraction(0)
        if s == 0 or lhs != rhs * s:
            failures.append(n)
        scalars.append(s)
    return RecursionReport(not failures, tuple(scalars), tuple(failures))


def adler_moser(n: int, constants=()) -> Poly:
    """Monic Adler-Moser polynomial: ``θ_n`` for ``T = (1, 1)``."""
    return theta_n(TPair(1, 1), 0, n, constants)


def change_tdata(t: TPair, f: Poly) -> TPair:
    """``(f' T0(f), f' T1(f))``."""
    d = f.derivative()
    return TPair(d * t.T0.compose(f), d * t.T1.compose(f))


def compose_change_of_variables(obj, f: Poly, t: TPair = None):
    """Pull a pair, node, θ sequence or list of these back along ``x -> f(x)``.

    Pairs need ``t`` to produce the new data; returns ``(pair, t)`` then.
    """
    if f.degree < 1:
        raise ValueError("change of variables needs a nonconstant f")
    if isinstance(obj, (list, tuple)):
        return [compose_change_of_variables(o, f, t) for o in obj]
    if isinstance(obj, PolyPair):
        if t is None:
            raise ValueError("pair needs its data t")
        return PolyPair(obj.y0.compose(f), obj.y1.compose(f)), change_tdata(t, f)
    if isinstance(obj, PopulationNode):
        return PopulationNode(
            PolyPair(obj.pair.y0.compose(f), obj.pair.y1.compose(f)),
            change_tdata(obj.tdata, f),
            obj.word,
            PolyPair(obj.root.y0.compose(f), obj.root.y1.compose(f)),
            (),
        )
    if isinstance(obj, ThetaSequence):
        comp = [th.compose(f) for th in obj.thetas]
        return ThetaSequence(
            change_tdata(obj.tdata, f), obj.direction,
            tuple(c.monic() for c in comp),
            tuple(s * c.lc for s, c in zip(obj.scalars, comp)),
            obj.constants,
        )
    raise TypeError(f"cannot change variables in {type(obj).__name__}")


def theta_pair(t: TPair, i: int, length: int, constants=(), f: Poly = None) -> PolyPair:
    """The pair reached by ``length`` alternating reproductions whose first
    direction is ``1 - i``: it holds ``θ_length`` and ``θ_{length+1}``, with
    ``θ_n`` in slot ``(n + i + 1) mod 2``."""
    a = theta_raw(t, i, length, constants)
    b = theta_raw(t, i, length + 1, constants)
    if f is not None:
        a, b = a.compose(f), b.compose(f)
    slots = [None, None]
    slots[(length + i + 1) % 2] = a
    slots[(length + i + 2) % 2] = b
    return PolyPair(slots[0], slots[1])


@dataclass(frozen=True)
class ThetaMatch:
    direction: int  # the θ family index i
    constants: tuple  # inner constants, one per reproduction


def match_word(pairs, t: TPair, f: Poly = None) -> ThetaMatch:
    """Find θ constants reproducing a chain of pairs.

    ``pairs[0]`` must be ``(1, 1)`` and consecutive pairs differ by one
    reproduction, alternating in direction.  With ``f`` the θ's are taken for
    ``t`` and composed with ``f``.  Raises ``NoSolution`` if some pair is not
    of θ form.
    """
    pairs = list(pairs)
    if len(pairs) < 2:
        return ThetaMatch(0, ())
    first = 0 if pairs[1].y0 != pairs[0].y0 else 1
    i = 1 - first
    constants = []
    for length in range(1, len(pairs)):
        n = length + 1
        slot = (n + i + 1) % 2
        target = pairs[length][slot]
        base = list(constants)
        th0 = theta_raw(t, i, n, base + [0])
        th1 = theta_raw(t, i, n, base + [1])
        if f is not None:
            th0, th1 = th0.compose(f), th1.compose(f)
        shift = th1 - th0
        # target = α θ(0) + β shift, constant = β/α
        size = max(th0.degree, shift.degree, target.degree) + 1
        rows = [[th0.coeff(k), shift.coeff(k)] for k in range(size)]
        sol = linear_solve(rows, [target.coeff(k) for k in range(size)])
        alpha, beta = sol.particular
        if sol.nullspace or alpha == 0:
            raise NoSolution(f"pair {pairs[length]} does not determine a θ constant")
        constants.append(beta / alpha)
        got = theta_pair(t, i, length, constants, f)
        if got != pairs[length]:
            raise NoSolution(f"pair {pairs[length]} is not a θ pair")
    return ThetaMatch(i, tuple(constants))
