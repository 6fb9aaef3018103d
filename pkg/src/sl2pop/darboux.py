"""Darboux transformations and the way back from operators to pairs.

For ``ψ`` in the kernel of ``L = P^{-1}(∂² - U)`` put ``h = ln'(√P ψ)``; the
transformed potential is ``h² - h'``.  Kernel elements of λ-monodromy free
operators are ``F/√R`` with ``F`` a polynomial and ``R`` the product of
``q^{2m}`` over pole classes, so everything stays rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .exactalg import NoSolution, Poly, RationalFunction, X, linear_solve, logderiv
from .operators import (
    KernelChoice, SchrodingerOp, from_pair, is_lambda_mf, kernel_basis,
    poles_and_exponents,
)
from .populations import ONE, PolyPair, ReproductionStep, TPair, is_generic, reproduce, PopulationNode, reproduction_family

__all__ = [
    "NotInKernel", "ObstructionViolated", "RecoveryFailed", "NotXk", "NotLambdaMF",
    "DarbouxWord", "ReductionStep", "ExponentRow", "Classification", "IntertwinerReport",
    "darboux_potential", "darboux_pair", "coprime_classes", "order_along",
    "exponent_table", "kernel_exponents", "predicted_exponents", "exponents_agree",
    "kernel_weight", "kernel_polys", "reduce_exponents", "recover_line", "line_key",
    "classify_xk", "canonical_xk", "intertwiner_check", "intertwiner_identity",
    "xk_m_from_exponent", "build_word",
]


class NotInKernel(ValueError):
    pass


class ObstructionViolated(ValueError):
    """A modified exponent at a zero of P lies in -1/2 + (k/2+1)Z_{>0}."""


class RecoveryFailed(RuntimeError):
    pass


class NotXk(ValueError):
    pass


class NotLambdaMF(ValueError):
    pass


HALF = Fraction(1, 2)


def darboux_potential(op: SchrodingerOp, h: RationalFunction) -> SchrodingerOp:
    """``L^ψ`` for ``h = ln'(√P ψ)``; checks that ``ψ`` solves ``Lψ = 0``."""
    g = h - logderiv(op.P) * HALF
    if g * g + g.derivative() != op.U:
        raise NotInKernel("h does not come from a kernel element of the operator")
    return SchrodingerOp(op.P, h * h - h.derivative())


def _h_of(op_P: Poly, F: Poly, R: Poly) -> RationalFunction:
    """``ln'(√P F/√R)``."""
    return logderiv(F) + (logderiv(op_P) - logderiv(R)) * HALF


def darboux_pair(pair: PolyPair, t: TPair, j: int, choice: KernelChoice):
    """Darboux transformation of ``L_j(pair, t)`` at pair level.

    The kernel element is ``(c1 ỹ_j + c2 y_j)/(√T_j y_{j+1})``.  The result
    ``(pair', t')`` satisfies ``from_pair(pair', t', j) = L_j(pair, t)^ψ``;
    this identity is checked against :func:`darboux_potential`.
    """
    frame = kernel_basis(pair, t, j)
    w = frame.numerator(choice)
    if j == 1:
        new_pair, new_t = PolyPair(w, pair.y0), t.swapped()
    else:
        new_pair, new_t = PolyPair(pair.y1, w), t.swapped()
    op = from_pair(pair, t, j)
    h = frame.logderiv(choice) + logderiv(t.P) * HALF
    expected = darboux_potential(op, h)
    got = from_pair(new_pair, new_t, j)
    if got != expected:
        raise ArithmeticError("pair-level and potential-level Darboux disagree")
    return new_pair, new_t


@dataclass(frozen=True)
class DarbouxWord:
    """Successive pair-level Darboux steps on ``L_1``-forms."""

    start_pair: PolyPair
    start_t: TPair
    choices: tuple
    snapshots: tuple = ()  # (pair, t) after each step

    def replay(self):
        pair, t = self.start_pair, self.start_t
        for c in self.choices:
            pair, t = darboux_pair(pair, t, 1, c)
        return pair, t

    def operator(self) -> SchrodingerOp:
        pair, t = self.replay()
        return from_pair(pair, t, 1)

    def __len__(self):
        return len(self.choices)


def build_word(pair: PolyPair, t: TPair, choices) -> DarbouxWord:
    snaps = []
    cur = (pair, t)
    for c in choices:
        cur = darboux_pair(cur[0], cur[1], 1, c)
        snaps.append(cur)
    return DarbouxWord(pair, t, tuple(choices), tuple(snaps))


# -- exponent bookkeeping ----------------------------------------------------

def order_along(p: Poly, q: Poly) -> int:
    """Largest ``k`` with ``q^k | p`` (``q`` nonconstant squarefree)."""
    if p.is_zero():
        raise ValueError("order of the zero polynomial")
    k = 0
    while q.divides(p):
        p = p.exact_div(q)
        k += 1
    return k


def coprime_classes(polys) -> list:
    """Pairwise coprime squarefree monic polynomials whose roots are the roots
    of ``polys`` and along which every input has a constant order."""
    classes = []
    for p in polys:
        if p.degree < 1:
            continue
        for a, _ in p.squarefree_decomposition():
            s = a
            refined = []
            for e in classes:
                g = e.gcd(s)
                if g.degree > 0:
                    refined.append(g)
                    rest = e.exact_div(g)
                    if rest.degree > 0:
                        refined.append(rest)
                    s = s.exact_div(g)
                else:
                    refined.append(e)
            if s.degree > 0:
                refined.append(s.monic())
            classes = refined
    return classes


@dataclass(frozen=True)
class ExponentRow:
    modulus: Poly
    k: int  # order of P along the class
    m: Fraction
    mu: Fraction = None
    predicted: Fraction = None


def _m_lookup(data, c: Poly) -> Fraction:
    for d in data:
        g = d.modulus.gcd(c)
        if g.degree > 0:
            if g.degree != c.degree:
                raise ArithmeticError("exponent class straddles two data")
            return d.m
    return Fraction(0)


def exponent_table(op: SchrodingerOp, extra=()) -> list:
    """Modified exponents on classes covering the poles of ``U``, the zeros
    of ``P`` and the roots of ``extra``."""
    data = poles_and_exponents(op)
    classes = coprime_classes([d.modulus for d in data] + [op.P] + list(extra))
    return [ExponentRow(c, order_along(op.P, c), _m_lookup(data, c)) for c in classes]


def kernel_exponents(F: Poly, R: Poly, c: Poly) -> Fraction:
    """``μ`` of ``F/√R`` along the class ``c``."""
    return order_along(F, c) - Fraction(order_along(R, c), 2)


def predicted_exponents(op: SchrodingerOp, F: Poly, R: Poly) -> list:
    """Exponents of ``L^ψ`` for ``ψ = F/√R`` predicted from ``μ``:
    ``max(k/2 + μ, -1 - k/2 - μ)`` with ``k = ord P``."""
    rows = []
    for row in exponent_table(op, extra=(F, R)):
        mu = kernel_exponents(F, R, row.modulus)
        kk = Fraction(row.k, 2)
        rows.append(ExponentRow(row.modulus, row.k, row.m, mu, max(kk + mu, -1 - kk - mu)))
    return rows


def exponents_agree(new_op: SchrodingerOp, prediction) -> bool:
    data = poles_and_exponents(new_op)
    covered = Poly([1])
    for row in prediction:
        if _m_lookup(data, row.modulus) != row.predicted:
            return False
        covered = covered * row.modulus
    # any pole of the new operator must sit on a predicted class
    return all(covered.gcd(d.modulus) == d.modulus for d in data)


# -- kernels as polynomials --------------------------------------------------

def kernel_weight(op: SchrodingerOp, data=None) -> Poly:
    """``R = ∏ q^{2m}`` over pole classes."""
    if data is None:
        data = poles_and_exponents(op)
    R = Poly([1])
    for d in data:
        R = R * d.modulus ** int(2 * d.m)
    return R


def _infinity_exponent(op: SchrodingerOp) -> Fraction:
    """Largest real ``a`` with ``a(a-1) = lim x²U`` (rounded down)."""
    U = op.U
    u = Fraction(0)
    if not U.is_zero() and U.num.degree == U.den.degree - 2:
        u = U.num.lc / U.den.lc
    disc = 1 + 4 * u
    if disc < 0:
        return Fraction(0)
    n, d = disc.numerator, disc.denominator
    # floor of sqrt(n/d), exact when disc is a rational square
    r = Fraction(isqrt(n * d), d)
    return (1 + r) / 2


def kernel_polys(op: SchrodingerOp, R: Poly, max_degree: int = None) -> list:
    """Basis of polynomials ``F`` with ``F/√R`` in the kernel of ``L``.

    ``F`` solves ``F'' - 2rF' + (r² - r' - U)F = 0`` with ``r = R'/(2R)``; the
    degree bound comes from the exponent of ``L`` at infinity.
    """
    r = logderiv(R) * HALF
    c0 = r * r - r.derivative() - op.U
    c1 = r * (-2)
    den = c0.den
    g = den.gcd(c1.den)
    den = den * c1.den.exact_div(g)
    A2 = den
    A1 = (c1 * RationalFunction(den)).num
    A0 = (c0 * RationalFunction(den)).num
    if max_degree is None:
        a = _infinity_exponent(op) + Fraction(R.degree, 2)
        max_degree = int(a.numerator // a.denominator)
    if max_degree < 0:
        return []
    cols = []
    X1 = Poly([0, 1])
    for k in range(max_degree + 1):
        mono = X1 ** k
        col = A2 * mono.derivative(2) + A1 * mono.derivative() + A0 * mono
        cols.append(col)
    rows = max(c.degree for c in cols) + 1
    if rows <= 0:
        return _echelon([X1 ** k for k in range(max_degree + 1)])
    matrix = [[c.coeff(i) for c in cols] for i in range(rows)]
    basis = linear_solve(matrix).nullspace
    out = []
    for v in basis:
        out.append(Poly(list(v)).monic())
    return _echelon(out)


def _echelon(polys) -> list:
    """Reduced echelon basis (by descending degree) of the span."""
    vecs = [p for p in polys if not p.is_zero()]
    basis = []
    for p in vecs:
        for b in basis:
            p = p - b * p.coeff(b.degree)
        if not p.is_zero():
            p = p.monic()
            basis = [b - p * b.coeff(p.degree) for b in basis]
            basis.append(p)
    return sorted(basis, key=lambda b: -b.degree)


def _generic_combo(basis, avoid: Poly, limit: int = 256) -> Poly:
    """First ``b0 + c*b1`` (c = 0, 1, ...) coprime to ``avoid``, then ``b1``."""
    if len(basis) != 2:
        raise RecoveryFailed(f"kernel has {len(basis)} polynomial solutions, expected 2")
    b0, b1 = basis
    for c in range(limit):
        F = b0 + b1 * c
        if avoid.degree < 1 or F.gcd(avoid).degree == 0:
            return F
    if avoid.degree < 1 or b1.gcd(avoid).degree == 0:
        return b1
    raise RecoveryFailed("no generic kernel element found")


# -- reduction and recovery --------------------------------------------------

@dataclass(frozen=True)
class ReductionStep:
    before: SchrodingerOp
    F: Poly
    R: Poly
    after: SchrodingerOp


def _in_range(table) -> bool:
    for row in table:
        if row.k == 0:
            if row.m not in (0, 1):
                return False
        elif row.m > Fraction(row.k, 2):
            return False
    return True


def _check_obstruction(table):
    for row in table:
        if row.k > 0:
            step = Fraction(row.k, 2) + 1
            q = (row.m + HALF) / step
            if q > 0 and q.denominator == 1:
                raise ObstructionViolated(f"m = {row.m} at roots of {row.modulus} (k = {row.k})")


def reduce_exponents(op: SchrodingerOp, max_steps: int = 200):
    """Generic Darboux steps until every pole off ``P`` has ``m ∈ {0, 1}`` and
    every zero of ``P`` of order ``k`` has ``m ≤ k/2``.

    A generic step lowers a positive ``m`` by one off ``P``, sends ``m`` to
    ``k/2 - m`` at a zero of ``P`` and puts ``m = 1`` at the zeros of ``ψ``.

    Returns ``(reduced op, steps)``.
    """
    steps = []
    for _ in range(max_steps):
        table = exponent_table(op)
        _check_obstruction(table)
        if _in_range(table):
            return op, tuple(steps)
        R = kernel_weight(op)
        avoid = (op.U.den * op.P).squarefree_part()
        F = _generic_combo(kernel_polys(op, R), avoid)
        new = darboux_potential(op, _h_of(op.P, F, R))
        steps.append(ReductionStep(op, F, R, new))
        op = new
    raise RecoveryFailed("exponent reduction did not terminate")


def _base_pair(op: SchrodingerOp):
    """``((y0, F), (P/T1, T1))`` for a reduced operator: ``y0`` collects the
    poles off ``P`` (all with ``m = 1``), ``T1`` collects ``q^{2m}`` at the
    zeros of ``P`` and ``F`` is a generic kernel polynomial."""
    T1 = Poly([1])
    y0 = Poly([1])
    for row in exponent_table(op):
        if row.k > 0:
            T1 = T1 * row.modulus ** int(2 * row.m)
        elif row.m == 1:
            y0 = y0 * row.modulus
    t = TPair(op.P.exact_div(T1), T1)
    basis = kernel_polys(op, T1 * y0 ** 2)
    if len(basis) != 2:
        raise RecoveryFailed(f"base operator has {len(basis)} kernel polynomials")
    b0, b1 = basis
    for c in range(256):
        pair = PolyPair(y0, b0 + b1 * c)
        if is_generic(pair, t):
            break
    else:
        raise RecoveryFailed("no generic kernel element at the base")
    if from_pair(pair, t, 1) != op:
        raise RecoveryFailed("base pair does not reproduce the reduced operator")
    return pair, t


def _undo_choice(pair: PolyPair, t: TPair, step: ReductionStep) -> KernelChoice:
    """Kernel choice on ``L_1(pair, t)`` whose Darboux transform is ``step.before``."""
    frame = kernel_basis(pair, t, 1)
    target = (
        logderiv(pair.y0) + logderiv(t.T1) * HALF + logderiv(step.R) * HALF
        - logderiv(t.P) * HALF - logderiv(step.F)
    )
    A, B = target.num, target.den
    cols = [frame.ytilde.derivative() * B - frame.ytilde * A, frame.y.derivative() * B - frame.y * A]
    rows = max(c.degree for c in cols) + 1
    if rows <= 0:
        raise RecoveryFailed("degenerate inverse Darboux step")
    sol = linear_solve([[c.coeff(i) for c in cols] for i in range(rows)])
    if len(sol.nullspace) != 1:
        raise RecoveryFailed("inverse Darboux kernel element is not unique")
    c1, c2 = sol.nullspace[0]
    return KernelChoice(c1, c2)


def recover_line(op: SchrodingerOp):
    """``(pair, t, word)`` with ``from_pair(pair, t, 1) = op``.

    ``word`` is the pair-level Darboux word from the reduced base operator.
    Raises ``NotLambdaMF`` when the input fails the determinant test.
    """
    if not is_lambda_mf(op):
        raise NotLambdaMF("operator is not λ-monodromy free")
    base, steps = reduce_exponents(op)
    pair, t = _base_pair(base)
    start = (pair, t)
    choices = []
    for step in reversed(steps):
        choice = _undo_choice(pair, t, step)
        pair, t = darboux_pair(pair, t, 1, choice)
        if from_pair(pair, t, 1) != step.before:
            raise RecoveryFailed("replayed Darboux step does not match")
        choices.append(choice)
    word = DarbouxWord(start[0], start[1], tuple(choices))
    return pair, t, word


def line_key(pair: PolyPair, t: TPair):
    """``(y0, T, span{y1, ỹ1})`` in canonical form; equal keys mean the same
    line of direction-1 reproductions."""
    frame = kernel_basis(pair, t, 1)
    return (pair.y0, t, tuple(_echelon([frame.y, frame.ytilde])))


# -- P = x^k -----------------------------------------------------------------

def xk_m_from_exponent(k: int, m0) -> Fraction:
    """The ``m ≤ k/4`` with ``m0 - m`` or ``m0 - (k/2 - m)`` in ``(k/2+1)Z≥0``."""
    step = Fraction(k, 2) + 1
    found = []
    for twice in range(0, k // 2 + 1):
        m = Fraction(twice, 2)
        if m > Fraction(k, 4):
            break
        for base in (m, Fraction(k, 2) - m):
            q = (m0 - base) / step
            if q >= 0 and q.denominator == 1:
                found.append(m)
                break
    if len(found) != 1:
        raise ObstructionViolated(f"no unique canonical m for m0 = {m0}, k = {k}")
    return found[0]


def canonical_xk(k: int, m) -> tuple:
    """``((1,1), (x^{k-2m}, x^{2m}))``, whose ``L_1`` is ``x^{-k}(∂² - m(m+1)/x²)``."""
    m = Fraction(m)
    return ONE, TPair(X ** (k - int(2 * m)), X ** int(2 * m))


@dataclass(frozen=True)
class Classification:
    k: int
    m: Fraction
    m0: Fraction
    word: DarbouxWord
    pair: PolyPair
    tdata: TPair
    reproductions: tuple


def _descend(pair: PolyPair, t: TPair, limit: int = 500) -> list:
    """Pairs from ``pair`` down to ``(1, 1)`` taking lower-degree
    reproductions."""
    path = [pair]
    cur = pair
    for _ in range(limit):
        if cur == ONE:
            return path
        moved = False
        for i in (0, 1):
            fam = reproduction_family(cur, t, i)
            low = fam.particular
            if not low.is_zero() and low.degree < cur[i].degree:
                cur = cur.replace(i, low)
                path.append(cur)
                moved = True
                break
        if not moved:
            raise RecoveryFailed(f"descent stuck at {cur}")
    raise RecoveryFailed("descent did not reach (1, 1)")


def _ascending_steps(path, t: TPair) -> list:
    """Reproduction steps climbing ``path`` (given top-down) from ``(1, 1)``."""
    steps = []
    node = PopulationNode(path[-1], t, (), path[-1])
    for target in reversed(path[:-1]):
        i = 0 if target.y0 != node.pair.y0 else 1
        fam = reproduction_family(node.pair, t, i)
        y = node.pair[i]
        # target_i = (ỹ* + c y)/lc with ỹ* vanishing at x^{deg y}
        alpha = target[i].coeff(fam.particular.degree) if fam.particular.degree > y.degree else None
        if alpha is None or alpha == 0:
            raise RecoveryFailed("ascending step is not a reproduction")
        c = target[i].coeff(y.degree) * fam.particular.lc
        node = reproduce(node, ReproductionStep(i, c))
        if node.pair != target:
            raise RecoveryFailed("ascending reproduction does not hit the target")
        steps.append(node.word[-1])
    return steps


def classify_xk(op: SchrodingerOp) -> Classification:
    """Canonical ``m`` and a Darboux word from ``x^{-k}(∂² - m(m+1)/x²)`` to ``op``."""
    P = op.P
    k = P.degree
    if P != X ** k:
        raise NotXk(f"P = {P} is not a power of x")
    if not is_lambda_mf(op):
        raise NotLambdaMF("operator is not λ-monodromy free")
    m0 = Fraction(0)
    for d in poles_and_exponents(op):
        if d.modulus(Fraction(0)) == 0:
            m0 = d.m
    m = xk_m_from_exponent(k, m0)
    pair, t, _ = recover_line(op)
    start_pair, start_t = canonical_xk(k, m)
    path = _descend(pair, t)
    steps = _ascending_steps(path, t)
    choices = []
    if t != start_t:
        if t != start_t.swapped():
            raise RecoveryFailed(f"recovered data {t} does not match m = {m}")
        choices.append(KernelChoice(0, 1))
    pending = None
    for s in steps:
        if s.direction == 1:
            pending = s.constant
            continue
        choices.append(KernelChoice(0, 1) if pending is None else KernelChoice(1, pending))
        pending = None
        choices.append(KernelChoice(1, s.constant))
    word = build_word(start_pair, start_t, choices)
    if word.operator() != op:
        raise RecoveryFailed("classification word does not reproduce the operator")
    return Classification(k, m, m0, word, pair, t, tuple(steps))


# -- intertwining ------------------------------------------------------------

@dataclass(frozen=True)
class IntertwinerReport:
    ok: bool
    failures: tuple

    def __bool__(self):
        return self.ok


def intertwiner_identity(op: SchrodingerOp, g: RationalFunction, new_U: RationalFunction, q: RationalFunction) -> bool:
    """``L^ψ D_ψ f = D_ψ L f`` for ``f = qψ``, ``g = ln'ψ``, after cancelling
    the common factor ``ψ/√P``."""
    Pinv = RationalFunction(Poly([1]), op.P)
    kk = g - logderiv(op.P) * HALF
    r = q.derivative()
    r1 = r.derivative()
    lhs = Pinv * (r1.derivative() + kk * r1 * 2 + (kk.derivative() + kk * kk - new_U) * r)
    rhs = (Pinv * (q.derivative().derivative() + q.derivative() * g * 2)).derivative()
    return lhs == rhs


def intertwiner_check(pair: PolyPair, t: TPair, j: int, choice: KernelChoice) -> IntertwinerReport:
    """Check the intertwining identity for the Darboux step on ``L_j(pair, t)``
    on the test functions ``ψ``, the other kernel element, ``xψ`` and ``x`` times
    the other kernel element."""
    op = from_pair(pair, t, j)
    frame = kernel_basis(pair, t, j)
    g = frame.logderiv(choice)
    N = frame.numerator(choice)
    other = KernelChoice(1, 0) if choice.c1 == 0 else KernelChoice(0, 1)
    ratio = RationalFunction(frame.numerator(other), N)
    xr = RationalFunction(Poly([0, 1]))
    new = darboux_potential(op, g + logderiv(t.P) * HALF)
    tests = {"1": RationalFunction(Poly([1])), "ratio": ratio, "x": xr, "x*ratio": xr * ratio}
    failures = tuple(name for name, q in tests.items() if not intertwiner_identity(op, g, new.U, q))
    return IntertwinerReport(not failures, failures)
