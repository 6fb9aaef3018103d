"""Pairs of polynomials, reproduction and populations.

A pair ``y = (y0, y1)`` is read together with data ``T = (T0, T1)``.  Both
are stored monic.  Reproduction in direction ``i`` replaces ``y_i`` by a
solution of ``Wr(y_i, ỹ) = T_i * y_{i+1}^2``; the solutions form the line
``ỹ* + c*y_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import NoSolution, Poly, as_fraction, roots_numeric, wronskian2

__all__ = [
    "TPair", "PolyPair", "WeightVector", "ReproductionStep", "PopulationNode",
    "GenericityReport", "ReproductionFamily", "Infertile", "NotGeneric",
    "NotSuperFertile", "NotPolynomial",
    "is_generic", "solve_reproduction", "reproduction_family", "is_fertile", "is_critical",
    "reproduce", "replay", "enumerate_population", "wronskian_scalar",
    "weights_from_t", "weyl_degree_predict", "bethe_residuals",
    "multiply_pair", "normalize_superfertile", "repeated_root_measure", "word_pairs",
]


class Infertile(ValueError):
    """The Wronskian equation has no polynomial solution."""


class NotGeneric(ValueError):
    pass


class NotSuperFertile(ValueError):
    pass


class NotPolynomial(ValueError):
    pass


def _poly(p) -> Poly:
    return p if isinstance(p, Poly) else Poly([p])


@dataclass(frozen=True)
class TPair:
    T0: Poly
    T1: Poly

    def __post_init__(self):
        t0, t1 = _poly(self.T0), _poly(self.T1)
        if t0.is_zero() or t1.is_zero():
            raise ValueError("T0 and T1 must be nonzero")
        object.__setattr__(self, "T0", t0.monic())
        object.__setattr__(self, "T1", t1.monic())

    @property
    def P(self) -> Poly:
        return self.T0 * self.T1

    def __getitem__(self, i: int) -> Poly:
        return self.T0 if i % 2 == 0 else self.T1

    def __iter__(self):
        return iter((self.T0, self.T1))

    def swapped(self) -> "TPair":
        return TPair(self.T1, self.T0)

    def __str__(self):
        return f"({self.T0}, {self.T1})"


@dataclass(frozen=True)
class PolyPair:
    y0: Poly
    y1: Poly

    def __post_init__(self):
        a, b = _poly(self.y0), _poly(self.y1)
        if a.is_zero() or b.is_zero():
            raise ValueError("pair components must be nonzero")
        object.__setattr__(self, "y0", a.monic())
        object.__setattr__(self, "y1", b.monic())

    def __getitem__(self, i: int) -> Poly:
        return self.y0 if i % 2 == 0 else self.y1

    # indices wrap mod 2, so iteration needs its own stop
    def __iter__(self):
        return iter((self.y0, self.y1))

    def replace(self, i: int, p: Poly) -> "PolyPair":
        return PolyPair(p, self.y1) if i % 2 == 0 else PolyPair(self.y0, p)

    def swapped(self) -> "PolyPair":
        return PolyPair(self.y1, self.y0)

    @property
    def degrees(self) -> tuple:
        return (self.y0.degree, self.y1.degree)

    def __str__(self):
        return f"({self.y0}, {self.y1})"


ONE = PolyPair(Poly([1]), Poly([1]))


@dataclass(frozen=True)
class WeightVector:
    """Coordinates of a weight in the basis (ω0, ω1, δ)."""

    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    cd: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("c0", "c1", "cd"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))

    def __add__(self, o):
        return WeightVector(self.c0 + o.c0, self.c1 + o.c1, self.cd + o.cd)

    def __sub__(self, o):
        return WeightVector(self.c0 - o.c0, self.c1 - o.c1, self.cd - o.cd)

    def __mul__(self, k):
        return WeightVector(self.c0 * k, self.c1 * k, self.cd * k)

    __rmul__ = __mul__

    def pairing(self, i: int) -> Fraction:
        """``<Λ, α_i^∨>``; δ pairs to zero with both coroots."""
        return self.c0 if i == 0 else self.c1

    def reflect(self, i: int) -> "WeightVector":
        return self - self.pairing(i) * ALPHA[i]

    def shifted_reflect(self, i: int) -> "WeightVector":
        """``s_i·Λ = s_i(Λ + ρ) - ρ``."""
        return (self + RHO).reflect(i) - RHO


OMEGA0 = WeightVector(1, 0, 0)
OMEGA1 = WeightVector(0, 1, 0)
DELTA = WeightVector(0, 0, 1)
RHO = OMEGA0 + OMEGA1 + DELTA
ALPHA = (DELTA - (OMEGA1 * 2 - OMEGA0 * 2), OMEGA1 * 2 - OMEGA0 * 2)


def weights_from_t(t: TPair) -> list:
    """Weights per squarefree factor: a factor ``a`` of multiplicity ``k`` in
    ``T0`` contributes ``k*deg(a)*ω0`` (and likewise ``ω1`` for ``T1``)."""
    out = [WeightVector(k * a.degree, 0, 0) for a, k in t.T0.squarefree_decomposition()]
    out += [WeightVector(0, k * a.degree, 0) for a, k in t.T1.squarefree_decomposition()]
    return out


def _total_weight(weights, degs) -> WeightVector:
    lam = WeightVector()
    for w in weights:
        lam = lam + w
    return lam - ALPHA[0] * degs[0] - ALPHA[1] * degs[1]


def weyl_degree_predict(weights, degs, direction: int) -> tuple:
    """Degrees forced by ``s_i·`` on ``Σμ - d0 α0 - d1 α1``."""
    lam = _total_weight(weights, degs).shifted_reflect(direction)
    # recover (d0, d1) from the δ and ω1 coordinates
    mu = _total_weight(weights, (0, 0))
    d0 = mu.cd - lam.cd
    d1 = (mu.c1 - lam.c1 + 2 * d0) / 2
    if d0.denominator != 1 or d1.denominator != 1:
        raise ValueError("predicted degrees are not integers")
    return (int(d0), int(d1))


@dataclass(frozen=True)
class ReproductionStep:
    direction: int
    constant: Fraction = Fraction(0)
    lower: bool = False  # the new component has smaller degree than the old one

    def __post_init__(self):
        if self.direction not in (0, 1):
            raise ValueError("direction must be 0 or 1")
        object.__setattr__(self, "constant", as_fraction(self.constant))

    def __str__(self):
        return f"r{self.direction}({self.constant})"


@dataclass(frozen=True)
class PopulationNode:
    pair: PolyPair
    tdata: TPair
    word: tuple = ()
    root: PolyPair = ONE
    scalars: tuple = ()  # Wr(old y_i, new y_i) = scalar * T_i * y_{i+1}^2 per step


@dataclass(frozen=True)
class GenericityReport:
    generic: bool
    failures: tuple = ()  # (name, gcd) pairs

    def __bool__(self):
        return self.generic


def is_generic(pair: PolyPair, t: TPair) -> GenericityReport:
    checks = [
        ("gcd(y0,y0')", pair.y0, pair.y0.derivative()),
        ("gcd(y1,y1')", pair.y1, pair.y1.derivative()),
        ("gcd(y0,y1)", pair.y0, pair.y1),
        ("gcd(y0,T0)", pair.y0, t.T0),
        ("gcd(y1,T1)", pair.y1, t.T1),
    ]
    failures = []
    for name, a, b in checks:
        if a.degree <= 0:
            continue
        g = a.gcd(b)
        if g.degree > 0:
            failures.append((name, g))
    return GenericityReport(not failures, tuple(failures))


@dataclass(frozen=True)
class ReproductionFamily:
    """Solutions ``particular + c*direction`` of ``Wr(direction, ·) = W``."""

    particular: Poly
    direction: Poly

    def member(self, c) -> Poly:
        return self.particular + self.direction * as_fraction(c)


def solve_reproduction(y: Poly, W: Poly) -> ReproductionFamily:
    """Solve ``Wr(y, ỹ) = W`` for a polynomial ``ỹ``.

    The map ``x^k -> Wr(y, x^k)`` has leading term ``(k - deg y)*lc(y)*x^(k+deg y-1)``,
    so the system is triangular.  The returned particular solution has zero
    coefficient at ``x^deg y``; raises ``NoSolution`` if none exists.
    """
    if y.is_zero() or W.is_zero():
        raise ValueError("solve_reproduction needs nonzero y and W")
    d = y.degree
    ys = y.coeffs
    bound = max(W.degree + 1 - d, d)
    res = {k: c for k, c in enumerate(W.coeffs) if c}
    sol = [Fraction(0)] * (bound + 1)
    lc = ys[-1]
    for k in range(bound, -1, -1):
        if k == d:
            continue
        e = k + d - 1
        r = res.get(e, 0)
        if e < 0 or not r:
            continue
        c = r / (lc * (k - d))
        sol[k] = c
        # subtract c * Wr(y, x^k) = c * sum_i y_i (k - i) x^(i+k-1)
        for i, yi in enumerate(ys):
            if yi and k != i:
                idx = i + k - 1
                v = res.get(idx, 0) - c * yi * (k - i)
                if v:
                    res[idx] = v
                else:
                    res.pop(idx, None)
    if res:
        raise NoSolution(f"Wr({y}, ·) = {W} has no polynomial solution")
    return ReproductionFamily(Poly(sol), y)


def reproduction_family(pair: PolyPair, t: TPair, i: int) -> ReproductionFamily:
    W = t[i] * pair[i + 1] ** 2
    try:
        return solve_reproduction(pair[i], W)
    except NoSolution as e:
        raise Infertile(f"pair {pair} is not fertile in direction {i}") from e


def is_fertile(pair: PolyPair, t: TPair, direction=None) -> bool:
    dirs = (0, 1) if direction is None else (direction,)
    try:
        for i in dirs:
            reproduction_family(pair, t, i)
    except Infertile:
        return False
    return True


def is_critical(pair: PolyPair, t: TPair) -> bool:
    return bool(is_generic(pair, t)) and is_fertile(pair, t)


def wronskian_scalar(old: Poly, new: Poly, W: Poly) -> Fraction:
    """``κ`` with ``Wr(old, new) = κ*W``; raises if not proportional."""
    w = wronskian2(old, new)
    if W.is_zero() or w.is_zero():
        raise ArithmeticError("degenerate Wronskian certificate")
    k = w.lc / W.lc
    if w != W * k:
        raise ArithmeticError(f"Wr({old}, {new}) is not a multiple of {W}")
    return k


def reproduce(node: PopulationNode, step: ReproductionStep) -> PopulationNode:
    i = step.direction
    pair, t = node.pair, node.tdata
    fam = reproduction_family(pair, t, i)
    raw = fam.member(step.constant)
    new = raw.monic()
    lower = new.degree < pair[i].degree
    step = ReproductionStep(i, step.constant, lower)
    return PopulationNode(
        pair=pair.replace(i, new),
        tdata=t,
        word=node.word + (step,),
        root=node.root,
        scalars=node.scalars + (1 / raw.lc,),
    )


def replay(root: PolyPair, t: TPair, word) -> PopulationNode:
    node = PopulationNode(root, t, (), root)
    for step in word:
        node = reproduce(node, step)
    return node


def enumerate_population(t: TPair, depth: int, constants=(0, 1)) -> list:
    """Nodes reachable from ``(1, 1)`` by alternating words of length at most
    ``depth`` with constants from ``constants``; one node per distinct pair."""
    root = PopulationNode(ONE, t)
    seen = {ONE: root}
    frontier = [root]
    for _ in range(depth):
        nxt = []
        for node in frontier:
            last = node.word[-1].direction if node.word else None
            for i in (0, 1):
                if i == last:
                    continue
                for c in constants:
                    child = reproduce(node, ReproductionStep(i, c))
                    if child.pair not in seen:
                        seen[child.pair] = child
                        nxt.append(child)
        frontier = nxt
    return list(seen.values())


def bethe_residuals(pair: PolyPair, t: TPair, tol=1e-12) -> float:
    """Largest absolute left-hand side of the Bethe ansatz equations at the
    numerically located roots of ``y0`` and ``y1``."""
    rep = is_generic(pair, t)
    if not rep:
        raise NotGeneric(f"pair is not generic: {[n for n, _ in rep.failures]}")
    s = roots_numeric(pair.y0, tol) if pair.y0.degree > 0 else []
    u = roots_numeric(pair.y1, tol) if pair.y1.degree > 0 else []
    dT = (t.T0.derivative(), t.T1.derivative())
    worst = 0.0
    for own, other, i in ((s, u, 0), (u, s, 1)):
        for a, r in enumerate(own):
            v = sum(1 / (r - r2) for b, r2 in enumerate(own) if b != a)
            v -= sum(1 / (r - r2) for r2 in other)
            v -= dT[i](r) / (2 * t[i](r))
            worst = max(worst, abs(v))
    return worst


def multiply_pair(pair: PolyPair, t: TPair, f0: Poly, f1: Poly):
    """``((f0 y0, f1 y1), (T0 f0²/f1², T1 f1²/f0²))``."""
    f0, f1 = _poly(f0).monic(), _poly(f1).monic()
    try:
        T0 = (t.T0 * f0 ** 2).exact_div(f1 ** 2)
        T1 = (t.T1 * f1 ** 2).exact_div(f0 ** 2)
    except ArithmeticError as e:
        raise NotPolynomial("T0 f0²/f1² or T1 f1²/f0² is not a polynomial") from e
    return PolyPair(pair.y0 * f0, pair.y1 * f1), TPair(T0, T1)


def repeated_root_measure(p: Poly) -> int:
    """``deg p - deg sqfree(p)``: zero iff ``p`` is squarefree."""
    return p.degree - p.squarefree_part().degree if p.degree > 0 else 0


def _high_part(p: Poly) -> Poly:
    """Product of ``(x - z)^ord`` over roots of order at least 2."""
    out = Poly([1])
    for a, k in p.squarefree_decomposition():
        if k >= 2:
            out = out * a ** k
    return out


def normalize_superfertile(pair0: PolyPair, t0: TPair, max_constant: int = 64):
    """Write ``pair0 = (f0 y0, f1 y1)`` with ``y`` in a population for ``T``.

    Returns ``(f0, f1, y, T)``.  Generic reproductions first bring the pair
    to a point where no reproduction raises a root order above 1; there
    ``f_i`` is the part of ``ŷ_i`` living on the zeros of ``ŷ_{i+1} T_i°``.
    """
    hat = pair0
    budget = repeated_root_measure(hat.y0) + repeated_root_measure(hat.y1) + 2
    for _ in range(budget + 1):
        moved = False
        for i in (0, 1):
            try:
                fam = reproduction_family(hat, t0, i)
            except Infertile as e:
                raise NotSuperFertile(str(e)) from e
            high = _high_part(hat[i])
            if high.divides(fam.particular):
                continue
            before = repeated_root_measure(hat[i])
            for c in range(max_constant):
                cand = fam.member(c)
                if not cand.is_zero() and repeated_root_measure(cand) < before:
                    hat = hat.replace(i, cand.monic())
                    moved = True
                    break
            else:
                raise NotSuperFertile("no reproduction lowers the repeated roots")
        if not moved:
            break
    else:
        raise NotSuperFertile("reduction did not stabilise")
    f = []
    for i in (0, 1):
        fi, _ = hat[i].split_power(hat[i + 1] * t0[i])
        f.append(fi)
    try:
        y = PolyPair(pair0.y0.exact_div(f[0]), pair0.y1.exact_div(f[1]))
    except ArithmeticError as e:
        raise NotSuperFertile("the extracted factors do not divide the input pair") from e
    try:
        T0 = (t0.T0 * f[1] ** 2).exact_div(f[0] ** 2)
        T1 = (t0.T1 * f[0] ** 2).exact_div(f[1] ** 2)
    except ArithmeticError as e:
        raise NotPolynomial("normalized data is not polynomial") from e
    t = TPair(T0, T1)
    if not is_fertile(y, t):
        raise NotSuperFertile("normalized pair is not fertile")
    return f[0], f[1], y, t


def word_pairs(node: PopulationNode) -> list:
    """The pairs visited while replaying ``node.word`` from its root."""
    cur = PopulationNode(node.root, node.tdata, (), node.root)
    out = [cur.pair]
    for step in node.word:
        cur = reproduce(cur, step)
        out.append(cur.pair)
    return out
