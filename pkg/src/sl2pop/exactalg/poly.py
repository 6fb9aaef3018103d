"""Dense univariate polynomials over the rationals.

Arithmetic is delegated to FLINT's ``fmpq_poly``; the class here fixes the
conventions the rest of the package relies on (immutability, Fraction
coefficients on the way out, monic gcds, exact division that refuses to
round).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import flint

__all__ = ["Poly", "X", "as_fraction"]


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, flint.fmpq):
        return Fraction(int(c.p), int(c.q))
    if isinstance(c, flint.fmpz):
        return Fraction(int(c))
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


def _fmpq(c) -> flint.fmpq:
    c = as_fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


class Poly:
    """Immutable polynomial in ``x`` with rational coefficients.

    ``Poly([c0, c1, c2])`` is ``c0 + c1*x + c2*x^2``; the zero polynomial has
    an empty coefficient list and degree -1.
    """

    __slots__ = ("_f", "_key")

    def __init__(self, coeffs=()):
        if isinstance(coeffs, flint.fmpq_poly):
            f = coeffs
        elif isinstance(coeffs, Poly):
            f = coeffs._f
        elif isinstance(coeffs, (int, Fraction, Rational)):
            f = flint.fmpq_poly([_fmpq(coeffs)])
        else:
            f = flint.fmpq_poly([_fmpq(c) for c in coeffs])
        object.__setattr__(self, "_f", f)
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- construction ------------------------------------------------------

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        out = cls([1])
        for r in roots:
            out = out * cls([-as_fraction(r), 1])
        return out

    # -- inspection --------------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        return tuple(as_fraction(c) for c in self._f.coeffs())

    @property
    def degree(self) -> int:
        return self._f.degree()

    @property
    def lc(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return as_fraction(self._f.leading_coefficient())

    def coeff(self, k: int) -> Fraction:
        if k < 0 or k > self.degree:
            return Fraction(0)
        return as_fraction(self._f[k])

    def is_zero(self) -> bool:
        return self._f.is_zero()

    def is_one(self) -> bool:
        return self._f.is_one()

    def is_constant(self) -> bool:
        return self._f.degree() <= 0

    def is_monic(self) -> bool:
        return not self.is_zero() and self.lc == 1

    def __bool__(self):
        return not self._f.is_zero()

    def to_flint(self) -> flint.fmpq_poly:
        return self._f

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Poly):
            return other._f
        if isinstance(other, (int, Fraction, Rational)):
            return flint.fmpq_poly([_fmpq(other)])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Poly(self._f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Poly(self._f - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Poly(o - self._f)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Poly(self._f * o)

    __rmul__ = __mul__

    def __neg__(self):
        return Poly(-self._f)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        return Poly(self._f ** n)

    def __truediv__(self, other):
        # division by scalars only; polynomial quotients go through exact_div
        if isinstance(other, (int, Fraction, Rational)):
            other = as_fraction(other)
            if other == 0:
                raise ZeroDivisionError("polynomial divided by zero")
            return Poly(self._f * _fmpq(1 / other))
        return NotImplemented

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = divmod(self._f, o)
        return Poly(q), Poly(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "Poly") -> bool:
        """True iff ``self`` divides ``other``."""
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    # -- calculus and composition -----------------------------------------

    def derivative(self, k: int = 1) -> "Poly":
        f = self._f
        for _ in range(k):
            f = f.derivative()
        return Poly(f)

    def antiderivative(self, c=0) -> "Poly":
        """The antiderivative with constant term ``c``."""
        return Poly(self._f.integral() + _fmpq(c))

    def compose(self, inner: "Poly") -> "Poly":
        return Poly(self._f(inner._f))

    def __call__(self, value):
        if isinstance(value, Poly):
            return self.compose(value)
        if isinstance(value, (int, Fraction, Rational)):
            return as_fraction(self._f(_fmpq(value)))
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + float(c)
        return acc

    def taylor_shift(self, s) -> "Poly":
        """``self(x + s)``."""
        return self.compose(Poly([s, 1]))

    # -- gcd and friends ---------------------------------------------------

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self / self.lc

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd (zero only when both inputs vanish)."""
        g = Poly(self._f.gcd(other._f))
        return g.monic()

    def xgcd(self, other: "Poly"):
        g, s, t = self._f.xgcd(other._f)
        g, s, t = Poly(g), Poly(s), Poly(t)
        if g.is_zero():
            return g, s, t
        lc = g.lc
        return g / lc, s / lc, t / lc

    def content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive."""
        if self.is_zero():
            return Fraction(0)
        from math import gcd, lcm

        cs = self.coeffs
        den = 1
        for c in cs:
            den = lcm(den, c.denominator)
        num = 0
        for c in cs:
            num = gcd(num, (c * den).numerator)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        if self.is_zero():
            return self
        p = self / self.content()
        return -p if p.lc < 0 else p

    def integer_coeffs(self) -> list:
        return [int(c) for c in self.primitive().coeffs]

    def squarefree_decomposition(self) -> list:
        """Yun's algorithm: ``[(a_1, 1), (a_2, 2), ...]`` with monic, pairwise
        coprime, squarefree ``a_k`` and ``monic(self) = prod a_k^k``.

        Trivial factors are omitted.
        """
        if self.degree <= 0:
            return []
        f = self.monic()
        out = []
        df = f.derivative()
        a = f.gcd(df)
        b = f.exact_div(a)
        c = df.exact_div(a) - b.derivative()
        k = 1
        while not b.is_constant():
            d = b.gcd(c)
            if not d.is_constant():
                out.append((d, k))
            b = b.exact_div(d)
            c = c.exact_div(d) - b.derivative()
            k += 1
        return out

    def squarefree_part(self) -> "Poly":
        out = Poly([1])
        for a, _ in self.squarefree_decomposition():
            out = out * a
        return out

    def is_squarefree(self) -> bool:
        if self.degree <= 0:
            return True
        return self.gcd(self.derivative()).is_one()

    def split_power(self, base: "Poly"):
        """Largest ``f`` dividing ``self`` whose roots are all roots of
        ``base``; returns ``(f, self / f)``. Uses iterated gcds only."""
        s = base.squarefree_part() if base.degree > 0 else Poly([1])
        f = Poly([1])
        rest = self
        if s.degree <= 0:
            return f, rest
        while True:
            g = rest.gcd(s)
            if g.degree <= 0:
                return f, rest
            f = f * g
            rest = rest.exact_div(g)

    # -- comparison, hashing, printing -------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._f == other._f
        if isinstance(other, (int, Fraction, Rational)):
            return self._f == flint.fmpq_poly([_fmpq(other)])
        return NotImplemented

    def __hash__(self):
        if self._key is None:
            object.__setattr__(self, "_key", hash(self.coeffs))
        return self._key

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        return format_poly(self)


def _fmt_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly, var: str = "x") -> str:
    """Canonical text form, highest power first: ``3/2*x^4 - x + 5``."""
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if k == 0:
            body = _fmt_coeff(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        parts.append((sign, body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


X = Poly([0, 1])
