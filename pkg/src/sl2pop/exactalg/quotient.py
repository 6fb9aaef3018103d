"""Residue classes in Q[t]/(q) for a squarefree modulus ``q``.

A class stands for the simultaneous values of a polynomial at every root of
``q``.  ``q`` need not be irreducible, so some nonzero classes are zero
divisors; inverting one raises :class:`SplitRequired` carrying a proper
factor of the modulus, and the caller re-runs its computation over each
factor (dynamic evaluation).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .poly import Poly, as_fraction

__all__ = ["QuotientRingElement", "SplitRequired", "QRE"]


class SplitRequired(ArithmeticError):
    """An inversion met a zero divisor; ``factor`` and ``cofactor`` are
    complementary monic factors of ``modulus``."""

    def __init__(self, modulus: Poly, factor: Poly):
        self.modulus = modulus
        self.factor = factor.monic()
        self.cofactor = modulus.exact_div(self.factor).monic()
        super().__init__(f"modulus {modulus} splits as ({self.factor})*({self.cofactor})")


class QuotientRingElement:
    __slots__ = ("modulus", "value")

    def __init__(self, value, modulus: Poly, reduce: bool = True):
        if not isinstance(value, Poly):
            value = Poly([value]) if isinstance(value, (int, Fraction, Rational)) else Poly(value)
        if reduce and value.degree >= modulus.degree:
            value = value % modulus
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("QuotientRingElement is immutable")

    @classmethod
    def generator(cls, modulus: Poly) -> "QuotientRingElement":
        """The class of ``t``: a simultaneous root of ``modulus``."""
        return cls(Poly([0, 1]), modulus)

    def _coerce(self, other):
        if isinstance(other, QuotientRingElement):
            if other.modulus != self.modulus:
                raise ValueError("quotient ring elements with different moduli")
            return other.value
        if isinstance(other, (int, Fraction, Rational)):
            return Poly([other])
        if isinstance(other, Poly):
            return other
        return None

    def lift(self, other) -> "QuotientRingElement":
        return QuotientRingElement(self._coerce(other), self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuotientRingElement(self.value + o, self.modulus, reduce=o.degree >= self.modulus.degree)

    __radd__ = __add__

    def __neg__(self):
        return QuotientRingElement(-self.value, self.modulus, reduce=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuotientRingElement(self.value - o, self.modulus, reduce=o.degree >= self.modulus.degree)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuotientRingElement(self.value * o, self.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "QuotientRingElement":
        if self.value.is_zero():
            raise ZeroDivisionError("inverse of zero in a quotient ring")
        g, s, _ = self.value.xgcd(self.modulus)
        if g.degree > 0:
            raise SplitRequired(self.modulus, g)
        return QuotientRingElement(s, self.modulus)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            other = as_fraction(other)
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuotientRingElement(self.value / other, self.modulus, reduce=False)
        return self * self.lift(other).inverse()

    def __rtruediv__(self, other):
        return self.lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.lift(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def is_unit(self) -> bool:
        return not self.value.is_zero() and self.value.gcd(self.modulus).is_one()

    def zero_locus(self) -> Poly:
        """Monic factor of the modulus whose roots are where the class vanishes."""
        return self.value.gcd(self.modulus) if not self.value.is_zero() else self.modulus.monic()

    def is_constant(self) -> bool:
        return self.value.degree <= 0

    def rational(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"class {self.value} mod {self.modulus} is not a rational constant")
        return self.value.coeff(0)

    def __eq__(self, other):
        if isinstance(other, QuotientRingElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, (int, Fraction, Rational)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __repr__(self):
        return f"QRE({self.value} mod {self.modulus})"

    def __str__(self):
        if self.modulus.degree == 1:
            return str(self.value)
        return f"[{self.value}] mod ({self.modulus})"

    def complex_values(self, roots) -> list:
        """Numeric values at the given approximate roots of the modulus."""
        return [self.value(r) for r in roots]


QRE = QuotientRingElement
