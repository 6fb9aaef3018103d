"""Truncated Laurent expansions of rational functions at (classes of) points."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .poly import Poly, as_fraction
from .quotient import QuotientRingElement, SplitRequired
from .ratfunc import RationalFunction

__all__ = ["LaurentSlice", "PoleTooHigh", "laurent_expand", "taylor_coeffs", "center_modulus"]


class PoleTooHigh(ValueError):
    pass


@dataclass(frozen=True)
class LaurentSlice:
    """Coefficients ``a_j`` of ``sum a_j (x - s)^j`` for ``j = -2 .. order``.

    ``modulus`` is the squarefree polynomial whose roots are the centers;
    every coefficient is a class modulo it.
    """

    modulus: Poly
    order: int
    pole_order: int
    coeffs: dict

    def __getitem__(self, j: int) -> QuotientRingElement:
        if j < -2 or j > self.order:
            raise KeyError(j)
        return self.coeffs[j]


def center_modulus(center) -> Poly:
    if isinstance(center, Poly):
        return center.monic()
    if isinstance(center, QuotientRingElement):
        if center.value != Poly([0, 1]):
            raise ValueError("a class center must be the generator t mod q")
        return center.modulus.monic()
    if isinstance(center, (int, Fraction, Rational)):
        return Poly([-as_fraction(center), 1])
    raise TypeError(f"unsupported center {center!r}")


def taylor_coeffs(p: Poly, modulus: Poly, count: int) -> list:
    """``[p^(k)(s)/k! for k < count]`` as classes modulo ``modulus``."""
    out = []
    f = p
    for k in range(count):
        out.append(QuotientRingElement(f, modulus))
        f = f.derivative() / (k + 1)
        if f.is_zero():
            out.extend(QuotientRingElement(0, modulus) for _ in range(count - k - 1))
            break
    return out


def _nonzero(c: QuotientRingElement) -> bool:
    """Zero/nonzero test valid simultaneously at every root; splits if mixed."""
    if c.is_zero():
        return False
    g = c.value.gcd(c.modulus)
    if g.degree > 0:
        raise SplitRequired(c.modulus, g)
    return True


def laurent_expand(r: RationalFunction, center, order: int, max_pole: int = 2) -> LaurentSlice:
    """Expand ``r`` at every root of the center's modulus at once.

    ``center`` is a rational number, a squarefree polynomial (meaning its
    roots), or the generator class ``t mod q``.  Raises ``SplitRequired`` when
    the pole order is not uniform over the roots and ``PoleTooHigh`` beyond
    ``max_pole``.
    """
    q = center_modulus(center)
    need = order + max_pole + 1
    dens = taylor_coeffs(r.den, q, need + max_pole + 1)
    e = 0
    while not _nonzero(dens[e]):
        e += 1
        if e > max_pole:
            raise PoleTooHigh(f"pole of order > {max_pole} at roots of {q}")
    nums = taylor_coeffs(r.num, q, need)
    d = dens[e:]
    inv0 = d[0].inverse()
    # series quotient nums/d, then shift by h^-e
    quo = []
    for k in range(need):
        acc = nums[k] if k < len(nums) else QuotientRingElement(0, q)
        for i in range(1, min(k, len(d) - 1) + 1):
            acc = acc - d[i] * quo[k - i]
        quo.append(acc * inv0)
    coeffs = {}
    zero = QuotientRingElement(0, q)
    for j in range(-max_pole, order + 1):
        k = j + e
        coeffs[j] = quo[k] if 0 <= k < len(quo) else zero
    return LaurentSlice(modulus=q, order=order, pole_order=e, coeffs=coeffs)
