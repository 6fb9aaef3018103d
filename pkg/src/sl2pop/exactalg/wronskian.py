"""Wronskians of polynomials."""

from __future__ import annotations

from .linalg import bareiss_det
from .poly import Poly

__all__ = ["wronskian2", "wronskian_n", "antiderivative"]


def wronskian2(f: Poly, g: Poly) -> Poly:
    """``f*g' - f'*g``."""
    return f * g.derivative() - f.derivative() * g


def wronskian_n(fs) -> Poly:
    """Determinant whose row ``r`` holds the ``r``-th derivatives of ``fs``."""
    fs = list(fs)
    if not fs:
        raise ValueError("Wronskian of an empty list")
    n = len(fs)
    if n == 1:
        return fs[0]
    if n == 2:
        return wronskian2(fs[0], fs[1])
    rows = [list(fs)]
    for _ in range(n - 1):
        rows.append([p.derivative() for p in rows[-1]])
    return bareiss_det(rows, exact_div=lambda a, b: a.exact_div(b) if isinstance(b, Poly) else a / b)


def antiderivative(p: Poly, c=0) -> Poly:
    """The antiderivative of ``p`` with constant term ``c``."""
    return p.antiderivative(c)
