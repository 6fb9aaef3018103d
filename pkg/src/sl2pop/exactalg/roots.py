"""Numerical root approximations (an oracle; never fed back into exact data)."""

from __future__ import annotations

import numpy as np

from .poly import Poly

__all__ = ["NonConvergence", "roots_numeric"]


class NonConvergence(RuntimeError):
    pass


def _scaled_residual(c, r, d):
    return abs(np.polyval(c, r)) / (1 + abs(r)) ** d


def roots_numeric(p: Poly, tol=1e-12, max_iter: int = 500) -> list:
    """All ``deg p`` complex roots by Aberth-Ehrlich iteration.

    Each returned root ``r`` satisfies ``|p(r)|/(1+|r|)^d <= tol`` for the
    monic ``p``; otherwise ``NonConvergence`` is raised.
    """
    if p.is_zero():
        raise ValueError("roots of the zero polynomial")
    d = p.degree
    if d == 0:
        return []
    tol = float(tol)
    monic = p.monic()
    c = np.array([float(v) for v in reversed(monic.coeffs)], dtype=complex)
    dc = np.polyder(c)
    # exact zero roots are split off so the iteration sees a nonzero constant term
    nz = 0
    while nz < d and monic.coeff(nz) == 0:
        nz += 1
    roots = [0j] * nz
    if nz == d:
        return roots
    c = c[: len(c) - nz]
    dc = np.polyder(c)
    m = d - nz
    radius = max(abs(v) for v in c[1:]) + 1
    rng = np.random.default_rng(12345)
    z = radius * 0.5 * np.exp(1j * (2 * np.pi * np.arange(m) / m + 0.4)) * (1 + 0.01 * rng.random(m))
    for _ in range(max_iter):
        pv = np.polyval(c, z)
        dv = np.polyval(dc, z)
        converged = all(_scaled_residual(c, r, m) <= tol * 1e-3 for r in z)
        if converged:
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            s = (1 / diff).sum(axis=1) - 1  # remove the diagonal term 1/1
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w), w, 1e-3)
        z = z - np.where(pv == 0, 0, w)
    bad = [r for r in z if _scaled_residual(c, r, m) > tol]
    if bad:
        raise NonConvergence(f"Aberth iteration did not reach tol={tol} for degree {d}")
    return roots + [complex(r) for r in z]
