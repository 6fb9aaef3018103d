from fractions import Fraction
import cmath

import pytest
import sympy
from hypothesis import given, strategies as st

from sl2pop.exactalg import (
    NoSolution, Poly, QuotientRingElement, RationalFunction, SplitRequired, X,
    antiderivative, bareiss_det, laurent_expand, linear_solve, roots_numeric,
    wronskian2, wronskian_n,
)
from conftest import from_sympy, polys, rationals, to_sympy, x


# -- polynomials -------------------------------------------------------------

def test_poly_basic_arithmetic():
    p = Poly([1, 2, 3])
    assert p.degree == 2 and p.lc == 3
    assert p * Poly([0, 1]) == Poly([0, 1, 2, 3])
    assert (X ** 2 - 1).exact_div(X - 1) == X + 1
    assert Poly([]).is_zero() and Poly([]).degree == -1
    assert str(Poly([5, -1, 0, 0, Fraction(3, 2)])) == "3/2*x^4 - x + 5"


def test_exact_div_rejects_remainder():
    with pytest.raises(ArithmeticError):
        (X ** 2 + 1).exact_div(X - 1)


@given(polys(), polys(nonzero=True))
def test_divmod_matches_sympy(a, b):
    q, r = divmod(a, b)
    sq, sr = sympy.div(to_sympy(a), to_sympy(b), x)
    assert q == from_sympy(sq) and r == from_sympy(sr)


@given(polys(), polys())
def test_gcd_matches_sympy(a, b):
    g = a.gcd(b)
    expected = sympy.gcd(to_sympy(a), to_sympy(b))
    if g.is_zero():
        assert expected == 0
    else:
        assert g == from_sympy(expected).monic()


@given(polys(max_degree=3, nonzero=True), st.integers(1, 3), polys(max_degree=2, nonzero=True))
def test_squarefree_decomposition_reassembles(a, k, b):
    p = a * b ** k
    prod = Poly([p.lc])
    for f, e in p.squarefree_decomposition():
        assert f.is_squarefree()
        prod = prod * f ** e
    assert prod == p


# -- Wronskians --------------------------------------------------------------

def test_wronskian2_examples():
    assert wronskian2(Poly([1]), X) == Poly([1])
    assert wronskian2(X, X).is_zero()
    assert wronskian2(X ** 2, X ** 3 + 1) == X ** 4 - 2 * X


@given(polys(), polys())
def test_wronskian2_antisymmetric(f, g):
    assert wronskian2(f, g) == -wronskian2(g, f)


@given(polys(), polys(), rationals, rationals)
def test_wronskian2_bilinear_and_sympy(f, g, a, b):
    w = wronskian2(f, g)
    F, G = to_sympy(f), to_sympy(g)
    assert w == from_sympy(F * sympy.diff(G, x) - sympy.diff(F, x) * G)
    assert wronskian2(f * a, g * b) == w * (a * b)


@given(st.lists(polys(max_degree=3), min_size=1, max_size=4))
def test_wronskian_n_matches_sympy_determinant(fs):
    n = len(fs)
    rows = [[sympy.diff(to_sympy(f), x, i) for f in fs] for i in range(n)]
    expected = sympy.Matrix(rows).det(method="berkowitz")
    assert wronskian_n(fs) == from_sympy(expected)


def test_wronskian_n_small_cases():
    g = X ** 3 - X
    assert wronskian_n([Poly([1])]) == Poly([1])
    assert wronskian_n([Poly([1]), g]) == g.derivative()


@given(st.lists(polys(max_degree=3), min_size=3, max_size=3), polys(max_degree=2, nonzero=True))
def test_composite_wronskian_identity(fs, h):
    # Wr(Wr(f1,f2), Wr(f1,f3)) = f1 * Wr(f1,f2,f3)
    f1, f2, f3 = fs
    assert wronskian2(wronskian2(f1, f2), wronskian2(f1, f3)) == f1 * wronskian_n([f1, f2, f3])
    # Wr(h f1, h f2) = h^2 Wr(f1, f2)
    assert wronskian2(h * f1, h * f2) == h ** 2 * wronskian2(f1, f2)


def test_antiderivative_examples():
    assert antiderivative(Poly([1]), 0) == X
    assert antiderivative(X ** 2, 0) == X ** 3 * Fraction(1, 3)
    assert antiderivative(3 * X ** 2 - 2 * X, 5) == X ** 3 - X ** 2 + 5


@given(polys(), rationals)
def test_antiderivative_inverts_derivative(p, c):
    a = antiderivative(p, c)
    assert a.derivative() == p and a(0) == c


# -- quotient rings and Laurent expansions -----------------------------------

def test_quotient_inverse_and_split():
    q = X ** 2 - 2
    t = QuotientRingElement.generator(q)
    assert (t * t).value == Poly([2])
    assert (t.inverse() * t).value == Poly([1])
    r = X ** 2 - X
    with pytest.raises(SplitRequired) as info:
        QuotientRingElement.generator(r).inverse()
    assert {info.value.factor, info.value.cofactor} == {X, X - 1}


def test_laurent_examples():
    s = laurent_expand(RationalFunction(Poly([2]), X ** 2), Fraction(0), 0)
    assert (s[-2].value, s[-1].value, s[0].value) == (Poly([2]), Poly([]), Poly([]))
    s = laurent_expand(RationalFunction(Poly([2]), X ** 2 * (X - 1) ** 2), Fraction(0), 1)
    assert s[-2].value == Poly([2]) and s[-1].value == Poly([4])
    q = X ** 2 - 2
    s = laurent_expand(RationalFunction(Poly([1]), q), q, -1, max_pole=1)
    assert s[-1].value == X * Fraction(1, 4)


@given(polys(max_degree=3), polys(max_degree=2, monic=True), st.integers(-2, 2), st.integers(1, 2))
def test_laurent_matches_sympy_series(num, other, center, order):
    den = (X - center) ** order * other
    if other(center) == 0 or num.is_zero():
        return
    r = RationalFunction(num, den)
    s = laurent_expand(r, Fraction(center), 2)
    ser = sympy.series(to_sympy(r).subs(x, x + center), x, 0, 3).removeO()
    for j in range(-2, 3):
        assert s[j].value.coeff(0) == sympy.Rational(sympy.expand(ser).coeff(x, j))


# -- linear systems ----------------------------------------------------------

def test_linear_solve_examples():
    sol = linear_solve([[1, 0], [0, 1]], [3, 4])
    assert sol.particular == (3, 4) and sol.nullspace == ()
    sol = linear_solve([[1, 1], [2, 2]], [1, 2])
    assert len(sol.nullspace) == 1
    with pytest.raises(NoSolution):
        linear_solve([[1, 1], [1, 1]], [1, 2])


def test_linear_solve_reproduction_system():
    # Wr(x, y) = x^2 with y = a0 + a1 x + a2 x^2: x y' - y = -a0 + a2 x^2
    sol = linear_solve([[-1, 0, 0], [0, 0, 0], [0, 0, 1]], [0, 0, 1])
    assert sol.particular == (0, 0, 1) and sol.nullspace == ((0, 1, 0),)


@given(st.integers(1, 4), st.data())
def test_solvers_agree_with_sympy(n, data):
    m = [[data.draw(rationals) for _ in range(n)] for _ in range(n + 1)]
    b = [data.draw(rationals) for _ in range(n + 1)]
    M = sympy.Matrix(m)
    consistent = M.rank() == M.row_join(sympy.Matrix(b)).rank()
    for method in ("flint", "bareiss", "gauss"):
        if not consistent:
            with pytest.raises(NoSolution):
                linear_solve(m, b, method=method)
            continue
        sol = linear_solve(m, b, method=method)
        assert len(sol.nullspace) == n - M.rank()
        assert list(M * sympy.Matrix(sol.particular)) == b
        for v in sol.nullspace:
            assert all(c == 0 for c in M * sympy.Matrix(v))


@given(st.integers(1, 5), st.data())
def test_bareiss_det_matches_sympy(n, data):
    m = [[data.draw(st.integers(-6, 6)) for _ in range(n)] for _ in range(n)]
    assert bareiss_det(m) == sympy.Matrix(m).det()


# -- numeric roots -----------------------------------------------------------

def test_roots_examples():
    assert sorted(r.real for r in roots_numeric(X ** 2 - 1)) == pytest.approx([-1, 1], abs=1e-12)
    assert roots_numeric(X ** 3) == [0, 0, 0]
    rs = sorted(r.real for r in roots_numeric(X ** 2 - 2))
    # integer bisection for sqrt(2) to 40 bits
    scale = 1 << 40
    lo, hi = scale, 2 * scale
    while hi - lo > 1:
        mid = (lo + hi) // 2
        lo, hi = (mid, hi) if mid * mid <= 2 * scale * scale else (lo, mid)
    assert rs == pytest.approx([-lo / scale, lo / scale], abs=1e-11)


@given(st.sets(st.integers(-6, 6), min_size=1, max_size=6))
def test_roots_recover_vieta(rts):
    p = Poly.from_roots(rts)
    found = roots_numeric(p)
    assert len(found) == p.degree
    assert sum(found) == pytest.approx(-float(p.coeff(p.degree - 1)), abs=1e-6)
    for r in found:
        assert min(abs(r - t) for t in rts) < 1e-4


def test_roots_complex():
    found = roots_numeric(X ** 2 + 1)
    assert sorted((r.imag for r in found)) == pytest.approx([-1, 1])
    assert all(abs(cmath.polar(r)[0] - 1) < 1e-12 for r in found)
