from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, settings, strategies as st

from sl2pop.exactalg import Poly, RationalFunction, X
from sl2pop.populations import TPair

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

x = sympy.Symbol("x")

T_SET = [TPair(1, 1), TPair(X ** 2, 1), TPair(X ** 2, X ** 2), TPair(X, X)]


def to_sympy(p):
    if isinstance(p, RationalFunction):
        return to_sympy(p.num) / to_sympy(p.den)
    return sum(sympy.Rational(c.numerator, c.denominator) * x ** k for k, c in enumerate(p.coeffs))


def from_sympy(expr) -> Poly:
    coeffs = sympy.Poly(sympy.expand(expr), x).all_coeffs()[::-1]
    return Poly([Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in coeffs])


def same_rational(r, expr) -> bool:
    return sympy.simplify(to_sympy(r) - expr) == 0


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polys(draw, max_degree=4, nonzero=False, monic=False):
    deg = draw(st.integers(0, max_degree))
    coeffs = draw(st.lists(rationals, min_size=deg + 1, max_size=deg + 1))
    if nonzero or monic:
        lead = draw(rationals.filter(lambda c: c != 0))
        coeffs[-1] = Fraction(1) if monic else lead
    return Poly(coeffs)


@pytest.fixture
def sym():
    return x


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, title, detail, seconds = RESULTS[n]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.1f} s)"
        if detail:
            line += f"  -- {detail}"
        terminalreporter.write_line(line)
