from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from sl2pop.exactalg import NoSolution, Poly, X, wronskian2
from sl2pop.populations import (
    ONE, Infertile, NotGeneric, NotPolynomial, PolyPair, PopulationNode, ReproductionStep,
    TPair, bethe_residuals, enumerate_population, is_critical, is_fertile, is_generic,
    multiply_pair, normalize_superfertile, replay, reproduce, reproduction_family,
    solve_reproduction, weights_from_t, weyl_degree_predict, word_pairs, wronskian_scalar,
)
from conftest import T_SET, polys, rationals, to_sympy, x

steps = st.lists(st.tuples(st.sampled_from([0, 1]), st.integers(-3, 3)), min_size=0, max_size=4)


def alternate(raw, first=0):
    """Turn drawn (direction, constant) pairs into an alternating word."""
    return [ReproductionStep((first + k) % 2, c) for k, (_, c) in enumerate(raw)]


def test_generic_examples():
    assert is_generic(ONE, TPair(1, 1))
    rep = is_generic(PolyPair(X ** 3, 1), TPair(X ** 2, 1))
    assert not rep
    assert to_sympy(dict(rep.failures)["gcd(y0,T0)"]) == sympy.gcd(x ** 3, x ** 2)
    rep = is_generic(PolyPair(X, X), TPair(1, 1))
    assert not rep and dict(rep.failures)["gcd(y0,y1)"] == X


def test_solve_reproduction_examples():
    assert solve_reproduction(Poly([1]), Poly([1])).particular == X
    assert solve_reproduction(Poly([1]), X ** 2).particular == X ** 3 * Fraction(1, 3)
    fam = solve_reproduction(X, X ** 2)
    assert fam.particular == X ** 2 and fam.direction == X
    with pytest.raises(NoSolution):
        solve_reproduction(X ** 2, Poly([1]))


@given(polys(max_degree=4, nonzero=True), polys(max_degree=6, nonzero=True))
def test_solve_reproduction_against_sympy(y, W):
    # oracle: undetermined coefficients solved by sympy
    d = max(W.degree + 1 - y.degree, y.degree)
    cs = sympy.symbols(f"c0:{d + 1}")
    Y = sum(c * x ** k for k, c in enumerate(cs))
    eqs = sympy.Poly(sympy.expand(to_sympy(y) * sympy.diff(Y, x) - sympy.diff(to_sympy(y), x) * Y - to_sympy(W)), x).all_coeffs()
    sols = sympy.solve(eqs, cs, dict=True)
    try:
        fam = solve_reproduction(y, W)
    except NoSolution:
        assert not sols
        return
    assert sols
    assert wronskian2(y, fam.particular) == W
    assert fam.particular.coeff(y.degree) == 0


def test_fertility_examples():
    assert is_fertile(ONE, TPair(1, 1)) and is_critical(ONE, TPair(1, 1))
    # Wr(x^3, -1/3) = x^2 and Wr(1, y) = x^6 are both solvable, but x^3 meets T0 = x^2
    assert is_fertile(PolyPair(X ** 3, 1), TPair(X ** 2, 1))
    assert not is_critical(PolyPair(X ** 3, 1), TPair(X ** 2, 1))
    assert is_fertile(ONE, TPair(X ** 2, X ** 2)) and is_critical(ONE, TPair(X ** 2, X ** 2))
    assert not is_fertile(PolyPair(X ** 2, 1), TPair(1, 1))
    with pytest.raises(Infertile):
        reproduction_family(PolyPair(X ** 2, 1), TPair(1, 1), 0)


def test_reproduce_examples():
    node = reproduce(PopulationNode(ONE, TPair(1, 1)), ReproductionStep(0, 0))
    assert node.pair == PolyPair(X, 1)
    node = reproduce(node, ReproductionStep(1, 0))
    # Wr(1, y1) = x^2 gives x^3/3, normalized to x^3
    assert node.pair == PolyPair(X, X ** 3)
    assert node.scalars == (Fraction(1), Fraction(3))


@given(st.sampled_from(T_SET), steps, st.integers(-4, 4), st.integers(-4, 4))
def test_same_direction_twice_stays_in_family(t, raw, c1, c2):
    node = replay(ONE, t, alternate(raw))
    i = 0 if not node.word else 1 - node.word[-1].direction
    a = reproduce(node, ReproductionStep(i, c1))
    b = reproduce(a, ReproductionStep(i, c2))
    fam = reproduction_family(node.pair, t, i)
    # b[i] lies in span{particular, y_i}, so it is a line member again
    basis = [fam.particular, fam.direction]
    size = max(p.degree for p in basis + [b.pair[i]]) + 1
    M = sympy.Matrix([[p.coeff(k) for p in basis] for k in range(size)])
    v = sympy.Matrix([b.pair[i].coeff(k) for k in range(size)])
    assert M.rank() == M.row_join(v).rank()
    assert b.pair[1 - i] == node.pair[1 - i]


def test_enumerate_examples():
    got = {n.pair for n in enumerate_population(TPair(1, 1), 1, (0,))}
    assert got == {ONE, PolyPair(X, 1), PolyPair(1, X)}
    got = {n.pair for n in enumerate_population(TPair(X ** 2, 1), 1, (0,))}
    assert got == {ONE, PolyPair(X ** 3, 1), PolyPair(1, X)}


@given(st.sampled_from(T_SET), steps, st.integers(0, 1))
def test_wronskian_certificates_along_words(t, raw, first):
    node = replay(ONE, t, alternate(raw, first))
    pairs = word_pairs(node)
    for step, a, b, s in zip(node.word, pairs, pairs[1:], node.scalars):
        i = step.direction
        kappa = wronskian_scalar(a[i], b[i], t[i] * a[1 - i] ** 2)
        # raw = monic / s and Wr(y, raw) = T y'^2, so Wr(y, monic) = s T y'^2
        assert kappa == s
        assert is_fertile(b, t)


def test_weyl_examples():
    assert weyl_degree_predict(weights_from_t(TPair(1, 1)), (0, 0), 0) == (1, 0)
    assert weyl_degree_predict(weights_from_t(TPair(X ** 2, 1)), (0, 0), 0) == (3, 0)


@given(st.sampled_from(T_SET + [TPair(X ** 2 + 1, X), TPair(X ** 3 - X, 1)]), steps, st.integers(0, 1), st.integers(-3, 3))
def test_weyl_prediction_matches_generic_reproductions(t, raw, first, c):
    node = replay(ONE, t, alternate(raw, first))
    w = weights_from_t(t)
    for i in (0, 1):
        fam = reproduction_family(node.pair, t, i)
        # the reflection gives the degree of the other line element
        pred = weyl_degree_predict(w, node.pair.degrees, i)
        assert pred[i] == fam.particular.degree
        assert pred[1 - i] == node.pair[1 - i].degree
        if pred[i] > node.pair[i].degree:
            assert reproduce(node, ReproductionStep(i, c)).pair.degrees == pred
        assert weyl_degree_predict(w, pred, i) == node.pair.degrees


def test_bethe_examples():
    assert bethe_residuals(ONE, TPair(1, 1)) == 0
    assert bethe_residuals(PolyPair(X, 1), TPair(1, 1)) == 0
    t = TPair(X ** 2, 1)
    node = replay(ONE, t, [ReproductionStep(0, 1), ReproductionStep(1, 1), ReproductionStep(0, 2)])
    assert bethe_residuals(node.pair, t) < 1e-8
    with pytest.raises(NotGeneric):
        bethe_residuals(PolyPair(X, X), TPair(1, 1))


def test_multiply_pair_examples():
    p, t = multiply_pair(ONE, TPair(1, 1), Poly([1]), Poly([1]))
    assert (p, t) == (ONE, TPair(1, 1))
    p, t = multiply_pair(ONE, TPair(1, 1), X, X)
    assert (p, t) == (PolyPair(X, X), TPair(1, 1))
    with pytest.raises(NotPolynomial):
        multiply_pair(ONE, TPair(X ** 2, 1), X, Poly([1]))


def test_normalize_examples():
    assert normalize_superfertile(ONE, TPair(X, X ** 2))[:2] == (Poly([1]), Poly([1]))
    f0, f1, y, t = normalize_superfertile(PolyPair(X, X), TPair(1, 1))
    assert (f0, f1, y, t) == (X, X, ONE, TPair(1, 1))


@pytest.mark.parametrize("t, f0", [
    (TPair(1, X ** 2), X),
    (TPair(X ** 2 + 1, (X - 5) ** 2), X - 5),
    (TPair(X, X ** 4), X ** 2),
])
def test_normalize_inverts_multiplication(t, f0):
    checked = 0
    for node in enumerate_population(t, 2, (1, 2)):
        if node.pair.y0.gcd(f0).degree > 0:
            continue
        pair0, t0 = multiply_pair(node.pair, t, f0, Poly([1]))
        f, g, y, tt = normalize_superfertile(pair0, t0)
        assert (f, g, y, tt) == (f0, Poly([1]), node.pair, t)
        checked += 1
    assert checked >= 5


def test_pairs_unpack_to_two_components():
    pair, t = PolyPair(X + 1, X ** 2), TPair(X, 1)
    assert list(pair) == [X + 1, X ** 2]
    assert tuple(t) == (X, Poly([1]))
    assert pair[3] == pair.y1
