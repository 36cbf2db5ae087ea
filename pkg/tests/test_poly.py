import random
from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from abcqi.exact import IntPolynomial, RationalMatrix, char_poly, factor_squarefree_irreducible
from oracles import cofactor_char_poly, random_matrix


def P(*c):
    return IntPolynomial(c)


def test_char_poly_examples():
    assert char_poly(RationalMatrix([[2]])) == P(-2, 1)
    assert char_poly(RationalMatrix([[0, -2], [1, 0]])) == P(2, 0, 1)


def test_char_poly_matches_cofactor_oracle():
    rng = random.Random(11)
    for _ in range(15):
        n = rng.randint(1, 5)
        M = random_matrix(rng, n, min_det=1)
        assert list(char_poly(M).coeffs) == cofactor_char_poly(M.rows)


def test_char_poly_rational_entries_cleared():
    M = RationalMatrix([["1/2", 0], [0, "1/3"]])
    # det(xI - M) = (x - 1/2)(x - 1/3) scaled to integers
    assert char_poly(M) == P(1, -5, 6)


def test_factor_examples():
    assert factor_squarefree_irreducible(P(2, 0, 1)) == [(P(2, 0, 1), 1)]
    p = P(-2, 1) ** 2 * P(1, 1)
    assert sorted(factor_squarefree_irreducible(p), key=lambda f: f[0].coeffs) == sorted(
        [(P(-2, 1), 2), (P(1, 1), 1)], key=lambda f: f[0].coeffs
    )


IRREDUCIBLES = [P(-2, 1), P(1, 1), P(2, 0, 1), P(-1, -1, 1), P(-2, 0, 0, 1), P(1, 1, 1), P(3, 0, 1), P(-3, 1)]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(IRREDUCIBLES), st.integers(1, 3)), min_size=1, max_size=3, unique_by=lambda t: t[0]))
def test_factor_multiply_back(parts):
    p = IntPolynomial((1,))
    for f, e in parts:
        p = p * f**e
    p = p * 3
    got = factor_squarefree_irreducible(p)
    back = IntPolynomial((1,))
    for f, e in got:
        assert f.is_irreducible()
        back = back * f**e
    assert back.primitive() == p.primitive()
    assert sorted((f.coeffs, e) for f, e in got) == sorted((f.primitive().coeffs, e) for f, e in parts)


def test_sturm_counts_match_sympy():
    rng = random.Random(3)
    for _ in range(30):
        c = [rng.randint(-5, 5) for _ in range(rng.randint(2, 6))]
        if c[-1] == 0:
            c[-1] = 1
        p = IntPolynomial(c).squarefree_part()
        want = sympy.Poly(list(reversed(p.coeffs)), sympy.Symbol("x")).count_roots(-1000, 1000)
        assert p.real_root_count() == want
        assert len(p.real_root_intervals()) == want


def test_root_powers_match_resultant():
    x, y = sympy.symbols("x y")
    for p in [P(2, 0, 1), P(-1, -1, 1), P(-2, 0, 0, 1), P(1, 3, 0, 1)]:
        for k in (2, 3):
            fp = sympy.Poly(list(reversed(p.coeffs)), y).as_expr()
            want = sympy.Poly(sympy.resultant(fp, x - y**k, y), x)
            got = p.root_powers(k).to_sympy(x)
            assert sympy.Poly(got, x).monic() == want.monic()


def test_root_products_contains_norms():
    # roots of x^2+2 are +-i sqrt2; the product of the pair is 2
    q = P(2, 0, 1).root_products()
    assert q(Fraction(2)) == 0


def test_primitive_and_content():
    p = P(6, -4, 2)
    assert p.content() == 2
    assert p.primitive() == P(3, -2, 1)
    assert P(-2, -1).primitive() == P(2, 1)
