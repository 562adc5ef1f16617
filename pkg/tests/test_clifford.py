from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from einstab.clifford import (FANO_LINES, CliffordElement, blade_matrix, clifford_mul, form_action,
                              generator_matrix, octonion_mul, spinor_matrix, spinor_rep, vector_action)
from einstab.multilinear import AltForm, Matrix, dot, interior, wedge

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def elements(draw, max_terms=4):
    masks = draw(st.lists(st.integers(0, 127), min_size=1, max_size=max_terms))
    return CliffordElement({m: draw(small) for m in masks})


spinors = st.lists(small, min_size=8, max_size=8).map(tuple)
vectors7 = st.lists(small, min_size=7, max_size=7).map(tuple)


def e(i):
    return CliffordElement.generator(i)


def test_generator_squares_to_minus_one():
    assert e(0) * e(0) == CliffordElement.scalar(-1)


def test_anticommutation():
    assert e(0) * e(1) == CliffordElement({0b11: 1})
    assert e(1) * e(0) == CliffordElement({0b11: -1})
    for i in range(7):
        for j in range(7):
            anti = e(i) * e(j) + e(j) * e(i)
            assert anti == CliffordElement.scalar(-2 if i == j else 0)


def test_unit():
    one = CliffordElement.scalar(1)
    a = CliffordElement({5: 2, 96: -1})
    assert one * a == a == a * one


@settings(max_examples=40, deadline=None)
@given(elements(), elements(), elements())
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 127), st.integers(0, 127))
def test_degree_filtration(s, t):
    k, l = bin(s).count("1"), bin(t).count("1")
    (grade,) = clifford_mul(CliffordElement({s: 1}), CliffordElement({t: 1})).grades()
    assert abs(k - l) <= grade <= k + l and (grade - abs(k - l)) % 2 == 0


def test_octonion_table_is_normed():
    rng = random.Random(2)
    for _ in range(20):
        x = [Fraction(rng.randint(-4, 4)) for _ in range(8)]
        y = [Fraction(rng.randint(-4, 4)) for _ in range(8)]
        assert dot(octonion_mul(x, y), octonion_mul(x, y)) == dot(x, x) * dot(y, y)
    assert len(FANO_LINES) == 7


def test_generator_matrices_are_skew_complex_structures():
    I = Matrix.identity(8)
    for i in range(7):
        g = generator_matrix(i)
        assert g @ g == -I
        assert g.T == -g


@settings(max_examples=40, deadline=None)
@given(vectors7, spinors)
def test_vector_action_is_orthogonal_to_spinor(X, s):
    assert dot(vector_action(X, s), s) == 0


def test_spinor_rep_unit_and_square():
    s = tuple(Fraction(i - 3, 2) for i in range(8))
    assert spinor_rep(CliffordElement.scalar(1), s) == s
    assert spinor_rep(e(0) * e(0), s) == tuple(-x for x in s)


def test_homomorphism_on_100_seeded_pairs():
    rng = random.Random(100)

    def rand_elem():
        return CliffordElement({rng.randrange(128): Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                                for _ in range(3)})

    for _ in range(100):
        a, b = rand_elem(), rand_elem()
        s = tuple(Fraction(rng.randint(-5, 5)) for _ in range(8))
        assert spinor_rep(a * b, s) == spinor_rep(a, spinor_rep(b, s))


def test_blade_matrix_agrees_with_product_of_generators():
    for mask in (0b1011, 0b1110001, 0b1111111):
        prod = CliffordElement.scalar(1)
        for i in range(7):
            if mask >> i & 1:
                prod = prod * e(i)
        assert spinor_matrix(prod) == blade_matrix(mask)


@settings(max_examples=30, deadline=None)
@given(vectors7, st.lists(small, min_size=21, max_size=21), spinors)
def test_vector_wedge_two_form_action(X, w, s):
    omega = AltForm.from_coords(7, 2, w)
    Xf = AltForm.one_form(X)
    lhs = form_action(wedge(Xf, omega), s)
    rhs = tuple(p + q for p, q in zip(vector_action(X, form_action(omega, s)), form_action(interior(X, omega), s)))
    assert lhs == rhs
