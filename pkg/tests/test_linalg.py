from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from einstab.errors import DimensionMismatchError, NoSolutionError
from einstab.linalg import kernel_basis, mat_vec, rank, same_span, solve_exact, span_contains

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def test_rank_identity():
    eye = [[int(i == j) for j in range(7)] for i in range(7)]
    assert rank(eye) == 7


def test_kernel_of_zero_matrix():
    ker = kernel_basis([[0, 0, 0]] * 3)
    assert len(ker) == 3
    assert same_span(ker, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_kernel_of_empty_needs_ncols():
    assert len(kernel_basis([], ncols=4)) == 4
    with pytest.raises(DimensionMismatchError):
        kernel_basis([])


def test_solve_round_trip_random_5x5():
    rng = random.Random(5)
    done = 0
    while done < 10:
        M = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(5)] for _ in range(5)]
        if rank(M) < 5:
            continue
        b = [Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(5)]
        assert mat_vec(M, solve_exact(M, b)) == tuple(b)
        done += 1


def test_inconsistent_system_is_not_a_shape_error():
    with pytest.raises(NoSolutionError):
        solve_exact([[1, 1], [2, 2]], [1, 3])
    with pytest.raises(DimensionMismatchError):
        solve_exact([[1, 1], [2, 2]], [1, 3, 4])
    assert not issubclass(NoSolutionError, DimensionMismatchError)


def test_underdetermined_solve():
    x = solve_exact([[1, 2, 3]], [6])
    assert mat_vec([[1, 2, 3]], x) == (6,)


def test_pivot_is_first_nonzero_so_output_is_deterministic():
    M = [[0, 2, 4], [0, 1, 2]]
    assert kernel_basis(M) == kernel_basis([row[:] for row in M])
    assert kernel_basis(M) == [(1, 0, 0), (0, -2, 1)]


def test_span_helpers():
    assert span_contains([[1, 0], [0, 1]], [3, 4])
    assert not span_contains([[1, 1]], [1, 0])
    assert span_contains([], [0, 0])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(rationals, min_size=c, max_size=c), min_size=1, max_size=5)))
def test_rank_plus_nullity(M):
    ncols = len(M[0])
    ker = kernel_basis(M)
    assert rank(M) + len(ker) == ncols
    for v in ker:
        assert not any(mat_vec(M, v))
