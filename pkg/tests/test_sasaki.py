from __future__ import annotations

import random
from fractions import Fraction

import pytest

from einstab.errors import PreconditionError
from einstab.multilinear import AltForm, Matrix, dot, inner, symmetric_product, vscale, wedge2_as_endo
from einstab.sasaki import (a_tensor, build_fibre, classify, h_from_alpha, in_rough_lemma_class,
                            mod_xi_identities, phi_invariant_2forms, phi_invariant_sym_tracefree,
                            primitive_phi_invariant_2forms, q_diff, rough_diff_algebraic,
                            trace_pairing_constant, verify_fibre)

NS = (2, 3, 4)


@pytest.fixture(scope="module", params=NS)
def F(request):
    return build_fibre(request.param)


def _random_combo(items, rng, dim):
    total = Matrix.zeros(dim)
    for it in items:
        m = it.as_matrix() if isinstance(it, AltForm) else it
        total = total + Fraction(rng.randint(-5, 5), rng.randint(1, 4)) * m
    return total


def test_fibre_invariants():
    for n in (1, 2, 3):
        F = build_fibre(n)
        I = Matrix.identity(F.dim)
        assert F.Phi @ F.Phi + I - Matrix.outer(F.xi, F.eta) == Matrix.zeros(F.dim)
        for i in range(F.dim):
            for j in range(F.dim):
                X, Y = F.e(i), F.e(j)
                assert dot(F.Phi(X), F.Phi(Y)) - dot(X, Y) + dot(F.eta, X) * dot(F.eta, Y) == 0


def test_d_eta_in_dimension_three():
    F = build_fibre(1)
    assert F.d_eta.coeffs == {(0, 1): -2}


def test_build_fibre_rejects_n_zero():
    with pytest.raises(PreconditionError):
        build_fibre(0)


def test_a_tensor_examples(F):
    assert a_tensor(F.xi, F) == -F.Phi
    # wedge2_as_endo(xi, Phi e_1)(xi) = g(xi, xi) Phi e_1
    assert a_tensor(F.e(0), F)(F.xi) == F.e(1)
    rng = random.Random(4)
    X = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(F.dim))
    A = a_tensor(X, F)
    assert (A + A.T).is_zero()


def test_spanning_set_sizes(F):
    n = F.n
    assert len(phi_invariant_2forms(F)) == n * n
    assert len(primitive_phi_invariant_2forms(F)) == n * n - 1
    assert len(phi_invariant_sym_tracefree(F)) == n * n - 1
    for w in phi_invariant_2forms(F):
        c = classify(w, F)
        assert c.is_skew and c.is_phi_invariant and c.is_horizontal
    for w in primitive_phi_invariant_2forms(F):
        assert classify(w, F).is_primitive
    for h in phi_invariant_sym_tracefree(F):
        assert in_rough_lemma_class(h, F)


def test_q_diff_on_primitive_2forms(F):
    for w in primitive_phi_invariant_2forms(F):
        assert q_diff(w, F) == 2 * w.as_matrix()


def test_q_diff_on_d_eta(F):
    # only the primitive part sees 2 id; the d_eta line picks up -<h, d_eta> d_eta
    assert q_diff(F.d_eta, F) == (2 - 4 * F.n) * F.d_eta.as_matrix()


def test_q_diff_closed_form_on_all_invariant_2forms(F):
    rng = random.Random(F.n)
    deta = F.d_eta.as_matrix()
    for _ in range(3):
        h = _random_combo(phi_invariant_2forms(F), rng, F.dim)
        pairing = inner(AltForm.from_skew_matrix(h), F.d_eta)
        assert q_diff(h, F) == 2 * h - pairing * deta


def test_q_diff_on_symmetric_tracefree(F):
    for h in phi_invariant_sym_tracefree(F):
        assert q_diff(h, F) == -2 * h


def test_q_diff_zero_and_preconditions(F):
    assert q_diff(Matrix.zeros(F.dim), F).is_zero()
    with pytest.raises(PreconditionError):
        q_diff(AltForm.basis(F.dim, (0, F.dim - 1)), F)          # not horizontal
    with pytest.raises(PreconditionError):
        q_diff(AltForm.basis(F.dim, (0, 2)), F)                  # not Phi-invariant
    with pytest.raises(PreconditionError):
        q_diff(Matrix.outer(F.e(0), F.e(0)) + Matrix.outer(F.e(1), F.e(1)), F)   # not trace-free


def test_q_diff_does_not_depend_on_composition_order(F):
    # the same sum with the two 2-form actions swapped
    from einstab.multilinear import endo_act_tensor2
    E = [F.e(i) for i in range(F.dim)]
    for h in [primitive_phi_invariant_2forms(F)[0].as_matrix(), F.d_eta.as_matrix(), phi_invariant_sym_tracefree(F)[0]]:
        first = Matrix.zeros(F.dim)
        for i in range(F.dim):
            for j in range(F.dim):
                if i != j:
                    first = first + endo_act_tensor2(wedge2_as_endo(F.Phi(E[i]), F.Phi(E[j])),
                                                     endo_act_tensor2(wedge2_as_endo(E[i], E[j]), h))
        second = Matrix.zeros(F.dim)
        for v in E:
            B = wedge2_as_endo(F.xi, v)
            second = second + endo_act_tensor2(B, endo_act_tensor2(B, h))
        assert Fraction(-1, 2) * first + second == q_diff(h, F)


def test_dimension_three_is_consistent_with_constant_curvature():
    # on S^3 the canonical curvature vanishes on the horizontal plane, and q(R) = 2 on 2-forms there
    F = build_fibre(1)
    assert q_diff(F.d_eta, F) == -2 * F.d_eta.as_matrix()


def test_rough_difference(F):
    for h in phi_invariant_sym_tracefree(F):
        assert rough_diff_algebraic(h, F) == -2 * h


def test_rough_difference_flags_out_of_class(F):
    h = symmetric_product(F.e(0), F.xi)
    assert not in_rough_lemma_class(h, F)
    with pytest.raises(PreconditionError):
        rough_diff_algebraic(h, F)
    out = rough_diff_algebraic(h, F, check=False)
    assert out.is_symmetric()


def test_mod_xi_identities(F):
    assert mod_xi_identities(F) == {"phi_pair_sum": True, "xi_pair_sum": True, "a_tensor_sum": True}


def test_mod_xi_identity_holds_only_modulo_xi():
    F = build_fibre(2)
    s = (Fraction(0),) * F.dim
    for v in (F.e(i) for i in range(F.dim)):
        B = wedge2_as_endo(F.xi, v)
        s = tuple(a + b for a, b in zip(s, B(B(F.xi))))
    # on xi itself the sum is -2n xi, which is zero mod xi
    assert s == vscale(-2 * F.n, F.xi)


def test_h_alpha_on_primitive_inputs(F):
    for w in primitive_phi_invariant_2forms(F):
        h = h_from_alpha(w, F)
        assert h.is_symmetric and h.is_tracefree and h.is_horizontal and h.is_phi_invariant


def test_h_alpha_on_d_eta(F):
    h = h_from_alpha(F.d_eta, F)
    horizontal_metric = Matrix.identity(F.dim) - Matrix.outer(F.xi, F.xi)
    # d_eta(X, Phi Y) = 2 g(X, Phi^2 Y) = -2 g(X, Y) on horizontal vectors
    assert h.underlying == -2 * horizontal_metric
    assert h.underlying.trace() == -4 * F.n


def test_h_alpha_zero(F):
    assert h_from_alpha(AltForm.zero(F.dim, 2), F).underlying.is_zero()


def test_h_alpha_rejects_non_invariant(F):
    with pytest.raises(PreconditionError, match="asymmetric"):
        h_from_alpha(AltForm.basis(F.dim, (0, 2)), F)
    with pytest.raises(PreconditionError):
        h_from_alpha(Matrix.identity(F.dim), F)


def test_trace_pairing_constant(F):
    assert trace_pairing_constant(F) == -1
    rng = random.Random(9)
    for _ in range(3):
        a = _random_combo(phi_invariant_2forms(F), rng, F.dim)
        h = h_from_alpha(a, F).underlying
        assert h.trace() == -inner(AltForm.from_skew_matrix(a), F.d_eta)


def test_h_alpha_inverse_up_to_sign(F):
    for w in phi_invariant_2forms(F):
        h = h_from_alpha(w, F).underlying
        assert h @ F.Phi == -w.as_matrix()


def test_verify_fibre_records():
    for n in NS:
        recs = verify_fibre(n)
        assert all(r["pass"] for r in recs)
        assert set(recs[0]) == {"lemma", "class", "dimension_n", "expected", "got", "pass"}
        d_eta = next(r for r in recs if r["class"] == "alpha = d_eta")
        assert d_eta["got"] == f"{2 - 4 * n} id"
