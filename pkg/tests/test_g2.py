from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from einstab.errors import DomainError, IdentityFailure, NormalizationError, StructureValidationError
from einstab.g2 import (EXPECTED_ENDOMORPHISM_VALUES, build_g2_structure, cas_so7, clifford_kernel_dims,
                        endomorphism_values, g2_identity_suite, i_map, i_map_rank, j_map, project_lambda2,
                        project_lambda3, projector_ranks, random_unit_spinor, random_vector, s_endomorphism,
                        stabilizer_dimension, star_phi_wedge, unit_spinor, verify_structure)
from einstab.multilinear import (AltForm, Matrix, basis_vector, dot, endo_act_tensor2, form_basis, interior,
                                 sym2_traceless_basis, wedge)

N = 7
small = st.fractions(min_value=-3, max_value=3, max_denominator=3)
vectors7 = st.lists(small, min_size=N, max_size=N).map(tuple)
three_forms = st.lists(small, min_size=35, max_size=35).map(lambda c: AltForm.from_coords(N, 3, c))
two_forms = st.lists(small, min_size=21, max_size=21).map(lambda c: AltForm.from_coords(N, 2, c))

# frozen output of the construction for sigma = (1, 0, ..., 0) and the fixed octonion table
DEFAULT_PHI = {"1,2,4": "1", "1,3,7": "1", "1,5,6": "1", "2,3,5": "1", "2,6,7": "1", "3,4,6": "1", "4,5,7": "1"}
DEFAULT_PSI = {"1,2,3,6": "1", "1,2,5,7": "-1", "1,3,4,5": "-1", "1,4,6,7": "1", "2,3,4,7": "1",
               "2,4,5,6": "-1", "3,5,6,7": "-1"}


def e(i):
    return basis_vector(N, i)


@pytest.fixture(scope="module")
def random_structures():
    rng = random.Random(11)
    return [build_g2_structure(random_unit_spinor(rng)) for _ in range(2)]


def test_default_phi_is_frozen(G):
    assert G.phi.to_json() == DEFAULT_PHI
    assert G.psi.to_json() == DEFAULT_PSI
    assert len(G.phi.coeffs) == 7 and all(abs(c) == 1 for c in G.phi.coeffs.values())


def test_non_unit_spinor_rejected():
    with pytest.raises(NormalizationError):
        build_g2_structure((2, 0, 0, 0, 0, 0, 0, 0))
    with pytest.raises(NormalizationError):
        build_g2_structure((1, 0, 0))


def test_unit_spinor_parametrization_is_unit():
    s = unit_spinor([Fraction(1, 2), 3, 0, -1, 0, 0, Fraction(2, 7)])
    assert dot(s, s) == 1


@settings(max_examples=30, deadline=None)
@given(vectors7, vectors7)
def test_cross_product_skew_and_orthogonal(X, Y):
    from einstab.g2 import default_structure
    G = default_structure()
    assert G.P(X, Y) == tuple(-x for x in G.P(Y, X))
    assert dot(G.P(X, Y), X) == 0
    assert G.phi.evaluate(X, Y, e(2)) == dot(G.P(X, Y), e(2))


def test_identity_suite_default(G):
    rng = random.Random(3)
    report = g2_identity_suite(G, [random_vector(rng) for _ in range(5)])
    assert [r["identity_name"] for r in report] == [
        "contraction_phi_on_sigma", "phi_on_sigma", "contraction_psi_on_sigma", "double_cross_product",
        "phi_contraction_formula", "psi_square_formula", "psi_contraction_formula"]
    assert all(r["pass"] for r in report)
    assert all("witness" not in r for r in report)


def test_identity_suite_reports_witness_on_a_broken_structure(G):
    from dataclasses import replace
    broken = replace(G, phi=-G.phi, _cache={})
    report = g2_identity_suite(broken)
    bad = {r["identity_name"]: r for r in report if not r["pass"]}
    assert "contraction_phi_on_sigma" in bad and "phi_on_sigma" in bad
    assert bad["contraction_phi_on_sigma"]["witness"] == [str(x) for x in e(0)]
    with pytest.raises(IdentityFailure):
        g2_identity_suite(broken, strict=True)


def test_identity_suite_random_spinors(random_structures):
    for H in random_structures:
        assert all(r["pass"] for r in g2_identity_suite(H))


def test_lambda2_examples(G):
    for i in range(N):
        w7, w14 = project_lambda2(interior(e(i), G.phi), G)
        assert w14.is_zero() and w7 == interior(e(i), G.phi)
    z = AltForm.zero(N, 2)
    assert project_lambda2(z, G) == (z, z)


@settings(max_examples=20, deadline=None)
@given(two_forms)
def test_lambda2_projector_algebra(w):
    from einstab.g2 import default_structure
    G = default_structure()
    w7, w14 = project_lambda2(w, G)
    assert w7 + w14 == w
    assert star_phi_wedge(w7, G) == -2 * w7
    assert star_phi_wedge(w14, G) == w14
    assert project_lambda2(w7, G) == (w7, AltForm.zero(N, 2))
    assert project_lambda2(w14, G) == (AltForm.zero(N, 2), w14)


def test_reversed_orientation_is_detected(G):
    from dataclasses import replace
    flipped = replace(G, phi=-G.phi, psi=-G.psi, _cache={})
    with pytest.raises(StructureValidationError):
        project_lambda2(AltForm.basis(N, (0, 1)), flipped)


def test_lambda3_examples(G):
    assert project_lambda3(G.phi, G) == (G.phi, AltForm.zero(N, 3), AltForm.zero(N, 3))
    for i in range(N):
        w = interior(e(i), G.psi)
        assert project_lambda3(w, G) == (AltForm.zero(N, 3), w, AltForm.zero(N, 3))


@settings(max_examples=20, deadline=None)
@given(three_forms)
def test_lambda3_projector_algebra(w):
    from einstab.g2 import default_structure
    G = default_structure()
    w1, w7, w27 = project_lambda3(w, G)
    assert w1 + w7 + w27 == w
    assert wedge(w27, G.phi).is_zero() and wedge(w27, G.psi).is_zero()
    zero = AltForm.zero(N, 3)
    assert project_lambda3(w27, G) == (zero, zero, w27)
    assert project_lambda3(w7, G) == (zero, w7, zero)


def test_ranks_kernels_stabilizer(G, random_structures):
    for H in [G] + random_structures:
        assert projector_ranks(H) == {"lambda2": (7, 14), "lambda3": (1, 7, 27)}
        assert clifford_kernel_dims(H) == {"dim_ker2": 14, "dim_ker3": 27,
                                          "ker2_equals_lambda2_14": True, "ker3_equals_lambda3_27": True}
    assert stabilizer_dimension(G) == 14


def test_endomorphism_values_on_full_bases(G):
    assert endomorphism_values(G) == EXPECTED_ENDOMORPHISM_VALUES


def test_s_on_metric_matches_four_term_expansion(G):
    g = Matrix.identity(N)
    # sum_i g(P_i^2 X, Y) + 2 g(P_i X, P_i Y) + g(X, P_i^2 Y), expanded entrywise
    total = Matrix.zeros(N)
    for P in G.P_basis:
        PP = P @ P
        total = total + PP.T + 2 * (P.T @ P) + PP
    assert total.is_zero()
    assert s_endomorphism(g, G) == total


def test_cas_is_minus_k_seven_minus_k_on_forms():
    for k in range(N + 1):
        for w in form_basis(N, k)[:5]:
            assert cas_so7(w) == -k * (N - k) * w


@settings(max_examples=10, deadline=None)
@given(two_forms, three_forms)
def test_invariant_operators_commute_with_projectors(w2, w3):
    from einstab.g2 import default_structure
    G = default_structure()
    for part, img in zip(project_lambda2(w2, G), project_lambda2(s_endomorphism(w2, G), G)):
        assert s_endomorphism(part, G) == img
    for part, img in zip(project_lambda3(w3, G), project_lambda3(cas_so7(w3), G)):
        assert cas_so7(part) == img
    for part, img in zip(project_lambda3(w3, G), project_lambda3(s_endomorphism(w3, G), G)):
        assert s_endomorphism(part, G) == img


def test_s_commutes_with_derivation_structure(G):
    h = sym2_traceless_basis(N)[4]
    manual = Matrix.zeros(N)
    for P in G.P_basis:
        manual = manual + endo_act_tensor2(P, endo_act_tensor2(P, h))
    assert manual == s_endomorphism(h, G) == -14 * h


def test_i_map_of_metric(G):
    assert i_map(Matrix.identity(N), G) == 3 * G.phi


def test_i_map_rank_and_image(G):
    assert i_map_rank(G) == 27
    for h in sym2_traceless_basis(N)[::5]:
        w1, w7, w27 = project_lambda3(i_map(h, G), G)
        assert w1.is_zero() and w7.is_zero()


def test_j_inverts_i_on_random_tracefree(G):
    rng = random.Random(8)
    basis = sym2_traceless_basis(N)
    for _ in range(5):
        h = Matrix.zeros(N)
        for b in basis:
            h = h + Fraction(rng.randint(-4, 4), rng.randint(1, 3)) * b
        assert j_map(i_map(h, G), G) == h


def test_j_map_domain(G):
    with pytest.raises(DomainError):
        j_map(G.phi, G)
    with pytest.raises(DomainError):
        j_map(AltForm.basis(N, (0, 1)), G)


def test_verify_structure_record(G):
    rec = verify_structure(G)
    assert rec["pass"] is True
    assert rec["phi"] == DEFAULT_PHI
    assert rec["stabilizer_dim"] == 14 and rec["i_map_rank"] == 27
