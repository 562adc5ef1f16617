"""The G2 structure (P, phi, psi) induced by a unit spinor, and its exact linear algebra."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from . import clifford
from .errors import (DomainError, IdentityFailure, NormalizationError,
                     StructureValidationError)
from .linalg import kernel_basis, rank, same_span, solve_exact
from .multilinear import (AltForm, Matrix, Vector, basis_vector, dot,
                          endo_act_form, endo_act_tensor2, form_basis,
                          hodge_star, inner, interior,
                          sym2_traceless_basis, vadd, vscale, wedge,
                          wedge2_as_endo)

N = 7
DEFAULT_SIGMA: Vector = tuple(Fraction(int(i == 0)) for i in range(8))


def unit_spinor(t: Sequence) -> Vector:
    """Rational point of S^7 by inverse stereographic projection of t in Q^7."""
    t = [Fraction(x) for x in t]
    s = sum(x * x for x in t)
    return tuple([(1 - s) / (1 + s)] + [2 * x / (1 + s) for x in t])


def random_unit_spinor(rng: random.Random, height: int = 5) -> Vector:
    t = [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(N)]
    return unit_spinor(t)


def random_vector(rng: random.Random, n: int = N, height: int = 5) -> Vector:
    return tuple(Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(n))


@dataclass(frozen=True, eq=False)
class G2Structure:
    sigma: Vector
    cross: tuple[tuple[Vector, ...], ...]  # cross[i][j] = P(e_i, e_j)
    phi: AltForm
    psi: AltForm
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def P(self, X: Sequence, Y: Sequence) -> Vector:
        out = [Fraction(0)] * N
        for i in range(N):
            if not X[i]:
                continue
            for j in range(N):
                if Y[j]:
                    c = Fraction(X[i]) * Y[j]
                    for k, v in enumerate(self.cross[i][j]):
                        out[k] += c * v
        return tuple(out)

    def P_endo(self, X: Sequence) -> Matrix:
        """The skew endomorphism Y -> P(X, Y), i.e. X _| phi."""
        return Matrix.from_columns([self.P(X, basis_vector(N, j)) for j in range(N)])

    @cached_property
    def P_basis(self) -> tuple[Matrix, ...]:
        return tuple(self.P_endo(basis_vector(N, i)) for i in range(N))


def build_g2_structure(sigma: Sequence = DEFAULT_SIGMA) -> G2Structure:
    """Solve P(X,Y).sigma = X.Y.sigma + g(X,Y) sigma on the image of X -> X.sigma."""
    sigma = tuple(Fraction(x) for x in sigma)
    if len(sigma) != 8:
        raise NormalizationError("spinor must have 8 components")
    if dot(sigma, sigma) != 1:
        raise NormalizationError(f"spinor has norm squared {dot(sigma, sigma)}, expected 1")
    E = [basis_vector(N, i) for i in range(N)]
    images = [clifford.vector_action(e, sigma) for e in E]
    A = Matrix.from_columns(images)
    if rank(A.rows) != N:
        raise StructureValidationError("X -> X.sigma is not injective")
    cross = []
    for i in range(N):
        row = []
        for j in range(N):
            target = clifford.vector_action(E[i], images[j])
            if i == j:
                target = vadd(target, sigma)
            if dot(target, sigma) != 0:
                raise StructureValidationError("X.Y.sigma + g(X,Y) sigma has a component along sigma")
            row.append(solve_exact(A.rows, target))
        cross.append(tuple(row))
    phi = AltForm(N, 3, {(i, j, k): cross[i][j][k] for i, j, k in combinations(range(N), 3)})
    G = G2Structure(sigma, tuple(cross), phi, hodge_star(phi))
    _validate_cross(G)
    return G


def _validate_cross(G: G2Structure) -> None:
    for i in range(N):
        for j in range(N):
            if G.cross[i][j] != vscale(-1, G.cross[j][i]):
                raise StructureValidationError(f"P(e{i + 1}, e{j + 1}) is not skew")
            if G.cross[i][j][i] != 0:
                raise StructureValidationError(f"g(P(e{i + 1}, e{j + 1}), e{i + 1}) != 0")
            for k in range(N):
                if G.cross[i][j][k] != G.cross[j][k][i]:
                    raise StructureValidationError("g(P(X,Y),Z) is not totally antisymmetric")


def default_structure() -> G2Structure:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = build_g2_structure()
    return _DEFAULT


_DEFAULT: G2Structure | None = None


# -- decompositions of 2-forms and 3-forms ---------------------------------

def star_phi_wedge(omega: AltForm, G: G2Structure) -> AltForm:
    return hodge_star(wedge(G.phi, omega))


def _check_lambda2_orientation(G: G2Structure) -> None:
    if G._cache.get("lambda2_ok"):
        return
    for w in form_basis(N, 2):
        Tw = star_phi_wedge(w, G)
        if not (star_phi_wedge(Tw, G) + Tw - 2 * w).is_zero():
            raise StructureValidationError(
                "*(phi ^ .) does not satisfy (T+2)(T-1) = 0 on 2-forms; orientation is reversed")
    G._cache["lambda2_ok"] = True


def project_lambda2(omega: AltForm, G: G2Structure) -> tuple[AltForm, AltForm]:
    """Split a 2-form into its 7- and 14-dimensional components."""
    _check_lambda2_orientation(G)
    T = star_phi_wedge(omega, G)
    return (omega - T) / 3, (T + 2 * omega) / 3


def _lambda3_7_gram(G: G2Structure):
    if "l37" not in G._cache:
        span = [interior(basis_vector(N, i), G.psi) for i in range(N)]
        gram = [[inner(a, b) for b in span] for a in span]
        G._cache["l37"] = (span, gram)
    return G._cache["l37"]


def project_lambda3(omega: AltForm, G: G2Structure) -> tuple[AltForm, AltForm, AltForm]:
    """Split a 3-form into its 1-, 7- and 27-dimensional components."""
    w1 = G.phi * (inner(omega, G.phi) / inner(G.phi, G.phi))
    span, gram = _lambda3_7_gram(G)
    coef = solve_exact(gram, [inner(omega, s) for s in span])
    w7 = AltForm.zero(N, 3)
    for c, s in zip(coef, span):
        w7 = w7 + c * s
    w27 = omega - w1 - w7
    if not (wedge(w27, G.phi).is_zero() and wedge(w27, G.psi).is_zero()):
        raise StructureValidationError("27-component is not annihilated by phi and psi")
    return w1, w7, w27


def projector_ranks(G: G2Structure) -> dict[str, tuple[int, ...]]:
    two = [project_lambda2(w, G) for w in form_basis(N, 2)]
    three = [project_lambda3(w, G) for w in form_basis(N, 3)]
    return {
        "lambda2": tuple(rank([p[i].coords() for p in two]) for i in range(2)),
        "lambda3": tuple(rank([p[i].coords() for p in three]) for i in range(3)),
    }


def _summand_basis(G: G2Structure, degree: int, index: int) -> list[Vector]:
    proj = project_lambda2 if degree == 2 else project_lambda3
    vecs = [proj(w, G)[index].coords() for w in form_basis(N, degree)]
    # keep a maximal independent subset, in basis order
    basis: list[Vector] = []
    for v in vecs:
        if rank(basis + [v]) > len(basis):
            basis.append(v)
    return basis


def clifford_kernel(G: G2Structure, degree: int) -> list[Vector]:
    """Basis (in form coordinates) of {omega in Lambda^degree : omega.sigma = 0}."""
    cols = [clifford.form_action(w, G.sigma) for w in form_basis(N, degree)]
    return kernel_basis(Matrix.from_columns(cols).rows)


def clifford_kernel_dims(G: G2Structure) -> dict:
    k2, k3 = clifford_kernel(G, 2), clifford_kernel(G, 3)
    return {
        "dim_ker2": len(k2),
        "dim_ker3": len(k3),
        "ker2_equals_lambda2_14": same_span(k2, _summand_basis(G, 2, 1)),
        "ker3_equals_lambda3_27": same_span(k3, _summand_basis(G, 3, 2)),
    }


def so7_basis(n: int = N) -> list[Matrix]:
    return [wedge2_as_endo(basis_vector(n, i), basis_vector(n, j)) for i, j in combinations(range(n), 2)]


def stabilizer_dimension(G: G2Structure) -> int:
    """dim {a in so(7) : a_* phi = 0}."""
    cols = [endo_act_form(a, G.phi).coords() for a in so7_basis()]
    return len(kernel_basis(Matrix.from_columns(cols).rows))


# -- identity suite ----------------------------------------------------------

def _sum_forms(forms, dim, degree) -> AltForm:
    total = AltForm.zero(dim, degree)
    for f in forms:
        total = total + f
    return total


def g2_identity_suite(G: G2Structure, vectors: Sequence[Sequence] | None = None,
                      strict: bool = False) -> list[dict]:
    """Check the Clifford and cross-product identities of the G2 structure exactly.

    Vector identities are checked on the standard basis plus any extra ``vectors``.
    Returns one record per identity; with ``strict`` the first failure raises.
    """
    E = [basis_vector(N, i) for i in range(N)]
    tests = E + [tuple(Fraction(x) for x in v) for v in (vectors or [])]
    sigma = G.sigma
    phi_i = [interior(e, G.phi) for e in E]

    def act(form, s=sigma):
        return clifford.form_action(form, s)

    def vact(X, s=sigma):
        return clifford.vector_action(X, s)

    def first_failure(check):
        for X in tests:
            if not check(X):
                return [str(x) for x in X]
        return None

    checks = [
        ("contraction_phi_on_sigma", "(X _| phi).sigma = 3 X.sigma",
         lambda: first_failure(lambda X: act(interior(X, G.phi)) == vscale(3, vact(X)))),
        ("phi_on_sigma", "phi.sigma = -7 sigma",
         lambda: None if act(G.phi) == vscale(-7, sigma) else [str(x) for x in act(G.phi)]),
        ("contraction_psi_on_sigma", "(X _| psi).sigma = -4 X.sigma",
         lambda: first_failure(lambda X: act(interior(X, G.psi)) == vscale(-4, vact(X)))),
        ("double_cross_product", "sum_i P(e_i, P(e_i, X)) = -6 X",
         lambda: first_failure(lambda X: _sum_vectors(G.P(e, G.P(e, X)) for e in E) == vscale(-6, X))),
        ("phi_contraction_formula", "X _| phi = -1/2 sum_i e_i ^ P(e_i, X)",
         lambda: first_failure(lambda X: interior(X, G.phi) == Fraction(-1, 2) * _sum_forms(
             (wedge(AltForm.one_form(e), AltForm.one_form(G.P(e, X))) for e in E), N, 2))),
        ("psi_square_formula", "*phi = -1/6 sum_i (e_i _| phi) ^ (e_i _| phi)",
         lambda: None if G.psi == Fraction(-1, 6) * _sum_forms((wedge(a, a) for a in phi_i), N, 4)
         else ["psi"]),
        ("psi_contraction_formula", "X _| *phi = -1/3 sum_i P(e_i, X) ^ (e_i _| phi)",
         lambda: first_failure(lambda X: interior(X, G.psi) == Fraction(-1, 3) * _sum_forms(
             (wedge(AltForm.one_form(G.P(e, X)), a) for e, a in zip(E, phi_i)), N, 3))),
    ]
    report = []
    for name, anchor, run in checks:
        witness = run()
        rec = {"identity_name": name, "anchor": anchor, "pass": witness is None}
        if witness is not None:
            rec["witness"] = witness
            if strict:
                raise IdentityFailure(name, witness)
        report.append(rec)
    return report


def _sum_vectors(vs) -> Vector:
    out = [Fraction(0)] * N
    for v in vs:
        for i, x in enumerate(v):
            out[i] += x
    return tuple(out)


# -- invariant endomorphisms -------------------------------------------------

def _apply_squared(endos: Sequence[Matrix], h):
    """sum_a (A_a)_* (A_a)_* h for a vector, 2-tensor or form h."""
    if isinstance(h, AltForm):
        total = AltForm.zero(h.dim, h.degree)
        for A in endos:
            total = total + endo_act_form(A, endo_act_form(A, h))
        return total
    if isinstance(h, Matrix):
        total = Matrix.zeros(h.dim)
        for A in endos:
            total = total + endo_act_tensor2(A, endo_act_tensor2(A, h))
        return total
    return _sum_vectors(A(A(h)) for A in endos)


def s_endomorphism(h, G: G2Structure):
    """S = sum_i P_{e_i} o P_{e_i}, acting on vectors, 2-tensors or forms."""
    return _apply_squared(G.P_basis, h)


def cas_so7(h, n: int = N):
    """Casimir sum_{i<j} (e_i^e_j)_* (e_i^e_j)_* of so(n)."""
    return _apply_squared(so7_basis(n), h)


def endomorphism_values(G: G2Structure) -> dict[str, dict[str, str | None]]:
    """Scalar by which S and Cas act on T, Lambda^1..3 and Sym^2_0 (None if not scalar)."""
    def scalar_on(op, basis):
        c = None
        for b in basis:
            img = op(b)
            if isinstance(b, AltForm):
                bc, ic = b.coords(), img.coords()
            elif isinstance(b, Matrix):
                bc, ic = b.flat(), img.flat()
            else:
                bc, ic = b, img
            k = next(i for i, x in enumerate(bc) if x)
            ratio = ic[k] / bc[k]
            if tuple(ratio * x for x in bc) != tuple(ic):
                return None
            if c is not None and ratio != c:
                return None
            c = ratio
        return str(c)

    vectors = [basis_vector(N, i) for i in range(N)]
    sym0 = sym2_traceless_basis(N)
    S = lambda h: s_endomorphism(h, G)  # noqa: E731
    return {
        "S": {"T": scalar_on(S, vectors), "Sym2_0": scalar_on(S, sym0)},
        "Cas": {
            "Lambda1": scalar_on(cas_so7, form_basis(N, 1)),
            "Lambda2": scalar_on(cas_so7, form_basis(N, 2)),
            "Lambda3": scalar_on(cas_so7, form_basis(N, 3)),
            "T": scalar_on(cas_so7, vectors),
            "Sym2_0": scalar_on(cas_so7, sym0),
        },
    }


# -- identification of Sym^2_0 with Lambda^3_27 ------------------------------

def i_map(h: Matrix, G: G2Structure) -> AltForm:
    """sum_i h(e_i, .) ^ (e_i _| phi)."""
    total = AltForm.zero(N, 3)
    for i in range(N):
        total = total + wedge(AltForm.one_form(h.rows[i]), interior(basis_vector(N, i), G.phi))
    return total


def j_map(beta: AltForm, G: G2Structure) -> Matrix:
    """Inverse of i_map on trace-free symmetric tensors (j o i = id on Sym^2_0)."""
    if beta.degree != 3 or beta.dim != N:
        raise DomainError("j_map expects a 3-form on R^7")
    if not (wedge(beta, G.phi).is_zero() and wedge(beta, G.psi).is_zero()):
        raise DomainError("3-form does not lie in the 27-dimensional summand")
    if "i_map" not in G._cache:
        basis = sym2_traceless_basis(N)
        G._cache["i_map"] = (basis, Matrix.from_columns([i_map(b, G).coords() for b in basis]).rows)
    basis, M = G._cache["i_map"]
    coef = solve_exact(M, beta.coords())
    total = Matrix.zeros(N)
    for c, b in zip(coef, basis):
        if c:
            total = total + c * b
    return total


def i_map_rank(G: G2Structure) -> int:
    return rank([i_map(b, G).coords() for b in sym2_traceless_basis(N)])


def verify_structure(G: G2Structure, extra_vectors=()) -> dict:
    """Everything checked about one G2 structure, as a JSON-ready record."""
    ranks = projector_ranks(G)
    kernels = clifford_kernel_dims(G)
    stab = stabilizer_dimension(G)
    values = endomorphism_values(G)
    suite = g2_identity_suite(G, extra_vectors)
    ok = (
        all(r["pass"] for r in suite)
        and ranks == {"lambda2": (7, 14), "lambda3": (1, 7, 27)}
        and kernels == {"dim_ker2": 14, "dim_ker3": 27,
                        "ker2_equals_lambda2_14": True, "ker3_equals_lambda3_27": True}
        and stab == 14
        and values == EXPECTED_ENDOMORPHISM_VALUES
        and i_map_rank(G) == 27
        and i_map(Matrix.identity(N), G) == 3 * G.phi
    )
    return {
        "sigma": [str(x) for x in G.sigma],
        "phi": G.phi.to_json(),
        "identities": suite,
        "projector_ranks": {k: list(v) for k, v in ranks.items()},
        "clifford_kernels": kernels,
        "stabilizer_dim": stab,
        "endomorphism_values": values,
        "i_map_rank": i_map_rank(G),
        "pass": ok,
    }


EXPECTED_ENDOMORPHISM_VALUES = {
    "S": {"T": "-6", "Sym2_0": "-14"},
    "Cas": {"Lambda1": "-6", "Lambda2": "-10", "Lambda3": "-12", "T": "-6", "Sym2_0": "-14"},
}
