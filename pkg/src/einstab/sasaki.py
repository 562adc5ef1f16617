"""Single-fibre model of a Sasaki structure on R^{2n+1} and its tensor identities.

Basis order: x_1, y_1, ..., x_n, y_n, xi with Phi(x_a) = y_a, Phi(y_a) = -x_a,
Phi(xi) = 0.  "Basic" is modelled pointwise as horizontal (xi _| h = 0); the
Lie-derivative half of that condition has no meaning on a single fibre.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import PreconditionError
from .multilinear import (AltForm, Matrix, Vector, basis_vector, dot,
                          endo_act_tensor2, inner, symmetric_product, vscale,
                          wedge2_as_endo)


@dataclass(frozen=True)
class SasakiFibre:
    n: int
    Phi: Matrix
    xi: Vector
    eta: Vector
    d_eta: AltForm

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def e(self, i: int) -> Vector:
        return basis_vector(self.dim, i)

    def horizontal(self, v) -> Vector:
        """Drop the xi-component (comparison "mod xi")."""
        return tuple(x if i != self.dim - 1 else Fraction(0) for i, x in enumerate(v))


def build_fibre(n: int) -> SasakiFibre:
    if n < 1:
        raise PreconditionError("n must be at least 1")
    dim = 2 * n + 1
    cols = []
    for a in range(n):
        cols.append(basis_vector(dim, 2 * a + 1))                 # Phi x_a = y_a
        cols.append(vscale(-1, basis_vector(dim, 2 * a)))         # Phi y_a = -x_a
    cols.append((Fraction(0),) * dim)
    Phi = Matrix.from_columns(cols)
    xi = basis_vector(dim, dim - 1)
    # d_eta(X, Y) = 2 g(X, Phi Y)
    d_eta = AltForm.from_skew_matrix(2 * Phi)
    F = SasakiFibre(n, Phi, xi, xi, d_eta)
    _check_fibre(F)
    return F


def _check_fibre(F: SasakiFibre) -> None:
    dim = F.dim
    eta_xi = Matrix.outer(F.xi, F.eta)  # v -> eta(v) xi
    assert F.Phi @ F.Phi == -Matrix.identity(dim) + eta_xi
    assert F.Phi.T @ F.Phi == Matrix.identity(dim) - Matrix.outer(F.eta, F.eta)
    assert not any(F.Phi(F.xi)) and dot(F.eta, F.xi) == 1
    for i in range(dim):
        for j in range(dim):
            assert F.d_eta.evaluate(F.e(i), F.e(j)) == 2 * dot(F.e(i), F.Phi(F.e(j)))


def a_tensor(X, F: SasakiFibre) -> Matrix:
    """A_X = -eta(X) Phi + xi ^ Phi(X)."""
    return -dot(F.eta, X) * F.Phi + wedge2_as_endo(F.xi, F.Phi(X))


# -- classification of 2-tensors ----------------------------------------------

@dataclass(frozen=True)
class BasicTensor2:
    underlying: Matrix
    is_symmetric: bool
    is_skew: bool
    is_phi_invariant: bool
    is_horizontal: bool
    is_tracefree: bool
    is_primitive: bool


def _as_matrix(h) -> Matrix:
    if isinstance(h, BasicTensor2):
        return h.underlying
    if isinstance(h, AltForm):
        return h.as_matrix()
    return h


def classify(h, F: SasakiFibre) -> BasicTensor2:
    m = _as_matrix(h)
    last = F.dim - 1
    horizontal = all(m[last, j] == 0 and m[j, last] == 0 for j in range(F.dim))
    pulled = F.Phi.T @ m @ F.Phi  # (X, Y) -> h(Phi X, Phi Y)
    hor = range(last)
    phi_inv = all(pulled[i, j] == m[i, j] for i in hor for j in hor)
    skew = m.is_skew()
    primitive = skew and inner(AltForm.from_skew_matrix(m), F.d_eta) == 0
    return BasicTensor2(m, m.is_symmetric(), skew, phi_inv, horizontal, m.trace() == 0, primitive)


def _require(cond: bool, msg: str):
    if not cond:
        raise PreconditionError(msg)


def _sum(ms, dim) -> Matrix:
    total = Matrix.zeros(dim)
    for m in ms:
        total = total + m
    return total


def q_diff(h, F: SasakiFibre) -> Matrix:
    """-1/2 sum_{i,j} (e_i^e_j)_* (Phi e_i ^ Phi e_j)_* + sum_j (xi^e_j)_* (xi^e_j)_*, applied to h."""
    c = classify(h, F)
    _require(c.is_phi_invariant and c.is_horizontal, "q_diff needs a Phi-invariant horizontal tensor")
    _require(c.is_skew or (c.is_symmetric and c.is_tracefree),
             "q_diff needs a 2-form or a trace-free symmetric tensor")
    m, dim = c.underlying, F.dim
    E = [F.e(i) for i in range(dim)]
    first = _sum((endo_act_tensor2(wedge2_as_endo(E[i], E[j]),
                                   endo_act_tensor2(wedge2_as_endo(F.Phi(E[i]), F.Phi(E[j])), m))
                  for i in range(dim) for j in range(dim) if i != j), dim)
    second = _sum((endo_act_tensor2(wedge2_as_endo(F.xi, e), endo_act_tensor2(wedge2_as_endo(F.xi, e), m))
                   for e in E), dim)
    return Fraction(-1, 2) * first + second


def in_rough_lemma_class(h, F: SasakiFibre) -> bool:
    c = classify(h, F)
    return c.is_symmetric and c.is_tracefree and c.is_phi_invariant and c.is_horizontal


def rough_diff_algebraic(h, F: SasakiFibre, check: bool = True) -> Matrix:
    """sum_i (A_{e_i})_* (A_{e_i})_* h.

    With ``check`` the input must be trace-free, Phi-invariant, horizontal and
    symmetric; with ``check=False`` the sum is evaluated regardless (use
    ``in_rough_lemma_class`` to flag the result).
    """
    if check:
        _require(in_rough_lemma_class(h, F),
                 "tensor is not trace-free, Phi-invariant, horizontal and symmetric")
    m = _as_matrix(h)
    As = [a_tensor(F.e(i), F) for i in range(F.dim)]
    return _sum((endo_act_tensor2(A, endo_act_tensor2(A, m)) for A in As), F.dim)


def mod_xi_identities(F: SasakiFibre) -> dict[str, bool]:
    """The vector-level identities behind the tensor formulas, checked on every basis vector."""
    dim = F.dim
    E = [F.e(i) for i in range(dim)]
    out = {"phi_pair_sum": True, "xi_pair_sum": True, "a_tensor_sum": True}
    for X in E:
        s = (Fraction(0),) * dim
        for i in range(dim):
            for j in range(dim):
                w = wedge2_as_endo(F.Phi(E[i]), F.Phi(E[j]))(wedge2_as_endo(E[i], E[j])(X))
                s = tuple(a + Fraction(-1, 2) * b for a, b in zip(s, w))
        out["phi_pair_sum"] &= F.horizontal(s) == F.horizontal(X)
        t = (Fraction(0),) * dim
        for e in E:
            B = wedge2_as_endo(F.xi, e)
            t = tuple(a + b for a, b in zip(t, B(B(X))))
        out["xi_pair_sum"] &= F.horizontal(t) == F.horizontal(vscale(-1, X))
        u = (Fraction(0),) * dim
        for e in E:
            w = wedge2_as_endo(F.xi, F.Phi(e))(a_tensor(e, F)(X))
            u = tuple(a + b for a, b in zip(u, w))
        out["a_tensor_sum"] &= F.horizontal(u) == F.horizontal(vscale(-1, X))
    return out


def h_from_alpha(alpha, F: SasakiFibre) -> BasicTensor2:
    """h_alpha(X, Y) = alpha(X, Phi Y)."""
    c = classify(alpha, F)
    _require(c.is_skew, "alpha must be a 2-form")
    _require(c.is_horizontal, "alpha must be horizontal")
    h = c.underlying @ F.Phi
    if not h.is_symmetric():
        # symmetric exactly when alpha is Phi-invariant
        bad = next((i, j) for i in range(F.dim) for j in range(F.dim) if h[i, j] != h[j, i])
        raise PreconditionError(f"alpha is not Phi-invariant: h_alpha is asymmetric at entry {bad}")
    return classify(h, F)


def trace_pairing_constant(F: SasakiFibre) -> Fraction:
    """The constant c with tr(h_alpha) = c <alpha, d_eta>, measured on alpha = d_eta."""
    h = h_from_alpha(F.d_eta, F).underlying
    return h.trace() / inner(F.d_eta, F.d_eta)


# -- spanning sets of the Phi-invariant horizontal classes --------------------

def _x(F, a):
    return F.e(2 * a)


def _y(F, a):
    return F.e(2 * a + 1)


def phi_invariant_2forms(F: SasakiFibre) -> list[AltForm]:
    """Real (1,1)-forms: x_a^y_a, then x_a^x_b + y_a^y_b and x_a^y_b - y_a^x_b (a < b)."""
    dim, out = F.dim, []
    for a in range(F.n):
        out.append(AltForm.basis(dim, (2 * a, 2 * a + 1)))
    for a, b in combinations(range(F.n), 2):
        out.append(AltForm(dim, 2, {(2 * a, 2 * b): 1, (2 * a + 1, 2 * b + 1): 1}))
        out.append(AltForm(dim, 2, {(2 * a, 2 * b + 1): 1, (2 * a + 1, 2 * b): -1}))
    return out


def primitive_phi_invariant_2forms(F: SasakiFibre) -> list[AltForm]:
    dim, out = F.dim, []
    for a in range(F.n - 1):
        out.append(AltForm(dim, 2, {(2 * a, 2 * a + 1): 1, (2 * a + 2, 2 * a + 3): -1}))
    out.extend(phi_invariant_2forms(F)[F.n:])
    return out


def phi_invariant_sym_tracefree(F: SasakiFibre) -> list[Matrix]:
    """Hermitian trace-free tensors: g_a - g_{a+1}, then the off-diagonal pairs (a < b)."""
    out = []
    g = [Matrix.outer(_x(F, a), _x(F, a)) + Matrix.outer(_y(F, a), _y(F, a)) for a in range(F.n)]
    for a in range(F.n - 1):
        out.append(g[a] - g[a + 1])
    for a, b in combinations(range(F.n), 2):
        out.append(symmetric_product(_x(F, a), _x(F, b)) + symmetric_product(_y(F, a), _y(F, b)))
        out.append(symmetric_product(_x(F, a), _y(F, b)) - symmetric_product(_y(F, a), _x(F, b)))
    return out


def verify_fibre(n: int) -> list[dict]:
    """All fibrewise checks for one n, as report records."""
    F = build_fibre(n)
    records = []

    def record(lemma, klass, expected, got, ok):
        records.append({"lemma": lemma, "class": klass, "dimension_n": n,
                        "expected": expected, "got": got, "pass": bool(ok)})

    prim = primitive_phi_invariant_2forms(F)
    ok = all(q_diff(w, F) == 2 * w.as_matrix() for w in prim)
    record("curvature_difference", "primitive Phi-invariant horizontal 2-forms", "2 id",
           "2 id" if ok else "mismatch", ok)
    # the non-primitive direction picks up the term -<h, d_eta> d_eta
    got = q_diff(F.d_eta, F)[0, 1] / F.d_eta.as_matrix()[0, 1]
    ok = q_diff(F.d_eta, F) == got * F.d_eta.as_matrix() and got == 2 - 4 * n
    record("curvature_difference", "alpha = d_eta", f"{2 - 4 * n} id", f"{got} id", ok)

    syms = phi_invariant_sym_tracefree(F)
    ok = all(q_diff(h, F) == -2 * h for h in syms)
    record("curvature_difference", "Phi-invariant horizontal trace-free symmetric", "-2 id",
           "-2 id" if ok else "mismatch", ok)

    ok = all(rough_diff_algebraic(h, F) == -2 * h for h in syms)
    record("rough_laplacian_difference_algebraic", "Phi-invariant horizontal trace-free symmetric",
           "-2 id", "-2 id" if ok else "mismatch", ok)

    for name, ok in mod_xi_identities(F).items():
        record("mod_xi_" + name, "basis vectors", "+X mod xi" if name == "phi_pair_sum" else "-X mod xi",
               "holds" if ok else "fails", ok)

    ok = all((lambda c: c.is_symmetric and c.is_tracefree)(h_from_alpha(a, F)) for a in prim)
    nonprim = h_from_alpha(F.d_eta, F)
    ok_non = nonprim.is_symmetric and not nonprim.is_tracefree
    record("h_alpha_tracefree", "primitive Phi-invariant horizontal 2-forms", "symmetric trace-free",
           "symmetric trace-free" if ok else "mismatch", ok)
    record("h_alpha_trace", "alpha = d_eta", "nonzero trace", str(nonprim.underlying.trace()), ok_non)
    const = trace_pairing_constant(F)
    record("h_alpha_trace_pairing", "tr(h_alpha) / <alpha, d_eta>", "nonzero constant", str(const), const != 0)
    return records
