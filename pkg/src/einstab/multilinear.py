"""Exact multilinear algebra on a model fibre R^n with orthonormal basis e_0..e_{n-1}.

Conventions (all downstream signs follow from these):

* increasing monomials e_I are orthonormal, and e_{i1}^...^e_{ik}(e_{i1},...,e_{ik}) = 1;
* the orientation is e_0^...^e_{n-1};
* a pair of vectors acts as an endomorphism by (e^f)(v) = g(e,v) f - g(f,v) e;
* an endomorphism A acts on tensors as a derivation, e.g.
  (A_* h)(X, Y) = h(AX, Y) + h(X, AY).

Indices are 0-based in Python and 1-based in serialized form ("1,2,3").
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatchError, PreconditionError

Vector = tuple[Fraction, ...]


def fmt(x) -> str:
    """Serialize a rational as "p/q" (or "p" when q = 1)."""
    return str(Fraction(x))


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def vec(*entries) -> Vector:
    return tuple(Fraction(x) for x in entries)


def basis_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(n))


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatchError("vector length mismatch")
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(Fraction(a) + b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    return tuple(Fraction(c) * a for a in v)


def _sort_sign(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation, and the sorted tuple; sign 0 on repeats."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, tuple(idx)
    return sign, tuple(idx)


class Matrix:
    """Square or rectangular matrix of rationals; ``rows[i][j]`` is entry (i, j).

    As an endomorphism, column j holds the image of e_j.  As a bilinear form,
    entry (i, j) is h(e_i, e_j).
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if self.rows and any(len(r) != len(self.rows[0]) for r in self.rows):
            raise DimensionMismatchError("ragged matrix")

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "Matrix":
        return cls([[0] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        return cls(zip(*cols))

    @classmethod
    def outer(cls, u: Sequence, v: Sequence) -> "Matrix":
        return cls([[Fraction(a) * b for b in v] for a in u])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    @property
    def dim(self) -> int:
        n, m = self.shape
        if n != m:
            raise DimensionMismatchError("not square")
        return n

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def _check(self, other: "Matrix"):
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shapes {self.shape} and {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.rows])

    def __mul__(self, c) -> "Matrix":
        c = Fraction(c)
        return Matrix([[c * a for a in r] for r in self.rows])

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatchError("inner dimensions differ")
        cols = list(zip(*other.rows))
        return Matrix([[sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols]
                       for r in self.rows])

    def __call__(self, v: Sequence) -> Vector:
        if len(v) != self.shape[1]:
            raise DimensionMismatchError("matrix/vector shape mismatch")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"Matrix({[[fmt(a) for a in r] for r in self.rows]})"

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.dim)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def is_symmetric(self) -> bool:
        return self == self.T

    def is_skew(self) -> bool:
        return self == -self.T

    def bilinear(self, u: Sequence, v: Sequence) -> Fraction:
        return dot(u, self(v))

    def flat(self) -> Vector:
        return tuple(a for r in self.rows for a in r)

    def to_json(self) -> list[list[str]]:
        return [[fmt(a) for a in r] for r in self.rows]


EndoMatrix = Matrix


class SymTensor2(Matrix):
    """Symmetric 2-tensor; construction fails on asymmetric input."""

    __slots__ = ()

    def __init__(self, rows):
        super().__init__(rows)
        if not self.is_symmetric():
            raise PreconditionError("SymTensor2 entries are not symmetric")


def symmetric_product(u: Sequence, v: Sequence) -> Matrix:
    """u (.) v = u (x) v + v (x) u."""
    return Matrix.outer(u, v) + Matrix.outer(v, u)


class AltForm:
    """Exterior k-form on R^n with rational coefficients on increasing index tuples."""

    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs: Mapping[tuple[int, ...], object] | None = None):
        if dim < 1 or not 0 <= degree <= dim:
            raise DimensionMismatchError(f"degree {degree} invalid on R^{dim}")
        self.dim = dim
        self.degree = degree
        clean: dict[tuple[int, ...], Fraction] = {}
        for key, c in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree or any(not 0 <= i < dim for i in key):
                raise DimensionMismatchError(f"index tuple {key} invalid for degree {degree} on R^{dim}")
            sign, skey = _sort_sign(key)
            c = Fraction(c)
            if sign == 0 or c == 0:
                continue
            clean[skey] = clean.get(skey, Fraction(0)) + sign * c
        self.coeffs = {k: v for k, v in sorted(clean.items()) if v != 0}

    @classmethod
    def zero(cls, dim: int, degree: int) -> "AltForm":
        return cls(dim, degree)

    @classmethod
    def scalar(cls, dim: int, c=1) -> "AltForm":
        return cls(dim, 0, {(): c})

    @classmethod
    def basis(cls, dim: int, indices: Sequence[int], c=1) -> "AltForm":
        return cls(dim, len(indices), {tuple(indices): c})

    @classmethod
    def one_form(cls, v: Sequence) -> "AltForm":
        return cls(len(v), 1, {(i,): c for i, c in enumerate(v)})

    @classmethod
    def from_skew_matrix(cls, m: Matrix) -> "AltForm":
        if not m.is_skew():
            raise PreconditionError("matrix is not skew-symmetric")
        n = m.dim
        return cls(n, 2, {(i, j): m[i, j] for i in range(n) for j in range(i + 1, n)})

    @classmethod
    def from_coords(cls, dim: int, degree: int, coords: Sequence) -> "AltForm":
        keys = list(combinations(range(dim), degree))
        if len(coords) != len(keys):
            raise DimensionMismatchError("coordinate vector has wrong length")
        return cls(dim, degree, dict(zip(keys, coords)))

    def coords(self) -> Vector:
        return tuple(self.coeffs.get(k, Fraction(0)) for k in combinations(range(self.dim), self.degree))

    def __getitem__(self, indices: Sequence[int]) -> Fraction:
        sign, key = _sort_sign(indices)
        return sign * self.coeffs.get(key, Fraction(0))

    def _check(self, other: "AltForm"):
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise DimensionMismatchError(
                f"forms of type ({self.dim},{self.degree}) and ({other.dim},{other.degree})")

    def __add__(self, other: "AltForm") -> "AltForm":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return AltForm(self.dim, self.degree, out)

    def __sub__(self, other: "AltForm") -> "AltForm":
        return self + (-other)

    def __neg__(self) -> "AltForm":
        return AltForm(self.dim, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __mul__(self, c) -> "AltForm":
        c = Fraction(c)
        return AltForm(self.dim, self.degree, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, c) -> "AltForm":
        return self * (1 / Fraction(c))

    def __eq__(self, other) -> bool:
        return (isinstance(other, AltForm) and self.dim == other.dim
                and self.degree == other.degree and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.degree, tuple(self.coeffs.items())))

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"AltForm(dim={self.dim}, degree={self.degree}, 0)"
        terms = " + ".join(f"{fmt(v)}*e{''.join(str(i + 1) for i in k)}" for k, v in self.coeffs.items())
        return f"AltForm(dim={self.dim}, degree={self.degree}, {terms})"

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, *vectors: Sequence) -> Fraction:
        """Value on k vectors (determinant convention)."""
        if len(vectors) != self.degree:
            raise DimensionMismatchError("wrong number of arguments")
        total = Fraction(0)
        for key, c in self.coeffs.items():
            total += c * _det([[v[i] for i in key] for v in vectors])
        return total

    def as_matrix(self) -> Matrix:
        """Skew matrix (omega(e_i, e_j)) of a 2-form."""
        if self.degree != 2:
            raise DimensionMismatchError("only 2-forms have a matrix")
        n = self.dim
        return Matrix([[self[i, j] if i != j else 0 for j in range(n)] for i in range(n)])

    def as_vector(self) -> Vector:
        if self.degree != 1:
            raise DimensionMismatchError("only 1-forms are vectors")
        return tuple(self.coeffs.get((i,), Fraction(0)) for i in range(self.dim))

    def to_json(self) -> dict[str, str]:
        return {",".join(str(i + 1) for i in k): fmt(v) for k, v in self.coeffs.items()}

    @classmethod
    def from_json(cls, dim: int, degree: int, data: Mapping[str, str]) -> "AltForm":
        coeffs = {}
        for key, val in data.items():
            idx = tuple(int(s) - 1 for s in key.split(",")) if key else ()
            coeffs[idx] = parse_fraction(val)
        return cls(dim, degree, coeffs)


def _det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in r] for r in m]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[r][j] -= f * a[c][j]
    return det


def form_basis(dim: int, degree: int) -> list[AltForm]:
    return [AltForm.basis(dim, k) for k in combinations(range(dim), degree)]


def wedge(a: AltForm, b: AltForm) -> AltForm:
    if a.dim != b.dim:
        raise DimensionMismatchError("wedge of forms on different fibres")
    n, deg = a.dim, a.degree + b.degree
    if deg > n:
        return AltForm.zero(n, n)
    out: dict[tuple[int, ...], Fraction] = {}
    for ka, va in a.coeffs.items():
        for kb, vb in b.coeffs.items():
            sign, key = _sort_sign(ka + kb)
            if sign:
                out[key] = out.get(key, Fraction(0)) + sign * va * vb
    return AltForm(n, deg, out)


def hodge_star(a: AltForm) -> AltForm:
    """a ^ *b = <a, b> vol with vol = e_0^...^e_{n-1}."""
    n = a.dim
    out = {}
    for key, c in a.coeffs.items():
        comp = tuple(i for i in range(n) if i not in key)
        sign, _ = _sort_sign(key + comp)
        out[comp] = sign * c
    return AltForm(n, n - a.degree, out)


def interior(X: Sequence, a: AltForm) -> AltForm:
    """(X _| a)(Y, ...) = a(X, Y, ...)."""
    if len(X) != a.dim:
        raise DimensionMismatchError("vector and form live on different fibres")
    if a.degree == 0:
        return AltForm.zero(a.dim, 0)
    out: dict[tuple[int, ...], Fraction] = {}
    for key, c in a.coeffs.items():
        for pos, i in enumerate(key):
            if X[i]:
                rest = key[:pos] + key[pos + 1:]
                out[rest] = out.get(rest, Fraction(0)) + (-1) ** pos * Fraction(X[i]) * c
    return AltForm(a.dim, a.degree - 1, out)


def inner(a: AltForm, b: AltForm) -> Fraction:
    a._check(b)
    return sum((v * b.coeffs.get(k, 0) for k, v in a.coeffs.items()), Fraction(0))


def wedge2_as_endo(e: Sequence, f: Sequence) -> Matrix:
    """The endomorphism v -> g(e, v) f - g(f, v) e."""
    if len(e) != len(f):
        raise DimensionMismatchError("vector length mismatch")
    return Matrix.outer(f, e) - Matrix.outer(e, f)


def form2_as_endo(omega: AltForm) -> Matrix:
    """Image of a 2-form under e_i^e_j -> wedge2_as_endo(e_i, e_j)."""
    # wedge2_as_endo(e_i, e_j) has entry +1 at (j, i): the transpose of omega's matrix
    return omega.as_matrix().T


def endo_act_tensor2(A: Matrix, h: Matrix) -> Matrix:
    """(A_* h)(X, Y) = h(AX, Y) + h(X, AY)."""
    if A.shape != h.shape:
        raise DimensionMismatchError("endomorphism and tensor on different fibres")
    return A.T @ h + h @ A


def endo_act_form(A: Matrix, a: AltForm) -> AltForm:
    """Derivation action (A_* a)(X_1, ..., X_k) = sum_s a(..., A X_s, ...)."""
    n = a.dim
    if A.dim != n:
        raise DimensionMismatchError("endomorphism and form on different fibres")
    out: dict[tuple[int, ...], Fraction] = {}
    for key in combinations(range(n), a.degree):
        total = Fraction(0)
        for s, j in enumerate(key):
            for m in range(n):
                c = A[m, j]
                if c:
                    total += c * a[key[:s] + (m,) + key[s + 1:]]
        if total:
            out[key] = total
    return AltForm(n, a.degree, out)


def sym2_basis(n: int) -> list[Matrix]:
    """Orthogonal basis e_i (.) e_j (i < j) and e_i (x) e_i of symmetric 2-tensors."""
    out = []
    for i in range(n):
        for j in range(i, n):
            out.append(Matrix.outer(basis_vector(n, i), basis_vector(n, i)) if i == j
                       else symmetric_product(basis_vector(n, i), basis_vector(n, j)))
    return out


def sym2_traceless_basis(n: int) -> list[Matrix]:
    """Basis of trace-free symmetric 2-tensors: off-diagonal products, then E_ii - E_{i+1,i+1}."""
    out = [symmetric_product(basis_vector(n, i), basis_vector(n, j))
           for i in range(n) for j in range(i + 1, n)]
    for i in range(n - 1):
        e, f = basis_vector(n, i), basis_vector(n, i + 1)
        out.append(Matrix.outer(e, e) - Matrix.outer(f, f))
    return out
