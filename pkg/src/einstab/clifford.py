"""Cl(7) with e_i e_j + e_j e_i = -2 delta_ij, and its 8-dimensional real spinor module.

Basis monomials e_S are indexed by bitmasks S over {0..6}.  The spinor module is
the octonions O = R^8 (index 0 the real unit, 1..7 the imaginary units), with
e_i acting by left multiplication by the imaginary unit u_{i+1}.
The octonion table uses the Fano lines (i, i+1, i+3) mod 7, i.e. u_i u_{i+1} = u_{i+3}.
The overall sign of rho is fixed so that the induced G2 structure is compatible
with the orientation e_1^...^e_7: the negated representation yields -phi, for
which *(phi ^ .) has eigenvalues 2 and -1 on 2-forms instead of -2 and 1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import DimensionMismatchError
from .multilinear import AltForm, Matrix

DIM = 7
SPINOR_DIM = 8

FANO_LINES = tuple((i % 7 + 1, (i + 1) % 7 + 1, (i + 3) % 7 + 1) for i in range(7))
# Overall sign of rho(e_i) relative to left octonion multiplication.
RHO_SIGN = 1


def _blade_sign(a: int, b: int) -> int:
    """Sign of e_a e_b = sign * e_{a xor b} for the relation e_i^2 = -1."""
    sign = 1
    # count transpositions moving each generator of b left past the larger ones of a
    x = a >> 1
    swaps = 0
    while x:
        swaps += bin(x & b).count("1")
        x >>= 1
    if swaps & 1:
        sign = -sign
    if bin(a & b).count("1") & 1:
        sign = -sign
    return sign


class CliffordElement:
    __slots__ = ("coeffs", "dim")

    def __init__(self, coeffs: Mapping[int, object] | None = None, dim: int = DIM):
        self.dim = dim
        self.coeffs = {int(k): Fraction(v) for k, v in sorted((coeffs or {}).items()) if Fraction(v) != 0}
        if any(k >> dim for k in self.coeffs):
            raise DimensionMismatchError("monomial outside Cl(%d)" % dim)

    @classmethod
    def scalar(cls, c=1, dim: int = DIM) -> "CliffordElement":
        return cls({0: c}, dim)

    @classmethod
    def generator(cls, i: int, dim: int = DIM) -> "CliffordElement":
        return cls({1 << i: 1}, dim)

    @classmethod
    def from_vector(cls, v: Sequence) -> "CliffordElement":
        return cls({1 << i: c for i, c in enumerate(v)}, len(v))

    @classmethod
    def from_form(cls, a: AltForm) -> "CliffordElement":
        """e_{i1}^...^e_{ik} -> e_{i1}...e_{ik} (increasing indices)."""
        out = {}
        for key, c in a.coeffs.items():
            mask = 0
            for i in key:
                mask |= 1 << i
            out[mask] = c
        return cls(out, a.dim)

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return CliffordElement(out, self.dim)

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        return self + other * -1

    def __neg__(self) -> "CliffordElement":
        return self * -1

    def __mul__(self, other) -> "CliffordElement":
        if not isinstance(other, CliffordElement):
            c = Fraction(other)
            return CliffordElement({k: c * v for k, v in self.coeffs.items()}, self.dim)
        return clifford_mul(self, other)

    def __rmul__(self, c) -> "CliffordElement":
        return self * c

    def __eq__(self, other) -> bool:
        return isinstance(other, CliffordElement) and self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __repr__(self) -> str:
        def name(m):
            return "e" + "".join(str(i + 1) for i in range(self.dim) if m >> i & 1) if m else "1"
        return "CliffordElement(" + " + ".join(f"{v}*{name(k)}" for k, v in self.coeffs.items()) + ")"

    def grades(self) -> set[int]:
        return {bin(k).count("1") for k in self.coeffs}


def clifford_mul(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    if a.dim != b.dim:
        raise DimensionMismatchError("Clifford elements of different algebras")
    out: dict[int, Fraction] = {}
    for ka, va in a.coeffs.items():
        for kb, vb in b.coeffs.items():
            k = ka ^ kb
            out[k] = out.get(k, Fraction(0)) + _blade_sign(ka, kb) * va * vb
    return CliffordElement(out, a.dim)


def octonion_mul(x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
    """Product of octonions given as 8-vectors (index 0 real part)."""
    out = [Fraction(0)] * 8
    for i in range(8):
        if not x[i]:
            continue
        for j in range(8):
            if not y[j]:
                continue
            sign, k = _unit_product(i, j)
            out[k] += sign * Fraction(x[i]) * y[j]
    return tuple(out)


@lru_cache(maxsize=None)
def _unit_product(i: int, j: int) -> tuple[int, int]:
    if i == 0:
        return 1, j
    if j == 0:
        return 1, i
    if i == j:
        return -1, 0
    for a, b, c in FANO_LINES:
        cyc = ((a, b, c), (b, c, a), (c, a, b))
        for p, q, r in cyc:
            if (i, j) == (p, q):
                return 1, r
            if (i, j) == (q, p):
                return -1, r
    raise AssertionError("incomplete Fano table")


@lru_cache(maxsize=None)
def generator_matrix(i: int) -> Matrix:
    """rho(e_i) as an 8x8 signed permutation matrix (0-based i in 0..6)."""
    cols = []
    for j in range(8):
        unit = [0] * 8
        unit[j] = 1
        imag = [0] * 8
        imag[i + 1] = RHO_SIGN
        cols.append(octonion_mul(imag, unit))
    return Matrix.from_columns(cols)


@lru_cache(maxsize=None)
def blade_matrix(mask: int) -> Matrix:
    m = Matrix.identity(SPINOR_DIM)
    for i in range(DIM):
        if mask >> i & 1:
            m = m @ generator_matrix(i)
    return m


def spinor_matrix(a: CliffordElement) -> Matrix:
    if a.dim != DIM:
        raise DimensionMismatchError("spinor module exists here only for Cl(7)")
    total = Matrix.zeros(SPINOR_DIM)
    for k, v in a.coeffs.items():
        total = total + v * blade_matrix(k)
    return total


def spinor_rep(a: CliffordElement, s: Sequence) -> tuple[Fraction, ...]:
    """rho(a) s."""
    if len(s) != SPINOR_DIM:
        raise DimensionMismatchError("spinor must have 8 components")
    out = [Fraction(0)] * SPINOR_DIM
    for k, v in a.coeffs.items():
        img = blade_matrix(k)(s)
        for i in range(SPINOR_DIM):
            out[i] += v * img[i]
    return tuple(out)


def vector_action(X: Sequence, s: Sequence) -> tuple[Fraction, ...]:
    """X . s for a vector X in R^7."""
    return spinor_rep(CliffordElement.from_vector(X), s)


def form_action(a: AltForm, s: Sequence) -> tuple[Fraction, ...]:
    """omega . s for a form omega (via the increasing-monomial identification)."""
    return spinor_rep(CliffordElement.from_form(a), s)
