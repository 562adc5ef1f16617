"""Characters of sp(1) = su(2) and sp(2) = so(5), plethysms, and principal branching.

Characters are finitely supported integer functions on Z (one torus variable x)
or Z^2 (variables x, y).  A C2 highest weight (k, l) means k*eps1 + l*eps2, so
the standard 4-dimensional module is (1, 0) with weights +-eps1, +-eps2 and the
adjoint is (2, 0).  The principal sp(1) restricts (x, y) -> (t^3, t).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .errors import CertificateError, DimensionMismatchError, EinstabError, NotACharacterError

Exponent = tuple[int, ...]


class LaurentCharacter:
    __slots__ = ("num_vars", "coeffs")

    def __init__(self, num_vars: int, coeffs: Mapping[Exponent, int] | None = None):
        if num_vars not in (1, 2):
            raise DimensionMismatchError("only one or two torus variables are supported")
        self.num_vars = num_vars
        clean: dict[Exponent, int] = {}
        for e, c in (coeffs or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != num_vars:
                raise DimensionMismatchError(f"exponent {e} has wrong length")
            if c:
                clean[e] = clean.get(e, 0) + int(c)
        self.coeffs = {e: c for e, c in sorted(clean.items()) if c}

    @classmethod
    def one(cls, num_vars: int = 1) -> "LaurentCharacter":
        return cls(num_vars, {(0,) * num_vars: 1})

    def _check(self, other: "LaurentCharacter"):
        if self.num_vars != other.num_vars:
            raise DimensionMismatchError("characters in different numbers of variables")

    def __add__(self, other: "LaurentCharacter") -> "LaurentCharacter":
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentCharacter(self.num_vars, out)

    def __neg__(self) -> "LaurentCharacter":
        return LaurentCharacter(self.num_vars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentCharacter") -> "LaurentCharacter":
        return self + (-other)

    def __mul__(self, other) -> "LaurentCharacter":
        if isinstance(other, int):
            return LaurentCharacter(self.num_vars, {e: other * c for e, c in self.coeffs.items()})
        self._check(other)
        out: dict[Exponent, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentCharacter(self.num_vars, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, LaurentCharacter) and self.num_vars == other.num_vars
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.num_vars, tuple(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"LaurentCharacter({self.num_vars}, {self.coeffs})"

    def is_zero(self) -> bool:
        return not self.coeffs

    def dim(self) -> int:
        """Value at x = y = 1."""
        return sum(self.coeffs.values())

    def adams(self, j: int) -> "LaurentCharacter":
        """psi_j: x -> x^j."""
        return LaurentCharacter(self.num_vars, {tuple(j * a for a in e): c for e, c in self.coeffs.items()})

    def is_weyl_symmetric(self) -> bool:
        if self.num_vars == 1:
            return all(self.coeffs.get((-e[0],), 0) == c for e, c in self.coeffs.items())
        return all(self.coeffs.get(w, 0) == c for e, c in self.coeffs.items() for w, _ in _weyl_orbit(e))

    def is_actual(self) -> bool:
        return all(c > 0 for c in self.coeffs.values())

    def exact_divide(self, divisor: "LaurentCharacter") -> "LaurentCharacter":
        """Quotient q with q * divisor == self; fails if the division is not exact."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero character")
        lead_e = max(divisor.coeffs)
        lead_c = divisor.coeffs[lead_e]
        floor = tuple(a - b for a, b in zip(min(self.coeffs), min(divisor.coeffs))) if self.coeffs else None
        rem = LaurentCharacter(self.num_vars, self.coeffs)
        quot: dict[Exponent, int] = {}
        while not rem.is_zero():
            top = max(rem.coeffs)
            e = tuple(a - b for a, b in zip(top, lead_e))
            c, r = divmod(rem.coeffs[top], lead_c)
            if r or e < floor:
                raise EinstabError("Laurent division is not exact")
            quot[e] = c
            rem = rem - LaurentCharacter(self.num_vars, {e: c}) * divisor
        return LaurentCharacter(self.num_vars, quot)


# -- sp(1) -------------------------------------------------------------------

@dataclass(frozen=True)
class Su2Decomposition:
    """Multiplicities of Sym^k E."""

    multiplicities: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, mults: Mapping[int, int]) -> "Su2Decomposition":
        for k, m in mults.items():
            if k < 0 or m < 0:
                raise NotACharacterError(f"invalid multiplicity {m} for Sym^{k}")
        return cls(tuple(sorted((int(k), int(m)) for k, m in mults.items() if m)))

    def __getitem__(self, k: int) -> int:
        return dict(self.multiplicities).get(k, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.multiplicities)

    def dim(self) -> int:
        return sum(m * (k + 1) for k, m in self.multiplicities)

    def character(self) -> LaurentCharacter:
        total = LaurentCharacter(1)
        for k, m in self.multiplicities:
            total = total + m * su2_char(k)
        return total

    def to_json(self) -> dict[str, int]:
        return {str(k): m for k, m in self.multiplicities}


def su2_char(k: int) -> LaurentCharacter:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return LaurentCharacter(1, {(k - 2 * i,): 1 for i in range(k + 1)})


def su2_decompose(c: LaurentCharacter) -> Su2Decomposition:
    """Peel off highest weights; negative multiplicities are rejected."""
    if c.num_vars != 1:
        raise DimensionMismatchError("expected a character in one variable")
    if not c.is_weyl_symmetric():
        raise NotACharacterError("character is not invariant under x -> 1/x")
    rem = c
    mults: dict[int, int] = {}
    while not rem.is_zero():
        (k,) = max(rem.coeffs)
        m = rem.coeffs[(k,)]
        if m < 0 or k < 0:
            raise NotACharacterError(f"negative multiplicity {m} for Sym^{k}")
        mults[k] = m
        rem = rem - m * su2_char(k)
    return Su2Decomposition.of(mults)


def _newton(c: LaurentCharacter, m: int, sign: int) -> LaurentCharacter:
    if m < 0:
        raise ValueError("power must be nonnegative")
    powers = [LaurentCharacter.one(c.num_vars)]
    adams = [None] + [c.adams(j) for j in range(1, m + 1)]
    for p in range(1, m + 1):
        total = LaurentCharacter(c.num_vars)
        for j in range(1, p + 1):
            term = adams[j] * powers[p - j]
            total = total + (term if sign > 0 or j % 2 == 1 else -term)
        out = {}
        for e, v in total.coeffs.items():
            q, r = divmod(v, p)
            if r:
                raise NotACharacterError(f"non-integral coefficient {Fraction(v, p)} in power {p}")
            out[e] = q
        powers.append(LaurentCharacter(c.num_vars, out))
    return powers[m]


def sym_power(c: LaurentCharacter, m: int) -> LaurentCharacter:
    """Character of Sym^m via m h_m = sum_j psi_j(c) h_{m-j}."""
    return _newton(c, m, +1)


def alt_power(c: LaurentCharacter, m: int) -> LaurentCharacter:
    """Character of Lambda^m via m e_m = sum_j (-1)^{j-1} psi_j(c) e_{m-j}."""
    return _newton(c, m, -1)


# -- sp(2) -------------------------------------------------------------------

RHO = (2, 1)


@dataclass(frozen=True, order=True)
class C2Weight:
    k: int
    l: int

    def __post_init__(self):
        if not self.k >= self.l >= 0:
            raise ValueError(f"need k >= l >= 0, got ({self.k}, {self.l})")

    @classmethod
    def parse(cls, text: str) -> "C2Weight":
        k, l = (int(s) for s in text.split(","))
        return cls(k, l)

    def __iter__(self):
        return iter((self.k, self.l))


def _weyl_orbit(e: Exponent) -> Iterable[tuple[Exponent, int]]:
    """Signed permutations of a pair, with determinant signs."""
    for perm, psign in (((0, 1), 1), ((1, 0), -1)):
        for s0, s1 in product((1, -1), repeat=2):
            yield (s0 * e[perm[0]], s1 * e[perm[1]]), psign * s0 * s1


def _alternant(e: Exponent) -> LaurentCharacter:
    out: dict[Exponent, int] = {}
    for w, s in _weyl_orbit(e):
        out[w] = out.get(w, 0) + s
    return LaurentCharacter(2, out)


def c2_char(w: C2Weight) -> LaurentCharacter:
    """Weyl character formula: A(lambda + rho) / A(rho)."""
    num = _alternant((w.k + RHO[0], w.l + RHO[1]))
    return num.exact_divide(_alternant(RHO))


def c2_dim(w: C2Weight) -> int:
    k, l = w
    num = (k - l + 1) * (l + 1) * (k + l + 3) * (k + 2)
    assert num % 6 == 0
    return num // 6


def casimir_magnitude(w: C2Weight) -> Fraction:
    k, l = w
    return Fraction(4 * k + k * k + 2 * l + l * l, 12)


def c2_casimir(w: C2Weight) -> Fraction:
    """Eigenvalue of the sp(2) Casimir w.r.t. the Killing form: -(4k + k^2 + 2l + l^2)/12."""
    return -casimir_magnitude(w)


def principal_restrict(c: LaurentCharacter) -> LaurentCharacter:
    if c.num_vars != 2:
        raise DimensionMismatchError("expected a C2 character")
    out: dict[Exponent, int] = {}
    for (a, b), v in c.coeffs.items():
        out[(3 * a + b,)] = out.get((3 * a + b,), 0) + v
    return LaurentCharacter(1, out)


def principal_branch(c: LaurentCharacter) -> Su2Decomposition:
    return su2_decompose(principal_restrict(c))


def branch_weight(w: C2Weight) -> Su2Decomposition:
    return principal_branch(c2_char(w))


def hom_multiplicity(w: C2Weight, bundle: Su2Decomposition | Mapping[int, int]) -> int:
    """dim Hom_{Sp(1)}(V(k,l), fibre): multiplicity of V(k,l) in sections of the bundle."""
    if not isinstance(bundle, Su2Decomposition):
        bundle = Su2Decomposition.of(bundle)
    branch = branch_weight(w)
    return sum(m * bundle[k] for k, m in branch.multiplicities)


def branching_record(w: C2Weight) -> dict:
    return {"weight": [w.k, w.l], "dim": c2_dim(w), "casimir": str(c2_casimir(w)),
            "branch": branch_weight(w).to_json()}


# -- bundles over Sp(2)/Sp(1) ------------------------------------------------

ISOTROPY = 6  # m^C = Sym^6 E


def isotropy_char() -> LaurentCharacter:
    return su2_char(ISOTROPY)


def sym2_tracefree_isotropy() -> Su2Decomposition:
    """Sym^2_0 m^C: the trivial summand of Sym^2 removed."""
    return su2_decompose(sym_power(isotropy_char(), 2) - su2_char(0))


def killing_certificate(weight: C2Weight = C2Weight(1, 1), trace_removed: bool = True) -> dict:
    """Multiplicities showing that V(weight) in sections of Sym^2_0 consists of Killing tensors.

    Valid iff V(weight) occurs exactly once in Sym^2_0 m, and not at all in m or
    Sym^3 m (so both the Killing operator and the divergence vanish on it).
    """
    m = su2_decompose(isotropy_char())
    sym2 = sym2_tracefree_isotropy() if trace_removed else su2_decompose(sym_power(isotropy_char(), 2))
    sym3 = su2_decompose(sym_power(isotropy_char(), 3))
    mults = {
        "sym2_0_isotropy": hom_multiplicity(weight, sym2),
        "isotropy": hom_multiplicity(weight, m),
        "sym3_isotropy": hom_multiplicity(weight, sym3),
    }
    expected = {"sym2_0_isotropy": 1, "isotropy": 0, "sym3_isotropy": 0}
    offending = {k: v for k, v in mults.items() if v != expected[k]}
    valid = not offending
    cert = {
        "weight": [weight.k, weight.l],
        "multiplicities": mults,
        "expected": expected,
        "valid": valid,
        "killing_tensor_space_dim": c2_dim(weight) * mults["sym2_0_isotropy"] if valid else 0,
        "conclusion": (f"V({weight.k},{weight.l}) gives a {c2_dim(weight)}-dimensional space of trace-free, "
                       "divergence-free Killing 2-tensors") if valid else "no certificate",
    }
    if offending:
        cert["offending"] = offending
    if not trace_removed:
        cert["note"] = ("bundle is Sym^2 m (trace not removed); removal only changes the Sym^0 summand, "
                        "so multiplicities of nontrivial V(k,l) are unaffected")
    return cert


def require_valid(cert: dict) -> dict:
    if not cert["valid"]:
        raise CertificateError(f"Killing certificate invalid: {cert.get('offending')}")
    return cert


__all__ = [
    "LaurentCharacter", "Su2Decomposition", "C2Weight", "su2_char", "su2_decompose",
    "sym_power", "alt_power", "c2_char", "c2_dim", "c2_casimir", "casimir_magnitude",
    "principal_branch", "branch_weight", "hom_multiplicity", "branching_record",
    "killing_certificate", "sym2_tracefree_isotropy",
]
