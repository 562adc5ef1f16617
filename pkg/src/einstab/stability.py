"""Eigenvalue bookkeeping for linear instability: Delta_L eigenvalue against 2E.

A report is "unstable" when the eigenvalue is strictly below 2E on a
trace-free divergence-free tensor, and "inconclusive" otherwise.  Global
analytic inputs (Weitzenboeck-type identities, existence of harmonic forms)
are listed per report under "axioms"; everything else is exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import CertificateError, DomainError, NormalizationError
from .multilinear import fmt
from .reps import C2Weight, c2_dim, casimir_magnitude, hom_multiplicity, killing_certificate

AXIOM_HARMONIC_ROUGH = "rough Laplacian of the canonical connection kills h_alpha for harmonic basic alpha"
AXIOM_KILLING = "Delta_L h = 2 q(R) h for trace-free divergence-free Killing 2-tensors"
AXIOM_LICHNEROWICZ_G2 = "Delta_L h = tau0^2/4 h for h = j(beta), beta harmonic in Lambda^3_27"
AXIOM_HARMONIC_EXISTS = "harmonic forms exist in every de Rham class (input, not computed)"
FUNCTION_LAPLACIAN = "Laplacian on functions in V(k,l) is -Cas = (4k + k^2 + 2l + l^2)/12 for the normal metric -B"


@dataclass(frozen=True)
class NormalizationContext:
    name: str
    tau0_squared: Fraction
    scal: Fraction
    einstein_constant: Fraction
    two_E: Fraction
    counterfactual: bool = False

    def __post_init__(self):
        if self.scal != Fraction(21, 8) * self.tau0_squared:
            raise NormalizationError(f"scal {self.scal} != 21 tau0^2/8 for tau0^2 = {self.tau0_squared}")
        if self.einstein_constant != self.scal / 7 or self.two_E != 2 * self.scal / 7:
            raise NormalizationError("Einstein constant inconsistent with scal / 7")

    @classmethod
    def from_tau0_squared(cls, name: str, tau0_squared, counterfactual: bool = False) -> "NormalizationContext":
        t = Fraction(tau0_squared)
        scal = Fraction(21, 8) * t
        return cls(name, t, scal, scal / 7, 2 * scal / 7, counterfactual)

    @classmethod
    def from_scal(cls, name: str, scal) -> "NormalizationContext":
        return cls.from_tau0_squared(name, Fraction(8, 21) * Fraction(scal))

    def to_json(self) -> dict:
        out = {"name": self.name, "tau0_squared": fmt(self.tau0_squared), "scal": fmt(self.scal),
               "einstein_constant": fmt(self.einstein_constant), "two_E": fmt(self.two_E)}
        if self.counterfactual:
            out["counterfactual"] = True
        return out


SCAL_42 = NormalizationContext.from_scal("scal=42", 42)
BERGER = NormalizationContext.from_tau0_squared("berger", Fraction(6, 5))
STANDARD_CONTEXTS = (SCAL_42, BERGER)


def context_for(tau0_squared) -> NormalizationContext:
    """The named context with this tau0^2, or a counterfactual-labelled one."""
    t = Fraction(tau0_squared)
    for ctx in STANDARD_CONTEXTS:
        if ctx.tau0_squared == t:
            return ctx
    return NormalizationContext.from_tau0_squared(f"counterfactual tau0^2={t}", t, counterfactual=True)


@dataclass(frozen=True)
class StabilityReport:
    space: str
    tensor_family: str
    lichnerowicz_eigenvalue: Fraction
    two_E: Fraction
    margin: Fraction
    verdict: str
    provenance: tuple[tuple[str, str], ...] = ()
    axioms: tuple[str, ...] = ()
    counterfactual: bool = False
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.margin != self.lichnerowicz_eigenvalue - self.two_E:
            raise ValueError("margin must equal eigenvalue - 2E")
        if self.verdict != ("unstable" if self.margin < 0 else "inconclusive"):
            raise ValueError(f"verdict {self.verdict!r} inconsistent with margin {self.margin}")

    @classmethod
    def build(cls, space, family, eigenvalue, two_E, provenance=(), axioms=(), counterfactual=False, extra=None):
        eigenvalue, two_E = Fraction(eigenvalue), Fraction(two_E)
        margin = eigenvalue - two_E
        return cls(space, family, eigenvalue, two_E, margin, "unstable" if margin < 0 else "inconclusive",
                   tuple(provenance), tuple(axioms), counterfactual, dict(extra or {}))

    @property
    def unstable(self) -> bool:
        return self.verdict == "unstable"

    def to_json(self) -> dict:
        out = {
            "space": self.space,
            "tensor_family": self.tensor_family,
            "eigenvalue": fmt(self.lichnerowicz_eigenvalue),
            "two_E": fmt(self.two_E),
            "margin": fmt(self.margin),
            "verdict": self.verdict,
            "axioms": list(self.axioms),
            "provenance": [{"quantity": q, "anchor": a} for q, a in self.provenance],
        }
        if self.counterfactual:
            out["label"] = "counterfactual"
        out.update(self.extra)
        return out


# -- Sasaki Einstein ---------------------------------------------------------

def sasaki_margin(n: int) -> StabilityReport:
    """h_alpha for a harmonic primitive basic 2-form on a (2n+1)-dimensional Sasaki Einstein space."""
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be an integer >= 1")
    E = 2 * n
    # Delta_L h = rough term (0) + q(R) h; q(R) - q(Rbar) = 2 id on h_alpha, and q(Rbar) h_alpha = 2 h_alpha
    eigen = Fraction(4)
    return StabilityReport.build(
        f"Sasaki Einstein, dimension {2 * n + 1}", "h_alpha, alpha harmonic primitive basic 2-form",
        eigen, 2 * E,
        provenance=[("einstein_constant", "E = 2n"), ("eigenvalue", "(Delta_L - 2E) h_alpha = (4 - 4n) h_alpha")],
        axioms=[AXIOM_HARMONIC_ROUGH, AXIOM_HARMONIC_EXISTS],
    )


# -- nearly parallel G2 ------------------------------------------------------

def g2_b3_margin(ctx: NormalizationContext = SCAL_42) -> StabilityReport:
    if ctx.tau0_squared == 0:
        raise DomainError("tau0 = 0 is torsion free, not nearly parallel")
    t = ctx.tau0_squared
    return StabilityReport.build(
        "nearly parallel G2", "j(beta), beta harmonic in Lambda^3_27",
        t / 4, ctx.two_E,
        provenance=[("eigenvalue", "Delta_L j(beta) = tau0^2/4 j(beta) = 2 scal/21 j(beta)"),
                    ("two_E", "2E = 2 scal/7 = 3 tau0^2/4")],
        axioms=[AXIOM_LICHNEROWICZ_G2, AXIOM_HARMONIC_EXISTS],
        counterfactual=ctx.counterfactual,
        extra={"normalization": ctx.to_json()},
    )


@lru_cache(maxsize=None)
def certified_endomorphism_values() -> dict[str, tuple[Fraction, Fraction]]:
    """(Cas, S) on T and Sym^2_0, recomputed from the default G2 structure."""
    from .g2 import EXPECTED_ENDOMORPHISM_VALUES, default_structure, endomorphism_values

    values = endomorphism_values(default_structure())
    if values != EXPECTED_ENDOMORPHISM_VALUES:
        raise CertificateError(f"S/Cas values not certified: {values}")
    return {b: (Fraction(values["Cas"][b]), Fraction(values["S"][b])) for b in ("T", "Sym2_0")}


def qr_comparison(bundle: str, qRbar, ctx: NormalizationContext) -> Fraction:
    """q(R) = q(Rbar) + (tau0/12)^2 (3 Cas - 4 S) on the given bundle."""
    values = certified_endomorphism_values()
    if bundle not in values:
        raise DomainError(f"unknown bundle {bundle!r}; expected 'T' or 'Sym2_0'")
    cas, s = values[bundle]
    return Fraction(qRbar) + ctx.tau0_squared / 144 * (3 * cas - 4 * s)


# -- Berger space Sp(2)/Sp(1) ------------------------------------------------

ISOTROPY_K = 6  # T^C = Sym^6 E


def berger_calibration(ctx: NormalizationContext = BERGER) -> Fraction:
    """c with q(Rbar) = c k(k+2) on Sym^k E, fixed by q(Rbar) on T."""
    qR_T = ctx.einstein_constant  # q(R) = Ric on vectors
    qRbar_T = qR_T - qr_comparison("T", 0, ctx)
    return qRbar_T / (ISOTROPY_K * (ISOTROPY_K + 2))


def qrbar_on_sym(k: int, ctx: NormalizationContext = BERGER) -> Fraction:
    return berger_calibration(ctx) * k * (k + 2)


def berger_verdict(tau0_squared=None, k: int = 4) -> StabilityReport:
    """Report for the Killing tensors in the Sym^k E summand of Sym^2_0 T (k = 4 carries V(1,1))."""
    if tau0_squared is None or Fraction(tau0_squared) == BERGER.tau0_squared:
        ctx = BERGER
    else:
        t = Fraction(tau0_squared)
        ctx = NormalizationContext.from_tau0_squared(f"counterfactual tau0^2={t}", t, counterfactual=True)
    cert = killing_certificate()
    if not cert["valid"]:
        raise CertificateError(f"refusing to emit a verdict: {cert.get('offending')}")
    if k not in (4, 8, 12):
        raise DomainError("Sym^2_0 T = Sym^4 E + Sym^8 E + Sym^12 E")
    c = berger_calibration(ctx)
    qrbar = qrbar_on_sym(k, ctx)
    qr = qr_comparison("Sym2_0", qrbar, ctx)
    if ctx is BERGER and k == 4:
        literal = Fraction(1, 5) + 7 * Fraction(6, 5) / 72
        if qr != literal or qr != Fraction(19, 60):
            raise CertificateError(f"q(R) = {qr} disagrees with 1/5 + 7/60 = {literal}")
    family = (f"V(1,1) Killing tensors in Sym^4 E ({cert['killing_tensor_space_dim']}-dimensional)"
              if k == 4 else f"Sym^{k} E summand of Sym^2_0 T")
    return StabilityReport.build(
        "Berger space Sp(2)/Sp(1)", family, 2 * qr, ctx.two_E,
        provenance=[("calibration", "q(Rbar) = c k(k+2) on Sym^k E; c 48 = q(R) - tau0^2/24 on T"),
                    ("q(R)", "q(R) = q(Rbar) + 3 (tau0/12)^2 Cas - 4 (tau0/12)^2 S"),
                    ("eigenvalue", "Delta_L h = 2 q(R) h"),
                    ("certificate", "Hom(V(1,1), Sym^2_0 m) = 1, Hom(V(1,1), m) = 0, Hom(V(1,1), Sym^3 m) = 0")],
        axioms=[AXIOM_KILLING],
        counterfactual=ctx.counterfactual,
        extra={"calibration_c": fmt(c), "qRbar": fmt(qrbar), "qR": fmt(qr), "normalization": ctx.to_json()},
    )


# -- functions on the Berger space -------------------------------------------

@dataclass(frozen=True, order=True)
class SpectrumEntry:
    eigenvalue: Fraction
    weight: C2Weight
    invariant_multiplicity: int
    dim: int

    def to_json(self) -> dict:
        return {"weight": [self.weight.k, self.weight.l], "eigenvalue": fmt(self.eigenvalue),
                "invariant_multiplicity": self.invariant_multiplicity, "dim": self.dim}


def function_spectrum_scan(cas_bound) -> list[SpectrumEntry]:
    bound = Fraction(cas_bound)
    if bound <= 0:
        raise DomainError("cas_bound must be positive")
    out = []
    k = 0
    while casimir_magnitude(C2Weight(k, 0)) <= bound:
        for l in range(k + 1):
            w = C2Weight(k, l)
            lam = casimir_magnitude(w)
            if lam <= bound:
                out.append(SpectrumEntry(lam, w, hom_multiplicity(w, {0: 1}), c2_dim(w)))
        k += 1
    return sorted(out)


def spectrum_report(cas_bound, ctx: NormalizationContext = BERGER) -> dict:
    """Scan plus the first nonzero eigenvalue carried by Sp(1)-invariant functions."""
    scan = function_spectrum_scan(cas_bound)
    nonzero = [e for e in scan if e.invariant_multiplicity and e.eigenvalue > 0]
    first = nonzero[0] if nonzero else None
    return {
        "bound": fmt(Fraction(cas_bound)),
        "entries": [e.to_json() for e in scan],
        "smallest_nonzero": first.to_json() if first else None,
        "two_E": fmt(ctx.two_E),
        "exceeds_two_E": bool(first and first.eigenvalue > ctx.two_E),
        "normalization": FUNCTION_LAPLACIAN,
    }


# -- coindex -----------------------------------------------------------------

COINDEX_KINDS = {"sasaki": ("b2",), "g2": ("b3",), "sasaki-g2": ("b2", "b3")}


def coindex_record(b2: int, b3: int, kind: str) -> dict:
    if kind not in COINDEX_KINDS:
        raise DomainError(f"kind must be one of {sorted(COINDEX_KINDS)}")
    if b2 < 0 or b3 < 0:
        raise DomainError("Betti numbers are nonnegative")
    betti = {"b2": b2, "b3": b3}
    terms = COINDEX_KINDS[kind]
    bound = sum(betti[t] for t in terms)
    return {
        "kind": kind, "b2": b2, "b3": b3,
        "bound_expression": " + ".join(terms),
        "lower_bound": bound,
        "inconclusive": bound == 0,
        "caveat": AXIOM_HARMONIC_EXISTS,
    }


def betti_coindex_summary(b2: int = 0, b3: int = 0, kind: str = "sasaki") -> str:
    r = coindex_record(b2, b3, kind)
    line = f"coindex >= {r['bound_expression']} = {r['lower_bound']} ({kind})"
    if r["inconclusive"]:
        line += "; inconclusive"
    return line + f"\ncaveat: {r['caveat']}"
