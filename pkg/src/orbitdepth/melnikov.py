"""Exact Wronskian calculus for Melnikov leading terms.

A deformation is the 1-form a1(F) dx/(x+1) + a2(F) dy/(y-1) + a3(F) dx/(x-1).
Its periods over the saddle classes give

    beta1 = a2,  beta2 = a2 - a3,  beta3 = a1 - a3

(each times 2 pi i, tracked separately as metadata), and the leading
Melnikov term over the orbit element v_i is the nested Wronskian

    mv(2) = W(beta1, beta3),
    mv(i) = W(beta1, W(beta2, ... W(beta2, beta3) ...))   (i-2 inner beta2).

Everything here is exact rational-function arithmetic; the numeric layer
restores the (2 pi i)^i factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

from .ratfunc import (
    RatFunc,
    linearly_independent,
    rational_antiderivative,
    wronskian,
)

# (2 pi i)^i factors are omitted from every RatFunc here; the numeric layer
# multiplies them back in.
TWO_PI_I_POWER_OMITTED = True


class DependentCoefficients(ValueError):
    """alpha2 is a constant multiple of alpha1."""


@dataclass(frozen=True)
class Deformation:
    """Coefficient triple of the 1-form, plus how it was constructed."""

    a1: RatFunc
    a2: RatFunc
    a3: RatFunc
    provenance: str = "raw"

    def coefficients(self) -> Tuple[RatFunc, RatFunc, RatFunc]:
        return self.a1, self.a2, self.a3

    def scaled(self, c) -> "Deformation":
        return Deformation(self.a1 * c, self.a2 * c, self.a3 * c, self.provenance)


def deformation(a1, a2, a3, provenance: str = "raw") -> Deformation:
    return Deformation(RatFunc(a1), RatFunc(a2), RatFunc(a3), provenance)


FLAGSHIP = deformation("t^2+2t", "t", "t^2+t", provenance="pert3(t, t^2, 1, 1)")


def beta_periods(d: Deformation) -> Tuple[RatFunc, RatFunc, RatFunc]:
    """(beta1, beta2, beta3) = (a2, a2 - a3, a1 - a3), 2 pi i dropped."""
    return d.a2, d.a2 - d.a3, d.a1 - d.a3


def compose_leading(mu1: int, m1: RatFunc, mu2: int, m2: RatFunc):
    """Leading term of the return map of a commutator loop.

    If the two loops have leading terms (mu1, M1) and (mu2, M2), the
    commutator has order mu1 + mu2 with leading coefficient W(M1, M2); the
    boolean in the result flags an identically vanishing Wronskian.
    """
    if m1.is_zero() or m2.is_zero():
        raise ValueError("leading terms must be nonzero")
    w = wronskian(m1, m2)
    return mu1 + mu2, w, w.is_zero()


def mv(i: int, d: Deformation) -> RatFunc:
    """Nested-Wronskian leading coefficient over v_i ((2 pi i)^i omitted)."""
    if i < 2:
        raise ValueError("mv is defined for i >= 2")
    b1, b2, b3 = beta_periods(d)
    inner = b3
    for _ in range(i - 2):
        inner = wronskian(b2, inner)
    return wronskian(b1, inner)


def make_length3(alpha1, alpha2, c0, lam) -> Deformation:
    """Deformation with order-2 term identically zero and order-3 term not.

    a3 = alpha1 * int_0^t alpha2/alpha1^2 + c0 alpha1, a1 = a3 + alpha1,
    a2 = lam * alpha1; requires alpha1 nonconstant, alpha2 linearly
    independent from alpha1, lam nonzero, and a rational antiderivative.
    """
    alpha1 = RatFunc(alpha1)
    alpha2 = RatFunc(alpha2)
    lam = Fraction(lam)
    c0 = Fraction(c0)
    if lam == 0:
        raise ValueError("lam must be nonzero")
    if alpha1.is_constant():
        raise ValueError("alpha1 must be nonconstant")
    if not linearly_independent(alpha1, alpha2):
        raise DependentCoefficients(
            "alpha2 must be linearly independent from alpha1"
        )
    primitive = rational_antiderivative(alpha2 / (alpha1 * alpha1))
    a3 = alpha1 * primitive + alpha1 * c0
    a1 = a3 + alpha1
    a2 = alpha1 * lam
    d = Deformation(a1, a2, a3, provenance=f"pert3({alpha1}, {alpha2}, {c0}, {lam})")
    assert mv(2, d).is_zero(), "construction must kill the order-2 term"
    assert not mv(3, d).is_zero(), "construction must keep the order-3 term"
    return d


class Kind(Enum):
    LENGTH3 = "LENGTH3"
    SYMMETRIC_CENTER = "SYMMETRIC_CENTER"
    INTEGRABLE_CANDIDATE = "INTEGRABLE_CANDIDATE"
    ORDER2_NONZERO = "ORDER2_NONZERO"
    OTHER = "OTHER"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    lambda1: Optional[RatFunc] = None
    lambda2: Optional[RatFunc] = None


def classify(d: Deformation) -> Classification:
    """Decision tree on the Wronskian hierarchy.

    a2 = 0 or a1 - a3 = 0 -> symmetric center (mirror symmetry in y or x);
    mv(2) != 0 -> order-2 leading term; mv(3) != 0 -> length-3; otherwise
    both ratios (a1-a3)/a2 and W(a1,a3)/a2 are constants lambda1, lambda2
    and the deformation is an integrability candidate.
    """
    a1, a2, a3 = d.coefficients()
    if a2.is_zero() or (a1 - a3).is_zero():
        return Classification(Kind.SYMMETRIC_CENTER)
    if not mv(2, d).is_zero():
        return Classification(Kind.ORDER2_NONZERO)
    if not mv(3, d).is_zero():
        return Classification(Kind.LENGTH3)
    lam1 = (a1 - a3) / a2
    lam2 = wronskian(a1, a3) / a2
    if lam1.is_constant() and lam2.is_constant():
        return Classification(Kind.INTEGRABLE_CANDIDATE, lam1, lam2)
    return Classification(Kind.OTHER)


def center_family(A, c1, lambda1, lam) -> Deformation:
    """The family exhausting mv(2) = mv(3) = 0: a2 = 1/A', a1 = a2 (lam A +
    c1), a3 = a2 (lam A + c1 - lambda1); lam = 0 gives a Hamiltonian
    (center-preserving) deformation with Hamiltonian A(F) + eps * phi."""
    A = RatFunc(A)
    c1 = Fraction(c1)
    lambda1 = Fraction(lambda1)
    lam = Fraction(lam)
    Ap = A.diff()
    if Ap.is_zero():
        raise ValueError("A must be nonconstant")
    a2 = RatFunc(1) / Ap
    shifted = A * lam + c1
    a1 = a2 * shifted
    a3 = a2 * (shifted - lambda1)
    d = Deformation(
        a1, a2, a3, provenance=f"center({A}, {c1}, {lambda1}, {lam})"
    )
    tag = classify(d).kind
    assert tag in (Kind.INTEGRABLE_CANDIDATE, Kind.SYMMETRIC_CENTER), tag
    return d


def m3_tilde_coefficient(A, lam, lambda1=1) -> RatFunc:
    """Prefactor -lam*lambda1 / (t A'(t)) of the reparametrized order-3 term.

    The order-3 coefficient of the return map in the t chart is this divided
    by A'(t) once more, times the numeric double integral of dphi2 dphi3
    over the oval.  The constant is -lambda2 = -lam*lambda1: expanding
    dphi = (c1/lam) alpha + dphi2 - lambda1 dphi3 leaves -lambda1 times the
    dphi2 dphi3 integral, and the direct return-map fits confirm the
    -lam*lambda1 scaling exactly (the widely quoted -lam^2 form agrees only
    on the diagonal lambda1 = lam; see the ratio checks in the tests).
    """
    A = RatFunc(A)
    lam = Fraction(lam)
    lambda1 = Fraction(lambda1)
    Ap = A.diff()
    if Ap.is_zero():
        raise ValueError("A must be nonconstant")
    return RatFunc(-lam * lambda1) / (RatFunc.t() * Ap)


def hierarchy_collapse_check(d: Deformation, i_max: int = 6) -> bool:
    """mv(2) = mv(3) = 0 forces mv(i) = 0 for all i up to i_max.

    Also verifies the constant-ratio recursion when the integrability
    witnesses exist: W(beta2, beta3) = (lambda2/lambda1) beta3 (so each
    extra inner Wronskian multiplies the hierarchy by that constant) and
    mv(i+1) = (lambda2/lambda1) mv(i) exactly.
    """
    if not (mv(2, d).is_zero() and mv(3, d).is_zero()):
        raise ValueError("precondition mv(2) = mv(3) = 0 fails")
    for i in range(4, i_max + 1):
        if not mv(i, d).is_zero():
            return False
    cls = classify(d)
    if cls.kind is Kind.INTEGRABLE_CANDIDATE:
        b1, b2, b3 = beta_periods(d)
        multiplier = cls.lambda2 / cls.lambda1
        if wronskian(b2, b3) != b3 * multiplier:
            return False
        for i in range(2, i_max):
            if mv(i + 1, d) != mv(i, d) * multiplier:
                return False
    return True


# ---------------------------------------------------------------------------
# Symbolic second-order assembly.  The order-2 coefficient of the return map
# along the oval is sum_{i<j} W(a_i, a_j) I_ij with I_ij the double integral
# of phi_i dphi_j; the side relations are I_23 = -I_32 (exact term d(phi2
# phi3)) and I_13 = 0 (x-holomorphic integrand).  Under mv(2) = 0 the sum
# collapses to W(a1, a2) (I_12 + I_32).


@dataclass
class SecondOrderAssembly:
    terms: dict = field(default_factory=dict)  # symbol -> RatFunc coefficient

    def coefficient(self, symbol: str) -> RatFunc:
        return self.terms.get(symbol, RatFunc(0))


def m2_symbolic(d: Deformation) -> SecondOrderAssembly:
    a1, a2, a3 = d.coefficients()
    return SecondOrderAssembly(
        {
            "I12": wronskian(a1, a2),
            "I13": wronskian(a1, a3),
            "I23": wronskian(a2, a3),
        }
    )


def m2_collapses_to_single_wronskian(d: Deformation) -> bool:
    """Exact term-level identity: with W(a2, a1 - a3) = 0 the assembly equals
    W(a1, a2) (I12 + I32) modulo the side relations."""
    if not mv(2, d).is_zero():
        return False
    asm = m2_symbolic(d)
    # substitute I23 -> -I32, then compare coefficients against the target
    coeff_i12 = asm.coefficient("I12")
    coeff_i32 = -asm.coefficient("I23")
    w12 = wronskian(d.a1, d.a2)
    # I13 carries W(a1, a3); it is discharged by the vanishing of the
    # x-holomorphic double integral, recorded as a side relation.
    return coeff_i12 == w12 and coeff_i32 == w12
