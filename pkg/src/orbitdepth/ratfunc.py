"""Exact univariate rational functions in t over the rationals.

Thin wrapper over sympy expressions kept in cancelled numerator/denominator
form, so equality is structural and every operation stays exact.  Used for
the Melnikov coefficients a_i(t), the beta periods and the Wronskian
hierarchy.
"""

from __future__ import annotations

from fractions import Fraction

import sympy as sp
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

T = sp.Symbol("t")

_TRANSFORMS = standard_transformations + (
    convert_xor,
    implicit_multiplication_application,
)


def _to_expr(value) -> sp.Expr:
    if isinstance(value, RatFunc):
        return value.expr
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    if isinstance(value, (int, sp.Expr)):
        return sp.sympify(value)
    if isinstance(value, str):
        return parse_rational(value).expr
    raise TypeError(f"cannot interpret {value!r} as a rational function")


class RatFunc:
    """Rational function in t with exact rational coefficients."""

    __slots__ = ("expr",)

    def __init__(self, value=0):
        expr = sp.cancel(sp.together(_to_expr(value)))
        if not expr.is_rational_function(T):
            raise ValueError(f"not a rational function of t: {value!r}")
        self.expr = expr

    @staticmethod
    def t() -> "RatFunc":
        return RatFunc(T)

    def __add__(self, other):
        return RatFunc(self.expr + _to_expr(other))

    __radd__ = __add__

    def __sub__(self, other):
        return RatFunc(self.expr - _to_expr(other))

    def __rsub__(self, other):
        return RatFunc(_to_expr(other) - self.expr)

    def __mul__(self, other):
        return RatFunc(self.expr * _to_expr(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _to_expr(other)
        if sp.cancel(o) == 0:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.expr / o)

    def __rtruediv__(self, other):
        if self.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(_to_expr(other) / self.expr)

    def __neg__(self):
        return RatFunc(-self.expr)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers")
        return RatFunc(self.expr ** n)

    def __eq__(self, other) -> bool:
        try:
            o = _to_expr(other)
        except TypeError:
            return NotImplemented
        return sp.cancel(self.expr - o) == 0

    def __hash__(self):
        return hash(self.expr)

    def diff(self) -> "RatFunc":
        return RatFunc(sp.diff(self.expr, T))

    def is_zero(self) -> bool:
        return self.expr == 0

    def is_constant(self) -> bool:
        return T not in self.expr.free_symbols

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return sp.Rational(self.expr)

    def evaluate(self, t0):
        """Numeric evaluation (works for complex t0)."""
        num, den = sp.fraction(self.expr)
        return complex(num.subs(T, t0)) / complex(den.subs(T, t0))

    def evaluate_exact(self, t0: Fraction):
        v = self.expr.subs(T, sp.Rational(t0.numerator, t0.denominator))
        return Fraction(int(sp.numer(v)), int(sp.denom(v)))

    def as_coeff_lists(self):
        """(numerator, denominator) coefficient lists, highest degree first."""
        num, den = sp.fraction(self.expr)
        pn = sp.Poly(num, T)
        pd = sp.Poly(den, T)
        return (
            [complex(c) for c in pn.all_coeffs()],
            [complex(c) for c in pd.all_coeffs()],
        )

    def callable(self):
        """Fast complex-scalar evaluator (Horner on both polynomials)."""
        num, den = self.as_coeff_lists()

        def f(tval):
            pn = 0j
            for c in num:
                pn = pn * tval + c
            pd = 0j
            for c in den:
                pd = pd * tval + c
            return pn / pd

        return f

    def __repr__(self):
        return f"RatFunc({sp.sstr(self.expr)})"

    def __str__(self):
        return sp.sstr(self.expr)


def parse_rational(text: str) -> RatFunc:
    """Parse expressions like 't^2+2t' or '(t^2+1)/(t-2)'."""
    try:
        expr = parse_expr(text, local_dict={"t": T}, transformations=_TRANSFORMS)
    except Exception as exc:  # sympy raises various subclasses
        raise ValueError(f"cannot parse rational function {text!r}: {exc}") from exc
    return RatFunc(expr)


class NonRationalAntiderivative(ValueError):
    """The antiderivative has logarithmic (or worse) parts."""


def rational_antiderivative(f: RatFunc) -> RatFunc:
    """Antiderivative with zero constant term at t = 0 when that value is
    finite, otherwise the bare antiderivative; fails if any residue of f is
    nonzero (which would force logarithms)."""
    F = sp.integrate(f.expr, T)
    if F.atoms(sp.log, sp.atan, sp.atan2):
        raise NonRationalAntiderivative(
            f"antiderivative of {f} is not a rational function"
        )
    F = sp.cancel(sp.together(F))
    num, den = sp.fraction(F)
    at0 = den.subs(T, 0)
    if at0 != 0:
        F = F - sp.Rational(sp.nsimplify(num.subs(T, 0)), sp.nsimplify(at0))
    return RatFunc(F)


def wronskian(f: RatFunc, g: RatFunc) -> RatFunc:
    """W(f, g) = f g' - f' g."""
    return f * g.diff() - f.diff() * g


def linearly_independent(f: RatFunc, g: RatFunc) -> bool:
    """Linear independence over the constants (Wronskian criterion)."""
    if f.is_zero() or g.is_zero():
        return False
    return not wronskian(f, g).is_zero()
