"""Truncated Magnus expansion and lower-central-series depth certificates.

A word maps into the ring of noncommutative integer polynomials in the five
indeterminates X_g, X_d0..X_d3 via g -> 1 + X_g, g^-1 -> 1 - X_g + X_g^2 - ...
truncated at degree N.  The lowest nonzero degree of magnus(w) - 1 equals the
lower-central-series level of w: depth j means w lies in L_j but not L_{j+1}
(classical Magnus theorem), so degree detection is an exact membership
certificate as long as j <= N.

Monomials are packed into integers base (rank+1) so series are plain
int -> int dictionaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

from .words import Gen, Word, v_k

NGENS = 5
_BASE = NGENS + 1

MONO_ONE = 0


def mono_append(mono: int, g: int) -> int:
    return mono * _BASE + (g + 1)


def mono_degree(mono: int) -> int:
    d = 0
    while mono:
        mono //= _BASE
        d += 1
    return d


def mono_letters(mono: int) -> tuple:
    out = []
    while mono:
        out.append(mono % _BASE - 1)
        mono //= _BASE
    return tuple(reversed(out))


def mono_format(mono: int) -> str:
    from .words import GEN_NAMES

    return "*".join(f"X[{GEN_NAMES[Gen(g)]}]" for g in mono_letters(mono)) or "1"


class TruncatedSeries:
    """Sparse noncommutative polynomial truncated at total degree N."""

    __slots__ = ("coeffs", "degree")

    def __init__(self, degree: int, coeffs: Optional[Dict[int, int]] = None):
        self.degree = degree
        self.coeffs = coeffs or {}

    @staticmethod
    def one(degree: int) -> "TruncatedSeries":
        return TruncatedSeries(degree, {MONO_ONE: 1})

    def copy(self) -> "TruncatedSeries":
        return TruncatedSeries(self.degree, dict(self.coeffs))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            v = out.get(m, 0) - c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return TruncatedSeries(min(self.degree, other.degree), out)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return TruncatedSeries(min(self.degree, other.degree), out)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        N = min(self.degree, other.degree)
        out: Dict[int, int] = {}
        deg_cache = {m: mono_degree(m) for m in self.coeffs}
        other_by_deg: Dict[int, list] = {}
        for m, c in other.coeffs.items():
            other_by_deg.setdefault(mono_degree(m), []).append((m, c))
        for m1, c1 in self.coeffs.items():
            d1 = deg_cache[m1]
            shift = _BASE ** 0
            for d2, items in other_by_deg.items():
                if d1 + d2 > N:
                    continue
                base = m1 * (_BASE ** d2)
                for m2, c2 in items:
                    key = base + m2
                    v = out.get(key, 0) + c1 * c2
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        return TruncatedSeries(N, out)

    def mul_letter(self, g: int, e: int) -> "TruncatedSeries":
        """Multiply on the right by the image of g^e (e = +-1)."""
        N = self.degree
        out: Dict[int, int] = {}

        def add(m, c):
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)

        for m, c in self.coeffs.items():
            add(m, c)
            d = mono_degree(m)
            if e == 1:
                if d + 1 <= N:
                    add(mono_append(m, g), c)
            else:
                sign = -1
                mm = m
                for j in range(1, N - d + 1):
                    mm = mono_append(mm, g)
                    add(mm, sign * c)
                    sign = -sign
        return TruncatedSeries(N, out)

    def homogeneous_part(self, d: int) -> Dict[int, int]:
        return {m: c for m, c in self.coeffs.items() if mono_degree(m) == d}

    def lowest_degree(self) -> Optional[int]:
        """Lowest degree with a nonzero coefficient; None if zero."""
        if not self.coeffs:
            return None
        return min(mono_degree(m) for m in self.coeffs)

    def drop_constant(self) -> "TruncatedSeries":
        out = dict(self.coeffs)
        out.pop(MONO_ONE, None)
        return TruncatedSeries(self.degree, out)

    def __repr__(self):
        n = len(self.coeffs)
        return f"TruncatedSeries(degree={self.degree}, terms={n})"


def magnus(w: Word, degree: int) -> TruncatedSeries:
    """Magnus image of w truncated at total degree `degree`."""
    if degree < 1:
        raise ValueError("truncation degree must be >= 1")
    out = TruncatedSeries.one(degree)
    for g, e in w.letters:
        out = out.mul_letter(g, e)
    return out


@dataclass
class DepthReport:
    """Lowest nonzero Magnus degree of a word at a given truncation."""

    word: Word
    truncation: int
    depth: Optional[int]  # None means no nonzero term up to the truncation
    is_identity: bool
    leading_part: Dict[int, int]

    @property
    def certified_exact(self) -> bool:
        """True when the reported depth is an exact L_j certificate."""
        return self.depth is not None

    def describe(self) -> str:
        if self.is_identity:
            return "identity (depth infinite)"
        if self.depth is None:
            return f"depth >= {self.truncation + 1}"
        return f"depth {self.depth}"


def depth_lower_bound(w: Word, degree: int) -> DepthReport:
    """Depth certificate: w in L_j, not in L_{j+1}, when j <= degree."""
    if w.is_identity():
        return DepthReport(w, degree, None, True, {})
    series = magnus(w, degree).drop_constant()
    j = series.lowest_degree()
    if j is None:
        return DepthReport(w, degree, None, False, {})
    return DepthReport(w, degree, j, False, series.homogeneous_part(j))


def graded_triviality_check(w: Word, endo, degree: int) -> bool:
    """Whether endo fixes the lower-central class of w (no g letters allowed).

    True iff endo(w) w^-1 sits strictly deeper than w, i.e. the induced map
    on L_j cap <d0..d3> / L_{j+1} cap <d0..d3> fixes the class of w.
    """
    if Gen.G in w.generators_used():
        raise ValueError("graded check is defined on the subgroup without g")
    if w.is_identity():
        return True
    rw = depth_lower_bound(w, degree)
    if rw.depth is None:
        raise ValueError(f"truncation {degree} too small to see the depth of w")
    moved = endo(w) * w.inverse()
    rm = depth_lower_bound(moved, degree)
    if rm.is_identity:
        return True
    return rm.depth is None or rm.depth > rw.depth


# ---------------------------------------------------------------------------
# Leading Lie terms and the graded ideal spanned by the orbit generators.
#
# The degree-d component of the Lie ideal generated by elements p_1, p_2, ...
# (in the free Lie algebra on the five generators) is spanned by iterated
# brackets [X_{a_r}, [ ... [X_{a_1}, p_i] ... ]].  Leading terms of elements
# of K = [orbit, group] all lie in that ideal for p in {X_g, lead(v_1), ...},
# so "leading terms agree modulo the ideal" is an exact necessary condition
# for equality modulo K.


def bracket(p: Dict[int, int], q: Dict[int, int]) -> Dict[int, int]:
    """Lie bracket [p, q] = pq - qp of homogeneous tensor components."""
    out: Dict[int, int] = {}

    def add(m, c):
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)

    for m1, c1 in p.items():
        d1 = mono_degree(m1)
        for m2, c2 in q.items():
            d2 = mono_degree(m2)
            add(m1 * (_BASE ** d2) + m2, c1 * c2)
            add(m2 * (_BASE ** d1) + m1, -c1 * c2)
    return out


def generator_vector(g: int) -> Dict[int, int]:
    return {mono_append(MONO_ONE, g): 1}


def lie_ideal_span(seeds: list, degree: int) -> list:
    """Spanning vectors of the degree-`degree` part of the Lie ideal.

    `seeds` are homogeneous Lie elements; the span is built by all chains of
    ad(X_a) applications that reach the requested degree.
    """
    out = []
    frontier = [(s, min(mono_degree(m) for m in s)) for s in seeds if s]
    for s, d in frontier:
        if d == degree:
            out.append(s)
    while frontier:
        nxt = []
        for s, d in frontier:
            if d >= degree:
                continue
            for g in range(NGENS):
                b = bracket(generator_vector(g), s)
                if not b:
                    continue
                if d + 1 == degree:
                    out.append(b)
                else:
                    nxt.append((b, d + 1))
        frontier = nxt
    return out


def in_span(vectors: list, target: Dict[int, int]) -> bool:
    """Exact rational membership of target in the span of sparse vectors."""
    if not target:
        return True
    basis: Dict[int, Dict[int, Fraction]] = {}  # pivot monomial -> row

    def reduce_row(row: Dict[int, Fraction]):
        while row:
            pivot = min(row)
            if pivot not in basis:
                return row, pivot
            lead = basis[pivot]
            factor = row[pivot] / lead[pivot]
            for m, c in lead.items():
                v = row.get(m, Fraction(0)) - factor * c
                if v:
                    row[m] = v
                else:
                    row.pop(m, None)
        return None, None

    for vec in vectors:
        row = {m: Fraction(c) for m, c in vec.items()}
        row, pivot = reduce_row(row)
        if row is not None:
            basis[pivot] = row
    trow = {m: Fraction(c) for m, c in target.items()}
    trow, _ = reduce_row(trow)
    return trow is None


def orbit_leading_ideal_span(degree: int, v_max: int | None = None) -> list:
    """Span of leading terms available from the orbit generators at `degree`.

    Seeds are X_g and the leading Lie terms of v_1 .. v_{degree-1}; a K
    element whose Magnus expansion starts at `degree` has its leading term in
    this span.
    """
    if v_max is None:
        v_max = degree - 1
    seeds = [generator_vector(Gen.G)]
    for j in range(1, min(v_max, degree - 1) + 1):
        rep = depth_lower_bound(v_k(j), j)
        seeds.append(rep.leading_part)
    return lie_ideal_span(seeds, degree)


def leading_terms_agree_mod_orbit_ideal(u: Word, v: Word, degree: int) -> bool:
    """Exact check that magnus(u) - magnus(v) below `degree`+1 is explained
    by the orbit ideal: the two words must both have depth >= `degree` and
    their degree-`degree` difference must lie in the ideal span."""
    su = magnus(u, degree).drop_constant()
    sv = magnus(v, degree).drop_constant()
    diff = su - sv
    low = diff.lowest_degree()
    if low is None:
        return True
    if low < degree:
        return False
    target = diff.homogeneous_part(degree)
    return in_span(orbit_leading_ideal_span(degree), target)
