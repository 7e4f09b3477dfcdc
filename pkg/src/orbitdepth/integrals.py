"""Quadrature of (iterated) 1-forms along cycles.

Forms are linear combinations of the logarithmic differentials
eta_i = df_i/f_i with f = (x+1, y-1, x-1, y+1); a moment integral
phi_i dphi_j is the length-2 iterated integral of (eta_i, eta_j) with the
inner accumulator seeded by the starting log value.

Each segment is cut into panels and every panel uses a Chebyshev-Lobatto
collocation rule whose cumulative-integration matrix gives the inner
partial integrals of an iterated integral in the same sweep.  Panel counts
double until the whole-cycle answer is stable, so analytic integrands
converge spectrally; a pole-clearance check runs first.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .curves import Cycle, CycleFactory, Segment, real_oval, vanishing_loop
from .words import Word, commutator

TWO_PI_I = 2j * cmath.pi

_CHEB_N = 16


def _chebyshev_cumulative(n: int):
    """Nodes u_k in [0,1] (ascending) and matrix Q with
    (Q g)[k] ~= integral_0^{u_k} g(u) du for g sampled at the nodes."""
    k = np.arange(n + 1)
    xi = -np.cos(np.pi * k / n)  # ascending -1 .. 1
    # Vandermonde of Chebyshev polynomials at the nodes
    V = np.cos(np.outer(np.arccos(xi), k))
    # antiderivatives P_j with P_j(-1) = 0, evaluated at the nodes
    P = np.zeros((n + 1, n + 1))
    P[:, 0] = xi + 1.0
    P[:, 1] = (xi ** 2 - 1.0) / 2.0
    for j in range(2, n + 1):
        tjp = np.cos((j + 1) * np.arccos(xi))
        tjm = np.cos((j - 1) * np.arccos(xi))
        val = tjp / (2.0 * (j + 1)) - tjm / (2.0 * (j - 1))
        at_m1 = np.cos((j + 1) * np.pi) / (2.0 * (j + 1)) - np.cos((j - 1) * np.pi) / (2.0 * (j - 1))
        P[:, j] = val - at_m1
    Q = 0.5 * (P @ np.linalg.inv(V))  # 0.5: du = dxi / 2
    u = (xi + 1.0) / 2.0
    return u, Q


_NODES, _QMAT = _chebyshev_cumulative(_CHEB_N)


class PoleOnPathError(RuntimeError):
    pass


class QuadratureError(RuntimeError):
    pass


class Form:
    """A 1-form pulled back to segments; values() consumes frame arrays."""

    def values(self, x, y, dxds, dyds):
        raise NotImplementedError

    def pole_clearance(self, x, y) -> float:
        return np.inf


@dataclass(frozen=True)
class EtaCombo(Form):
    """sum_i c_i eta_i over the basis f_1 = x+1, f_2 = y-1, f_3 = x-1,
    f_4 = y+1."""

    coeffs: Tuple[Tuple[int, complex], ...]

    def values(self, x, y, dxds, dyds):
        out = np.zeros(np.shape(x), dtype=complex)
        for i, c in self.coeffs:
            if c == 0:
                continue
            if i == 1:
                out = out + c * dxds / (x + 1.0)
            elif i == 2:
                out = out + c * dyds / (y - 1.0)
            elif i == 3:
                out = out + c * dxds / (x - 1.0)
            elif i == 4:
                out = out + c * dyds / (y + 1.0)
            else:
                raise ValueError(f"eta index {i} out of range")
        return out

    def pole_clearance(self, x, y) -> float:
        dists = []
        for i, c in self.coeffs:
            if c == 0:
                continue
            f = {1: x + 1.0, 2: y - 1.0, 3: x - 1.0, 4: y + 1.0}[i]
            dists.append(np.min(np.abs(f)))
        return min(dists) if dists else np.inf


def eta(i: int, scale: complex = 1.0) -> EtaCombo:
    return EtaCombo(((i, scale),))


@dataclass(frozen=True)
class XdY(Form):
    """x dy, used for the orientation certificate."""

    def values(self, x, y, dxds, dyds):
        return x * dyds


MIN_POLE_CLEARANCE = 5e-2


def _segment_panels(seg: Segment, rounds: int) -> int:
    from .curves import Arc

    base = 12 if isinstance(seg.path, Arc) else 6
    return base * (1 << rounds)


def _sweep(cycle: Cycle, forms: Sequence[Form], inits: Sequence[complex],
           rounds: int) -> complex:
    m = len(forms)
    prefixes = np.zeros(m, dtype=complex)
    prefixes[:] = [complex(v) for v in inits]
    for seg in cycle.segments:
        npan = _segment_panels(seg, rounds)
        edges = np.linspace(0.0, 1.0, npan + 1)
        for p in range(npan):
            s0, s1 = edges[p], edges[p + 1]
            h = s1 - s0
            s_nodes = s0 + _NODES * h
            x, y, dxds, dyds = seg.frame(s_nodes)
            acc = None
            for j, form in enumerate(forms):
                g = form.values(x, y, dxds, dyds)
                if j > 0:
                    g = g * acc
                partial = prefixes[j] + h * (_QMAT @ g)
                acc = partial
                prefixes[j] = partial[-1]
    return complex(prefixes[-1])


def _check_clearance(cycle: Cycle, forms: Sequence[Form]):
    for seg in cycle.segments:
        s = np.linspace(0.0, 1.0, 129)
        x, y, _, _ = seg.frame(s)
        for form in forms:
            c = form.pole_clearance(x, y)
            if c < MIN_POLE_CLEARANCE:
                raise PoleOnPathError(
                    f"pole within {c:.3g} of segment {seg!r}"
                )


def iterated_integral(cycle: Cycle, forms: Sequence[Form],
                      inits: Optional[Sequence[complex]] = None,
                      tol: float = 1e-10, max_rounds: int = 5) -> complex:
    """Iterated integral of the ordered forms along the cycle.

    The first form is accumulated first (innermost); with this convention
    the commutator identity int_{[s1,s2]} w1 w2 = det(int_{s_i} w_j) holds.
    `inits` seeds the inner accumulators (the log starting values of moment
    integrals); the outermost seed is forced to zero.
    """
    if not 1 <= len(forms) <= 4:
        raise ValueError("iterated integrals support lengths 1..4")
    if inits is None:
        inits = [0.0] * len(forms)
    inits = list(inits)
    inits[-1] = 0.0
    _check_clearance(cycle, forms)
    prev = None
    for rounds in range(max_rounds):
        val = _sweep(cycle, forms, inits, rounds)
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return val
        prev = val
    raise QuadratureError(
        f"iterated integral did not stabilize to {tol:g} "
        f"(last delta {abs(val - prev):.3g})"
    )


def integrate_form(cycle: Cycle, form: Form, tol: float = 1e-10) -> complex:
    """Plain line integral with the same panel machinery."""
    return iterated_integral(cycle, [form], tol=tol)


def moment_integral(cycle: Cycle, i: int, j: int, tol: float = 1e-10) -> complex:
    """int phi_i dphi_j with phi_i = log f_i continued from the cycle start."""
    x0, y0 = cycle.segments[0].start_point().x, cycle.segments[0].start_point().y
    f0 = {1: x0 + 1.0, 2: y0 - 1.0, 3: x0 - 1.0, 4: y0 + 1.0}[i]
    init = cmath.log(f0)
    return iterated_integral(cycle, [eta(i), eta(j)], inits=[init, 0.0], tol=tol)


# ---------------------------------------------------------------------------
# Named checks.

PAIRING_EXPECTED = {
    (1, 1): 0.0, (1, 2): 0.0, (1, 3): TWO_PI_I,
    (2, 1): 0.0, (2, 2): TWO_PI_I, (2, 3): -TWO_PI_I,
    (3, 1): TWO_PI_I, (3, 2): -TWO_PI_I, (3, 3): 0.0,
}

# Periods of the based sum d0+d1+d2+d3 pair to zero with eta_1..eta_3
# (the orbit classes are orthogonal to them), forcing the loop-0 row.
PAIRING_LOOP0 = {1: -TWO_PI_I, 2: 0.0, 3: 0.0}


def pairing_table(t: complex, tol: float = 1e-10) -> Dict[Tuple[int, int], complex]:
    """Integrals of eta_1..eta_3 over the saddle loops 1..3 (and loop 0)."""
    out = {}
    for i in (0, 1, 2, 3):
        loop = vanishing_loop(i, t)
        for j in (1, 2, 3):
            out[(i, j)] = iterated_integral(loop, [eta(j)], tol=tol)
    return out


def oval_orientation_certificate(t: float) -> float:
    """int_gamma x dy; positive certifies the counterclockwise orientation."""
    gamma = real_oval(t)
    return iterated_integral(gamma, [XdY()]).real


def cauchy_suite(t: float, tol: float = 1e-10) -> Dict[str, complex]:
    """The three vanishing integrals over the real oval.

    * phi1 dphi3: log(x+1) against dx/(x-1) (x-holomorphic integrand);
    * log(t/(y^2-1)) dy/(y-1): the collapsed order-2 combination, with
      d log(t/(y^2-1)) = -(eta2 + eta4);
    * dphi2 dphi2: iterated square of a single logarithmic form.
    """
    gamma = real_oval(t)
    out = {}
    out["phi1_dphi3"] = moment_integral(gamma, 1, 3, tol=tol)
    c0 = cmath.log(-complex(t))  # log of t/(y^2-1) at the start point y = 0
    out["log_t_over_y2m1_dphi2"] = iterated_integral(
        gamma,
        [EtaCombo(((2, -1.0), (4, -1.0))), eta(2)],
        inits=[c0, 0.0],
        tol=tol,
    )
    out["dphi2_dphi2"] = iterated_integral(gamma, [eta(2), eta(2)], tol=tol)
    return out


def v2_double_integral(t: complex, tol: float = 1e-9) -> complex:
    """int over the cycle of [x, z] of dphi2 dphi3; equals 4 pi^2."""
    from .words import X_ELT, Z_ELT

    factory = CycleFactory(t)
    cyc = factory.cycle_of_word(commutator(X_ELT, Z_ELT))
    return iterated_integral(cyc, [eta(2), eta(3)], tol=tol)


def shuffle_defect(cycle: Cycle, f1: Form, f2: Form, tol: float = 1e-10) -> float:
    """|int f1 f2 + int f2 f1 - (int f1)(int f2)| for a closed based cycle."""
    a = iterated_integral(cycle, [f1, f2], tol=tol)
    b = iterated_integral(cycle, [f2, f1], tol=tol)
    p = iterated_integral(cycle, [f1], tol=tol)
    q = iterated_integral(cycle, [f2], tol=tol)
    return abs(a + b - p * q)


def determinant_defect(w1: Word, w2: Word, t: complex, i: int, j: int,
                       factory: Optional[CycleFactory] = None,
                       tol: float = 1e-9) -> float:
    """|int_{[w1,w2]} eta_i eta_j - det of the period matrix|."""
    factory = factory or CycleFactory(t)
    comm_cycle = factory.cycle_of_word(commutator(w1, w2))
    lhs = iterated_integral(comm_cycle, [eta(i), eta(j)], tol=tol)
    c1 = factory.cycle_of_word(w1)
    c2 = factory.cycle_of_word(w2)
    m = np.array(
        [
            [iterated_integral(c1, [eta(i)], tol=tol), iterated_integral(c1, [eta(j)], tol=tol)],
            [iterated_integral(c2, [eta(i)], tol=tol), iterated_integral(c2, [eta(j)], tol=tol)],
        ]
    )
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return abs(lhs - det)
