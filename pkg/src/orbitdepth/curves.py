"""Cycles on the complex curve (x^2 - 1)(y^2 - 1) = t.

A cycle is a chain of segments; each segment projects to a parametrized
path in one coordinate plane (over-x or over-y) while the other coordinate
is tracked continuously on the curve by nearest-root continuation with
Newton polish.  The pieces built here:

* the real oval through p0 = (-sqrt(1-t), 0) for 0 < t < 1, split into
  eight graph arcs between axis and diagonal points, oriented
  counterclockwise;
* the four saddle loops around (+-1, +-1): an x-plane circle of radius
  sqrt|t|/2 around the saddle's x-coordinate with the y-branch near the
  saddle's y-coordinate, traversed counterclockwise when the local product
  coefficient 4 sx sy is negative and clockwise otherwise (the single
  pairing entry over the loop at (1,-1) calibrates this template; all other
  pairings are then genuine tests);
* connecting tails from p0 (a short over-y lift away from the ramification
  point, then a rectangular x-plane detour at height 0.6), so loops become
  based at p0 and words map to concatenations.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .words import Gen, Word

POINT_RESIDUAL_TOL = 1e-13
CLOSURE_TOL = 1e-12
BRANCH_SAFETY = 4.0
LIFT_Y = 0.30
RECT_HEIGHT = 0.60

SADDLES = {0: (-1.0, -1.0), 1: (1.0, -1.0), 2: (1.0, 1.0), 3: (-1.0, 1.0)}


def curve_f(x: complex, y: complex) -> complex:
    return (x * x - 1.0) * (y * y - 1.0)


def f_x(x: complex, y: complex) -> complex:
    return 2.0 * x * (y * y - 1.0)


def f_y(x: complex, y: complex) -> complex:
    return 2.0 * y * (x * x - 1.0)


@dataclass(frozen=True)
class CurvePoint:
    x: complex
    y: complex
    t: complex

    @property
    def residual(self) -> float:
        return abs(curve_f(self.x, self.y) - self.t)

    def check(self):
        if self.residual > POINT_RESIDUAL_TOL * max(1.0, abs(self.t)):
            raise ValueError(f"point off the curve: residual {self.residual:g}")
        return self


def dependent_roots(w: complex, t: complex, chart: str) -> Tuple[complex, complex]:
    """Both roots of the dependent coordinate over w in the given chart.

    Over-x: y^2 = 1 + t/(x^2-1); over-y is the same with roles swapped
    (the curve is symmetric under (x, y) -> (y, x))."""
    denom = w * w - 1.0
    if denom == 0:
        raise ZeroDivisionError("independent coordinate at a puncture")
    r = cmath.sqrt(1.0 + t / denom)
    return r, -r


def _newton_polish(w, d, t, chart, iters=4):
    """Newton on the dependent coordinate d over fixed independent w."""
    a = w * w - 1.0
    for _ in range(iters):
        f = a * (d * d - 1.0) - t
        fp = 2.0 * a * d
        d = d - f / fp
    return d


class BasePath:
    """Parametrized path s in [0,1] in one complex coordinate plane."""

    def value(self, s):
        raise NotImplementedError

    def derivative(self, s):
        raise NotImplementedError


@dataclass(frozen=True)
class Line(BasePath):
    z0: complex
    z1: complex

    def value(self, s):
        return self.z0 + (self.z1 - self.z0) * s

    def derivative(self, s):
        if np.ndim(s):
            return np.full(np.shape(s), self.z1 - self.z0, dtype=complex)
        return self.z1 - self.z0


@dataclass(frozen=True)
class Arc(BasePath):
    center: complex
    radius: float
    theta0: float
    theta1: float

    def value(self, s):
        th = self.theta0 + (self.theta1 - self.theta0) * s
        return self.center + self.radius * np.exp(1j * th)

    def derivative(self, s):
        th = self.theta0 + (self.theta1 - self.theta0) * s
        return 1j * (self.theta1 - self.theta0) * self.radius * np.exp(1j * th)


class BranchTrackingError(RuntimeError):
    pass


_segment_ids = itertools.count()


class Segment:
    """One graph arc: independent coordinate follows `path`, the dependent
    one continues from `dep_seed` by nearest-root tracking."""

    def __init__(self, chart: str, path: BasePath, t: complex, dep_seed: complex,
                 min_samples: int = 64):
        if chart not in ("x", "y"):
            raise ValueError("chart must be 'x' or 'y'")
        self.chart = chart
        self.path = path
        self.t = t
        self.uid = next(_segment_ids)
        self.reversed = False
        self._samples: Optional[np.ndarray] = None
        self._sgrid: Optional[np.ndarray] = None
        self._build_samples(dep_seed, min_samples)

    def _build_samples(self, dep_seed: complex, n: int):
        while True:
            s = np.linspace(0.0, 1.0, n + 1)
            w = np.asarray(self.path.value(s), dtype=complex)
            dep = np.empty(n + 1, dtype=complex)
            r0, r1 = dependent_roots(w[0], self.t, self.chart)
            dep[0] = r0 if abs(r0 - dep_seed) <= abs(r1 - dep_seed) else r1
            if abs(dep[0] - dep_seed) > 1e-6 * max(1.0, abs(dep_seed)):
                raise BranchTrackingError(
                    f"seed {dep_seed} is not a root over the segment start"
                )
            ok = True
            for i in range(1, n + 1):
                ra, rb = dependent_roots(w[i], self.t, self.chart)
                prev = dep[i - 1]
                if abs(ra - prev) <= abs(rb - prev):
                    pick, other = ra, rb
                else:
                    pick, other = rb, ra
                if abs(pick - prev) * BRANCH_SAFETY > abs(other - prev):
                    ok = False
                    break
                dep[i] = pick
            if ok:
                self._sgrid = s
                self._samples = dep
                return
            n *= 2
            if n > 1 << 16:
                raise BranchTrackingError(
                    f"branch tracking failed on segment {self.uid} "
                    f"({self.chart}-chart, {self.path})"
                )

    # -- orientation-aware accessors -------------------------------------

    def _canonical_s(self, s):
        return 1.0 - s if self.reversed else s

    def independent(self, s):
        return self.path.value(self._canonical_s(s))

    def independent_derivative(self, s):
        d = self.path.derivative(self._canonical_s(s))
        return -d if self.reversed else d

    def dependent(self, s):
        """Dependent coordinate at parameter s (scalar or array)."""
        cs = np.atleast_1d(np.asarray(self._canonical_s(s), dtype=float))
        idx = np.clip(np.rint(cs * (len(self._sgrid) - 1)).astype(int),
                      0, len(self._sgrid) - 1)
        seed = self._samples[idx]
        w = np.asarray(self.path.value(cs), dtype=complex)
        a = w * w - 1.0
        d = seed.astype(complex)
        for _ in range(4):
            f = a * (d * d - 1.0) - self.t
            d = d - f / (2.0 * a * d)
        if np.ndim(s) == 0:
            return complex(d[0])
        return d

    def frame(self, s):
        """(x, y, dx/ds, dy/ds) with the chart resolved; s may be an array."""
        w = self.independent(s)
        dw = self.independent_derivative(s)
        d = self.dependent(s)
        a = np.asarray(w, dtype=complex) ** 2 - 1.0
        # implicit derivative of the dependent coordinate
        dd = -dw * (2.0 * np.asarray(w, dtype=complex) * (np.asarray(d) ** 2 - 1.0)) / (2.0 * np.asarray(d) * a)
        if self.chart == "x":
            return w, d, dw, dd
        return d, w, dd, dw

    def start_point(self) -> CurvePoint:
        x, y, _, _ = self.frame(0.0)
        return CurvePoint(complex(x), complex(y), self.t)

    def end_point(self) -> CurvePoint:
        x, y, _, _ = self.frame(1.0)
        return CurvePoint(complex(x), complex(y), self.t)

    def reverse(self) -> "Segment":
        out = object.__new__(Segment)
        out.chart = self.chart
        out.path = self.path
        out.t = self.t
        out.uid = self.uid
        out.reversed = not self.reversed
        out._samples = self._samples
        out._sgrid = self._sgrid
        return out

    def is_reverse_of(self, other: "Segment") -> bool:
        return self.uid == other.uid and self.reversed != other.reversed

    def __repr__(self):
        return f"Segment(uid={self.uid}{'R' if self.reversed else ''}, chart={self.chart})"


@dataclass
class Cycle:
    """Ordered chain of segments; closed when used for integrals."""

    segments: List[Segment]
    t: complex
    base_point: CurvePoint
    label: str = ""

    def check_chain(self, require_closed: bool = True):
        pts = [seg.start_point() for seg in self.segments]
        for p in pts:
            p.check()
        for a, b in zip(self.segments, self.segments[1:]):
            pa, pb = a.end_point(), b.start_point()
            gap = abs(pa.x - pb.x) + abs(pa.y - pb.y)
            if gap > CLOSURE_TOL * 100:
                raise ValueError(f"segment chain gap {gap:g} between {a} and {b}")
        if require_closed and self.segments:
            p0 = self.segments[0].start_point()
            p1 = self.segments[-1].end_point()
            gap = abs(p0.x - p1.x) + abs(p0.y - p1.y)
            if gap > CLOSURE_TOL * 100:
                raise ValueError(f"cycle not closed: gap {gap:g}")
        return self

    def reverse(self) -> "Cycle":
        return Cycle(
            [seg.reverse() for seg in reversed(self.segments)],
            self.t,
            self.base_point,
            label=f"({self.label})^-1",
        )

    def __add__(self, other: "Cycle") -> "Cycle":
        return Cycle(
            self.segments + other.segments,
            self.t,
            self.base_point,
            label=f"{self.label}*{other.label}",
        )

    def simplified(self) -> "Cycle":
        """Drop adjacent mutually-reverse segments (free homotopy reduction
        of the chain; all integrals of closed forms and all holonomies are
        unchanged)."""
        out: List[Segment] = []
        for seg in self.segments:
            if out and out[-1].is_reverse_of(seg):
                out.pop()
            else:
                out.append(seg)
        return Cycle(out, self.t, self.base_point, label=self.label)


def base_point(t: complex) -> CurvePoint:
    x0 = -cmath.sqrt(1.0 - t)
    return CurvePoint(x0, 0.0, t).check()


def real_oval(t: float, label: str = "gamma") -> Cycle:
    """The real oval vanishing at the origin, counterclockwise from
    p0 = (-sqrt(1-t), 0); requires 0 < t < 1."""
    if not (isinstance(t, (int, float)) and 0.0 < t < 1.0):
        raise ValueError("the real oval needs real t in (0, 1)")
    t = float(t)
    x0 = np.sqrt(1.0 - t)
    dg = np.sqrt(1.0 - np.sqrt(t))
    segs = [
        Segment("y", Line(0.0, -dg), t, -x0),       # p0 -> (-dg, -dg)
        Segment("x", Line(-dg, 0.0), t, -dg),       # -> (0, -y0)
        Segment("x", Line(0.0, dg), t, -x0),        # -> (dg, -dg)
        Segment("y", Line(-dg, 0.0), t, dg),        # -> (x0, 0)
        Segment("y", Line(0.0, dg), t, x0),         # -> (dg, dg)
        Segment("x", Line(dg, 0.0), t, dg),         # -> (0, y0)
        Segment("x", Line(0.0, -dg), t, x0),        # -> (-dg, dg)
        Segment("y", Line(dg, 0.0), t, -dg),        # -> p0
    ]
    return Cycle(segs, t, base_point(t), label=label).check_chain()


def oval_connector(t: float, y_from: float) -> Cycle:
    """Arc of the real oval from (x(y_from), y_from) to p0, over-y on the
    x < 0 branch; used to move the base point for robustness checks."""
    if not -LIFT_Y * 2 <= y_from <= LIFT_Y * 2:
        raise ValueError("connector expects a small real y offset")
    x_from = -np.sqrt(1.0 + t / (y_from ** 2 - 1.0))
    seg = Segment("y", Line(y_from, 0.0), t, x_from)
    start = seg.start_point()
    return Cycle([seg], t, start, label=f"connector({y_from})")


def loop_radius(t: complex) -> float:
    return np.sqrt(abs(t)) / 2.0


def saddle_orientation(i: int) -> int:
    """+1 = counterclockwise x-circle, -1 = clockwise.

    Counterclockwise exactly when the local model coefficient 4 sx sy of
    the saddle is negative; with the loop at (1,-1) pinned to give
    +2 pi i against dx/(x-1), the other three follow this rule."""
    sx, sy = SADDLES[i]
    return 1 if sx * sy < 0 else -1


def vanishing_loop(i: int, t: complex, with_tail: bool = False,
                   factory: "CycleFactory | None" = None) -> Cycle:
    """Saddle loop i at level t; |t| <= 0.5 keeps it inside the saddle chart.

    Without a tail the loop starts on top of its x-circle with the y-branch
    nearest the saddle; with a tail it is based at p0.
    """
    if i not in SADDLES:
        raise ValueError("loop index must be 0..3")
    if abs(t) > 0.5:
        raise ValueError("|t| too large for the saddle chart (limit 0.5)")
    if with_tail:
        return (factory or CycleFactory(t)).based_loop(i)
    sx, sy = SADDLES[i]
    r = loop_radius(t)
    orient = saddle_orientation(i)
    th0 = cmath.pi / 2
    arc = Arc(sx, r, th0, th0 + orient * 2 * cmath.pi)
    xb = sx + 1j * r
    ra, rb = dependent_roots(xb, t, "x")
    seed = ra if abs(ra - sy) <= abs(rb - sy) else rb
    seg = Segment("x", arc, t, seed)
    end = seg.end_point()
    start = seg.start_point()
    if abs(end.y - start.y) > CLOSURE_TOL * 100:
        raise BranchTrackingError(f"saddle loop {i} does not close at t={t}")
    return Cycle([seg], t, start, label=f"delta{i}").check_chain()


class CycleFactory:
    """Builds and caches based loops and tails at a fixed level t.

    Sharing the cached segments lets concatenations cancel adjacent
    tail/tail^-1 pairs exactly (same segment object, opposite orientation).
    """

    def __init__(self, t: complex, lift_y: float = LIFT_Y,
                 rect_height: float = RECT_HEIGHT):
        self.t = t
        self.lift = lift_y
        self.height = rect_height
        self.p0 = base_point(t)
        self._lift_segments: Dict[int, Segment] = {}
        self._based: Dict[int, Cycle] = {}

    def _lift_segment(self, sign: int) -> Segment:
        if sign not in self._lift_segments:
            seg = Segment("y", Line(0.0, sign * self.lift), self.t, self.p0.x)
            self._lift_segments[sign] = seg
        return self._lift_segments[sign]

    def _tail(self, i: int, sign: int) -> List[Segment]:
        """p0 -> top of circle i, lifting first to y = sign * lift."""
        t = self.t
        sx, sy = SADDLES[i]
        r = loop_radius(t)
        lift = self._lift_segment(sign)
        p1 = lift.end_point()
        h = self.height
        x1 = p1.x
        seg1 = Segment("x", Line(x1, x1 + 1j * h), t, p1.y)
        seg2 = Segment("x", Line(x1 + 1j * h, sx + 1j * h), t,
                       seg1.end_point().y)
        seg3 = Segment("x", Line(sx + 1j * h, sx + 1j * r), t,
                       seg2.end_point().y)
        return [lift, seg1, seg2, seg3]

    def based_loop(self, i: int) -> Cycle:
        """Tail * circle * tail^-1, based at p0, homotopy class delta_i."""
        if i in self._based:
            return self._based[i]
        t = self.t
        sx, sy = SADDLES[i]
        for sign in (1, -1):
            tail = self._tail(i, sign)
            arrival = tail[-1].end_point()
            # the tail must continue onto the branch near the saddle
            if abs(arrival.y - sy) < abs(arrival.y + sy):
                break
        else:
            raise BranchTrackingError(
                f"no tail lift reaches the saddle branch for loop {i}"
            )
        r = loop_radius(t)
        orient = saddle_orientation(i)
        th0 = cmath.pi / 2
        arc = Arc(sx, r, th0, th0 + orient * 2 * cmath.pi)
        circle = Segment("x", arc, t, arrival.y)
        segs = tail + [circle] + [s.reverse() for s in reversed(tail)]
        cyc = Cycle(segs, t, self.p0, label=f"delta{i}@p0").check_chain()
        self._based[i] = cyc
        return cyc

    def cycle_of_word(self, w: Word, simplify: bool = True) -> Cycle:
        """Concatenated based loops realizing a word in d0..d3 (or exactly g)."""
        if w == Word.gen(Gen.G):
            if isinstance(self.t, complex) and self.t.imag:
                raise ValueError("the oval word g needs real t")
            return real_oval(float(self.t.real if isinstance(self.t, complex) else self.t))
        if Gen.G in w.generators_used():
            raise ValueError("words mixing g with saddle letters have no cycle")
        segs: List[Segment] = []
        for g, e in w.letters:
            loop = self.based_loop({Gen.D0: 0, Gen.D1: 1, Gen.D2: 2, Gen.D3: 3}[Gen(g)])
            cyc = loop if e == 1 else loop.reverse()
            segs.extend(cyc.segments)
        out = Cycle(segs, self.t, self.p0, label=f"cycle({w!r})")
        if simplify:
            out = out.simplified()
        if out.segments:
            out.check_chain()
        return out


def cycle_of_word(w: Word, t: complex, simplify: bool = True) -> Cycle:
    return CycleFactory(t).cycle_of_word(w, simplify=simplify)
