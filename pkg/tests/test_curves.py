import numpy as np
import pytest

from orbitdepth.curves import (
    CycleFactory,
    base_point,
    curve_f,
    cycle_of_word,
    dependent_roots,
    loop_radius,
    oval_connector,
    real_oval,
    vanishing_loop,
)
from orbitdepth.words import D2, Gen, Word, v_k

SEED = 20259
T0 = 0.36


def cycle_points(cycle, n=40):
    pts = []
    for seg in cycle.segments:
        for s in np.linspace(0, 1, n):
            x, y, _, _ = seg.frame(float(s))
            pts.append((complex(x), complex(y)))
    return pts


def test_point_residuals():
    for t in (0.25, T0, 0.45):
        oval = real_oval(t)
        for x, y in cycle_points(oval):
            assert abs(curve_f(x, y) - t) <= 1e-13 * max(1.0, abs(t))
        for i in range(4):
            loop = vanishing_loop(i, t)
            for x, y in cycle_points(loop):
                assert abs(curve_f(x, y) - t) <= 1e-13 * max(1.0, abs(t))


def test_oval_geometry():
    oval = real_oval(T0)
    x0 = np.sqrt(1 - T0)
    pts = cycle_points(oval, 200)
    xs = np.array([p[0].real for p in pts])
    ys = np.array([p[1].real for p in pts])
    # passes through (+-x0, 0) and (0, +-x0)
    for target in [(-x0, 0), (x0, 0), (0, -x0), (0, x0)]:
        d = np.min(np.hypot(xs - target[0], ys - target[1]))
        assert d < 2e-2
    assert oval.base_point.x == pytest.approx(-x0)
    # shrinks to the origin as t -> 1
    tiny = real_oval(0.999999)
    for x, y in cycle_points(tiny):
        assert abs(x) + abs(y) < 4e-3


def test_oval_requires_unit_interval():
    for bad in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            real_oval(bad)


def test_vanishing_loop_basics():
    for i, (sx, sy) in enumerate([(-1, -1), (1, -1), (1, 1), (-1, 1)]):
        loop = vanishing_loop(i, T0)
        start = loop.segments[0].start_point()
        assert abs(start.x - (sx + 1j * loop_radius(T0))) < 1e-12
        assert abs(start.y - sy) < 0.5
        loop.check_chain()
    with pytest.raises(ValueError):
        vanishing_loop(1, 0.75)
    with pytest.raises(ValueError):
        vanishing_loop(5, T0)
    # complex level inside the chart bound works
    loop = vanishing_loop(2, 0.2 + 0.1j)
    loop.check_chain()


def test_based_loops_share_tails():
    fac = CycleFactory(T0)
    for i in range(4):
        loop = fac.based_loop(i)
        loop.check_chain()
        p = loop.segments[0].start_point()
        assert abs(p.x - fac.p0.x) < 1e-13 and abs(p.y) < 1e-13
    # adjacent inverse letters cancel tails: d2 d2 keeps one tail pair
    c1 = fac.cycle_of_word(D2 * D2)
    c2 = fac.cycle_of_word(D2) + fac.cycle_of_word(D2)
    assert len(c1.segments) < len(c2.segments)


def test_cycle_of_word():
    fac = CycleFactory(T0)
    assert fac.cycle_of_word(D2 * D2.inverse()).segments == []
    cyc = fac.cycle_of_word(v_k(2))
    cyc.check_chain()
    with pytest.raises(ValueError):
        fac.cycle_of_word(Word.gen(Gen.G) * D2)
    oval = fac.cycle_of_word(Word.gen(Gen.G))
    assert len(oval.segments) == 8


def test_reverse_roundtrip():
    fac = CycleFactory(T0)
    loop = fac.based_loop(2)
    rev = loop.reverse()
    assert rev.segments[0].start_point().x == pytest.approx(loop.segments[-1].end_point().x)
    double_rev = rev.reverse()
    for a, b in zip(loop.segments, double_rev.segments):
        assert a.uid == b.uid and a.reversed == b.reversed


def test_connector():
    conn = oval_connector(T0, 0.25)
    conn.check_chain(require_closed=False)
    end = conn.segments[-1].end_point()
    p0 = base_point(T0)
    assert abs(end.x - p0.x) < 1e-13 and abs(end.y) < 1e-13


def test_branch_roots():
    r0, r1 = dependent_roots(0.5, T0, "x")
    assert r0 == -r1
    assert abs(curve_f(0.5, r0) - T0) < 1e-15
    with pytest.raises(ZeroDivisionError):
        dependent_roots(1.0, T0, "x")
