import numpy as np
import pytest

from orbitdepth.curves import Cycle, CycleFactory, oval_connector
from orbitdepth.holonomy import (
    resolved_sign,
    holonomy,
    holonomy_along,
    holonomy_displacement,
    m2_assembly_check,
    m3_center_crosscheck,
    melnikov_fit,
)
from orbitdepth.melnikov import FLAGSHIP, center_family, deformation, mv
from orbitdepth.words import D2, Gen, Word, Z_ELT, commutator, v_k

T0 = 0.36
GAMMA = Word.gen(Gen.G)
TWO_PI_I = 2j * np.pi


@pytest.fixture(scope="module")
def factory():
    return CycleFactory(T0)


def test_unperturbed_identity(factory):
    for w in (GAMMA, D2, v_k(2)):
        h = holonomy(w, T0, 0.0, FLAGSHIP, factory=factory)
        assert abs(h - T0) < 1e-12


def test_real_system_real_return(factory):
    h = holonomy(GAMMA, T0, 0.01, FLAGSHIP, factory=factory)
    assert h.imag == 0.0
    assert h != T0


def test_displacement_consistency(factory):
    cyc = factory.cycle_of_word(v_k(2))
    for eps in (0.004, 0.02):
        d = holonomy_displacement(cyc, FLAGSHIP, eps)
        direct = holonomy_along(cyc, FLAGSHIP, eps) - T0
        assert abs(d - direct) < 1e-11


def test_flagship_fit(factory):
    fit = melnikov_fit(GAMMA, T0, FLAGSHIP, factory=factory)
    assert fit.is_zero(1) and fit.is_zero(2)
    assert not fit.is_zero(3)
    assert fit.stable(3, 5e-3)
    assert fit.c3.real < 0 and abs(fit.c3.imag) < 1e-9


def test_v2_fit_order2_vanishes(factory):
    fit = melnikov_fit(v_k(2), T0, FLAGSHIP, factory=factory)
    assert fit.is_zero(2)


def test_commutator_fit_matches_wronskian(factory):
    # leading order-2 coefficient along [d2, z] is (2 pi i)^2 W(beta2, beta3)
    w = commutator(D2, Z_ELT)
    fit = melnikov_fit(w, T0, FLAGSHIP, factory=factory)
    expected = resolved_sign(2) * TWO_PI_I ** 2 * (T0 ** 2)  # W(-t^2, t) = t^2
    assert abs(fit.c2 - expected) / abs(expected) < 5e-3


def test_reversal_negates_leading(factory):
    w = commutator(D2, Z_ELT)
    f = melnikov_fit(w, T0, FLAGSHIP, factory=factory)
    g = melnikov_fit(w.inverse(), T0, FLAGSHIP, factory=factory)
    assert abs(g.c2 + f.c2) / abs(f.c2) < 5e-3


def test_base_point_robustness(factory):
    # conjugation by an oval arc (base point moved along the oval) leaves
    # the leading coefficient of a commutator word unchanged
    w = commutator(D2, Z_ELT)
    cycle = factory.cycle_of_word(w)
    conn = oval_connector(T0, 0.2)
    moved = Cycle(
        conn.segments + cycle.segments + conn.reverse().segments,
        T0,
        conn.base_point,
        label="rebased",
    )
    eps = np.array([1e-3 * 2 ** j for j in range(6)])
    base_vals = np.array([holonomy_displacement(cycle, FLAGSHIP, e) for e in eps])
    moved_vals = np.array([holonomy_displacement(moved, FLAGSHIP, e) for e in eps])
    c2_base = np.linalg.lstsq(
        np.stack([eps ** 2, eps ** 3, eps ** 4], axis=1), base_vals, rcond=None)[0][0]
    c2_moved = np.linalg.lstsq(
        np.stack([eps ** 2, eps ** 3, eps ** 4], axis=1), moved_vals, rcond=None)[0][0]
    assert abs(c2_moved - c2_base) / abs(c2_base) < 5e-3


def test_v3_sign_calibrated_value(factory):
    fit = melnikov_fit(v_k(3), T0, FLAGSHIP, factory=factory)
    sym = mv(3, FLAGSHIP).evaluate(T0)  # t0^2
    expected = resolved_sign(3) * TWO_PI_I ** 3 * sym
    assert abs(fit.c3 - expected) / abs(expected) < 5e-3


def test_center_exactness(factory):
    d0 = center_family("t", 1, 1, 0)
    cyc = factory.cycle_of_word(GAMMA)
    for eps in (0.01, 0.02, 0.05):
        assert abs(holonomy_along(cyc, d0, eps) - T0) <= 1e-10


def test_center_crosscheck():
    rep = m3_center_crosscheck("t", 0, 1, 1, T0)
    assert rep.passed, (rep.computed, rep.expected, rep.error)


def test_center_witness_scalings(factory):
    f11 = melnikov_fit(GAMMA, T0, center_family("t", 0, 1, 1), factory=factory)
    f21 = melnikov_fit(GAMMA, T0, center_family("t", 0, 1, 2), factory=factory)
    f22 = melnikov_fit(GAMMA, T0, center_family("t", 0, 2, 2), factory=factory)
    assert abs(f21.c3 / f11.c3 - 2) < 2e-2   # linear in lam alone
    assert abs(f22.c3 / f11.c3 - 4) < 4e-2   # quadratic on the diagonal


def test_m2_assembly():
    reports = m2_assembly_check(FLAGSHIP, T0)
    for rep in reports:
        assert rep.passed, rep.name
    # the symmetric case is trivially zero (all Wronskian coefficients vanish)
    sym = m2_assembly_check(deformation(1, 0, 1), T0)
    assert all(r.passed for r in sym)
    with pytest.raises(ValueError):
        m2_assembly_check(deformation("t^2", "t^2+2t", "t"), T0)


def test_center_crosscheck_lambda_zero():
    rep = m3_center_crosscheck("t", 1, 1, 0, T0)
    assert rep.expected == 0 and rep.passed  # both sides vanish


def test_melnikov_fit_guards(factory):
    with pytest.raises(ValueError):
        melnikov_fit(GAMMA, T0, FLAGSHIP, eps_grid=[1e-3, 2e-3], factory=factory)


def test_center_fit_all_zero(factory):
    d0 = center_family("t", 1, 1, 0)
    fit = melnikov_fit(GAMMA, T0, d0, factory=factory)
    assert fit.is_zero(1) and fit.is_zero(2) and fit.is_zero(3)
