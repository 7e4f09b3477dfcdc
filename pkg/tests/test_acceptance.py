"""Acceptance gate: one test per criterion, each at its stated tolerance.

Run with `pytest -s tests/test_acceptance.py` to see the pass/fail line and
runtime that every criterion prints.
"""

import random
import time

import numpy as np
import pytest

from orbitdepth.words import (
    D0, D1, D2, D3, DELTA, G, X_ELT, Z_ELT,
    Gen, Word, commutator, d_k, format_rho_word, m_endo, mon0, mon1,
    random_word, rewrite_to_rho_alphabet, v_k, var, var_iterate,
    variation_mod_k_identities,
)
from orbitdepth.magnus import (
    depth_lower_bound,
    leading_terms_agree_mod_orbit_ideal,
    magnus,
)
from orbitdepth.representation import (
    Representation,
    RepMatrix,
    depth_certificate,
    impossibility_check,
    verify_v_images,
)
from orbitdepth.ratfunc import RatFunc
from orbitdepth.melnikov import FLAGSHIP, center_family, make_length3, mv, classify
from orbitdepth.curves import CycleFactory
from orbitdepth.integrals import (
    PAIRING_EXPECTED,
    PAIRING_LOOP0,
    cauchy_suite,
    determinant_defect,
    eta,
    iterated_integral,
    pairing_table,
    shuffle_defect,
    v2_double_integral,
)
from orbitdepth.holonomy import (
    holonomy_along,
    m2_assembly_check,
    m3_center_prediction,
    melnikov_fit,
    resolved_sign,
)

SEED = 20259
T0 = 0.36
GAMMA = Word.gen(Gen.G)


class Stopwatch:
    def __init__(self, budget_s):
        self.budget = budget_s
        self.start = time.perf_counter()

    def done(self, name, ok):
        elapsed = time.perf_counter() - self.start
        status = "PASS" if ok else "FAIL"
        print(f"[{name}] {status} ({elapsed:.2f}s, budget {self.budget:.0f}s)")
        assert ok, name
        assert elapsed < self.budget, f"{name} exceeded its runtime budget"


def test_criterion_1_monodromy_identities():
    sw = Stopwatch(1.0)
    M0, M1, M = mon0(), mon1(), m_endo()
    ok = (
        M1.of_gen(Gen.G) == G
        and all(M1.of_gen(g) == G * Word.gen(g) for g in list(Gen)[1:])
        and M0.of_gen(Gen.G) == DELTA * G
        and M0.of_gen(Gen.D0) == D0
        and M0.of_gen(Gen.D1) == D0 * D1 * D0.inverse()
        and M0.of_gen(Gen.D2) == (D0 * D1) * D2 * (D0 * D1).inverse()
        and M0.of_gen(Gen.D3) == (D0 * D1 * D2) * D3 * (D0 * D1 * D2).inverse()
    )
    conj = D0 * D1
    rng = random.Random(SEED)
    ok = ok and all(
        M(w) == conj.inverse() * M0(w) * conj
        for w in (random_word(rng) for _ in range(100))
    )
    sw.done("criterion 1: monodromy identities", ok)


def test_criterion_2_variation_elements():
    sw = Stopwatch(30.0)
    # var^2(g) reduces, through the exact mod-K factorization, to v_2 whose
    # rho-alphabet form is [x, z]
    ok = all(ident.holds() for ident in variation_mod_k_identities(5))
    ok = ok and format_rho_word(rewrite_to_rho_alphabet(v_k(2))) == "x z x^-1 z^-1"
    # the variation step from v_2 agrees with v_3 through degree 3
    diff = (magnus(var(v_k(2)), 4) - magnus(v_k(3), 4)).lowest_degree()
    ok = ok and diff == 4
    # Magnus lowest degree of var^i(g) >= i and of v_i exactly i
    for i in range(2, 6):
        ok = ok and depth_lower_bound(v_k(i), i).depth == i
        rep = depth_lower_bound(var_iterate(i), i - 1)
        ok = ok and rep.depth is None  # nothing below degree i
    # leading Lie terms coincide modulo the orbit ideal (the exact necessary
    # condition for equality mod K)
    for i in range(2, 6):
        ok = ok and leading_terms_agree_mod_orbit_ideal(var_iterate(i), v_k(i), i)
    # headroom at the default truncation
    ok = ok and depth_lower_bound(v_k(6), 8).depth == 6
    sw.done("criterion 2: variation elements", ok)


def test_criterion_3_representation_certificates():
    sw = Stopwatch(120.0)
    ok = True
    for k in range(1, 6):
        rep = Representation(k)
        ident = RepMatrix.identity(rep.n)
        # exact identities rho_k(v_i) = I for i in 2..k+4 minus {k+2}
        table = verify_v_images(k, k + 4, rep)
        ok = ok and table.passed
        cert = depth_certificate(k, samples=100, seed=SEED)
        ok = ok and cert.passed
    rng = random.Random(SEED)
    for _ in range(100):
        terms = []
        for _ in range(rng.randint(1, 6)):
            while True:
                m, n = rng.randint(-4, 4), rng.randint(-4, 4)
                if (m, n) != (0, 0):
                    break
            terms.append((rng.randint(-5, 5) or 1, m, n))
        ok = ok and impossibility_check(terms)
    sw.done("criterion 3: representation certificates (exact, k = 1..5)", ok)


def test_criterion_4_wronskian_layer():
    sw = Stopwatch(1.0)
    t = RatFunc.t()
    d = make_length3("t", "t^2", 1, 1)
    ok = d.coefficients() == (t * t + 2 * t, t, t * t + t)
    ok = ok and mv(2, d).is_zero() and mv(3, d) == t * t
    ok = ok and all(mv(i, d).is_zero() for i in (4, 5, 6))
    # the constant-multiplier recursion for center families up to i = 6
    for params in [("t", 0, 1, 1), ("t^2+t", 0, 2, 3)]:
        cf = center_family(*params)
        cls = classify(cf)
        mult = cls.lambda2 / cls.lambda1
        for i in range(2, 6):
            ok = ok and mv(i + 1, cf) == mv(i, cf) * mult
        ok = ok and all(mv(i, cf).is_zero() for i in range(2, 7))
    sw.done("criterion 4: Wronskian layer", ok)


def test_criterion_5_pairing_table():
    sw = Stopwatch(10.0)
    ok = True
    for t in (0.25, 0.36):
        tab = pairing_table(t)
        for (i, j), v in tab.items():
            expected = PAIRING_LOOP0[j] if i == 0 else PAIRING_EXPECTED[(i, j)]
            ok = ok and abs(v - expected) <= 1e-9
    sw.done("criterion 5: pairing table at t = 0.25 and 0.36", ok)


def test_criterion_6_iterated_integrals():
    sw = Stopwatch(60.0)
    val = v2_double_integral(T0)
    ok = abs(val - 4 * np.pi ** 2) / (4 * np.pi ** 2) <= 1e-6
    suite = cauchy_suite(T0)
    ok = ok and all(abs(v) <= 1e-8 for v in suite.values())
    fac = CycleFactory(T0)
    ok = ok and shuffle_defect(fac.based_loop(2), eta(2), eta(3)) <= 1e-6
    ok = ok and determinant_defect(X_ELT, Z_ELT, T0, 2, 3, factory=fac) <= 1e-6
    ok = ok and determinant_defect(D1, D2, T0, 2, 3, factory=fac) <= 1e-6
    sw.done("criterion 6: iterated integrals (4 pi^2 and the vanishing suite)", ok)


def test_criterion_7_flagship_fit():
    sw = Stopwatch(60.0)
    fac = CycleFactory(T0)
    fit = melnikov_fit(GAMMA, T0, FLAGSHIP, factory=fac)
    bound = 1e-7 * abs(fit.c3) * max(fit.eps_grid)
    ok = abs(fit.c1) <= bound and abs(fit.c2) <= bound
    ok = ok and fit.is_zero(1) and fit.is_zero(2)
    ok = ok and not fit.is_zero(3) and fit.stability[3] <= 5e-3
    sw.done("criterion 7: flagship return-map fit (order 3 first nonzero)", ok)


def test_criterion_8_v3_holonomy_crosscheck():
    sw = Stopwatch(300.0)
    fac = CycleFactory(T0)
    fit = melnikov_fit(v_k(3), T0, FLAGSHIP, factory=fac)
    symbolic = mv(3, FLAGSHIP).evaluate(T0)        # t0^2 = 0.1296
    expected = resolved_sign(3) * (2j * np.pi) ** 3 * symbolic
    ok = abs(fit.c3 - expected) / abs(expected) <= 5e-3
    ok = ok and abs(abs(fit.c3) - 8 * np.pi ** 3 * T0 ** 2) / abs(expected) <= 5e-3
    sw.done("criterion 8: order-3 coefficient over v3 = -(2 pi i)^3 t0^2 "
            f"(sign {resolved_sign(3)})", ok)


def test_criterion_9_center_checks():
    sw = Stopwatch(300.0)
    fac = CycleFactory(T0)
    cyc = fac.cycle_of_word(GAMMA)
    d0 = center_family("t", 1, 1, 0)
    ok = all(abs(holonomy_along(cyc, d0, e) - T0) <= 1e-10
             for e in (0.01, 0.02, 0.05))
    # order-3 coefficient against the closed prediction (lambda = 1)
    f11 = melnikov_fit(GAMMA, T0, center_family("t", 0, 1, 1), factory=fac)
    pred = resolved_sign(3) * m3_center_prediction("t", 1, T0, 1)
    ok = ok and abs(f11.c3 - pred) / abs(pred) <= 5e-3
    # quadratic scaling holds when both integrability witnesses double;
    # doubling lam alone doubles the coefficient (prefactor -lam*lambda1)
    f22 = melnikov_fit(GAMMA, T0, center_family("t", 0, 2, 2), factory=fac)
    ok = ok and abs(f22.c3 / f11.c3 - 4) <= 4 * 1e-2
    f21 = melnikov_fit(GAMMA, T0, center_family("t", 0, 1, 2), factory=fac)
    ok = ok and abs(f21.c3 / f11.c3 - 2) <= 2e-2
    sw.done("criterion 9: center checks (exactness, prediction, scaling)", ok)


def test_criterion_10_m2_assembly():
    sw = Stopwatch(60.0)
    reports = m2_assembly_check(FLAGSHIP, T0)
    ok = all(r.passed for r in reports)
    by_name = {r.name: r for r in reports}
    ok = ok and by_name["order-2 assembly"].error <= 1e-7
    sw.done("criterion 10: numeric order-2 assembly vanishes", ok)
