"""Check suites, machine-readable reports and the full reproduction pipeline.

Every check produces a CheckRecord (id, claim, parameters, expected vs
computed, error metric, pass flag, runtime).  Suites bundle records per
layer; `run_suite` writes a JSON report and the pipeline runs everything in
dependency order, stopping at the first hard failure.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, asdict
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .words import (
    DELTA,
    Gen,
    Word,
    commutator,
    d_k,
    format_rho_word,
    m_endo,
    mon0,
    mon0_inverse,
    mon1,
    mon1_inverse,
    project_mod_gamma_subgroup,
    random_word,
    rewrite_to_rho_alphabet,
    v_k,
    var,
    var_iterate,
    variation_mod_k_identities,
    G as GAMMA_WORD,
    D0,
    D1,
    D2,
    D3,
    X_ELT,
    Z_ELT,
)
from .magnus import (
    depth_lower_bound,
    graded_triviality_check,
    leading_terms_agree_mod_orbit_ideal,
    magnus,
)
from .representation import depth_certificate
from .melnikov import (
    FLAGSHIP,
    Kind,
    center_family,
    classify,
    deformation,
    hierarchy_collapse_check,
    make_length3,
    mv,
    beta_periods,
)
from .ratfunc import RatFunc, wronskian
from .curves import CycleFactory
from .integrals import (
    PAIRING_EXPECTED,
    PAIRING_LOOP0,
    cauchy_suite,
    determinant_defect,
    eta,
    oval_orientation_certificate,
    pairing_table,
    shuffle_defect,
    v2_double_integral,
)
from .holonomy import (
    DEFAULT_EPS_GRID,
    RESOLVED_HOLONOMY_SIGN,
    holonomy_along,
    m2_assembly_check,
    m3_center_crosscheck,
    melnikov_fit,
)

DEFAULT_SEED = 20259
DEFAULT_T0 = 0.36


@dataclass
class CheckRecord:
    id: str
    claim: str
    params: dict
    expected: str
    computed: str
    error: float
    tolerance: float
    passed: bool
    runtime_ms: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunManifest:
    version: str
    seed: int
    t0: float
    k_max: int
    magnus_degree: int
    eps_grid: List[float]
    suites: List[str]
    timestamp: str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Config:
    seed: int = DEFAULT_SEED
    t0: float = DEFAULT_T0
    k_max: int = 5
    magnus_degree: int = 8
    eps_grid: Sequence[float] = DEFAULT_EPS_GRID
    samples: int = 100
    output_dir: str = "."
    plots: bool = False

    @staticmethod
    def from_file(path: str) -> "Config":
        with open(path) as fh:
            raw = json.load(fh)
        cfg = Config()
        for key in ("seed", "t0", "k_max", "magnus_degree", "eps_grid",
                    "samples", "output_dir", "plots"):
            if key in raw:
                setattr(cfg, key, raw[key])
        tolerances = raw.get("tolerances", {})
        if tolerances:
            cfg.tolerances = tolerances  # free-form overrides, applied by name
        return cfg


class Recorder:
    def __init__(self):
        self.records: List[CheckRecord] = []

    def add(self, id: str, claim: str, error: float, tolerance: float,
            expected="", computed="", params: Optional[dict] = None,
            runtime_ms: float = 0.0) -> CheckRecord:
        rec = CheckRecord(
            id=id,
            claim=claim,
            params=params or {},
            expected=str(expected),
            computed=str(computed),
            error=float(error),
            tolerance=float(tolerance),
            passed=bool(error <= tolerance),
            runtime_ms=runtime_ms,
        )
        self.records.append(rec)
        return rec

    def add_bool(self, id: str, claim: str, ok: bool,
                 params: Optional[dict] = None, runtime_ms: float = 0.0,
                 expected="true", computed=None) -> CheckRecord:
        return self.add(
            id, claim, 0.0 if ok else 1.0, 0.5,
            expected=expected,
            computed=("true" if ok else "false") if computed is None else computed,
            params=params, runtime_ms=runtime_ms,
        )

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.records)


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - start) * 1e3


# ---------------------------------------------------------------------------
# Suites.


def orbit_suite(cfg: Config) -> List[CheckRecord]:
    """Monodromy, variation and Magnus-depth checks (exact)."""
    rec = Recorder()
    rng = __import__("random").Random(cfg.seed)

    M0, M1, M = mon0(), mon1(), m_endo()
    images_ok = (
        M1.of_gen(Gen.G) == GAMMA_WORD
        and all(M1.of_gen(g) == GAMMA_WORD * Word.gen(g) for g in list(Gen)[1:])
        and M0.of_gen(Gen.G) == DELTA * GAMMA_WORD
        and M0.of_gen(Gen.D0) == D0
        and M0.of_gen(Gen.D1) == D0 * D1 * D0.inverse()
        and M0.of_gen(Gen.D2) == (D0 * D1) * D2 * (D0 * D1).inverse()
        and M0.of_gen(Gen.D3) == (D0 * D1 * D2) * D3 * (D0 * D1 * D2).inverse()
    )
    rec.add_bool("orbit.monodromy_images", "generator images of the two monodromies", images_ok)

    conj = D0 * D1
    ok = all(
        M(w) == conj.inverse() * M0(w) * conj
        for w in (random_word(rng) for _ in range(100))
    )
    rec.add_bool("orbit.m_is_conjugated_mon0",
                 "M equals Mon0 conjugated by d0 d1 on 100 seeded words", ok,
                 params={"seed": cfg.seed})

    inv0, inv1 = mon0_inverse(), mon1_inverse()
    ok = all(inv0(M0(w)) == w and M0(inv0(w)) == w and inv1(M1(w)) == w
             for w in (random_word(rng) for _ in range(100)))
    rec.add_bool("orbit.automorphisms", "explicit inverses invert the monodromies", ok)

    ok = all(
        project_mod_gamma_subgroup(M1(w)) == project_mod_gamma_subgroup(w)
        for w in (random_word(rng) for _ in range(100))
    )
    rec.add_bool("orbit.mon1_trivial_mod_gamma",
                 "the induced action on the quotient by <g, D> is trivial", ok)

    idents = variation_mod_k_identities(5)
    for ident in idents:
        rec.add_bool(f"orbit.identity.{ident.name}",
                     "exact word identity with orbit-commutator corrections",
                     ident.holds(), params={"k_factors": list(ident.k_factors)})

    rho_v2 = format_rho_word(rewrite_to_rho_alphabet(v_k(2)))
    rec.add_bool("orbit.v2_rho_form", "v2 in the alternate basis is x z x^-1 z^-1",
                 rho_v2 == "x z x^-1 z^-1", computed=rho_v2)

    for i in range(1, 6):
        rep = depth_lower_bound(v_k(i), i)
        rec.add_bool(f"orbit.depth_v{i}", f"v_{i} sits at lower-central level {i} exactly",
                     rep.depth == i, computed=rep.describe())
        repv = depth_lower_bound(var_iterate(i), i - 1 if i > 1 else 1)
        deep_enough = repv.depth is None if i > 1 else repv.depth == 1
        rec.add_bool(f"orbit.depth_var{i}", f"var^{i}(g) lies in lower-central level >= {i}",
                     deep_enough, computed=repv.describe())

    diff = (magnus(var(v_k(2)), 4) - magnus(v_k(3), 4)).lowest_degree()
    rec.add_bool("orbit.var_step_degree3",
                 "one variation step from v2 matches v3 through degree 3",
                 diff == 4, computed=f"first difference at degree {diff}")

    n = cfg.magnus_degree
    rep = depth_lower_bound(v_k(n - 2), n)
    rec.add_bool("orbit.depth_headroom",
                 f"the configured truncation {n} certifies v_{n-2} exactly",
                 rep.depth == n - 2, computed=rep.describe())

    for i in range(2, 6):
        ok = leading_terms_agree_mod_orbit_ideal(var_iterate(i), v_k(i), i)
        rec.add_bool(f"orbit.leading_mod_ideal_{i}",
                     f"leading terms of var^{i}(g) and v_{i} agree modulo the orbit ideal",
                     ok)

    for i, w in [(2, v_k(2)), (3, d_k(3, Z_ELT)), (4, v_k(4))]:
        ok = graded_triviality_check(w, mon0(), i + 2)
        rec.add_bool(f"orbit.graded_triviality_{i}",
                     "the saddle monodromy fixes lower-central classes", ok)

    return rec.records


def repr_suite(cfg: Config) -> List[CheckRecord]:
    """Laurent matrix certificates for each level k (exact)."""
    rec = Recorder()
    for k in range(1, cfg.k_max + 1):
        (cert, ms) = _timed(lambda k=k: depth_certificate(k, samples=cfg.samples, seed=cfg.seed))
        for item in cert.items:
            rec.add_bool(f"repr.k{k}.{item.name}", item.detail or item.name,
                         item.passed, runtime_ms=0.0)
        rec.add_bool(f"repr.k{k}.certificate", f"level-{k} separation certificate",
                     cert.passed, params=cert.to_dict() | {"runtime_ms": ms},
                     runtime_ms=ms)
    return rec.records


def melnikov_suite(cfg: Config) -> List[CheckRecord]:
    """Exact Wronskian-hierarchy checks."""
    rec = Recorder()
    d = FLAGSHIP
    t = RatFunc.t()
    rec.add_bool("mel.flagship_coefficients",
                 "construction from (t, t^2, 1, 1) gives (t^2+2t, t, t^2+t)",
                 make_length3("t", "t^2", 1, 1).coefficients() == d.coefficients())
    rec.add_bool("mel.flagship_mv2", "order-2 hierarchy term vanishes identically",
                 mv(2, d).is_zero())
    rec.add_bool("mel.flagship_mv3", "order-3 hierarchy term equals t^2",
                 mv(3, d) == t * t, computed=str(mv(3, d)))
    for i in (4, 5, 6):
        rec.add_bool(f"mel.flagship_mv{i}", f"order-{i} hierarchy term vanishes",
                     mv(i, d).is_zero())
    rec.add_bool("mel.flagship_class", "flagship classifies as length-3",
                 classify(d).kind is Kind.LENGTH3)

    cf = center_family("t", 0, 1, 1)
    rec.add_bool("mel.center_collapse",
                 "order-2 and order-3 vanishing collapses the whole hierarchy",
                 hierarchy_collapse_check(cf, 6))
    cls = classify(cf)
    lam2 = cls.lambda2
    b1, b2, b3 = beta_periods(cf)
    rec.add_bool("mel.center_recursion",
                 "the inner Wronskian multiplies the hierarchy by lambda2/lambda1",
                 wronskian(b2, b3) == b3 * (cls.lambda2 / cls.lambda1))
    sym = classify(deformation(1, 0, 1))
    rec.add_bool("mel.symmetric", "zero middle coefficient forces the symmetric center",
                 sym.kind is Kind.SYMMETRIC_CENTER)
    return rec.records


def numeric_suite(cfg: Config) -> List[CheckRecord]:
    """Pairing table, iterated integrals, Poincare fits, center checks."""
    rec = Recorder()
    t0 = cfg.t0

    # pairing at two levels
    for tval in (0.25, t0):
        (tab, ms) = _timed(lambda tv=tval: pairing_table(tv))
        err = 0.0
        for (i, j), v in tab.items():
            expected = PAIRING_LOOP0[j] if i == 0 else PAIRING_EXPECTED[(i, j)]
            err = max(err, abs(v - expected))
        rec.add("num.pairing.t%s" % tval,
                "saddle-loop periods of the three logarithmic forms",
                err, 1e-9, expected="table",
                computed=f"max abs deviation {err:.2e}", runtime_ms=ms,
                params={"t": tval})

    (xdy, ms) = _timed(lambda: oval_orientation_certificate(t0))
    rec.add_bool("num.orientation", "the oval is counterclockwise (positive area)",
                 xdy > 0, computed=f"{xdy:.6f}", runtime_ms=ms)

    (val, ms) = _timed(lambda: v2_double_integral(t0))
    expected = 4 * np.pi ** 2
    rec.add("num.v2_double_integral",
            "double integral over the commutator cycle equals 4 pi^2",
            abs(val - expected) / expected, 1e-6,
            expected=f"{expected:.9f}", computed=f"{val:.9f}", runtime_ms=ms)

    (cs, ms) = _timed(lambda: cauchy_suite(t0))
    for name, v in cs.items():
        rec.add(f"num.cauchy.{name}", "holomorphic iterated integral vanishes",
                abs(v), 1e-8, expected="0", computed=f"{abs(v):.2e}",
                runtime_ms=ms / 3)

    fac = CycleFactory(t0)
    sh = shuffle_defect(fac.based_loop(2), eta(2), eta(3))
    rec.add("num.shuffle", "length-2 shuffle relation on a based loop",
            sh, 1e-8, computed=f"{sh:.2e}")
    dd = determinant_defect(X_ELT, Z_ELT, t0, 2, 3, factory=fac)
    rec.add("num.determinant", "commutator double integral equals the period determinant",
            dd, 1e-6, computed=f"{dd:.2e}")

    # flagship fit
    (fit, ms) = _timed(lambda: melnikov_fit(GAMMA_WORD, t0, FLAGSHIP,
                                            eps_grid=cfg.eps_grid, factory=fac))
    bound = 1e-7 * abs(fit.c3) * max(fit.eps_grid)
    rec.add("num.flagship.c1", "order-1 coefficient vanishes at fit resolution",
            abs(fit.c1), bound, computed=f"{abs(fit.c1):.2e}", runtime_ms=ms)
    rec.add("num.flagship.c2", "order-2 coefficient vanishes at fit resolution",
            abs(fit.c2), bound, computed=f"{abs(fit.c2):.2e}")
    rec.add_bool("num.flagship.c3",
                 "order-3 coefficient is nonzero and half-grid stable to 0.5%",
                 (not fit.is_zero(3)) and fit.stable(3, 5e-3),
                 computed=f"c3 = {fit.c3:.6f}, spread {fit.stability[3]:.2e}")

    # v3 cross-check
    (fit3, ms) = _timed(lambda: melnikov_fit(v_k(3), t0, FLAGSHIP,
                                             eps_grid=cfg.eps_grid, factory=fac))
    expected3 = RESOLVED_HOLONOMY_SIGN * (2j * np.pi) ** 3 * t0 ** 2
    err3 = abs(fit3.c3 - expected3) / abs(expected3)
    rec.add("num.v3_crosscheck",
            "order-3 coefficient over v3 equals the sign-calibrated (2 pi i)^3 t0^2",
            err3, 5e-3, expected=f"{expected3:.6f}", computed=f"{fit3.c3:.6f}",
            runtime_ms=ms, params={"resolved_sign": RESOLVED_HOLONOMY_SIGN})

    # center checks
    d0 = center_family("t", 1, 1, 0)
    cyc = fac.cycle_of_word(GAMMA_WORD)
    worst = max(abs(holonomy_along(cyc, d0, e) - t0) for e in (0.01, 0.02, 0.05))
    rec.add("num.center.exact", "the lam = 0 member preserves the center",
            worst, 1e-10, computed=f"{worst:.2e}")

    (rep1, ms) = _timed(lambda: m3_center_crosscheck("t", 0, 1, 1, t0, eps_grid=cfg.eps_grid))
    rec.add("num.center.order3", rep1.name, rep1.error, rep1.tolerance,
            expected=f"{rep1.expected:.6f}", computed=f"{rep1.computed:.6f}",
            runtime_ms=ms)

    d11 = center_family("t", 0, 1, 1)
    d22 = center_family("t", 0, 2, 2)
    f11 = melnikov_fit(GAMMA_WORD, t0, d11, eps_grid=cfg.eps_grid, factory=fac)
    f22 = melnikov_fit(GAMMA_WORD, t0, d22, eps_grid=cfg.eps_grid, factory=fac)
    ratio = f22.c3 / f11.c3
    rec.add("num.center.quadratic_scaling",
            "doubling both integrability witnesses multiplies the order-3 term by 4",
            abs(ratio - 4), 4 * 1e-2, expected="4", computed=f"{ratio:.6f}")
    d21 = center_family("t", 0, 1, 2)
    f21 = melnikov_fit(GAMMA_WORD, t0, d21, eps_grid=cfg.eps_grid, factory=fac)
    ratio2 = f21.c3 / f11.c3
    rec.add("num.center.witness_scaling",
            "doubling lam alone doubles the order-3 term (prefactor -lam*lambda1)",
            abs(ratio2 - 2), 2e-2, expected="2", computed=f"{ratio2:.6f}")

    # second-order assembly
    (reports, ms) = _timed(lambda: m2_assembly_check(FLAGSHIP, t0))
    for r in reports:
        rec.add(f"num.m2.{r.name.replace(' ', '_')}", r.name, r.error, r.tolerance,
                expected=str(r.expected), computed=f"{r.computed:.3e}",
                runtime_ms=ms / len(reports))
    return rec.records


SUITES: Dict[str, Callable[[Config], List[CheckRecord]]] = {
    "orbit": orbit_suite,
    "repr": repr_suite,
    "melnikov": melnikov_suite,
    "numeric": numeric_suite,
}


def run_suite(name: str, cfg: Optional[Config] = None,
              out_path: Optional[str] = None) -> tuple:
    """Run one suite (or 'all'); returns (exit_code, records, report_path)."""
    cfg = cfg or Config()
    names = list(SUITES) if name == "all" else [name]
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}; choose from {sorted(SUITES)} or 'all'")
    records: List[CheckRecord] = []
    for n in names:
        records.extend(SUITES[n](cfg))
    manifest = RunManifest(
        version=__version__,
        seed=cfg.seed,
        t0=cfg.t0,
        k_max=cfg.k_max,
        magnus_degree=cfg.magnus_degree,
        eps_grid=[float(e) for e in cfg.eps_grid],
        suites=names,
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%S"),
    )
    report = {
        "manifest": manifest.to_dict(),
        "checks": [r.to_dict() for r in records],
        "pass": all(r.passed for r in records),
    }
    out_dir = os.environ.get("OUTPUT_DIR", cfg.output_dir)
    os.makedirs(out_dir, exist_ok=True)
    path = out_path or os.path.join(out_dir, f"report_{'_'.join(names)}.json")
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2)
    return (0 if report["pass"] else 1), records, path


def paper_pipeline(cfg: Optional[Config] = None,
                   out_path: Optional[str] = None) -> tuple:
    """The ordered full reproduction: exact layers first, numerics after.

    Stops at the first hard failure (exception); check failures are
    recorded and reflected in the exit code.
    """
    cfg = cfg or Config()
    code, records, path = run_suite("all", cfg, out_path)
    return code, records, path


def summary_table(records: List[CheckRecord]) -> str:
    lines = []
    width = max(len(r.id) for r in records) + 2
    for r in records:
        status = "pass" if r.passed else "FAIL"
        lines.append(f"{r.id:<{width}} {status}  err={r.error:.3g} tol={r.tolerance:.3g}")
    n_pass = sum(r.passed for r in records)
    lines.append(f"{n_pass}/{len(records)} checks passed")
    return "\n".join(lines)
