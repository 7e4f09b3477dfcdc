"""Command-line front end.

Subcommand tree:

    orbit  {var, mon, depth, project}
    repr   {matrices, check-v, comm-scalar, impossible, certificate}
    mel    {wronskian, build, classify, mv, center}
    num    {pairing, iterated, cauchy-suite, fit, holonomy, center-check}
    verify {orbit, repr, melnikov, numeric, all}
    report --out FILE --format {json,csv}

All numeric subcommands emit JSON records; `num fit` can also write a CSV
of (eps, holonomy) samples and, with --plots, an SVG of the fit residuals.
The OUTPUT_DIR environment variable overrides the output directory.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import json
import os
import sys
from fractions import Fraction

from .words import (
    Gen,
    Word,
    format_rho_word,
    format_word,
    mon0,
    mon1,
    m_endo,
    parse_word,
    project_mod_gamma_subgroup,
    rewrite_to_rho_alphabet,
    var,
)
from .magnus import depth_lower_bound, mono_format
from .representation import (
    base_matrices,
    commutator_scalar,
    depth_certificate,
    impossibility_check,
    verify_v_images,
)
from .ratfunc import parse_rational
from .melnikov import (
    center_family,
    classify,
    deformation,
    make_length3,
    mv,
)
from .ratfunc import wronskian
from .curves import CycleFactory, real_oval
from .integrals import (
    EtaCombo,
    cauchy_suite,
    eta,
    iterated_integral,
    pairing_table,
    PAIRING_EXPECTED,
    PAIRING_LOOP0,
)
from .holonomy import holonomy, m3_center_crosscheck, melnikov_fit
from .reporting import Config, run_suite, summary_table


def _emit(obj, args):
    out = json.dumps(obj, indent=2, default=str)
    print(out)


def _complex_str(z) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _fraction(text: str) -> Fraction:
    return Fraction(text)


# -- orbit ------------------------------------------------------------------


def cmd_orbit_var(args):
    w = parse_word(args.word)
    for _ in range(args.times):
        w = var(w)
    _emit({"word": args.word, "times": args.times, "result": format_word(w),
           "rho_form": format_rho_word(rewrite_to_rho_alphabet(w))}, args)


def cmd_orbit_mon(args):
    endo = {"mon0": mon0, "mon1": mon1, "m": m_endo}[args.operator]()
    w = endo(parse_word(args.word))
    _emit({"operator": args.operator, "word": args.word,
           "result": format_word(w)}, args)


def cmd_orbit_depth(args):
    rep = depth_lower_bound(parse_word(args.word), args.max_degree)
    leading = {mono_format(m): c for m, c in sorted(rep.leading_part.items())}
    _emit({
        "word": args.word,
        "max_degree": rep.truncation,
        "depth": rep.depth if rep.depth is not None else f">{rep.truncation}",
        "identity": rep.is_identity,
        "leading_component": leading,
    }, args)


def cmd_orbit_project(args):
    w = project_mod_gamma_subgroup(parse_word(args.word))
    _emit({"word": args.word, "projection": format_word(w)}, args)


# -- repr -------------------------------------------------------------------


def cmd_repr_matrices(args):
    A, B, C = base_matrices(args.k)
    def render(m):
        return {f"{i},{j}": repr(p) for (i, j), p in sorted(m.entries.items())}
    _emit({"k": args.k, "A": render(A), "B": render(B), "C": render(C)}, args)


def cmd_repr_check_v(args):
    report = verify_v_images(args.k, args.imax)
    _emit({
        "k": args.k,
        "imax": args.imax or args.k + 4,
        "checks": [{"name": it.name, "pass": it.passed, "detail": it.detail}
                   for it in report.items],
        "pass": report.passed,
    }, args)
    return 0 if report.passed else 1


def cmd_repr_comm_scalar(args):
    m, n, scalar = commutator_scalar(args.k, parse_word(args.word))
    _emit({"k": args.k, "word": args.word, "m": m, "n": n,
           "scalar": repr(scalar)}, args)


def cmd_repr_impossible(args):
    terms = []
    for chunk in args.terms.split(";"):
        lam, m, n = (int(v) for v in chunk.split(","))
        terms.append((lam, m, n))
    ok = impossibility_check(terms)
    _emit({"terms": terms, "nonvanishing": ok}, args)
    return 0 if ok else 1


def cmd_repr_certificate(args):
    cert = depth_certificate(args.k, samples=args.samples, seed=args.seed)
    _emit(cert.to_dict(), args)
    return 0 if cert.passed else 1


# -- mel --------------------------------------------------------------------


def cmd_mel_wronskian(args):
    f = parse_rational(args.f)
    g = parse_rational(args.g)
    _emit({"f": str(f), "g": str(g), "wronskian": str(wronskian(f, g))}, args)


def cmd_mel_build(args):
    d = make_length3(parse_rational(args.alpha1), parse_rational(args.alpha2),
                     _fraction(args.c0), _fraction(args.lam))
    _emit({"a1": str(d.a1), "a2": str(d.a2), "a3": str(d.a3),
           "provenance": d.provenance}, args)


def _deformation_from_args(args):
    return deformation(parse_rational(args.a1), parse_rational(args.a2),
                       parse_rational(args.a3))


def cmd_mel_classify(args):
    cls = classify(_deformation_from_args(args))
    out = {"classification": cls.kind.value}
    if cls.lambda1 is not None:
        out["lambda1"] = str(cls.lambda1)
        out["lambda2"] = str(cls.lambda2)
    _emit(out, args)


def cmd_mel_mv(args):
    d = _deformation_from_args(args)
    _emit({"i": args.i, "mv": str(mv(args.i, d)),
           "normalization": "(2 pi i)^i omitted"}, args)


def cmd_mel_center(args):
    d = center_family(parse_rational(args.A), _fraction(args.c1),
                      _fraction(args.lambda1), _fraction(args.lam))
    _emit({"a1": str(d.a1), "a2": str(d.a2), "a3": str(d.a3),
           "provenance": d.provenance}, args)


# -- num --------------------------------------------------------------------


def cmd_num_pairing(args):
    tab = pairing_table(args.t)
    records = []
    ok = True
    for (i, j), v in sorted(tab.items()):
        expected = PAIRING_LOOP0[j] if i == 0 else PAIRING_EXPECTED[(i, j)]
        err = abs(v - expected)
        ok = ok and err <= 1e-9
        records.append({
            "check": f"loop{i}_eta{j}",
            "params": {"t": args.t},
            "expected": _complex_str(expected),
            "computed": _complex_str(v),
            "abs_error": err,
            "pass": err <= 1e-9,
        })
    _emit(records, args)
    return 0 if ok else 1


_FORM_NAMES = {f"eta{i}": [(i, 1.0)] for i in (1, 2, 3, 4)}
_FORM_NAMES.update({f"dphi{i}": [(i, 1.0)] for i in (1, 2, 3, 4)})


def _parse_forms(spec: str):
    forms, inits = [], []
    for name in spec.split(","):
        name = name.strip()
        if name in _FORM_NAMES:
            forms.append(EtaCombo(tuple(_FORM_NAMES[name])))
            inits.append(0.0)
        elif name.startswith("phi") and "*dphi" in name:
            i = int(name[3])
            j = int(name.split("*dphi")[1])
            forms.append(eta(i))
            inits.append(None)  # resolved to log f_i at the start
            forms.append(eta(j))
            inits.append(0.0)
        else:
            raise ValueError(f"unknown form {name!r}")
    return forms, inits


def cmd_num_iterated(args):
    w = parse_word(args.word)
    forms, inits = _parse_forms(args.forms)
    if w == Word.gen(Gen.G):
        cycle = real_oval(args.t)
    else:
        cycle = CycleFactory(args.t).cycle_of_word(w)
    start = cycle.segments[0].start_point()
    resolved = []
    fvals = {1: start.x + 1, 2: start.y - 1, 3: start.x - 1, 4: start.y + 1}
    for init, form in zip(inits, forms):
        if init is None:
            i = form.coeffs[0][0]
            resolved.append(cmath.log(fvals[i]))
        else:
            resolved.append(init)
    val = iterated_integral(cycle, forms, inits=resolved)
    _emit({"check": "iterated", "params": {"word": args.word, "forms": args.forms,
                                           "t": args.t},
           "computed": _complex_str(val)}, args)


def cmd_num_cauchy(args):
    out = []
    ok = True
    for name, v in cauchy_suite(args.t).items():
        err = abs(v)
        ok = ok and err <= 1e-8
        out.append({"check": name, "params": {"t": args.t}, "expected": "0",
                    "computed": _complex_str(v), "abs_error": err,
                    "pass": err <= 1e-8})
    _emit(out, args)
    return 0 if ok else 1


def cmd_num_fit(args):
    d = _deformation_from_args(args)
    w = parse_word(args.word)
    from .holonomy import DEFAULT_EPS_GRID

    grid = [float(x) for x in args.eps_grid.split(",")] if args.eps_grid else DEFAULT_EPS_GRID
    fit = melnikov_fit(w, args.t, d, eps_grid=grid)
    out = {
        "check": "melnikov_fit",
        "params": {"word": args.word, "t": args.t,
                   "a1": args.a1, "a2": args.a2, "a3": args.a3,
                   "eps_grid": list(fit.eps_grid)},
        "c1": _complex_str(fit.c1),
        "c2": _complex_str(fit.c2),
        "c3": _complex_str(fit.c3),
        "zero_flags": {str(j): bool(f) for j, f in fit.zero_flags.items()},
        "stability": {str(j): float(s) for j, s in fit.stability.items()},
    }
    _emit(out, args)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["eps", "re_displacement", "im_displacement"])
            for e, v in sorted(fit.samples):
                writer.writerow([e, v.real, v.imag])
    if args.plots:
        _plot_fit(fit, args)


def _plot_fit(fit, args):
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping plot", file=sys.stderr)
        return
    import numpy as np

    eps = np.array([e for e, _ in sorted(fit.samples) if e > 0])
    vals = np.array([v for e, v in sorted(fit.samples) if e > 0])
    model = fit.c1 * eps + fit.c2 * eps ** 2 + fit.c3 * eps ** 3
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.loglog(eps, np.abs(vals), "o-", label="|displacement|")
    ax.loglog(eps, np.abs(vals - model), "s--", label="|residual past order 3|")
    ax.set_xlabel("eps")
    ax.legend()
    out_dir = os.environ.get("OUTPUT_DIR", ".")
    path = os.path.join(out_dir, "fit_residuals.svg")
    fig.savefig(path, format="svg", bbox_inches="tight")
    print(f"plot written to {path}", file=sys.stderr)


def cmd_num_holonomy(args):
    d = _deformation_from_args(args)
    w = parse_word(args.word)
    val = holonomy(w, args.t, complex(args.eps), d)
    _emit({"check": "holonomy", "params": {"word": args.word, "t": args.t,
                                           "eps": args.eps},
           "computed": _complex_str(val),
           "displacement": _complex_str(val - args.t)}, args)


def cmd_num_center_check(args):
    rep = m3_center_crosscheck(parse_rational(args.A), _fraction(args.c1),
                               _fraction(args.lambda1), _fraction(args.lam),
                               args.t)
    _emit({"check": rep.name, "params": {"A": args.A, "c1": args.c1,
                                         "lambda1": args.lambda1,
                                         "lambda": args.lam, "t": args.t},
           "expected": _complex_str(complex(rep.expected)),
           "computed": _complex_str(complex(rep.computed)),
           "rel_error": rep.error, "pass": rep.passed}, args)
    return 0 if rep.passed else 1


# -- verify / report --------------------------------------------------------


def _config_from_args(args) -> Config:
    cfg = Config.from_file(args.config) if args.config else Config()
    for key in ("seed", "t0", "k_max", "samples"):
        v = getattr(args, key, None)
        if v is not None:
            setattr(cfg, key, v)
    if getattr(args, "eps_grid", None):
        cfg.eps_grid = [float(x) for x in args.eps_grid.split(",")]
    if getattr(args, "output_dir", None):
        cfg.output_dir = args.output_dir
    return cfg


def cmd_verify(args):
    cfg = _config_from_args(args)
    try:
        code, records, path = run_suite(args.suite, cfg, args.out)
    except KeyError as exc:
        print(exc, file=sys.stderr)
        return 2
    print(summary_table(records))
    print(f"report: {path}")
    return code


def cmd_report(args):
    cfg = _config_from_args(args)
    code, records, path = run_suite("all", cfg, args.out if args.format == "json" else None)
    if args.format == "csv":
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "claim", "expected", "computed", "error",
                             "tolerance", "pass", "runtime_ms"])
            for r in records:
                writer.writerow([r.id, r.claim, r.expected, r.computed,
                                 r.error, r.tolerance, r.passed, r.runtime_ms])
        print(f"report: {args.out}")
    print(summary_table(records))
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbitdepth", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="group", required=True)

    orbit = sub.add_parser("orbit", help="free-group and depth operations")
    osub = orbit.add_subparsers(dest="cmd", required=True)
    q = osub.add_parser("var", help="iterate the variation operator")
    q.add_argument("--word", required=True)
    q.add_argument("--times", type=int, default=1)
    q.set_defaults(func=cmd_orbit_var)
    q = osub.add_parser("mon", help="apply a monodromy operator")
    q.add_argument("--operator", choices=("mon0", "mon1", "m"), required=True)
    q.add_argument("--word", required=True)
    q.set_defaults(func=cmd_orbit_mon)
    q = osub.add_parser("depth", help="lower-central depth via the series expansion")
    q.add_argument("--word", required=True)
    q.add_argument("--max-degree", type=int, default=8)
    q.set_defaults(func=cmd_orbit_depth)
    q = osub.add_parser("project", help="project modulo the normal closure of g, D")
    q.add_argument("--word", required=True)
    q.set_defaults(func=cmd_orbit_project)

    rep = sub.add_parser("repr", help="Laurent matrix representations")
    rsub = rep.add_subparsers(dest="cmd", required=True)
    q = rsub.add_parser("matrices", help="print the level-k base matrices")
    q.add_argument("--k", type=int, required=True)
    q.set_defaults(func=cmd_repr_matrices)
    q = rsub.add_parser("check-v", help="verify the v-image table at level k")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--imax", type=int)
    q.set_defaults(func=cmd_repr_check_v)
    q = rsub.add_parser("comm-scalar", help="corner scalar of a commutator")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--word", required=True)
    q.set_defaults(func=cmd_repr_comm_scalar)
    q = rsub.add_parser("impossible", help="generic-parameter impossibility check")
    q.add_argument("--terms", required=True,
                   help="semicolon-separated lambda,m,n triples")
    q.set_defaults(func=cmd_repr_impossible)
    q = rsub.add_parser("certificate", help="full separation certificate")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--samples", type=int, default=100)
    q.add_argument("--seed", type=int, default=20259)
    q.set_defaults(func=cmd_repr_certificate)

    mel = sub.add_parser("mel", help="exact Wronskian layer")
    msub = mel.add_subparsers(dest="cmd", required=True)
    q = msub.add_parser("wronskian")
    q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q.set_defaults(func=cmd_mel_wronskian)
    q = msub.add_parser("build", help="length-3 deformation from (alpha1, alpha2, c0, lambda)")
    q.add_argument("--alpha1", required=True)
    q.add_argument("--alpha2", required=True)
    q.add_argument("--c0", default="0")
    q.add_argument("--lambda", dest="lam", default="1")
    q.set_defaults(func=cmd_mel_build)
    q = msub.add_parser("classify")
    for name in ("a1", "a2", "a3"):
        q.add_argument(f"--{name}", required=True)
    q.set_defaults(func=cmd_mel_classify)
    q = msub.add_parser("mv", help="nested-Wronskian hierarchy term")
    q.add_argument("--i", type=int, required=True)
    for name in ("a1", "a2", "a3"):
        q.add_argument(f"--{name}", required=True)
    q.set_defaults(func=cmd_mel_mv)
    q = msub.add_parser("center", help="center family from (A, c1, lambda1, lambda)")
    q.add_argument("--A", required=True)
    q.add_argument("--c1", default="0")
    q.add_argument("--lambda1", default="1")
    q.add_argument("--lambda", dest="lam", default="0")
    q.set_defaults(func=cmd_mel_center)

    num = sub.add_parser("num", help="numerical geometry on the curve")
    nsub = num.add_subparsers(dest="cmd", required=True)
    q = nsub.add_parser("pairing", help="saddle-loop period table")
    q.add_argument("--t", type=float, required=True)
    q.set_defaults(func=cmd_num_pairing)
    q = nsub.add_parser("iterated", help="iterated integral along a word cycle")
    q.add_argument("--word", required=True)
    q.add_argument("--forms", required=True,
                   help="comma list from eta1..eta4, dphi1..dphi4, phiI*dphiJ")
    q.add_argument("--t", type=float, required=True)
    q.set_defaults(func=cmd_num_iterated)
    q = nsub.add_parser("cauchy-suite", help="the vanishing iterated integrals")
    q.add_argument("--t", type=float, required=True)
    q.set_defaults(func=cmd_num_cauchy)
    q = nsub.add_parser("fit", help="eps-power fit of the return map")
    q.add_argument("--word", required=True)
    q.add_argument("--t", type=float, required=True)
    for name in ("a1", "a2", "a3"):
        q.add_argument(f"--{name}", required=True)
    q.add_argument("--eps-grid")
    q.add_argument("--csv", help="write (eps, displacement) samples")
    q.add_argument("--plots", action="store_true")
    q.set_defaults(func=cmd_num_fit)
    q = nsub.add_parser("holonomy", help="single return-map evaluation")
    q.add_argument("--word", required=True)
    q.add_argument("--t", type=float, required=True)
    q.add_argument("--eps", type=float, required=True)
    for name in ("a1", "a2", "a3"):
        q.add_argument(f"--{name}", required=True)
    q.set_defaults(func=cmd_num_holonomy)
    q = nsub.add_parser("center-check", help="order-3 center cross-check")
    q.add_argument("--A", required=True)
    q.add_argument("--c1", default="0")
    q.add_argument("--lambda1", default="1")
    q.add_argument("--lambda", dest="lam", required=True)
    q.add_argument("--t", type=float, required=True)
    q.set_defaults(func=cmd_num_center_check)

    ver = sub.add_parser("verify", help="run a check suite")
    ver.add_argument("suite", choices=("orbit", "repr", "melnikov", "numeric", "all"))
    ver.add_argument("--config")
    ver.add_argument("--seed", type=int)
    ver.add_argument("--t0", type=float)
    ver.add_argument("--k-max", dest="k_max", type=int)
    ver.add_argument("--samples", type=int)
    ver.add_argument("--eps-grid")
    ver.add_argument("--output-dir")
    ver.add_argument("--out")
    ver.set_defaults(func=cmd_verify)

    repo = sub.add_parser("report", help="run everything and write a report")
    repo.add_argument("--out", required=True)
    repo.add_argument("--format", choices=("json", "csv"), default="json")
    repo.add_argument("--config")
    repo.add_argument("--seed", type=int)
    repo.add_argument("--t0", type=float)
    repo.add_argument("--k-max", dest="k_max", type=int)
    repo.add_argument("--samples", type=int)
    repo.add_argument("--eps-grid")
    repo.add_argument("--output-dir")
    repo.set_defaults(func=cmd_report)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        raise
    try:
        code = args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return int(code or 0)


if __name__ == "__main__":
    sys.exit(main())
