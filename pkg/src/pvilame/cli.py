"""Command-line driver with reproducible CSV/JSON output.

Numeric inputs accept decimal literals, rationals `a/b`, and complex
`re+imi` (e.g. 0.3+0.1i).  Outputs are deterministic: floats are printed
with 17 significant digits, rationals canonically as a/b, and JSON keys are
sorted.  Every JSON summary carries a `conventions` block so results can be
reproduced across builds.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import elliptic, fuchs, lamecurve, monodromy, okamoto, pvi
from .errors import DomainError, NumericalError
from .numcore import OdeConfig, PlanePath

CONVENTIONS = {
    "loop_ordering": "straight lassos, 32-gon, relation Minf*Mt*M1*M0 = Id",
    "two_torsion_labels": "h1 -> x=0, h2 -> x=1, h1+h2 -> x=t",
    "gamma_branch": "root of g^2 - c g + 1 = 0 with larger |c +- sqrt|, 'plus'",
    "theta_convention": "theta = (k0, k1, kt, kinf + 1)",
}

EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_DOMAIN = 4


def parse_number(text):
    """Decimal, rational a/b, or complex re+imi."""
    s = text.strip().replace(" ", "")
    if "/" in s:
        return Fraction(s)
    if s.endswith("i") or s.endswith("j"):
        return complex(s[:-1] + "j") if s[-1] == "i" else complex(s)
    if "i" in s:
        return complex(s.replace("i", "j"))
    try:
        f = Fraction(s)
        if f.denominator == 1:
            return f
    except ValueError:
        pass
    return float(s)


def parse_tuple(text, n=None):
    vals = [parse_number(v) for v in text.split(",")]
    if n is not None and len(vals) != n:
        raise ValueError(f"expected {n} comma-separated values, got {len(vals)}")
    return vals


def fmt(x):
    """Deterministic scalar formatting."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int,)):
        return str(x)
    if isinstance(x, complex) or (hasattr(x, "imag") and x.imag != 0):
        z = complex(x)
        return f"{z.real:.17g}{z.imag:+.17g}i"
    return f"{float(x):.17g}"


def jsonable(obj):
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (Fraction, complex)) or isinstance(obj, float):
        return fmt(obj)
    if isinstance(obj, np.ndarray):
        return [[fmt(v) for v in row] for row in obj.tolist()]
    if obj is lamecurve.INF:
        return "inf"
    return obj


def emit(payload, with_conventions=True):
    if with_conventions:
        payload = dict(payload)
        payload["conventions"] = CONVENTIONS
    print(json.dumps(jsonable(payload), sort_keys=True, indent=2))


def _params_point(args):
    k = parse_tuple(args.kappa, 4)
    t, q, p = parse_tuple(args.point, 3)
    return pvi.make_params(*k), pvi.PhasePoint(t, q, p)


def cmd_integrate(args):
    k = parse_tuple(args.kappa, 4)
    P = pvi.make_params(*k)
    t0, q0, p0 = parse_tuple(args.start, 3)
    waypoints = [complex(t0)] + [complex(v) for v in parse_tuple(args.path)]
    cfg = OdeConfig(rel_tol=args.tol, abs_tol=args.tol * 1e-2)
    start = pvi.PhasePoint(t0, q0, p0)
    if args.detour:
        traj, path = pvi.flow_with_detours(P, start, waypoints[-1], cfg)
    else:
        traj = pvi.flow(P, start, PlanePath(waypoints), cfg)
    rows = []
    for s in traj.samples:
        H = pvi.hamiltonian(P, s)
        rows.append((complex(s.t), complex(s.q), complex(s.p), complex(H)))
    header = "t_re,t_im,q_re,q_im,p_re,p_im,H_re,H_im"
    lines = [header]
    for tt, qq, pp, HH in rows:
        lines.append(",".join(f"{v:.17g}" for v in
                              (tt.real, tt.imag, qq.real, qq.imag,
                               pp.real, pp.imag, HH.real, HH.imag)))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    residual = pvi.pvi_residual(P, traj, pvi.exact_field_lift(P))
    emit({"samples": len(rows), "pvi_residual": residual,
          "final": {"t": rows[-1][0], "q": rows[-1][1], "p": rows[-1][2]}})
    return 0


def cmd_symmetry(args):
    P, pt = _params_point(args)
    res = okamoto.apply_word(args.word, P, pt)
    emit({
        "kappa": list(res.params.kappa),
        "rho": res.params.rho,
        "point": {"t": res.point.t, "q": res.point.q, "p": res.point.p},
    })
    return 0


def cmd_monodromy(args):
    P, pt = _params_point(args)
    S = fuchs.system_from_pq(P, pt)
    base = parse_number(args.base) if args.base else None
    Q = monodromy.monodromy_quadruple(S, base=None if base is None else complex(base))
    tr = monodromy.isomonodromy_traces(Q)
    A, B = monodromy.pullback_rep(Q)
    fr = monodromy.fricke(A, B)
    cls = monodromy.classify_representation(fr)
    emit({
        "theta": list(S.theta),
        "traces": {"M0": np.trace(Q.M0), "M1": np.trace(Q.M1),
                   "Mt": np.trace(Q.Mt), "Minf": np.trace(Q.Minf),
                   "M0M1": tr[3], "M1Mt": tr[4], "M0Mt": tr[5]},
        "fricke": {"a": fr.a, "b": fr.b, "c": fr.c, "d": fr.d},
        "classification": {"reducible": cls.reducible,
                           "surface": cls.surface_label,
                           "singular_point": cls.singular_point},
        "base_point": complex(Q.base_point),
    })
    return 0


def cmd_pullback(args):
    P, pt = _params_point(args)
    if not args.exact:
        raise DomainError("the pull-back pipeline requires --exact rational data")
    C, data = lamecurve.lame_pullback(P, pt)
    lam = lamecurve.tu_from_pq(P, pt)
    out = {
        "chart": C.chart_label,
        "local_data": [
            {"point": d.point, "pole_order": d.pole_order,
             "residue_eigenvalues": None if d.residue_eigenvalues is None
             else list(d.residue_eigenvalues)}
            for d in data
        ],
        "tu_lambda": lam,
    }
    emit(out)
    return 0


def cmd_tu(args):
    P, pt = _params_point(args)
    lam_pq = lamecurve.tu_from_pq(P, pt)
    L = fuchs.parabolic_lines(P, pt)
    num, den = fuchs.cross_ratio(L)
    c = lamecurve.INF if den == 0 else num / den
    lam_cr = lamecurve.tu_from_cross_ratio(c, pt.t)
    cls = lamecurve.classify_bundle(L, pt.t)
    emit({
        "lambda_from_pq": lam_pq,
        "lambda_from_cross_ratio": lam_cr,
        "cross_ratio": c,
        "bundle": {"kind": cls.kind,
                   "lambda": cls.lam if cls.lam is not None else None},
    })
    return 0


def cmd_picard(args):
    c0 = parse_number(args.c0)
    c1 = parse_number(args.c1)
    a, b, n = parse_tuple(args.tgrid, 3)
    ts = [float(a) + (float(b) - float(a)) * i / (int(n) - 1) for i in range(int(n))]
    seed = elliptic.PicardSeed(complex(c0), complex(c1))
    samples = [{"t": t, "x": elliptic.picard_solution(seed, t)} for t in ts]
    residual = elliptic.picard_pvi_residual(seed, ts[1:-1] or ts)
    emit({"samples": samples, "pvi_residual": residual})
    return 0


def cmd_fricke(args):
    a = parse_number(args.a)
    b = parse_number(args.b)
    c = parse_number(args.c)
    fr = monodromy.FrickeTriple(a, b, c)
    cls = monodromy.classify_representation(fr)
    A, B, gamma = monodromy.normal_form_from_fricke(a, b, c)
    M = monodromy.involution_matrix(a, b, gamma)
    emit({
        "d": fr.d,
        "irreducible": not cls.reducible,
        "singular": cls.singular_point,
        "surface": cls.surface_label,
        "gamma": gamma,
        "normal_form": {"A": [list(r) for r in A], "B": [list(r) for r in B]},
        "involution_matrix": [list(r) for r in M],
    })
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="pvilame", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="flow the Hamiltonian system along a t-path")
    p.add_argument("--kappa", required=True)
    p.add_argument("--start", required=True, help="t,q,p")
    p.add_argument("--path", required=True, help="t1[,t2,...]")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", default=None)
    p.add_argument("--detour", action="store_true",
                   help="deform the path around poles of the transcendent")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("symmetry", help="apply an Okamoto symmetry word")
    p.add_argument("--word", required=True)
    p.add_argument("--kappa", required=True)
    p.add_argument("--point", required=True, help="t,q,p")
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("monodromy", help="monodromy traces and Fricke data")
    p.add_argument("--kappa", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--base", default=None)
    p.set_defaults(func=cmd_monodromy)

    p = sub.add_parser("pullback", help="exact elliptic pull-back local data")
    p.add_argument("--kappa", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("tu", help="Tu invariant by both formulas")
    p.add_argument("--kappa", required=True)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_tu)

    p = sub.add_parser("picard", help="Picard solutions of PVI(0,0,0,0)")
    p.add_argument("--c0", required=True)
    p.add_argument("--c1", required=True)
    p.add_argument("--tgrid", required=True, help="a,b,n")
    p.set_defaults(func=cmd_picard)

    p = sub.add_parser("fricke", help="trace-coordinate classification")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", required=True)
    p.set_defaults(func=cmd_fricke)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
