"""Batch front end: verification suites and solvers with machine-readable
reports.

Report files are byte-deterministic for a fixed configuration: the seed
fixes all sampling, floats are emitted with 17 significant digits, and
wall time is printed to stdout only, never written into a report file.

Config files are flat ``key=value`` lines (# comments allowed); keys match
the long option names with dashes as underscores.  Command-line flags
override config values, which override built-in defaults.

CSV columns per suite:
    higgs-radial      r,k,residual        (radial profile of the solve)
    toda-uniqueness   y,t,f,residual      (converged grid, row-major in y)
    foldlab-gh        s,V,omega_sq        (line crossing the fold plane;
                                           omega_sq is the w1^2 volume
                                           coefficient, 2V)
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from .report import Report, csv_lines

SUITES = [
    "verify-canonical",
    "suinf-residuals",
    "higgs-radial",
    "toda-residual",
    "toda-uniqueness",
    "invariants",
    "deform-asd",
    "foldlab-jump",
    "foldlab-gh",
]


# -- suites ------------------------------------------------------------------


def suite_verify_canonical(samples=10000, seed=42, tol=1e-9, **_):
    from . import canonical as C

    out = C.verify_identities(n_points=samples, seed=seed)
    rep = Report("verify-canonical")
    rep.add("triple-identities", out["n_points"], out["max_residual"], tol)
    rep.add("fold-transversality-spread", 4, out["fold_ratio_spread"], 1e-6)
    return rep, {}


def suite_suinf_residuals(samples=500, seed=42, tol=1e-10, **_):
    from . import suinf as S

    data = S.canonical_data()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _i in range(samples):
        base = (rng.uniform(-2, 2), rng.uniform(0.2, 4.0))
        v = rng.normal(size=3)
        fibre = v / np.linalg.norm(v)
        r1, r2 = S.higgs_residuals(data, base, fibre)
        worst = max(worst, abs(r1), abs(r2))
    rep = Report("suinf-residuals")
    rep.add("higgs-field-equations", samples, worst, tol)
    return rep, {}


def suite_higgs_radial(c=0.0, m=1, radius=0.5, n_grid=400, k_boundary=None,
                       newton_tol=1e-8, **_):
    from . import higgs2d as H

    c = complex(c)
    if k_boundary is None:
        k_boundary = 1.0 / (1.0 - radius * radius) ** 2
    sol = H.solve_radial(c, m, radius, k_boundary, n_grid)
    rep = Report("higgs-radial")
    rep.add("newton-final-residual", n_grid + 1, sol.history[-1], newton_tol)
    if c == 0.0:
        exact = 1.0 / (1.0 - sol.r ** 2) ** 2
        rel = float(np.max(np.abs(sol.k - exact) / exact))
        rep.add("constant-curvature-relerr", n_grid + 1, rel, 1e-6)
    files = {
        "csv": csv_lines(["r", "k", "residual"],
                         zip(sol.r, sol.k, sol.residual)),
    }
    return rep, files


def suite_toda_residual(samples=200, seed=42, tol=1e-13, **_):
    from . import toda as T
    from .forms import d

    u = T.canonical_u()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _i in range(samples):
        p = (rng.uniform(-2, 2), rng.uniform(0.3, 3.0), rng.uniform(-0.9, 0.9))
        worst = max(worst, abs(T.toda_residual(u, p)))
    rep = Report("toda-residual")
    rep.add("canonical-solution-residual", samples, worst, tol)

    # closedness of w1 <-> the scalar equation: the dx^dy^dt coefficient of
    # d(w1) equals the residual; u_t > 0 needs t < 0 on the canonical branch
    w1f = T.ansatz_w1_field(u)
    worst_eq = 0.0
    for _i in range(samples // 4):
        p = (rng.uniform(-2, 2), rng.uniform(0.3, 3.0),
             rng.uniform(-0.9, -0.1), rng.uniform(0, 2 * math.pi))
        dw = d(w1f, p)
        res = T.toda_residual(u, p[:3])
        worst_eq = max(worst_eq, abs(dw[(0, 1, 2)] - res))
    rep.add("closedness-equivalence", samples // 4, worst_eq, 1e-10)
    return rep, {}


def suite_toda_uniqueness(ny=64, nt=65, amp=0.3, y_min=1.0, y_max=2.0, **_):
    from . import toda as T

    ys = np.linspace(y_min, y_max, ny)
    ts = np.linspace(-1.0, 1.0, nt)
    yy, tt = np.meshgrid(ys, ts, indexing="ij")
    initial = 1.0 + amp * np.sin(
        math.pi * (yy - y_min) / (y_max - y_min)) * (1.0 - tt ** 2)
    y, t, f, residual, history = T.solve_reduced_bvp(
        (y_min, y_max), ny, nt, initial=initial)
    sup = float(np.max(np.abs(f - 1.0)))
    rep = Report("toda-uniqueness")
    # beyond amplitude 0.3 the basin is explored, not asserted
    sup_tol = 1e-6 if amp <= 0.3 else math.inf
    rep.add("constant-solution-deviation", ny * nt, sup, sup_tol)
    rep.add("newton-steps", len(history), float(len(history)), 40.0)
    rows = [
        (y[i], t[j], f[i, j], residual[i, j])
        for i in range(ny) for j in range(nt)
    ]
    return rep, {"csv": csv_lines(["y", "t", "f", "residual"], rows)}


def suite_invariants(ell=(1, 2, 3), a_value=0.7 + 0.2j, k_value=1.3, **_):
    from . import moments as M

    rep = Report("invariants")
    pair = M.fibre_pairings((0.3, 1.2))
    rep.add("fibre-area-4pi", 1, abs(pair["I1"] - 4.0 * math.pi), 1e-6)
    rep.add("exact-form-pairings", 2,
            max(abs(pair["I2"]), abs(pair["I3"])), 1e-8)
    rep.add("hemisphere-2pi", 1, abs(pair["I1_half"] - 2.0 * math.pi), 1e-6)

    a = complex(a_value)
    k = float(k_value)
    worst_odd = max(abs(M.alpha_m(k, a, m)) for m in (1, 3, 5, 7))
    rep.add("odd-moments-vanish", 4, worst_odd, 1e-10)
    worst_even = 0.0
    worst_conv = 0.0
    for l in ell:
        want = M.closed_form_alpha(l, a)
        got = M.alpha_m(k, a, 2 * l)
        got2 = M.alpha_m(k, a, 2 * l, n_s=96, n_theta=128)
        worst_even = max(worst_even, abs(got - want) / abs(want))
        worst_conv = max(worst_conv, abs(got - got2))
    rep.add("even-moment-closed-form", len(tuple(ell)), worst_even, 1e-7)
    rep.add("quadrature-convergence", len(tuple(ell)), worst_conv, 1e-9)

    worst_diag = 0.0
    worst_off = 0.0
    for kp in range(1, 5):
        for mm in range(1, 5):
            got = M.moment_variation(kp, mm, a, 1.3)
            if kp == mm:
                want = M.closed_form_variation(kp, a)
                worst_diag = max(worst_diag, abs(got - want) / abs(want))
            else:
                worst_off = max(worst_off, abs(got))
    rep.add("moment-variation-diagonal", 4, worst_diag, 1e-6)
    rep.add("moment-variation-offdiagonal", 12, worst_off, 1e-8)
    return rep, {}


def suite_deform_asd(samples=200, seed=42, m_max=6, **_):
    from . import deform as D

    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(samples):
        y = rng.uniform(0.3, 2.5)
        # fibre coordinates live in the disc y^2 |w|^2 < 1
        rho = 0.9 * rng.uniform(0.05, 1.0) / y
        th = rng.uniform(0.0, 2.0 * math.pi)
        pts.append((rng.uniform(-1.5, 1.5), y,
                    rho * math.cos(th), rho * math.sin(th)))
    rep = Report("deform-asd")
    worst_asd = 0.0
    for m in range(2, m_max + 1):
        field = D.DeformationField(m=m, a_coeffs=(0.3 - 0.1j, 1.0))
        for p in pts:
            worst_asd = max(worst_asd, float(np.max(D.asd_check(field, p))))
    rep.add("anti-self-duality", samples * (m_max - 1), worst_asd, 1e-9)

    field = D.DeformationField(m=3, a_coeffs=(0.5, 0.2j))
    worst_cf = max(D.closed_form_deviation(field, p) for p in pts[:40])
    rep.add("lie-derivative-closed-form", 40, worst_cf, 1e-10)

    ctrl = D.negative_control_field()
    ctrl_val = float(np.max(D.asd_check(ctrl, pts[0])))
    rep.add("negative-control", 1, ctrl_val, 1e-3, lower_bound=True)
    return rep, {}


def suite_foldlab_jump(t_values=(0.3, -0.7, 1.2), seed=42, **_):
    from . import canonical as C
    from . import foldlab as F
    from .forms import cwedge, wedge

    rep = Report("foldlab-jump")
    c0, c1, c2 = F.jump_model_coefficients(0.0)
    div = 0.0
    for form in (c0, c1, c2):
        for idx, v in form.coeffs.items():
            if 0 not in idx:
                div = max(div, abs(v))
    rep.add("fold-divisibility-t0", 3, div, 0.0)

    worst_slope = max(abs(F.jump_square_slope(t) - 1.0) for t in t_values)
    rep.add("transversality-slope", len(tuple(t_values)), worst_slope, 1e-12)

    rng = np.random.default_rng(seed)
    worst_mix = 0.0
    worst_sq = 0.0
    for t in t_values:
        c0, c1, c2 = F.jump_model_coefficients(t)
        worst_mix = max(worst_mix, abs(wedge(c1, c0)[(0, 1, 2, 3)]))
        for _ in range(8):
            z = complex(rng.normal(), rng.normal())
            sq = cwedge(F.omega_zeta(t, z), F.omega_zeta(t, z))
            worst_sq = max(worst_sq, abs(complex(
                sq.re[(0, 1, 2, 3)], sq.im[(0, 1, 2, 3)])))
    rep.add("degenerate-pairing", len(tuple(t_values)), worst_mix, 1e-14)
    rep.add("family-square-zero", 8 * len(tuple(t_values)), worst_sq, 1e-12)

    phi, e1, e2 = C.fold_data(0.3, 1.2, 0.7)
    worst_real = 0.0
    for _ in range(6):
        z = complex(rng.normal(), rng.normal())
        if abs(z) < 1e-3:
            continue
        v = F.eta_kernel(phi, e1, e2, z)
        v2 = F.eta_kernel(phi, e1, e2, -1.0 / np.conj(z))
        w = np.conj(v)
        dev = np.linalg.norm(v2 - np.vdot(w, v2) * w / np.vdot(w, w))
        worst_real = max(worst_real, float(dev))
    rep.add("kernel-reality", 6, worst_real, 1e-10)
    return rep, {}


def suite_foldlab_gh(heights=(-1.0, 1.0), charges=(1.0, -1.0), samples=60,
                     seed=42, **_):
    from . import foldlab as F

    data = F.GibbonsHawkingData(heights=tuple(heights),
                                charges=tuple(charges))
    rng = np.random.default_rng(seed)
    worst_mono = 0.0
    worst_id = 0.0
    n_used = 0
    while n_used < samples:
        x = rng.uniform(-2.5, 2.5, 3)
        if min((x[2] - h) ** 2 + x[0] ** 2 + x[1] ** 2
               for h in data.heights) < 0.04:
            continue
        if x[0] ** 2 + x[1] ** 2 < 1e-3:
            continue
        worst_mono = max(worst_mono, F.gh_monopole_check(data, x))
        wi, _v = F.gh_identity_check(data, np.append(x, 0.4))
        worst_id = max(worst_id, wi)
        n_used += 1
    rep = Report("foldlab-gh")
    rep.add("monopole-equation", samples, worst_mono, 1e-10)
    rep.add("quaternionic-pairing", samples, worst_id, 1e-12)

    # line crossing the fold plane of the (+,-) pair: V changes sign at the
    # midplane by symmetry
    svals = np.linspace(-0.8, 0.8, 33)
    rows = []
    vmin, vmax = math.inf, -math.inf
    for s in svals:
        _, _, _, v = F.gh_forms(data, (0.3, 0.2, s, 0.0))
        rows.append((s, v, 2.0 * v))
        vmin, vmax = min(vmin, v), max(vmax, v)
    crossed = 1.0 if (vmin < 0.0 < vmax) else 0.0
    rep.add("fold-crossing-sign-change", len(svals), crossed, 0.5,
            lower_bound=True)
    return rep, {"csv": csv_lines(["s", "V", "omega_sq"], rows)}


SUITE_FUNCS = {
    "verify-canonical": suite_verify_canonical,
    "suinf-residuals": suite_suinf_residuals,
    "higgs-radial": suite_higgs_radial,
    "toda-residual": suite_toda_residual,
    "toda-uniqueness": suite_toda_uniqueness,
    "invariants": suite_invariants,
    "deform-asd": suite_deform_asd,
    "foldlab-jump": suite_foldlab_jump,
    "foldlab-gh": suite_foldlab_gh,
}


# -- plumbing ----------------------------------------------------------------


def _parse_value(text):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text)
    except ValueError:
        pass
    if "," in text:
        return tuple(_parse_value(p) for p in text.split(","))
    return text


def read_config(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {line!r}")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = _parse_value(val.strip())
    return out


def build_parser():
    parser = argparse.ArgumentParser(
        prog="foldedhk",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **flags):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None,
                       help="key=value file; CLI flags override it")
        p.add_argument("--out", default=None,
                       help="JSON report path (default: stdout)")
        p.add_argument("--csv", default=None,
                       help="CSV output path for suites that produce grids")
        for flag, (typ, helptext) in flags.items():
            p.add_argument(f"--{flag.replace('_', '-')}", type=typ,
                           default=None, help=helptext)
        return p

    add("verify-canonical",
        samples=(int, "number of sample points"),
        seed=(int, "sampling seed"),
        tol=(float, "identity residual tolerance"))
    add("suinf-residuals",
        samples=(int, "number of sample points"),
        seed=(int, "sampling seed"),
        tol=(float, "field equation residual tolerance"))
    add("higgs-radial",
        c=(complex, "differential coefficient (a = c z^m)"),
        m=(int, "zero order"),
        radius=(float, "disc radius of the solve, in (0, 1)"),
        n_grid=(int, "number of radial intervals"),
        k_boundary=(float, "Dirichlet value at the outer radius"),
        newton_tol=(float, "acceptable final Newton residual"))
    add("toda-residual",
        samples=(int, "number of sample points"),
        seed=(int, "sampling seed"),
        tol=(float, "residual tolerance"))
    add("toda-uniqueness",
        ny=(int, "grid points in y"),
        nt=(int, "grid points in t"),
        amp=(float, "perturbation amplitude"),
        y_min=(float, "lower y bound"),
        y_max=(float, "upper y bound"))
    p = add("invariants",
            a_value=(complex, "quadratic differential value"),
            k_value=(float, "conformal factor value"))
    p.add_argument("--ell", type=int, nargs="+", default=None,
                   help="half-degrees of the even moments to compare")
    add("deform-asd",
        samples=(int, "number of sample points"),
        seed=(int, "sampling seed"),
        m_max=(int, "largest differential degree"))
    add("foldlab-jump",
        seed=(int, "sampling seed"))
    add("foldlab-gh",
        samples=(int, "number of sample points"),
        seed=(int, "sampling seed"))
    add("all",
        seed=(int, "sampling seed"))
    return parser


def run_suite(name, overrides=None):
    """Run one suite with keyword overrides; returns (Report, files)."""
    kwargs = {k: v for k, v in (overrides or {}).items() if v is not None}
    if name == "all":
        seed = kwargs.get("seed")
        rep = Report("all")
        files = {}
        for sub_name in SUITES:
            sub_kwargs = {} if seed is None else {"seed": seed}
            sub_rep, _sub_files = SUITE_FUNCS[sub_name](**sub_kwargs)
            for chk in sub_rep.checks:
                rep.checks.append(type(chk)(
                    f"{sub_name}/{chk.name}", chk.n, chk.max_residual,
                    chk.tol, chk.lower_bound))
        return rep, files
    return SUITE_FUNCS[name](**kwargs)


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.config:
        overrides.update(read_config(args.config))
    for key, val in vars(args).items():
        if key in ("command", "config", "out", "csv"):
            continue
        if val is not None:
            overrides[key] = val

    start = time.perf_counter()
    try:
        rep, files = run_suite(args.command, overrides)
    except Exception as exc:  # solver divergence etc: nonzero with diagnostic
        print(f"error: {exc}", file=sys.stderr)
        return 2
    wall = time.perf_counter() - start

    text = rep.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.csv and "csv" in files:
        with open(args.csv, "w") as fh:
            fh.write(files["csv"])

    for chk in rep.checks:
        status = "pass" if chk.passed else "FAIL"
        print(f"{status} {chk.name}: {chk.max_residual:.3e} "
              f"({'>=' if chk.lower_bound else '<='} {chk.tol:g})",
              file=sys.stderr)
    print(f"wall_time {wall:.3f}s")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
