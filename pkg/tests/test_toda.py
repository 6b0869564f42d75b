import itertools
import math

import numpy as np
import pytest

from foldedhk import canonical as C
from foldedhk import jets as J
from foldedhk import toda as T
from foldedhk.forms import KForm, d, d_field, interior


def test_canonical_solution_residual():
    u = T.canonical_u()
    rng = np.random.default_rng(2)
    for _ in range(40):
        p = (rng.uniform(-2, 2), rng.uniform(0.3, 3.0), rng.uniform(-0.9, 0.9))
        assert abs(T.toda_residual(u, p)) < 1e-13


def test_t_independent_perturbation_shifts_residual_exactly():
    # u = const + eps y^2 has residual exactly 2 eps (no t-dependence, so the
    # exponential term contributes nothing)
    eps = 1e-4
    x, y, t = J.coords(3)
    u = J.const(0.3, 3) + eps * y * y
    assert abs(T.toda_residual(u, (0.4, 1.3, 0.2)) - 2.0 * eps) < 1e-18


def test_closedness_equivalence_off_solution():
    # d(w1) picks up exactly the scalar residual, also for a non-solution
    x, y, t = J.coords(3)
    u = T.canonical_u() + 0.01 * y * y * t
    w1f = T.ansatz_w1_field(u)
    for p in [(0.3, 1.2, -0.4, 0.7), (-0.5, 0.8, -0.2, 1.9)]:
        dw = d(w1f, p)
        res = T.toda_residual(u, p[:3])
        assert abs(res) > 1e-5
        assert abs(dw[(0, 1, 2)] - res) < 1e-12
        for idx in [(0, 1, 3), (0, 2, 3), (1, 2, 3)]:
            assert abs(dw[idx]) < 1e-12


def test_moment_map_pairing():
    u = T.canonical_u()
    _, w1 = T.ansatz_forms(u, (0.3, 1.2, -0.4, 0.7))
    # i_{d/dtau} w1 = -dt
    contracted = interior([0.0, 0.0, 0.0, 1.0], w1)
    assert abs(contracted[(2,)] + 1.0) < 1e-15
    for idx in [(0,), (1,), (3,)]:
        assert abs(contracted[idx]) < 1e-15


def test_geometric_form_of_equation():
    # (2 e^u)_tt = 4 kappa (2 e^u) with kappa = -1/(2 (1 - t^2)) for the
    # canonical solution; exact pointwise
    u = T.canonical_u()
    g2 = 2.0 * J.field_exp(u)
    for p in [(0.3, 1.2, 0.4), (-0.5, 0.8, -0.6)]:
        jet = g2.eval(p)
        kappa = -1.0 / (2.0 * (1.0 - p[2] ** 2))
        assert abs(jet.h[2, 2] - 4.0 * kappa * jet.f) < 1e-14


def test_reduced_bvp_small_grid():
    ys = np.linspace(1.0, 2.0, 32)
    ts = np.linspace(-1.0, 1.0, 33)
    yy, tt = np.meshgrid(ys, ts, indexing="ij")
    initial = 1.0 + 0.1 * np.sin(math.pi * (yy - 1.0)) * (1.0 - tt ** 2)
    y, t, f, residual, history = T.solve_reduced_bvp((1.0, 2.0), 32, 33,
                                                     initial=initial)
    assert np.max(np.abs(f - 1.0)) < 1e-6
    assert len(history) <= 40


def test_reduced_bvp_rejects_coarse_grid():
    with pytest.raises(ValueError):
        T.solve_reduced_bvp((1.0, 2.0), 16, 17)


def test_proof_identities():
    tf, = J.coords(1)
    f1 = 1.0 + 0.3 * tf * tf + 0.1 * J.field_sin(tf)
    y2, t2 = J.coords(2)
    f2 = J.field_exp(0.2 * y2 + 0.1 * t2 * y2)
    out = T.proof_identities(f1, f_field2d=f2)
    assert out["identity_i"] < 1e-12
    assert out["identity_ii"] < 1e-12


def test_ansatz_metric_matches_canonical_model():
    # chart map (x, y, x3, psi) -> (x, y, -x3, psi) plus the constant coframe
    # rescaling turns the Ansatz metric of the canonical solution into the
    # metric reconstructed from the canonical triple
    u = T.canonical_u()
    scale = np.diag(T.CANONICAL_COFRAME_SCALE)
    flip = np.diag([1.0, 1.0, -1.0, 1.0])
    m = flip @ scale
    rng = np.random.default_rng(8)
    for _ in range(10):
        p = (rng.uniform(-1, 1), rng.uniform(0.5, 2.0),
             rng.uniform(0.1, 0.9), rng.uniform(0, 2 * math.pi))
        g_can, diag = C.reconstruct_metric(C.triple(C.EquatorPoint(*p)))
        g_ans, _ = T.ansatz_forms(u, (p[0], p[1], -p[2], p[3]))
        got = m.T @ g_ans @ m
        assert np.max(np.abs(got - g_can)) < 1e-12


def test_fibre_frame_normalization():
    # w = sqrt(2) e^{u/2} e^{i tau} of the Ansatz equals sqrt(2) times the
    # canonical fibre coordinate after the chart map; hence d(w dz) hits
    # sqrt(2) (w2 + i w3) of the canonical triple
    u = T.canonical_u()
    x4 = J.coords(4)
    u4 = u.compose([x4[0], x4[1], x4[2]])
    amp = math.sqrt(2.0) * J.field_exp(0.5 * u4)
    ct, st = J.field_cos(x4[3]), J.field_sin(x4[3])
    re = KForm(1, 4, {(0,): amp * ct, (1,): -amp * st})
    im = KForm(1, 4, {(0,): amp * st, (1,): amp * ct})
    _, w2f, w3f = C.equator_triple_fields()
    p = (0.3, 1.2, -0.4, 0.7)
    dre = d(re, p)
    dim = d(im, p)
    w2 = w2f.at((p[0], p[1], -p[2], p[3]))
    w3 = w3f.at((p[0], p[1], -p[2], p[3]))
    s = math.sqrt(2.0)
    for idx in itertools.combinations(range(4), 2):
        # pulling back through the chart map flips dx3; indices touching the
        # third slot pick up the Jacobian sign
        sgn = -1.0 if 2 in idx else 1.0
        assert abs(dre[idx] - sgn * s * w2[idx]) < 1e-12
        assert abs(dim[idx] - sgn * s * w3[idx]) < 1e-12
