import math

import numpy as np
import pytest

from foldedhk import higgs2d as H
from foldedhk import jets as J


def _exact_disc_field():
    x, y = J.coords(2)
    return 1.0 / ((1.0 - x * x - y * y) ** 2)


def test_scalar_equation_calibration():
    # the constant-curvature factor solves the equation only at coupling 8
    k = _exact_disc_field()
    a = H.QuadDifferential((0.0,))
    pts = [0.1 + 0.2j, -0.3 + 0.1j, 0.25 - 0.3j]
    assert max(abs(H.higgs_residual(k, a, z, lam=8.0)) for z in pts) < 1e-10
    for lam in (2.0, 4.0, 16.0):
        assert min(abs(H.higgs_residual(k, a, z, lam=lam)) for z in pts) > 0.5
    assert H.LAMBDA == 8.0


def test_radial_solver_reproduces_exact_solution():
    R = 0.5
    sol = H.solve_radial(0.0, 0, R, 1.0 / (1.0 - R * R) ** 2, 200)
    exact = 1.0 / (1.0 - sol.r ** 2) ** 2
    assert np.max(np.abs(sol.k - exact) / exact) < 2e-8
    assert sol.history[-1] < 1e-7


def test_radial_solver_convergence_order():
    R = 0.5
    errs = []
    for n in (100, 200):
        sol = H.solve_radial(0.0, 0, R, 1.0 / (1.0 - R * R) ** 2, n)
        exact = 1.0 / (1.0 - sol.r ** 2) ** 2
        errs.append(np.max(np.abs(sol.k - exact) / exact))
    assert errs[1] < errs[0] / 10.0  # fourth-order scheme


def test_radial_solver_rejects_degenerate_boundary():
    with pytest.raises(ValueError):
        H.solve_radial(1.0, 0, 0.5, 0.5, 100)


def test_hat_metric_determinant_and_fold():
    k = 2.0
    a = 0.3 + 0.4j
    hm = H.hat_metric(k, a)
    dfactor = k - abs(a) ** 2 / k
    assert abs(np.linalg.det(hm) - dfactor ** 2) < 1e-12
    # fold ellipse: the covector norm is exactly 1/4 on the locus
    q = H.fold_locus(k, a)
    L = np.linalg.cholesky(q)
    for th in np.linspace(0, 2 * math.pi, 9):
        wvec = np.linalg.solve(L.T, [math.cos(th), math.sin(th)])
        w = complex(wvec[0], wvec[1])
        assert abs(H.fold_covector_norm(k, a, None, w) - 0.25) < 1e-12


def test_curvature_minus_four_spline_route():
    R = 0.5
    sol = H.solve_radial(0.3, 1, R, 1.0 / (1.0 - R * R) ** 2, 400)
    a = H.QuadDifferential((0.0, 0.3))  # a = 0.3 z, matching the m = 1 solve
    kf = sol.k_field(use_ode=False)  # independent spline second derivative
    E, F, G = H.hat_metric_fields(kf, a)
    for p in [(0.1, 0.15), (-0.2, 0.1), (0.05, -0.25)]:
        assert abs(H.gauss_curvature(E, F, G, p) + 4.0) < 1e-3


def test_characteristic_flow_stays_on_ellipse_bundle():
    R = 0.5
    sol = H.solve_radial(0.0, 0, R, 1.0 / (1.0 - R * R) ** 2, 200)
    kf = sol.k_field()
    a = H.QuadDifferential((0.0,))
    th, xs, ys = H.characteristic_flow(kf, a, (0.1, 0.2), (0.0, 0.25), n=17)
    u1f, u2f = H.ellipse_fields(kf, a)
    for t, xx, yy in zip(th, xs, ys):
        w = complex(u1f((xx, yy, t)), u2f((xx, yy, t)))
        k = kf((xx, yy))
        # a = 0 ellipse is the circle |w|^2 = k/4
        assert abs(abs(w) ** 2 - k / 4.0) < 1e-10
