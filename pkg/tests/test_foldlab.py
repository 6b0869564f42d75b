import itertools
import math

import numpy as np
import pytest

from foldedhk import canonical as C
from foldedhk import foldlab as F
from foldedhk.forms import cwedge, wedge


def test_jump_model_divisibility_at_zero():
    c0, c1, c2 = F.jump_model_coefficients(0.0)
    for form in (c0, c1, c2):
        for idx, v in form.coeffs.items():
            assert v == 0.0 or 0 in idx


def test_jump_model_slope_is_one():
    for t in (0.1, 0.5, -0.3, 2.0):
        assert abs(F.jump_square_slope(t) - 1.0) < 1e-15


def test_jump_family_squares_to_zero():
    rng = np.random.default_rng(3)
    for _ in range(10):
        t = rng.uniform(-1, 1)
        z = complex(rng.normal(), rng.normal())
        sq = cwedge(F.omega_zeta(t, z), F.omega_zeta(t, z))
        val = complex(sq.re[(0, 1, 2, 3)], sq.im[(0, 1, 2, 3)])
        assert abs(val) < 1e-13


def test_jump_degenerate_pairing():
    for t in (0.0, 0.4, -0.9):
        c0, c1, c2 = F.jump_model_coefficients(t)
        assert abs(wedge(c1, c0)[(0, 1, 2, 3)]) < 1e-15


def test_eta_kernel_reality():
    phi, e1, e2 = C.fold_data(0.3, 1.2, 0.7)
    rng = np.random.default_rng(5)
    for _ in range(6):
        z = complex(rng.normal(), rng.normal())
        if abs(z) < 1e-2:
            continue
        v = F.eta_kernel(phi, e1, e2, z)
        v2 = F.eta_kernel(phi, e1, e2, -1.0 / np.conj(z))
        w = np.conj(v)
        dev = np.linalg.norm(v2 - np.vdot(w, v2) * w / np.vdot(w, w))
        assert dev < 1e-10


def test_eta_kernel_annihilates():
    phi, e1, e2 = C.fold_data(-0.2, 0.8, 1.1)
    z = 0.4 - 0.2j
    v = F.eta_kernel(phi, e1, e2, z)
    z2 = z * z
    e = np.array([complex(e1[(i,)], e2[(i,)])
                  - z2 * complex(e1[(i,)], -e2[(i,)]) for i in
                  [(0,), (1,), (2,)]])
    p = np.array([phi[(i,)] for i in [(0,), (1,), (2,)]])
    m = np.outer(e, p) - np.outer(p, e)  # e_i p_j - e_j p_i
    assert np.linalg.norm(m @ v) < 1e-12


def test_gh_monopole_and_identities():
    data = F.GibbonsHawkingData(heights=(-1.0, 1.0), charges=(1.0, -1.0))
    rng = np.random.default_rng(9)
    n = 0
    while n < 25:
        x = rng.uniform(-2, 2, 3)
        if min((x[2] - h) ** 2 + x[0] ** 2 + x[1] ** 2
               for h in data.heights) < 0.04:
            continue
        if x[0] ** 2 + x[1] ** 2 < 1e-3:
            continue
        assert F.gh_monopole_check(data, x) < 1e-10
        worst, _v = F.gh_identity_check(data, np.append(x, 0.2))
        assert worst < 1e-12
        n += 1


def test_gh_potential_sign_change():
    data = F.GibbonsHawkingData(heights=(-1.0, 1.0), charges=(1.0, -1.0))
    _, _, _, v_lower = F.gh_forms(data, (0.3, 0.2, -0.5, 0.0))
    _, _, _, v_upper = F.gh_forms(data, (0.3, 0.2, 0.5, 0.0))
    assert v_lower > 0.0 > v_upper


def test_gh_axis_rejected():
    data = F.GibbonsHawkingData(heights=(0.0,), charges=(1.0,))
    with pytest.raises(ValueError):
        F.gh_monopole_check(data, (0.0, 0.0, 1.5))
