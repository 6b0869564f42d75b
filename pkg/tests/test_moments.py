import math

import numpy as np
import pytest

from foldedhk import jets as J
from foldedhk import moments as M


def test_quadrature_total_weight():
    # integral of the bare weight dr dtheta / (2 sqrt(1-r^2)) is pi^2 / 2
    q = M.FibreQuadrature(weight="flat")
    assert abs(q.total_weight() - math.pi ** 2 / 2.0) < 1e-12
    # with the extra r the closed form is pi
    qr = M.FibreQuadrature(weight="radial")
    assert abs(qr.total_weight() - math.pi) < 1e-12


def test_fibre_pairings():
    out = M.fibre_pairings((0.3, 1.2))
    assert abs(out["I1"] - 4.0 * math.pi) < 1e-6
    assert abs(out["I1_half"] - 2.0 * math.pi) < 1e-6
    assert abs(out["I2"]) < 1e-8
    assert abs(out["I3"]) < 1e-8
    # base-point independence (topological pairing)
    out2 = M.fibre_pairings((-0.7, 0.6))
    assert abs(out2["I1"] - out["I1"]) < 1e-6


def test_odd_moments_vanish():
    for m in (1, 3, 5):
        assert abs(M.alpha_m(1.7, 0.4 + 0.3j, m)) < 1e-10


def test_even_moments_closed_form():
    a = 0.5 - 0.3j
    for ell in (1, 2, 3):
        got = M.alpha_m(2.1, a, 2 * ell)
        want = M.closed_form_alpha(ell, a)
        assert abs(got - want) / abs(want) < 1e-9


def test_moment_variation_diagonal_and_off():
    a = 0.8 + 0.1j
    for k in (1, 2, 3):
        got = M.moment_variation(k, k, a, 1.4)
        want = M.closed_form_variation(k, a)
        assert abs(got - want) / abs(want) < 1e-9
    assert abs(M.moment_variation(2, 3, a, 1.4)) < 1e-10
    # the y-dependence cancels entirely on the diagonal
    assert abs(M.moment_variation(2, 2, a, 0.5)
               - M.moment_variation(2, 2, a, 2.0)) < 1e-10


def test_holomorphy_probe_and_control():
    x, y = J.coords(2)
    k_field = 1.0 + 0.0 * x  # constant conformal factor: alpha_m holomorphic
    from foldedhk.higgs2d import QuadDifferential

    a = QuadDifferential((0.3, 0.2))
    centers = [0.2 + 0.3j, -0.1 + 0.5j]
    dev = M.alpha_holomorphy_probe(k_field, a, 2, centers)
    assert dev < 1e-8
    ctrl = M.alpha_holomorphy_probe(
        k_field, a, 2, centers, distort=lambda px, py: 1.0 + 0.1 * py)
    assert ctrl > 1e-3
