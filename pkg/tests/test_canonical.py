import itertools
import math

import numpy as np
import pytest

from foldedhk import canonical as C
from foldedhk import jets as J
from foldedhk.forms import d, pullback, wedge


def test_triple_identities_batch():
    out = C.verify_identities(n_points=500, seed=1)
    assert out["max_residual"] < 1e-9
    assert out["fold_ratio_spread"] < 1e-6
    assert out["fold_ratio"] != 0.0


def test_triple_forms_closed():
    w1f, w2f, w3f = C.equator_triple_fields()
    p = (0.4, 1.3, 0.35, 0.8)
    for f in (w1f, w2f, w3f):
        df = d(f, p)
        for idx in itertools.combinations(range(4), 3):
            assert abs(df[idx]) < 1e-12


def test_disc_and_equator_charts_agree():
    inc = C.equator_to_disc_fields()
    w1d, w2d, w3d = C.disc_triple_fields()
    w1e, w2e, w3e = C.equator_triple_fields()
    p = (0.2, 1.1, 0.4, 0.7)
    for de, dd in ((w1e, w1d), (w2e, w2d), (w3e, w3d)):
        pulled = pullback(dd, inc, p)
        direct = de.at(p) if hasattr(de, "at") else de
        for idx in itertools.combinations(range(4), 2):
            assert abs(pulled[idx] - direct[idx]) < 1e-11


def test_metric_reconstruction_positive_definite():
    t = C.triple(C.EquatorPoint(0.3, 1.4, 0.5, 0.2))
    g, diag = C.reconstruct_metric(t)
    assert diag["e2_residual"] < 1e-12
    assert diag["asym"] < 1e-12
    assert np.all(np.linalg.eigvalsh(g) > 0.0)


def test_metric_reconstruction_rejects_fold():
    t = C.triple(C.EquatorPoint(0.3, 1.4, 0.0, 0.2))
    with pytest.raises(ValueError):
        C.reconstruct_metric(t)


def test_involution_flips_first_form_only():
    inv = C.involution_fields()
    w1f, w2f, w3f = C.equator_triple_fields()
    p = (0.3, 1.2, 0.45, 0.9)
    for f, sign in ((w1f, -1.0), (w2f, 1.0), (w3f, 1.0)):
        pulled = pullback(f, inv, p)
        here = f.at(p) if hasattr(f, "at") else f
        for idx in itertools.combinations(range(4), 2):
            assert abs(pulled[idx] - sign * here[idx]) < 1e-13


def test_fold_data_decomposition():
    phi, eta1, eta2 = C.fold_data(0.3, 1.2, 0.7)
    # restriction of the second form equals eta1 ^ phi exactly
    inc = C.fold_inclusion_fields()
    _, w2f, _ = C.equator_triple_fields()
    r2 = pullback(w2f, inc, (0.3, 1.2, 0.7))
    recon = wedge(eta1, phi)
    for idx in itertools.combinations(range(3), 2):
        assert abs(r2[idx] - recon[idx]) < 1e-13
    # contact certificate phi ^ dphi nonzero
    dphi = d(C.fold_phi_field(), (0.3, 1.2, 0.7))
    assert abs(wedge(phi, dphi)[(0, 1, 2)]) > 0.1


def test_characteristic_flow_matches_closed_form():
    c1, c2 = 1.3, 0.4
    psi, xs, ys = C.geodesic_flow(c1, c2, (-0.6, 0.9))
    assert np.max(np.abs(xs - (c1 * np.sin(psi) + c2))) < 1e-6
    assert np.max(np.abs(ys - c1 * np.cos(psi))) < 1e-6


def test_flow_tracks_hyperbolic_geodesics():
    c1, c2 = 1.0, 0.0
    psi, xs, ys = C.geodesic_flow(c1, c2, (0.0, 0.5), n=33)
    # the half-circle x^2 + y^2 = c1^2 is a geodesic of (dx^2+dy^2)/y^2
    assert np.max(np.abs(xs ** 2 + ys ** 2 - c1 ** 2)) < 1e-8
    # independent second-order geodesic integration through the same arc
    gx, gy = C.hyperbolic_geodesic(0.0, 1.0, 1.0, 0.0, 0.4, n=33)
    assert np.max(np.abs(gx ** 2 + gy ** 2 - 1.0)) < 1e-8
