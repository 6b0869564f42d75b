import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foldedhk import jets as J

coef = st.floats(-2.0, 2.0, allow_nan=False)
pt = st.floats(-1.5, 1.5, allow_nan=False)


def fd_check(field, p, h=1e-5):
    """Central-difference gradient and Hessian of a ScalarField."""
    p = np.asarray(p, float)
    n = len(p)
    g = np.empty(n)
    hess = np.empty((n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        g[i] = (field(p + e) - field(p - e)) / (2 * h)
        hess[i, i] = (field(p + e) - 2 * field(p) + field(p - e)) / h ** 2
        for j in range(i):
            f = np.zeros(n)
            f[j] = h
            hess[i, j] = hess[j, i] = (
                field(p + e + f) - field(p + e - f)
                - field(p - e + f) + field(p - e - f)
            ) / (4 * h ** 2)
    return g, hess


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=6, max_size=6), pt, pt)
def test_polynomial_jet_matches_finite_differences(c, px, py):
    x, y = J.coords(2)
    f = c[0] + c[1] * x + c[2] * y + c[3] * x * y + c[4] * x * x + c[5] * y ** 3
    jet = f.eval((px, py))
    g, h = fd_check(f, (px, py))
    assert np.allclose(jet.g, g, atol=5e-6)
    assert np.allclose(jet.h, h, atol=5e-4)


@settings(max_examples=30, deadline=None)
@given(pt, pt)
def test_transcendental_jets(px, py):
    x, y = J.coords(2)
    f = J.field_exp(0.3 * x) * J.field_sin(y) + J.field_cos(x * y)
    jet = f.eval((px, py))
    g, h = fd_check(f, (px, py))
    assert np.allclose(jet.g, g, atol=5e-6)
    assert np.allclose(jet.h, h, atol=5e-4)


def test_exp_log_roundtrip():
    x, y = J.coords(2)
    f = J.field_log(J.field_exp(x + 2.0 * y))
    jet = f.eval((0.3, -0.4))
    assert abs(jet.f - (0.3 - 0.8)) < 1e-14
    assert np.allclose(jet.g, [1.0, 2.0], atol=1e-13)
    assert np.allclose(jet.h, 0.0, atol=1e-12)


def test_pythagorean_identity_exact_jets():
    x, = J.coords(1)
    f = J.field_sin(x) ** 2 + J.field_cos(x) ** 2
    jet = f.eval((0.7,))
    assert abs(jet.f - 1.0) < 1e-15
    assert abs(jet.g[0]) < 1e-15
    assert abs(jet.h[0, 0]) < 1e-14


def test_compose_chain_rule():
    x, y = J.coords(2)
    inner = [x * y, x - y]
    u, v = J.coords(2)
    outer = J.field_exp(u) * J.field_sin(v)
    f = outer.compose(inner)
    jet = f.eval((0.4, 0.9))
    g, h = fd_check(f, (0.4, 0.9))
    assert np.allclose(jet.g, g, atol=5e-6)
    assert np.allclose(jet.h, h, atol=5e-4)


def test_partial_is_first_order_exact():
    x, y = J.coords(2)
    f = x * x * y + J.field_sin(x)
    px = f.partial(0)
    jet = px.eval((0.5, 1.2))
    assert abs(jet.f - (2 * 0.5 * 1.2 + math.cos(0.5))) < 1e-14
    assert np.allclose(jet.g, [2 * 1.2 - math.sin(0.5), 2 * 0.5], atol=1e-13)
    # Hessian is truncated by design so a further derivative stays exact
    assert np.allclose(jet.h, 0.0)


def test_domain_errors_name_offender():
    x, = J.coords(1)
    with pytest.raises(J.DomainError, match="sqrt"):
        J.field_sqrt(x).eval((-1.0,))
    with pytest.raises(J.DomainError, match="log"):
        J.field_log(x).eval((0.0,))
