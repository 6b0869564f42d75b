import itertools
import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from foldedhk import jets as J
from foldedhk.forms import (
    ComplexKForm,
    KForm,
    cwedge,
    d,
    d_field,
    interior,
    lie,
    pullback,
    pullback_field,
    wedge,
)

coef = st.floats(-3.0, 3.0, allow_nan=False)


def _merge_sign(a, b):
    """Sign of sorting the concatenation of two disjoint increasing tuples."""
    inversions = sum(1 for x in a for y in b if x > y)
    return -1.0 if inversions % 2 else 1.0


def brute_wedge(alpha, beta):
    """Wedge by explicit shuffle summation, as an independent oracle."""
    dim = alpha.dim
    deg = alpha.degree + beta.degree
    out = KForm(deg, dim)
    if deg > dim:
        return out
    for idx in itertools.combinations(range(dim), deg):
        total = 0.0
        for a_part in itertools.combinations(idx, alpha.degree):
            b_part = tuple(i for i in idx if i not in a_part)
            total += _merge_sign(a_part, b_part) * alpha[a_part] * beta[b_part]
        out[idx] = total
    return out


def random_form(rng, degree, dim):
    out = KForm(degree, dim)
    for idx in itertools.combinations(range(dim), degree):
        out[idx] = rng.normal()
    return out


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 99))
def test_wedge_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    dim = rng.integers(2, 6)
    p = int(rng.integers(1, dim))
    q = int(rng.integers(1, dim - p + 1)) if p < dim else 0
    a = random_form(rng, p, dim)
    b = random_form(rng, q, dim)
    got = wedge(a, b)
    want = brute_wedge(a, b)
    for idx in itertools.combinations(range(dim), p + q):
        assert abs(got[idx] - want[idx]) < 1e-12


def test_wedge_graded_commutativity():
    rng = np.random.default_rng(3)
    a = random_form(rng, 1, 4)
    b = random_form(rng, 2, 4)
    ab = wedge(a, b)
    ba = wedge(b, a)
    for idx in itertools.combinations(range(4), 3):
        assert abs(ab[idx] - ba[idx]) < 1e-14


def _random_field_form(rng, degree, dim):
    xs = J.coords(dim)
    out = KForm(degree, dim)
    for idx in itertools.combinations(range(dim), degree):
        c = rng.normal(size=4)
        f = J.const(c[0], dim)
        f = f + c[1] * xs[int(rng.integers(dim))]
        f = f + c[2] * xs[int(rng.integers(dim))] * xs[int(rng.integers(dim))]
        f = f + c[3] * J.field_sin(xs[int(rng.integers(dim))])
        out[idx] = f
    return out


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 99))
def test_d_squared_is_zero(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(3, 5))
    degree = int(rng.integers(1, dim - 1))
    form = _random_field_form(rng, degree, dim)
    p = rng.uniform(-1, 1, dim)
    dd = d(d_field(form), p)
    for idx in itertools.combinations(range(dim), degree + 2):
        assert abs(dd[idx]) < 1e-11


def test_d_matches_finite_differences():
    rng = np.random.default_rng(11)
    form = _random_field_form(rng, 1, 3)
    p = np.array([0.3, -0.4, 0.8])
    got = d(form, p)
    h = 1e-6
    for i, j in itertools.combinations(range(3), 2):
        ei = np.zeros(3)
        ej = np.zeros(3)
        ei[i] = h
        ej[j] = h
        want = (form[(j,)](p + ei) - form[(j,)](p - ei)) / (2 * h) - (
            form[(i,)](p + ej) - form[(i,)](p - ej)) / (2 * h)
        assert abs(got[(i, j)] - want) < 1e-8


def test_interior_square_zero_and_cartan_on_closed_form():
    rng = np.random.default_rng(5)
    x_comp = list(rng.normal(size=4))
    omega = random_form(rng, 3, 4)
    once = interior(x_comp, omega)
    twice = interior(x_comp, once)
    for idx in itertools.combinations(range(4), 1):
        assert abs(twice[idx]) < 1e-13

    # on a constant-coefficient (closed) form field, L_X omega = d i_X omega
    xs = J.coords(4)
    const_form = KForm(2, 4, {(0, 1): 1.3, (2, 3): -0.4, (1, 2): 0.9})
    vec = [xs[1] * xs[2], xs[0], J.const(0.5, 4), xs[3] * xs[0]]
    p = rng.uniform(-1, 1, 4)
    got = lie(vec, const_form, p)
    want = d(interior(vec, const_form), p)
    for idx in itertools.combinations(range(4), 2):
        assert abs(got[idx] - want[idx]) < 1e-12


def test_pullback_commutes_with_d():
    # inclusion of a graph surface into 3-space
    u, v = J.coords(2)
    inc = [u, v, u * v + J.field_sin(u)]
    xs = J.coords(3)
    form = KForm(1, 3, {(0,): xs[2] * xs[1], (1,): xs[0], (2,): xs[0] * xs[2]})
    p = (0.3, 0.7)
    lhs = d(pullback_field(form, inc), p)
    rhs = pullback(d_field(form), inc, p)
    assert abs(lhs[(0, 1)] - rhs[(0, 1)]) < 1e-12


def test_complex_wedge_consistency():
    rng = np.random.default_rng(9)
    a = ComplexKForm(random_form(rng, 1, 4), random_form(rng, 1, 4))
    b = ComplexKForm(random_form(rng, 1, 4), random_form(rng, 1, 4))
    got = cwedge(a, b)
    for idx in itertools.combinations(range(4), 2):
        want = complex(0, 0)
        za = {k: complex(a.re[k], a.im[k]) for k in [(0,), (1,), (2,), (3,)]}
        zb = {k: complex(b.re[k], b.im[k]) for k in [(0,), (1,), (2,), (3,)]}
        i, j = idx
        want = za[(i,)] * zb[(j,)] - za[(j,)] * zb[(i,)]
        assert abs(complex(got.re[idx], got.im[idx]) - want) < 1e-12
