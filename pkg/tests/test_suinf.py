import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from foldedhk import jets as J
from foldedhk import suinf as S

unit = st.floats(-1.0, 1.0, allow_nan=False)


def _sphere_point(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def test_canonical_data_solves_field_equations():
    data = S.canonical_data()
    rng = np.random.default_rng(0)
    for _ in range(50):
        base = (rng.uniform(-2, 2), rng.uniform(0.3, 3.0))
        r1, r2 = S.higgs_residuals(data, base, _sphere_point(rng))
        assert abs(r1) < 1e-12
        assert abs(r2) < 1e-12


def test_bracket_antisymmetry_and_coordinates():
    x1 = S.FibreFunction(lambda p: p[0])
    x2 = S.FibreFunction(lambda p: p[1])
    x3 = S.FibreFunction(lambda p: p[2])
    rng = np.random.default_rng(4)
    for _ in range(20):
        p = _sphere_point(rng)
        # sphere coordinate functions close under the bracket: {x1,x2} = 2 x3
        assert abs(S.bracket(x1, x2, p) - 2.0 * p[2]) < 1e-12
        assert abs(S.bracket(x2, x3, p) - 2.0 * p[0]) < 1e-12
        assert abs(S.bracket(x1, x2, p) + S.bracket(x2, x1, p)) < 1e-14


@settings(max_examples=20, deadline=None)
@given(unit, unit, unit, unit, unit, unit)
def test_bracket_leibniz(a1, a2, a3, b1, b2, b3):
    f = S.FibreFunction(lambda p: a1 * p[0] + a2 * p[1] + a3 * p[2])
    g = S.FibreFunction(lambda p: b1 * p[0] * p[1] + b2 * p[2] + b3 * p[0])
    rng = np.random.default_rng(7)
    p = _sphere_point(rng)
    h = S.FibreFunction(lambda q: q[0] * q[2])
    prod = S.FibreFunction(f.field * g.field)
    lhs = S.bracket(prod, h, p)
    rhs = f(p) * S.bracket(g, h, p) + g(p) * S.bracket(f, h, p)
    assert abs(lhs - rhs) < 1e-10


def test_sphere_quadrature_polynomials():
    q = S.sphere_quadrature(24)
    # area and second moment of the unit sphere
    assert abs(q.integrate(lambda p: 1.0) - 4.0 * math.pi) < 1e-10
    assert abs(q.integrate(lambda p: p[2] ** 2) - 4.0 * math.pi / 3.0) < 1e-10
    assert abs(q.integrate(lambda p: p[0])) < 1e-12


def test_invariant_pairing_refinement():
    f = S.FibreFunction(lambda p: p[2])
    val = S.p_m(f, 2)
    # integral of x3^2 over the sphere
    assert abs(val - 4.0 * math.pi / 3.0) < 1e-8
    assert abs(S.p_m(f, 1)) < 1e-10
