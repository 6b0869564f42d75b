"""First-order deformations of the canonical folded model from holomorphic
m-differentials.

The deformation direction for a degree-m differential a(z) dz^m is the
fibre-tangent complex vector field

    X^c = a(z) y^{2m-2} wbar^{m-1} d/dw

on the disc chart (x, y, u1, u2), w = u1 + i u2.  The real field is fixed
as X = X^c + conj(X^c); with d/dw = (d/du1 - i d/du2)/2 this gives the
components (0, 0, A, B) where A + iB = a y^{2m-2} wbar^{m-1}.  The scale
convention does not affect the anti-self-duality statement, which is
linear in X.

The deformation identity: L_X(w2 + i w3) = d(a y^{2m-2} wbar^{m-1} dz),
whose closed form is

    (m-1) a y^{2m-3} wbar^{m-2} (y dwbar ^ dz + i wbar dzbar ^ dz),

and all three L_X wi wedge to zero against the triple (anti-self-duality).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets as J
from .forms import ComplexKForm, KForm, cwedge, d, interior, lie, wedge

__all__ = [
    "DeformationField",
    "negative_control_field",
    "lie_triple",
    "lie_closed_form",
    "closed_form_deviation",
    "asd_check",
]


def _poly_fields(coeffs, x, y):
    """Real and imaginary parts of sum c_j z^j as fields, z = x + iy."""
    dim = x.dim
    ar = J.const(0.0, dim)
    ai = J.const(0.0, dim)
    zr, zi = J.const(1.0, dim), J.const(0.0, dim)
    for c in coeffs:
        c = complex(c)
        ar = ar + (c.real * zr - c.imag * zi)
        ai = ai + (c.real * zi + c.imag * zr)
        zr, zi = zr * x - zi * y, zr * y + zi * x
    return ar, ai


def _wbar_power_fields(u1, u2, p):
    """Re/Im of (u1 - i u2)^p."""
    dim = u1.dim
    re, im = J.const(1.0, dim), J.const(0.0, dim)
    for _ in range(p):
        re, im = re * u1 + im * u2, im * u1 - re * u2
    return re, im


@dataclass(frozen=True)
class DeformationField:
    """X for a(z) dz^m, as components on the disc chart (x, y, u1, u2)."""

    m: int
    a_coeffs: tuple

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("deformation degree must be >= 2")

    def components(self):
        x, y, u1, u2 = J.coords(4)
        ar, ai = _poly_fields(self.a_coeffs, x, y)
        wr, wi = _wbar_power_fields(u1, u2, self.m - 1)
        ypow = y ** (2 * self.m - 2)
        a_field = (ar * wr - ai * wi) * ypow
        b_field = (ar * wi + ai * wr) * ypow
        zero = J.const(0.0, 4)
        return [zero, zero, a_field, b_field]

    def complex_component_fields(self):
        """(Re, Im) of a y^{2m-2} wbar^{m-1} (the d/dw coefficient)."""
        comps = self.components()
        return comps[2], comps[3]


def negative_control_field():
    """w d/dw realified: components (0, 0, u1, u2).  Not a deformation
    direction; generically violates anti-self-duality."""
    x, y, u1, u2 = J.coords(4)
    zero = J.const(0.0, 4)
    return [zero, zero, u1, u2]


def _disc_fields():
    from . import canonical as C

    return C.disc_triple_fields()


def lie_triple(field_or_components, point):
    """(L_X w1, L_X w2, L_X w3) at a disc-chart point, Cartan formula."""
    comps = (
        field_or_components.components()
        if isinstance(field_or_components, DeformationField)
        else field_or_components
    )
    w1, w2, w3 = _disc_fields()
    return tuple(lie(comps, f, point) for f in (w1, w2, w3))


def lie_closed_form(field, point):
    """Closed form of L_X(w2 + i w3) at a point:

    (m-1) a y^{2m-3} wbar^{m-2} (y dwbar ^ dz + i wbar dzbar ^ dz),

    assembled as a complex 2-form on the disc chart (dz = dx + i dy,
    dwbar = du1 - i du2).
    """
    m = field.m
    x, y, u1, u2 = point
    a = complex(0.0)
    for j, c in enumerate(field.a_coeffs):
        a += complex(c) * complex(x, y) ** j
    wbar = complex(u1, -u2)
    pref = (m - 1) * a * y ** (2 * m - 3) * wbar ** (m - 2)

    def c1(idx):  # dwbar ^ dz  (complex coefficients over real chart)
        return {
            # dwbar = du1 - i du2, dz = dx + i dy
            (0, 2): -1.0,  # du1^dx = -dx^du1
            (0, 3): 1j,
            (1, 2): -1j,
            (1, 3): -1.0,
        }[idx]

    # dzbar ^ dz = (dx - i dy)^(dx + i dy) = 2i dx^dy
    coeffs = {}
    for idx in [(0, 2), (0, 3), (1, 2), (1, 3)]:
        coeffs[idx] = pref * y * c1(idx)
    coeffs[(0, 1)] = pref * 1j * wbar * 2j
    re = KForm(2, 4, {k: v.real for k, v in coeffs.items()})
    im = KForm(2, 4, {k: v.imag for k, v in coeffs.items()})
    return ComplexKForm(re, im)


def closed_form_deviation(field, point):
    """Max coefficient deviation between the Cartan-formula L_X(w2 + i w3)
    and its closed form at a disc-chart point."""
    _, l2, l3 = lie_triple(field, point)
    cf = lie_closed_form(field, point)
    worst = 0.0
    for idx in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]:
        got = complex(l2[idx], l3[idx])
        want = complex(cf.re[idx], cf.im[idx])
        worst = max(worst, abs(got - want))
    return worst


def asd_check(field_or_components, point):
    """3x3 matrix of |L_X wi ^ wj| normalized by |w1^2| at the point."""
    w1, w2, w3 = _disc_fields()
    forms = [f.at(point) for f in (w1, w2, w3)]
    lies = lie_triple(field_or_components, point)
    nu = wedge(forms[0], forms[0])[(0, 1, 2, 3)]
    out = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            out[i, j] = abs(wedge(lies[i], forms[j])[(0, 1, 2, 3)] / nu)
    return out
