"""Fold exemplars: the twistor jump-model family of 2-forms, the kernel of
the eta-family on the fold, and folded Gibbons-Hawking metrics.

Jump model chart order: (b, c0, c1, c2).  The family

    omega_zeta = C0 + C1 zeta + C2 zeta^2,
    C0 = db ^ dc0,
    C1 = db ^ dc1 + t dc0 ^ dc2,
    C2 = (db + t dc1) ^ dc2,

with the identification (C0, C1, C2) = (w2 + i w3, 2 w1, -(w2 - i w3)).
Transversality shows up as 2 w2^2 = -C0 ^ C2 = -t db^dc0^dc1^dc2; the
model volume orientation is fixed as -db^dc0^dc1^dc2 so that the measured
slope in t is +1 (the sign of the displayed product depends on this
orientation choice, which the source leaves implicit).

Gibbons-Hawking: collinear centers on the x3-axis with charges q_i,
V = sum q_i/|x - a_i|, alpha = sum q_i cos(theta_i) dphi in the shared
azimuth phi = atan2(x2, x1); dV = *d alpha away from centers and the axis
chart degeneracy.  Folds occur on V = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import jets as J
from .forms import ComplexKForm, KForm, cwedge, d, wedge

__all__ = [
    "jump_model_coefficients",
    "omega_zeta",
    "jump_square_slope",
    "eta_kernel",
    "GibbonsHawkingData",
    "gh_forms",
    "gh_identity_check",
    "gh_monopole_check",
]

# volume orientation of the jump-model chart (see module docstring)
JUMP_VOLUME_SIGN = -1.0


def jump_model_coefficients(t):
    """(C0, C1, C2) of omega_zeta as real 4d KForms on (b, c0, c1, c2)."""
    c0 = KForm(2, 4, {(0, 1): 1.0})
    c1 = KForm(2, 4, {(0, 2): 1.0, (1, 3): float(t)})
    c2 = KForm(2, 4, {(0, 3): 1.0, (2, 3): float(t)})
    return c0, c1, c2


def omega_zeta(t, zeta):
    """The complex 2-form C0 + C1 zeta + C2 zeta^2 at parameter zeta."""
    c0, c1, c2 = jump_model_coefficients(t)
    z = complex(zeta)
    re = c0 + z.real * c1 + (z * z).real * c2
    im = z.imag * c1 + (z * z).imag * c2
    return ComplexKForm(re, im)


def jump_square_slope(t):
    """Coefficient of t in 2 w2^2 = (w2+iw3)^(w2-iw3) = -C0^C2, measured
    against the oriented volume."""
    c0, _, c2 = jump_model_coefficients(t)
    prod = wedge(c0, c2)
    val = JUMP_VOLUME_SIGN * (-prod[(0, 1, 2, 3)])
    if t == 0.0:
        return 0.0
    return val / t


# -- eta kernel --------------------------------------------------------------


def eta_kernel(phi, eta1, eta2, zeta, sep_tol=1e-8):
    """Kernel line of eta(zeta) ^ phi on the complexified fold tangent space.

    eta(zeta) = (eta1 + i eta2) - zeta^2 (eta1 - i eta2); the inputs are
    numeric 1-forms on a 3-chart.  Returns a unit complex 3-vector spanning
    the kernel; raises if the rank structure is ambiguous.
    """
    z2 = complex(zeta) ** 2
    e = [
        (eta1[(i,)] + 1j * eta2[(i,)]) - z2 * (eta1[(i,)] - 1j * eta2[(i,)])
        for i in [(0), (1), (2)]
    ]
    p = [phi[(i,)] for i in [(0,), (1,), (2,)]]
    # matrix of the 2-form e ^ phi:  M_ij = e_i p_j - e_j p_i
    m = np.empty((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            m[i, j] = e[i] * p[j] - e[j] * p[i]
    s = np.linalg.svd(m, compute_uv=False)
    if s[1] < sep_tol * s[0] or (s[2] > sep_tol * s[1] and s[1] > 0):
        raise ArithmeticError(f"ambiguous kernel rank, singular values {s}")
    _, _, vh = np.linalg.svd(m)
    v = np.conj(vh[-1])
    return v / np.linalg.norm(v)


# -- Gibbons-Hawking ---------------------------------------------------------


@dataclass(frozen=True)
class GibbonsHawkingData:
    """Collinear monopole configuration: centers z_i on the x3-axis."""

    heights: tuple
    charges: tuple

    def __post_init__(self):
        if len(self.heights) != len(self.charges):
            raise ValueError("need one charge per center")

    def potential_field(self):
        x1, x2, x3 = J.coords(3)
        v = J.const(0.0, 3)
        for h, q in zip(self.heights, self.charges):
            v = v + q / J.field_sqrt(x1 * x1 + x2 * x2 + (x3 - h) ** 2)
        return v

    def connection_field(self):
        """alpha = sum q_i cos(theta_i) dphi as a 1-form field on (x1,x2,x3)."""
        x1, x2, x3 = J.coords(3)
        rho2 = x1 * x1 + x2 * x2
        coef = J.const(0.0, 3)
        for h, q in zip(self.heights, self.charges):
            coef = coef + q * (x3 - h) / J.field_sqrt(rho2 + (x3 - h) ** 2)
        # dphi = (x1 dx2 - x2 dx1)/rho^2
        return KForm(1, 3, {(0,): -coef * x2 / rho2, (1,): coef * x1 / rho2})

    def potential(self, x):
        return self.potential_field()(x)


def gh_forms(data, x, include_tau_chart=True):
    """The triple w_i = (dtau + alpha) ^ dx_i + V dx_j ^ dx_k at x.

    Chart order (x1, x2, x3, tau).  Returns (w1, w2, w3, V).
    """
    v = data.potential(x)
    al = data.connection_field().at(x)
    a = [al[(0,)], al[(1,)], al[(2,)], 1.0]  # components of dtau + alpha
    forms = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        w = KForm(2, 4)
        # (dtau + alpha) ^ dx_i
        for idx, comp in enumerate(a):
            if idx == i or comp == 0.0:
                continue
            lo, hi = (idx, i) if idx < i else (i, idx)
            sign = 1.0 if idx < i else -1.0
            w[(lo, hi)] = w[(lo, hi)] + sign * comp
        lo, hi = (j, k) if j < k else (k, j)
        sign = 1.0 if j < k else -1.0
        w[(lo, hi)] = w[(lo, hi)] + sign * v
        forms.append(w)
    return forms[0], forms[1], forms[2], v


def gh_identity_check(data, x):
    """Max residual of {w_i ^ w_j - 2 V delta_ij vol}, vol = dx1^dx2^dx3^dtau."""
    w1, w2, w3, v = gh_forms(data, x)
    ws = (w1, w2, w3)
    vol_coeff = -2.0 * v  # dtau ^ dx_i ordering puts tau last: vol sign
    worst = 0.0
    for i in range(3):
        for j in range(i, 3):
            val = wedge(ws[i], ws[j])[(0, 1, 2, 3)]
            want = vol_coeff if i == j else 0.0
            worst = max(worst, abs(val - want))
    return worst, v


def gh_monopole_check(data, x, axis_tol=1e-6):
    """Residual of dV = *d alpha at x (flat Hodge star on R^3)."""
    x1, x2 = x[0], x[1]
    if x1 * x1 + x2 * x2 < axis_tol ** 2:
        raise ValueError("axial chart degenerates on the x3-axis")
    vf = data.potential_field()
    dv = vf.eval(x).g
    da = d(data.connection_field(), x)
    star = np.array([da[(1, 2)], -da[(0, 2)], da[(0, 1)]])
    return float(np.max(np.abs(dv - star)))
