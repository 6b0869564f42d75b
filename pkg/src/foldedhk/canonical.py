"""Canonical folded model on the disc/sphere bundle over the hyperbolic plane.

Two overlapping charts cover the total space:

* the *disc chart* ``(x, y, u1, u2)`` with ``w = u1 + i u2`` the fibre
  coordinate of the cotangent bundle (valid where the angular potential is
  smooth, i.e. for the triple anywhere, for the angular potential w != 0);
* the *equator chart* ``(x, y, x3, psi)`` with
  ``(x1, x2) = sqrt(1 - x3^2) (cos psi, sin psi)`` on the unit sphere fibre,
  valid away from the poles ``x3 = +-1``; the fold is ``x3 = 0``.

The base hyperbolic metric is ``(dx^2 + dy^2)/y^2`` (curvature -1 in this
module; the curvature -4 convention lives in :mod:`foldedhk.higgs2d`, the
conversion being an overall scale 1/4 on the metric).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import jets as J
from .forms import KForm, d, d_field, interior, pullback, pullback_field, wedge

__all__ = [
    "DiscPoint",
    "EquatorPoint",
    "Triple",
    "disc_triple_fields",
    "equator_triple_fields",
    "triple",
    "verify_identities",
    "reconstruct_metric",
    "fold_data",
    "fold_phi_field",
    "geodesic_flow",
    "hyperbolic_geodesic",
    "equator_to_disc_fields",
    "involution_fields",
]

_TOL_CONSTRAINT = 1e-14


@dataclass(frozen=True)
class DiscPoint:
    """Point of the disc chart; requires y > 0 and y^2 |w|^2 < 1."""

    x: float
    y: float
    u1: float
    u2: float

    def __post_init__(self):
        if self.y <= 0.0:
            raise ValueError("disc chart requires y > 0")
        if self.y ** 2 * (self.u1 ** 2 + self.u2 ** 2) >= 1.0:
            raise ValueError("point outside the open disc bundle")

    @property
    def u3(self):
        return math.sqrt(1.0 / self.y ** 2 - self.u1 ** 2 - self.u2 ** 2)

    def coords(self):
        return (self.x, self.y, self.u1, self.u2)


@dataclass(frozen=True)
class EquatorPoint:
    """Point of the equator chart; requires y > 0 and |x3| < 1."""

    x: float
    y: float
    x3: float
    psi: float

    def __post_init__(self):
        if self.y <= 0.0:
            raise ValueError("equator chart requires y > 0")
        if abs(self.x3) >= 1.0:
            raise ValueError("equator chart degenerates at the poles x3 = +-1")

    def coords(self):
        return (self.x, self.y, self.x3, self.psi)

    def sphere_coords(self):
        q = math.sqrt(1.0 - self.x3 ** 2)
        return (q * math.cos(self.psi), q * math.sin(self.psi), self.x3)


@dataclass(frozen=True)
class Triple:
    """The three 2-form values at a point, in a common chart."""

    w1: KForm
    w2: KForm
    w3: KForm

    def forms(self):
        return (self.w1, self.w2, self.w3)


# -- form fields ------------------------------------------------------------


def _differential(f):
    """df as a 1-form field (first-order exact coefficients)."""
    out = KForm(1, f.dim)
    for i in range(f.dim):
        out[(i,)] = f.partial(i)
    return out


def disc_triple_fields():
    """(w1, w2, w3) fields on the disc chart, chart order (x, y, u1, u2)."""
    x, y, u1, u2 = J.coords(4)
    rho2 = u1 * u1 + u2 * u2
    u3 = J.field_sqrt(1.0 / (y * y) - rho2)
    # potential  u3 (dx - y dphi),  dphi = (u1 du2 - u2 du1)/rho^2
    pot = KForm(
        1,
        4,
        {
            (0,): u3,
            (2,): y * u3 * u2 / rho2,
            (3,): -(y * u3 * u1) / rho2,
        },
    )
    w1 = d_field(pot)
    w2 = KForm(2, 4, {(0, 2): -1.0, (1, 3): 1.0})
    w3 = KForm(2, 4, {(1, 2): -1.0, (0, 3): -1.0})
    return w1, w2, w3


def equator_triple_fields():
    """(w1, w2, w3) fields on the equator chart, chart order (x, y, x3, psi)."""
    x, y, x3, psi = J.coords(4)
    pot = KForm(1, 4, {(0,): x3 / y, (3,): -x3})
    w1 = d_field(pot)
    q = J.field_sqrt(1.0 - x3 * x3)
    w_re = q * J.field_cos(psi) / y
    w_im = q * J.field_sin(psi) / y
    dx = KForm(1, 4, {(0,): 1.0})
    dy = KForm(1, 4, {(1,): 1.0})
    w2 = wedge(_differential(w_re), dx) - wedge(_differential(w_im), dy)
    w3 = wedge(_differential(w_re), dy) + wedge(_differential(w_im), dx)
    return w1, w2, w3


_DISC_FIELDS = None
_EQ_FIELDS = None


def _disc_fields():
    global _DISC_FIELDS
    if _DISC_FIELDS is None:
        _DISC_FIELDS = disc_triple_fields()
    return _DISC_FIELDS


def _eq_fields():
    global _EQ_FIELDS
    if _EQ_FIELDS is None:
        _EQ_FIELDS = equator_triple_fields()
    return _EQ_FIELDS


def triple(point):
    """Evaluate the canonical triple at a Disc- or EquatorPoint."""
    if isinstance(point, DiscPoint):
        if point.u1 == 0.0 and point.u2 == 0.0:
            raise ValueError(
                "angular potential is singular at w = 0; use limits or the "
                "constant-coefficient w2/w3 directly"
            )
        fields = _disc_fields()
    elif isinstance(point, EquatorPoint):
        fields = _eq_fields()
    else:
        raise TypeError("expected DiscPoint or EquatorPoint")
    c = point.coords()
    return Triple(*(f.at(c) for f in fields))


# -- vectorized equator-chart coefficients (values only, for big sweeps) ----


def equator_triple_values(x, y, x3, psi):
    """Coefficient arrays of (w1, w2, w3) at equator-chart points.

    Inputs are broadcastable numpy arrays; each form is returned as a dict
    from increasing index pairs to arrays. Cross-checked against the jet
    fields in the test suite.
    """
    x, y, x3, psi = np.broadcast_arrays(
        np.asarray(x, float), np.asarray(y, float), np.asarray(x3, float),
        np.asarray(psi, float),
    )
    q = np.sqrt(1.0 - x3 ** 2)
    c, s = np.cos(psi), np.sin(psi)
    zero = np.zeros_like(y)
    w1 = {
        (0, 1): x3 / y ** 2,
        (0, 2): -1.0 / y,
        (0, 3): zero,
        (1, 2): zero,
        (1, 3): zero,
        (2, 3): -np.ones_like(y),
    }
    # partials of w_re = q c / y, w_im = q s / y
    wre_y = -q * c / y ** 2
    wre_3 = -x3 * c / (q * y)
    wre_p = -q * s / y
    wim_y = -q * s / y ** 2
    wim_3 = -x3 * s / (q * y)
    wim_p = q * c / y
    w2 = {
        (0, 1): -wre_y,
        (0, 2): -wre_3,
        (0, 3): -wre_p,
        (1, 2): wim_3,
        (1, 3): wim_p,
        (2, 3): zero,
    }
    w3 = {
        (0, 1): -wim_y,
        (0, 2): -wim_3,
        (0, 3): -wim_p,
        (1, 2): -wre_3,
        (1, 3): -wre_p,
        (2, 3): zero,
    }
    return w1, w2, w3


def _wedge22_vol(a, b):
    """vol coefficient of the wedge of two 2-forms given as coeff dicts (4-dim)."""
    return (
        a[(0, 1)] * b[(2, 3)]
        - a[(0, 2)] * b[(1, 3)]
        + a[(0, 3)] * b[(1, 2)]
        + a[(1, 2)] * b[(0, 3)]
        - a[(1, 3)] * b[(0, 2)]
        + a[(2, 3)] * b[(0, 1)]
    )


def verify_identities(n_points=10000, seed=42, y_range=(0.2, 5.0),
                      x3_range=(0.01, 0.99)):
    """Hyperkähler identity residuals over seeded random equator points.

    Returns a record with the max normalized residual of
    {w_i ^ w_j - delta_ij nu}, nu = w1^2, plus the transversality data
    nu / x3 (its relative spread over an x3 -> 0 sequence).
    """
    rng = np.random.default_rng(seed)
    x = rng.uniform(-3.0, 3.0, n_points)
    y = rng.uniform(*y_range, n_points)
    x3 = rng.uniform(*x3_range, n_points) * rng.choice([-1.0, 1.0], n_points)
    psi = rng.uniform(0.0, 2.0 * math.pi, n_points)
    w = equator_triple_values(x, y, x3, psi)
    nu = _wedge22_vol(w[0], w[0])
    scale = np.abs(nu)
    resid = 0.0
    for i in range(3):
        for j in range(i, 3):
            v = _wedge22_vol(w[i], w[j])
            if i == j:
                v = v - nu
            resid = max(resid, float(np.max(np.abs(v) / scale)))
    # transversal vanishing of nu at the fold
    x3_seq = np.array([1e-2, 1e-3, 1e-4, 1e-5])
    wseq = equator_triple_values(0.3, 1.7, x3_seq, 0.9)
    ratio = _wedge22_vol(wseq[0], wseq[0]) / x3_seq
    spread = float(np.max(np.abs(ratio - ratio[0])) / np.abs(ratio[0]))
    return {
        "n_points": int(n_points),
        "max_residual": resid,
        "fold_ratio": float(ratio[0]),
        "fold_ratio_spread": spread,
    }


# -- metric reconstruction --------------------------------------------------

# Overall sign fixed so that g is positive-definite on the x3 > 0 side
# (calibrated at the reference point (0, 1, 0.5, 0)).
_METRIC_SIGN = 1.0


def reconstruct_metric(t, det_tol=1e-12):
    """Metric from the triple: E = W3^{-1} W2 must satisfy E^2 = -Id and
    g = -sign * sym(E^T W1) is returned together with the E^2 residual."""
    m1, m2, m3 = (f.matrix() for f in t.forms())
    if abs(np.linalg.det(m3)) < det_tol:
        raise ValueError("triple is degenerate (near the fold)")
    e = np.linalg.solve(m3, m2)
    e2_resid = float(np.max(np.abs(e @ e + np.eye(4))))
    g = -_METRIC_SIGN * (e.T @ m1)
    g_sym = 0.5 * (g + g.T)
    asym = float(np.max(np.abs(g - g.T)))
    return g_sym, {"e2_residual": e2_resid, "asym": asym}


# -- fold data --------------------------------------------------------------


def fold_inclusion_fields():
    """Inclusion of the fold chart (x, y, psi) into the equator chart."""
    x, y, psi = J.coords(3)
    return [x, y, J.const(0.0, 3), psi]


def fold_phi_field():
    """The contact form phi = dx - y dpsi on the fold chart (x, y, psi)."""
    x, y, psi = J.coords(3)
    return KForm(1, 3, {(0,): J.const(1.0, 3), (2,): -y})


def fold_data(x, y, psi):
    """(phi, eta1, eta2) at a fold point, as numeric 1-forms on (x, y, psi).

    Gauge: eta_i have no dpsi component (the decomposition eta ^ phi is
    only unique up to eta -> eta + g phi).
    """
    inc = fold_inclusion_fields()
    pt = (x, y, psi)
    _, w2f, w3f = _eq_fields()
    r2 = pullback(w2f, inc, pt)
    r3 = pullback(w3f, inc, pt)
    phi = KForm(1, 3, {(0,): 1.0, (2,): -float(y)})
    etas = []
    for r in (r2, r3):
        # r = eta ^ phi with phi = dx - y dpsi:
        #   r01 = -e1,  r02 = -y e0,  r12 = -y e1  (consistency r01 = r12/y)
        e0 = -r[(0, 2)] / y
        e1 = -r[(0, 1)]
        if abs(r[(1, 2)] / y + e1) > 1e-10 * max(1.0, abs(e1)):
            raise ArithmeticError("fold decomposition failed")
        etas.append(KForm(1, 3, {(0,): e0, (1,): e1}))
    eta1, eta2 = etas
    # non-degeneracy certificates
    dphi = KForm(2, 3, {(1, 2): -1.0})  # d(dx - y dpsi)
    contact = wedge(phi, dphi)[(0, 1, 2)]
    indep = wedge(wedge(eta1, eta2), phi)[(0, 1, 2)]
    if contact == 0.0 or indep == 0.0:
        raise ArithmeticError("fold data degenerate")
    return phi, eta1, eta2


def _fold_kernel_direction(x, y, psi):
    """Kernel of restrict(w2) on the fold, normalized to dpsi-component 1."""
    phi, eta1, _ = fold_data(x, y, psi)
    # solve eta1(v) = 0, phi(v) = 0 with v_psi = 1
    a = np.array([[eta1[(0,)], eta1[(1,)]], [phi[(0,)], phi[(1,)]]])
    b = np.array([-eta1[(2,)], -phi[(2,)]])
    vx, vy = np.linalg.solve(a, b)
    return float(vx), float(vy)


def geodesic_flow(c1, c2, psi_span, n=65, rtol=1e-11, atol=1e-12):
    """Integrate the null foliation of restrict(w2) on the fold.

    Starts on the closed-form curve (x, y) = (c1 sin psi + c2, c1 cos psi)
    at psi_span[0] and integrates in psi.  Returns (psi, x, y) samples.
    """
    if c1 <= 0.0:
        raise ValueError("c1 must be positive")
    p0, p1 = psi_span
    if not (-math.pi / 2 < p0 < math.pi / 2 and -math.pi / 2 < p1 < math.pi / 2):
        raise ValueError("psi must stay inside (-pi/2, pi/2)")

    def rhs(psi, state):
        x, y = state
        return _fold_kernel_direction(x, y, psi)

    psi_eval = np.linspace(p0, p1, n)
    start = [c1 * math.sin(p0) + c2, c1 * math.cos(p0)]
    sol = solve_ivp(rhs, (p0, p1), start, t_eval=psi_eval, rtol=rtol, atol=atol,
                    method="DOP853")
    if not sol.success:
        raise RuntimeError(f"fold flow integration failed: {sol.message}")
    return psi_eval, sol.y[0], sol.y[1]


def hyperbolic_geodesic(x0, y0, vx, vy, length, n=65):
    """Independent oracle: integrate the geodesic ODE of (dx^2+dy^2)/y^2."""

    def rhs(s, st):
        x, y, px, py = st
        return [px, py, 2.0 * px * py / y, (py * py - px * px) / y]

    s_eval = np.linspace(0.0, length, n)
    sol = solve_ivp(rhs, (0.0, length), [x0, y0, vx, vy], t_eval=s_eval,
                    rtol=1e-11, atol=1e-12, method="DOP853")
    if not sol.success:
        raise RuntimeError(f"geodesic integration failed: {sol.message}")
    return sol.y[0], sol.y[1]


# -- chart transition and involution ----------------------------------------


def equator_to_disc_fields():
    """Inclusion fields expressing disc coordinates on the equator chart."""
    x, y, x3, psi = J.coords(4)
    q = J.field_sqrt(1.0 - x3 * x3)
    return [x, y, q * J.field_cos(psi) / y, q * J.field_sin(psi) / y]


def involution_fields():
    """tau: (x, y, x3, psi) -> (x, y, -x3, psi) as inclusion fields."""
    x, y, x3, psi = J.coords(4)
    return [x, y, -x3, psi]
