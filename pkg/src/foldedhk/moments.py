"""Fibre integration: topological pairings of the triple, the alpha_m
invariants of powers of the Higgs field, and moment-variation integrals.

Quadrature backbone: radial substitution r = sin s turns the disc weight
1/sqrt(1 - r^2) into an analytic integrand; Gauss-Legendre in s crossed
with a trapezoid rule in the angle (spectrally exact for the trigonometric
polynomials that occur here).

Normalization note: the alpha_m family is evaluated against the measure
dr dtheta / (2 sqrt(1 - r^2)); this is the normalization that reproduces
the closed form (pi 2^{-2l} binom(2l, l))^2 a^l for m = 2l.  alpha_0 as
"fibre area" is the geometric pairing (4 pi) and is exposed separately
through fibre_pairings, not through the alpha_m quadrature.
"""

from __future__ import annotations

import math

import numpy as np

from . import jets as J
from .forms import pullback

__all__ = [
    "FibreQuadrature",
    "fibre_pairings",
    "alpha_m",
    "closed_form_alpha",
    "moment_variation",
    "closed_form_variation",
    "alpha_holomorphy_probe",
]


class FibreQuadrature:
    """Product nodes on the unit disc for weights with a 1/sqrt(1-r^2) factor.

    weight="flat":    integrates f against dr dtheta / (2 sqrt(1-r^2))
    weight="radial":  integrates f against r dr dtheta / (2 sqrt(1-r^2))

    Nodes are returned in polar form (r, theta).
    """

    def __init__(self, n_s=48, n_theta=64, weight="flat"):
        s, ws = np.polynomial.legendre.leggauss(n_s)
        s = 0.25 * math.pi * (s + 1.0)  # map to (0, pi/2)
        ws = ws * 0.25 * math.pi
        if weight == "flat":
            wr = 0.5 * ws
        elif weight == "radial":
            wr = 0.5 * ws * np.sin(s)
        else:
            raise ValueError(f"unknown weight {weight!r}")
        theta = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
        wt = 2.0 * math.pi / n_theta
        self.r = np.sin(s)
        self.theta = theta
        self.w_r = wr
        self.w_theta = np.full(n_theta, wt)

    def integrate(self, f):
        """f(r, theta) vectorized over broadcast grids."""
        rr = self.r[:, None]
        tt = self.theta[None, :]
        vals = f(rr, tt)
        return complex(np.einsum("i,j,ij->", self.w_r, self.w_theta, vals))

    def total_weight(self):
        return float(np.sum(self.w_r) * np.sum(self.w_theta))


# -- topological pairings ----------------------------------------------------


def fibre_pairings(base, n_s=24, n_theta=24):
    """Integrals of the canonical triple over the sphere fibre above ``base``.

    The fibre above (x, y) is integrated hemisphere by hemisphere in the
    fibre coordinates (u1, u2) of the disc chart, pulling the form fields
    back through the fibre inclusion; orientation of the lower hemisphere
    is reversed so the two halves add.  Returns (I1, I2, I3, I1_half).
    """
    from . import canonical as C

    x0, y0 = base
    w1f, w2f, w3f = C.disc_triple_fields()
    s, ws = np.polynomial.legendre.leggauss(n_s)
    s = 0.25 * math.pi * (s + 1.0)
    ws = ws * 0.25 * math.pi
    theta = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    wt = 2.0 * math.pi / n_theta

    u1c, u2c = J.coords(2)
    inc = [J.const(x0, 2), J.const(y0, 2), u1c, u2c]

    def hemisphere(field):
        total = 0.0
        for si, wsi in zip(s, ws):
            rho = math.sin(si) / y0
            # jacobian of (rho, theta) -> (u1, u2) is rho; the sin
            # substitution absorbs the 1/u3 fibre singularity
            for th in theta:
                u1 = rho * math.cos(th)
                u2 = rho * math.sin(th)
                coeff = pullback(field, inc, (u1, u2))[(0, 1)]
                total += wsi * wt * coeff * rho * math.cos(si) / y0
        return total

    upper = tuple(hemisphere(f) for f in (w1f, w2f, w3f))
    # lower hemisphere: u3 -> -u3 flips w1 and the fibre orientation, so the
    # contribution of w1 doubles while w2, w3 still cancel against their
    # (identically zero) fibre restrictions
    i1 = 2.0 * upper[0]
    return {
        "I1": i1,
        "I2": 2.0 * upper[1],
        "I3": 2.0 * upper[2],
        "I1_half": upper[0],
    }


# -- alpha_m -----------------------------------------------------------------


def alpha_m(k, a, m, n_s=48, n_theta=64, k_conj=None):
    """Fibre integral of the m-th power of the Higgs field frame function

        2 * integral of [ (k1^{1/2} r e^{-i theta}
                           + a k2^{-1/2} r e^{i theta}) / 2 ]^m
            dr dtheta / (2 sqrt(1 - r^2))

    with k1 = k and k2 = k_conj (defaults to k; letting the two frame
    factors differ is the hook used by the holomorphy probe's negative
    control).  For m = 2l this reproduces
    (pi 2^{-2l} binom(2l, l))^2 a^l; odd m vanish by angular parity.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    k2 = k if k_conj is None else k_conj
    if k <= 0.0 or k2 <= 0.0:
        raise ValueError("conformal factors must be positive")
    quad = FibreQuadrature(n_s=n_s, n_theta=n_theta, weight="flat")
    sk1 = math.sqrt(k)
    sk2 = math.sqrt(k2)

    def integrand(r, t):
        phase = np.exp(-1j * t)
        psi = 0.5 * r * (sk1 * phase + (a / sk2) / phase)
        return psi ** m

    return 2.0 * quad.integrate(integrand)


def closed_form_alpha(ell, a):
    """(pi 2^{-2l} binom(2l, l))^2 a^l, the even-m closed form (m = 2l)."""
    c = math.pi * math.comb(2 * ell, ell) / 4 ** ell
    return c * c * a ** ell


# -- moment variations -------------------------------------------------------


def moment_variation(k_power, m, a, y, n_s=48, n_theta=64):
    """First variation of the w^k fibre moment along the degree-m direction:

        integral over y^2 |w|^2 < 1 of
          k_power * w^{k_power-1} * a wbar^{m-1} y^{2m-2}
          * y^2 dA(w) / sqrt(1 - y^2 |w|^2)

    (dA = Euclidean area element in w).  Angular integration kills
    everything except k_power = m; on the diagonal the closed form is
    pi a 4^k (k!)^2 / (2k)!.
    """
    if k_power < 1:
        raise ValueError("k_power must be >= 1")
    # substitute y |w| = sin s: all y-dependence cancels
    quad = FibreQuadrature(n_s=n_s, n_theta=n_theta, weight="radial")

    def integrand(r, t):
        w = (r / y) * np.exp(1j * t)
        return (
            k_power
            * w ** (k_power - 1)
            * a
            * np.conj(w) ** (m - 1)
            * y ** (2 * m - 2)
        )

    # quadrature weight already carries r dr/sqrt; the remaining jacobian
    # factor from dA and the substitution is y^2 * (1/y^2) * ... : writing
    # rho = r/y, dA/sqrt = rho drho dtheta/sqrt(1-y^2 rho^2)
    #                     = (1/y^2) r dr dtheta/sqrt(1-r^2)
    return 2.0 * quad.integrate(integrand)


def closed_form_variation(k_power, a):
    """pi a 4^k (k!)^2 / (2k)! on the diagonal k_power = m = k."""
    k = k_power
    return math.pi * a * 4 ** k * math.factorial(k) ** 2 / math.factorial(2 * k)


# -- holomorphy probe --------------------------------------------------------


def alpha_holomorphy_probe(k_field, a, m, centers, h=1e-3, distort=None,
                           n_s=32, n_theta=48):
    """Max finite-difference |d alpha_m / d zbar| over base points.

    ``a``: callable z -> complex (e.g. a QuadDifferential); ``k_field``:
    ScalarField on (x, y); ``centers``: iterable of complex base points;
    ``distort``: optional callable (x, y) -> positive factor applied to the
    conjugate-frame conformal factor (negative-control hook; None keeps the
    two frames equal, the solution case).
    """

    def alpha_at(z):
        x, y = z.real, z.imag
        k = k_field((x, y))
        kc = k if distort is None else k * distort(x, y)
        return alpha_m(k, a(z), m, n_s=n_s, n_theta=n_theta, k_conj=kc)

    worst = 0.0
    for z0 in centers:
        ax = (alpha_at(z0 + h) - alpha_at(z0 - h)) / (2.0 * h)
        ay = (alpha_at(z0 + 1j * h) - alpha_at(z0 - 1j * h)) / (2.0 * h)
        worst = max(worst, abs(0.5 * (ax + 1j * ay)))
    return worst
