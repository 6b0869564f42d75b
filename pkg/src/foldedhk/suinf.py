"""Area-preserving sphere diffeomorphism ("SU(infinity)") Higgs data.

Fibre functions live on the ambient (x1, x2, x3) space near the unit sphere;
the Poisson bracket is the cross-product formula

    {f, g} = 2 x . (grad f x grad g),

normalized so {x1, x2} = 2 x3.  Using ambient rules keeps the bracket exact
and chart-free; the test suite checks that adding multiples of |x|^2 - 1 to
a representative does not change bracket values on the sphere.

Families over the half-plane are functions data(x, y) -> FibreFunction, so
base derivatives are taken by differentiating through the family with jets
in (x, y).
"""

from __future__ import annotations

import math

import numpy as np

from . import jets as J

__all__ = [
    "FibreFunction",
    "bracket",
    "SuInfData",
    "canonical_data",
    "higgs_residuals",
    "p_m",
    "sphere_quadrature",
]


class FibreFunction:
    """Rule on ambient (x1, x2, x3); evaluate and take ambient jets."""

    __slots__ = ("field",)

    def __init__(self, fn_or_field):
        if isinstance(fn_or_field, J.ScalarField):
            self.field = fn_or_field
        else:
            self.field = J.ScalarField(fn_or_field, 3)

    def __call__(self, p):
        return self.field(p)

    def grad(self, p):
        return self.field.eval(p).g


def bracket(f, g, point):
    """{f, g} at a sphere point via 2 x . (grad f x grad g)."""
    x = np.asarray(point, float)
    gf = f.grad(point)
    gg = g.grad(point)
    return 2.0 * float(np.dot(x, np.cross(gf, gg)))


class SuInfData:
    """Higgs pair over the half-plane: families (x, y) -> FibreFunction.

    ``a1, a2, phi1, phi2`` are callables taking a base point and returning a
    FibreFunction.  For residual evaluation the whole thing is flattened to
    5 variables (x, y, x1, x2, x3) so base and fibre derivatives come from a
    single jet pass.
    """

    def __init__(self, a1, a2, phi1, phi2):
        # each argument: ScalarField on the 5-chart (x, y, x1, x2, x3)
        self.a1 = a1
        self.a2 = a2
        self.phi1 = phi1
        self.phi2 = phi2


def _fibre_bracket_from_grads(xs, ga, gb):
    return 2.0 * float(np.dot(xs, np.cross(ga, gb)))


def higgs_residuals(data, base, fibre):
    """Residuals of the two field equations at (base, fibre point).

    r1 = (a2)_x - (a1)_y + {a1, a2} + {phi1, phi2}
    r2 = 2 d(phi1 + i phi2)/dzbar + {a1 + i a2, phi1 + i phi2}

    with d/dzbar = (d/dx + i d/dy)/2 acting on the base coordinates.
    """
    x, y = base
    p = (x, y) + tuple(fibre)
    xs = np.asarray(fibre, float)
    jets = {k: getattr(data, k).eval(p) for k in ("a1", "a2", "phi1", "phi2")}
    gbase = {k: j.g[:2] for k, j in jets.items()}
    gfib = {k: j.g[2:] for k, j in jets.items()}

    br = _fibre_bracket_from_grads
    r1 = (
        gbase["a2"][0]
        - gbase["a1"][1]
        + br(xs, gfib["a1"], gfib["a2"])
        + br(xs, gfib["phi1"], gfib["phi2"])
    )
    # complex pieces
    phi_x = gbase["phi1"][0] + 1j * gbase["phi2"][0]
    phi_y = gbase["phi1"][1] + 1j * gbase["phi2"][1]
    dzbar = 0.5 * (phi_x + 1j * phi_y)
    br_c = (
        br(xs, gfib["a1"], gfib["phi1"])
        - br(xs, gfib["a2"], gfib["phi2"])
        + 1j * (br(xs, gfib["a1"], gfib["phi2"]) + br(xs, gfib["a2"], gfib["phi1"]))
    )
    r2 = 2.0 * dzbar + br_c
    return float(r1), complex(r2)


def canonical_data():
    """The Higgs data reproducing the canonical folded model:

    a1 = x3/(2y), a2 = 0, phi1 + i phi2 = (x1 - i x2)/(2y).
    """
    x, y, x1, x2, x3 = J.coords(5)
    zero = J.const(0.0, 5)
    return SuInfData(
        a1=x3 / (2.0 * y),
        a2=zero,
        phi1=x1 / (2.0 * y),
        phi2=-x2 / (2.0 * y),
    )


# -- sphere quadrature ------------------------------------------------------


class sphere_quadrature:
    """Product rule: Gauss-Legendre in cos(theta) x trapezoid in longitude.

    Exact for polynomial fibre functions of modest degree; ``p_m`` refines by
    doubling until two levels agree.
    """

    def __init__(self, n_polar, n_azimuth=None):
        if n_azimuth is None:
            n_azimuth = 2 * n_polar
        t, wt = np.polynomial.legendre.leggauss(n_polar)  # t = cos(theta)
        phi = np.linspace(0.0, 2.0 * math.pi, n_azimuth, endpoint=False)
        wphi = 2.0 * math.pi / n_azimuth
        s = np.sqrt(1.0 - t ** 2)
        self.x1 = np.outer(s, np.cos(phi)).ravel()
        self.x2 = np.outer(s, np.sin(phi)).ravel()
        self.x3 = np.outer(t, np.ones_like(phi)).ravel()
        self.w = np.outer(wt, np.full(n_azimuth, wphi)).ravel()

    def integrate(self, f):
        vals = np.array([f((a, b, c)) for a, b, c in zip(self.x1, self.x2, self.x3)])
        return float(np.dot(self.w, vals))


def p_m(f, m, tol=1e-9, n0=8, max_doublings=6):
    """Invariant polynomial: integral of f^m over the unit sphere (area 4 pi).

    Refines the product grid until two successive levels agree within tol.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return 4.0 * math.pi

    def level(n):
        q = sphere_quadrature(n)
        return q.integrate(lambda p: f(p) ** m)

    prev = level(n0)
    n = n0
    for _ in range(max_doublings):
        n *= 2
        cur = level(n)
        if abs(cur - prev) < tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise ArithmeticError(
        f"sphere quadrature did not settle within tol={tol} at n={n}"
    )
