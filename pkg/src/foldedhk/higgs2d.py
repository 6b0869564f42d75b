"""Abelian Higgs data from a quadratic differential q = a(z) dz^2.

Scalar form of the field equation for the conformal factor k (metric
h = k dz dzbar):

    Lap log k = LAMBDA (k - |a|^2 / k),   Lap = d_xx + d_yy (flat),

with LAMBDA = 8 calibrated so that the derived metric

    hhat = q + (h + q qbar / h) + qbar
         = 2 Re(a) (dx^2 - dy^2) - 4 Im(a) dx dy + (k + |a|^2/k)(dx^2 + dy^2)

has Gaussian curvature -4 wherever k solves the equation (checked against
the a = 0 exact solutions k = 1/(4y^2) and k = (1 - |z|^2)^{-2}, and by the
curvature oracle on radial solves).  det hhat = (k - |a|^2/k)^2, so hhat
degenerates exactly on k = |a|.

The fold ellipse in the fibre coordinate w = u1 + i u2 over z is

    4 (-abar w^2 - a wbar^2 + (k + |a|^2/k) |w|^2) / (k - |a|^2/k)^2 = 1,

and the hhat-inverse norm squared of the covector Re(w dz) = u1 dx - u2 dy
is identically 1/4 on the ellipse (this is the level-set invariance the
tests assert).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.interpolate import InterpolatedUnivariateSpline
from scipy.sparse.linalg import spsolve

from . import jets as J

__all__ = [
    "LAMBDA",
    "QuadDifferential",
    "higgs_residual",
    "HiggsRadialSolution",
    "solve_radial",
    "hat_metric",
    "hat_metric_fields",
    "gauss_curvature",
    "fold_locus",
    "fold_covector_norm",
    "ellipse_fields",
    "characteristic_flow",
    "characteristic_geodesic_deviation",
    "metric_geodesic",
]

LAMBDA = 8.0


@dataclass(frozen=True)
class QuadDifferential:
    """q = a(z) dz^2 with a a complex polynomial, lowest degree first."""

    coeffs: tuple

    def __call__(self, z):
        out = 0j
        for c in reversed(self.coeffs):
            out = out * z + c
        return out

    @staticmethod
    def monomial(c, m):
        return QuadDifferential((0j,) * m + (complex(c),))


def higgs_residual(k, a, z, lam=LAMBDA):
    """Lap log k - lam (k - |a(z)|^2 / k) at z = x + iy; k a 2d ScalarField."""
    x, y = z.real, z.imag
    jet = k.eval((x, y))
    kv = jet.f
    if kv <= 0.0:
        raise J.DomainError(f"conformal factor must be positive, got {kv}")
    # Lap log k = (Lap k)/k - |grad k|^2/k^2
    lap = (jet.h[0, 0] + jet.h[1, 1]) / kv - float(np.dot(jet.g, jet.g)) / kv ** 2
    amod2 = abs(a(complex(x, y))) ** 2
    return lap - lam * (kv - amod2 / kv)


# -- radial solver -----------------------------------------------------------


def _fd_weights(offsets, order):
    """Finite-difference weights on integer offsets for the given derivative."""
    n = len(offsets)
    mat = np.array([[o ** p for o in offsets] for p in range(n)], float)
    rhs = np.zeros(n)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(mat, rhs)


def _radial_operator(n, radius):
    """Sparse 4th-order discretization of v'' + v'/r on [0, R].

    Regularity at r = 0 enters through even reflection (radial smooth
    solutions are even in r); row 0 encodes the operator limit 2 v''(0).
    Row n is left empty for the Dirichlet condition.
    """
    h = radius / n
    r = np.arange(n + 1) * h
    op = sp.lil_matrix((n + 1, n + 1))
    # row 0: 2 v''(0), 5-point central folded by reflection
    op[0, 0] = -15.0 / (3 * h ** 2)
    op[0, 1] = 16.0 / (3 * h ** 2)
    op[0, 2] = -1.0 / (3 * h ** 2)
    # row 1: node -1 reflects onto node 1 (for v''), node 0 is interior (v')
    op[1, 0] = 16.0 / (12 * h ** 2) - 8.0 / (12 * h * r[1])
    op[1, 1] = -31.0 / (12 * h ** 2) + 1.0 / (12 * h * r[1])
    op[1, 2] = 16.0 / (12 * h ** 2) + 8.0 / (12 * h * r[1])
    op[1, 3] = -1.0 / (12 * h ** 2) - 1.0 / (12 * h * r[1])
    w2c = _fd_weights([-2, -1, 0, 1, 2], 2) / h ** 2
    w1c = _fd_weights([-2, -1, 0, 1, 2], 1) / h
    w2e = _fd_weights([-4, -3, -2, -1, 0, 1], 2) / h ** 2
    w1e = _fd_weights([-3, -2, -1, 0, 1], 1) / h
    for i in range(2, n):
        if i <= n - 2:
            for o, a2, a1 in zip([-2, -1, 0, 1, 2], w2c, w1c):
                op[i, i + o] = op[i, i + o] + a2 + a1 / r[i]
        else:
            for o, a2 in zip([-4, -3, -2, -1, 0, 1], w2e):
                op[i, i + o] = op[i, i + o] + a2
            for o, a1 in zip([-3, -2, -1, 0, 1], w1e):
                op[i, i + o] = op[i, i + o] + a1 / r[i]
    return op.tocsr(), r, h


@dataclass
class HiggsRadialSolution:
    """Radial solve of the scalar equation for a = c z^m on [0, R]."""

    r: np.ndarray
    k: np.ndarray
    c: complex
    m: int
    residual: np.ndarray
    history: list = field(default_factory=list)

    def a_at(self, z):
        return self.c * z ** self.m

    def k_jet_funcs(self, use_ode=True):
        """(k, k', k'') as callables of r, spline-based.

        With ``use_ode`` (default) v'' is recovered from the ODE itself
        (v'' = rhs - v'/r, exact given v and v'), which keeps the second
        derivative as accurate as the solve and makes downstream curvature
        checks test the metric/PDE equivalence.  ``use_ode=False`` takes v''
        from the spline instead, an independent (noisier) route.
        """
        v = np.log(self.k)
        vs = InterpolatedUnivariateSpline(self.r, v, k=5)
        vps = vs.derivative()
        cc = abs(self.c) ** 2
        m = self.m

        if use_ode:
            def vpp(r):
                rhs = LAMBDA * (
                    math.exp(vs(r)) - cc * r ** (2 * m) * math.exp(-vs(r))
                )
                if r == 0.0:
                    return 0.5 * rhs
                return rhs - vps(r) / r
        else:
            vpps = vs.derivative(2)

            def vpp(r):
                return float(vpps(r))

        def kf(r):
            return math.exp(vs(r))

        def kp(r):
            return math.exp(vs(r)) * float(vps(r))

        def kpp(r):
            vp = float(vps(r))
            return math.exp(vs(r)) * (vpp(r) + vp * vp)

        return kf, kp, kpp

    def k_field(self, use_ode=True):
        """k as a ScalarField on (x, y) through the jet pipeline."""
        kf, kp, kpp = self.k_jet_funcs(use_ode=use_ode)
        x, y = J.coords(2)
        rf = J.field_sqrt(x * x + y * y)
        return J.field_univariate(rf, kf, kp, kpp)


def solve_radial(c, m, R, k_R, N, tol=1e-10, max_iter=60):
    """Newton on v = log k for v'' + v'/r = LAMBDA (e^v - |c|^2 r^{2m} e^{-v}).

    Dirichlet v(R) = log k_R; regularity at r = 0 built into the operator.
    Stops when the residual sup-norm drops below tol or stalls at the
    rounding floor (the floor scales like 1/h^2); raises on divergence or
    loss of the nondegeneracy k > |c| r^m.
    """
    if not (0.0 < R < 1.0):
        raise ValueError("R must lie in (0, 1)")
    if k_R <= abs(c) * R ** m:
        raise ValueError("boundary value must satisfy k_R > |a(R)|")
    op, r, h = _radial_operator(N, R)
    cc = abs(c) ** 2
    aa = cc * r ** (2 * m)
    v = np.full(N + 1, math.log(k_R))
    v_bc = math.log(k_R)
    history = []
    best = math.inf
    stall = 0
    for _ in range(max_iter):
        res_vec = op @ v
        res_vec[:N] -= LAMBDA * (np.exp(v[:N]) - aa[:N] * np.exp(-v[:N]))
        res_vec[N] = v[N] - v_bc
        res = float(np.max(np.abs(res_vec)))
        history.append(res)
        if res < tol:
            break
        if res >= 0.5 * best:
            stall += 1
            if stall >= 3:
                break  # rounding floor of the 1/h^2-scaled residual
        else:
            stall = 0
        best = min(best, res)
        diag = np.concatenate(
            [-LAMBDA * (np.exp(v[:N]) + aa[:N] * np.exp(-v[:N])), [0.0]]
        )
        jac = (op + sp.diags(diag)).tolil()
        jac[N, :] = 0.0
        jac[N, N] = 1.0
        v = v + spsolve(jac.tocsr(), -res_vec)
    else:
        raise ArithmeticError(f"Newton did not converge; history={history}")
    if len(history) > 1 and history[-1] > 1e3 * history[0]:
        raise ArithmeticError(f"Newton diverged; history={history}")
    k = np.exp(v)
    if np.any(k <= np.sqrt(aa)):
        raise ArithmeticError("degenerate solution: k <= |a| somewhere")
    res_vec = op @ v
    res_vec[:N] -= LAMBDA * (np.exp(v[:N]) - aa[:N] * np.exp(-v[:N]))
    res_vec[N] = 0.0
    return HiggsRadialSolution(r=r, k=k, c=complex(c), m=int(m),
                               residual=res_vec, history=history)


# -- derived metric and curvature -------------------------------------------


def hat_metric(k, a, z=None):
    """hhat as a 2x2 real symmetric matrix in (dx, dy); k > 0 a number,
    a either a complex number or a QuadDifferential evaluated at z."""
    if k <= 0.0:
        raise ValueError("k must be positive")
    av = a(z) if isinstance(a, QuadDifferential) else complex(a)
    s = k + abs(av) ** 2 / k
    al, be = av.real, av.imag
    return np.array([[s + 2.0 * al, -2.0 * be], [-2.0 * be, s - 2.0 * al]])


def hat_metric_fields(k_field, a):
    """(E, F, G) ScalarFields of hhat for a = QuadDifferential, on (x, y)."""
    x, y = J.coords(2)
    # real/imaginary parts of the polynomial a(x + iy) as fields
    ar = J.const(0.0, 2)
    ai = J.const(0.0, 2)
    zr, zi = J.const(1.0, 2), J.const(0.0, 2)
    for c in a.coeffs:
        ar = ar + (c.real * zr - c.imag * zi)
        ai = ai + (c.real * zi + c.imag * zr)
        zr, zi = zr * x - zi * y, zr * y + zi * x
    s = k_field + (ar * ar + ai * ai) / k_field
    return s + 2.0 * ar, -2.0 * ai, s - 2.0 * ar


def gauss_curvature(E, F, G, point):
    """Brioschi formula from the first fundamental form fields at a point."""
    je, jf, jg = E.eval(point), F.eval(point), G.eval(point)
    e, f, g = je.f, jf.f, jg.f
    det = e * g - f * f
    if det <= 0.0:
        raise ValueError("metric not positive-definite")
    ex, ey = je.g
    fx, fy = jf.g
    gx, gy = jg.g
    eyy = je.h[1, 1]
    gxx = jg.h[0, 0]
    fxy = jf.h[0, 1]
    m1 = np.array(
        [
            [-0.5 * eyy + fxy - 0.5 * gxx, 0.5 * ex, fx - 0.5 * ey],
            [fy - 0.5 * gx, e, f],
            [0.5 * gy, f, g],
        ]
    )
    m2 = np.array(
        [
            [0.0, 0.5 * ey, 0.5 * gx],
            [0.5 * ey, e, f],
            [0.5 * gx, f, g],
        ]
    )
    return float((np.linalg.det(m1) - np.linalg.det(m2)) / det ** 2)


# -- fold ellipse ------------------------------------------------------------


def fold_locus(k, a, z=None):
    """Q with the fold ellipse {w^T Q w = 1} in (u1, u2), w = u1 + i u2."""
    av = a(z) if isinstance(a, QuadDifferential) else complex(a)
    d = k - abs(av) ** 2 / k
    if d <= 0.0:
        raise ValueError("degenerate fold: requires k > |a|")
    s = k + abs(av) ** 2 / k
    al, be = av.real, av.imag
    return (4.0 / d ** 2) * np.array(
        [[s - 2.0 * al, -2.0 * be], [-2.0 * be, s + 2.0 * al]]
    )


def fold_covector_norm(k, a, z, w):
    """hhat-inverse norm squared of Re(w dz) = u1 dx - u2 dy.

    Constant 1/4 when w lies on the fold ellipse at z.
    """
    hm = hat_metric(k, a, z)
    xi = np.array([w.real, -w.imag])
    return float(xi @ np.linalg.solve(hm, xi))


def ellipse_fields(k_field, a):
    """(u1, u2) ScalarFields on the chart (x, y, theta) parametrizing the
    fold ellipse bundle: w(x, y, theta) traces {w^T Q w = 1} as theta runs
    over the circle (Cholesky parametrization Q = L L^T, L^T w = unit
    vector)."""
    x, y, th = J.coords(3)
    kf = k_field.compose([x, y])
    ar3 = J.const(0.0, 3)
    ai3 = J.const(0.0, 3)
    zr, zi = J.const(1.0, 3), J.const(0.0, 3)
    for c in a.coeffs:
        ar3 = ar3 + (c.real * zr - c.imag * zi)
        ai3 = ai3 + (c.real * zi + c.imag * zr)
        zr, zi = zr * x - zi * y, zr * y + zi * x
    amod2 = ar3 * ar3 + ai3 * ai3
    s = kf + amod2 / kf
    d = kf - amod2 / kf
    q11 = 4.0 * (s - 2.0 * ar3) / (d * d)
    q22 = 4.0 * (s + 2.0 * ar3) / (d * d)
    q12 = -8.0 * ai3 / (d * d)
    l11 = J.field_sqrt(q11)
    l21 = q12 / l11
    l22 = J.field_sqrt(q22 - l21 * l21)
    cth, sth = J.field_cos(th), J.field_sin(th)
    u2 = sth / l22
    u1 = (cth - l21 * u2) / l11
    return u1, u2


def characteristic_flow(k_field, a, start, theta_span, n=65):
    """Integrate the null direction of the restricted form Re(dw ^ dz) on
    the fold ellipse bundle, in the chart (x, y, theta) of ellipse_fields.

    ``start`` = (x0, y0); theta parametrizes the ellipse.  Returns
    (theta, x, y) samples; the (x, y) projection should trace an
    hhat-geodesic.
    """
    from scipy.integrate import solve_ivp

    from .forms import KForm, pullback

    u1, u2 = ellipse_fields(k_field, a)
    x, y, th = J.coords(3)
    inc = [x, y, u1, u2]
    # constant-coefficient forms on the ambient (x, y, u1, u2) chart
    w2 = KForm(2, 4, {(0, 2): -1.0, (1, 3): 1.0})  # du1^dx - du2^dy

    def rhs(theta, state):
        p = (state[0], state[1], theta)
        r2 = pullback(w2, inc, p)
        a12, a13, a23 = r2[(0, 1)], r2[(0, 2)], r2[(1, 2)]
        if abs(a12) < 1e-13:
            raise ArithmeticError("characteristic direction tangent to fibre")
        return [a23 / a12, -a13 / a12]

    t0, t1 = theta_span
    t_eval = np.linspace(t0, t1, n)
    sol = solve_ivp(rhs, (t0, t1), list(start), t_eval=t_eval,
                    rtol=1e-10, atol=1e-12, method="DOP853")
    if not sol.success:
        raise RuntimeError(f"characteristic flow failed: {sol.message}")
    return t_eval, sol.y[0], sol.y[1]


def characteristic_geodesic_deviation(k_field, a, start, theta_span, n=49):
    """Max planar deviation between the projected characteristic flow and the
    hhat-geodesic with matched initial data, after arclength matching.

    Velocities along the flow are taken from the kernel direction itself (not
    from differencing the track), so the comparison is limited only by the
    two integrators.  Returns (deviation, hhat-arclength).
    """
    from scipy.interpolate import InterpolatedUnivariateSpline

    from .forms import KForm, pullback

    th, xs, ys = characteristic_flow(k_field, a, start, theta_span, n=n)
    u1, u2 = ellipse_fields(k_field, a)
    xf, yf, thf = J.coords(3)
    inc = [xf, yf, u1, u2]
    w2 = KForm(2, 4, {(0, 2): -1.0, (1, 3): 1.0})
    vel = []
    for t, xx, yy in zip(th, xs, ys):
        r2 = pullback(w2, inc, (xx, yy, t))
        a12 = r2[(0, 1)]
        vel.append([r2[(1, 2)] / a12, -r2[(0, 2)] / a12])
    vel = np.asarray(vel)
    E, F, G = hat_metric_fields(k_field, a)
    pts = np.stack([xs, ys], 1)
    gv = np.array([[[E(p), F(p)], [F(p), G(p)]] for p in pts])
    speed = np.sqrt(np.einsum("ni,nij,nj->n", vel, gv, vel))
    ssp = InterpolatedUnivariateSpline(th, speed, k=5).antiderivative()
    s = ssp(th) - ssp(th[0])
    xg, yg = metric_geodesic(E, F, G, (xs[0], ys[0]), vel[0], s[-1], n=n)
    sx = InterpolatedUnivariateSpline(s, xs, k=5)
    sy = InterpolatedUnivariateSpline(s, ys, k=5)
    sg = np.linspace(0.0, s[-1], n)
    dev = float(np.max(np.hypot(sx(sg) - xg, sy(sg) - yg)))
    return dev, float(s[-1])


def metric_geodesic(E, F, G, start, velocity, length, n=65):
    """Geodesic of the metric (E, F, G) by the Christoffel ODE, unit speed.

    Independent oracle for the characteristic-flow comparison.
    """
    from scipy.integrate import solve_ivp

    def rhs(s, state):
        p = (state[0], state[1])
        je, jf, jg = E.eval(p), F.eval(p), G.eval(p)
        g = np.array([[je.f, jf.f], [jf.f, jg.f]])
        dg = np.empty((2, 2, 2))  # dg[l][i][j] = d_l g_ij
        for l in range(2):
            dg[l] = [[je.g[l], jf.g[l]], [jf.g[l], jg.g[l]]]
        ginv = np.linalg.inv(g)
        vel = state[2:]
        acc = np.zeros(2)
        for i in range(2):
            for jj in range(2):
                for kk in range(2):
                    gamma = 0.0
                    for l in range(2):
                        gamma += 0.5 * ginv[i, l] * (
                            dg[jj][l][kk] + dg[kk][l][jj] - dg[l][jj][kk]
                        )
                    acc[i] -= gamma * vel[jj] * vel[kk]
        return [vel[0], vel[1], acc[0], acc[1]]

    v = np.asarray(velocity, float)
    p0 = (start[0], start[1])
    g0 = np.array([[E(p0), F(p0)], [F(p0), G(p0)]])
    v = v / math.sqrt(float(v @ g0 @ v))
    s_eval = np.linspace(0.0, length, n)
    sol = solve_ivp(rhs, (0.0, length), [start[0], start[1], v[0], v[1]],
                    t_eval=s_eval, rtol=1e-10, atol=1e-12, method="DOP853")
    if not sol.success:
        raise RuntimeError(f"geodesic integration failed: {sol.message}")
    return sol.y[0], sol.y[1]
