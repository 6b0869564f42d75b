"""Forward-mode second-order jets: value, gradient and Hessian carried exactly.

Everything downstream (form coefficients, curvatures, PDE residuals) is
evaluated through these jets, so no finite differencing enters the main
computational path.  Hessians are assembled from symmetric combinations only,
which keeps them symmetric bit-exactly.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "DomainError",
    "Jet2",
    "ScalarField",
    "const",
    "coords",
    "exp",
    "log",
    "sqrt",
    "sin",
    "cos",
    "atan2",
    "apply_univariate",
]


class DomainError(ValueError):
    """Raised when an elementary function is evaluated off its domain."""


def _is_number(x):
    return isinstance(x, (int, float, np.integer, np.floating))


class Jet2:
    """Truncated Taylor data (f, grad f, Hess f) at a point of an n-dim chart."""

    __slots__ = ("f", "g", "h")

    def __init__(self, f, g, h):
        self.f = float(f)
        self.g = np.asarray(g, dtype=float)
        self.h = np.asarray(h, dtype=float)

    @staticmethod
    def constant(value, n):
        return Jet2(value, np.zeros(n), np.zeros((n, n)))

    @staticmethod
    def variable(value, i, n):
        g = np.zeros(n)
        g[i] = 1.0
        return Jet2(value, g, np.zeros((n, n)))

    @property
    def n(self):
        return self.g.shape[0]

    def __repr__(self):
        return f"Jet2(f={self.f!r}, g={self.g!r})"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if _is_number(other):
            return Jet2(self.f + other, self.g, self.h)
        return Jet2(self.f + other.f, self.g + other.g, self.h + other.h)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.f, -self.g, -self.h)

    def __sub__(self, other):
        return self + (-other if not _is_number(other) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_number(other):
            return Jet2(self.f * other, self.g * other, self.h * other)
        og, sg = other.g, self.g
        cross = np.outer(sg, og)
        h = self.h * other.f + other.h * self.f + (cross + cross.T)
        return Jet2(self.f * other.f, sg * other.f + og * self.f, h)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_number(other):
            return self * (1.0 / other)
        return self * other._reciprocal()

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def _reciprocal(self):
        v = self.f
        if v == 0.0:
            raise DomainError("division by a jet with zero value")
        return _chain(self, 1.0 / v, -1.0 / v ** 2, 2.0 / v ** 3)

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, float) and p.is_integer()):
            p = int(p)
            if p == 0:
                return Jet2.constant(1.0, self.n)
            if p == 1:
                return self
            if p < 0:
                return (self ** (-p))._reciprocal()
            half = self ** (p // 2)
            out = half * half
            return out * self if p % 2 else out
        if self.f <= 0.0:
            raise DomainError(f"non-integer power of non-positive value {self.f}")
        v = self.f
        return _chain(self, v ** p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))


def _chain(x, f0, f1, f2):
    """Jet of a univariate function applied to jet ``x`` (f0=f(x), f1=f'(x), ...)."""
    gg = np.outer(x.g, x.g)
    return Jet2(f0, f1 * x.g, f1 * x.h + f2 * (gg + gg.T) / 2.0)


def _chain2(u, v, f0, fu, fv, fuu, fuv, fvv):
    gu, gv = u.g, v.g
    guu = np.outer(gu, gu)
    gvv = np.outer(gv, gv)
    guv = np.outer(gu, gv)
    h = (
        fu * u.h
        + fv * v.h
        + fuu * (guu + guu.T) / 2.0
        + fvv * (gvv + gvv.T) / 2.0
        + fuv * (guv + guv.T)
    )
    return Jet2(f0, fu * gu + fv * gv, h)


# -- elementary functions, dispatching on numbers vs jets -------------------


def exp(x):
    if _is_number(x):
        return math.exp(x)
    v = math.exp(x.f)
    return _chain(x, v, v, v)


def log(x):
    if _is_number(x):
        if x <= 0.0:
            raise DomainError(f"log of non-positive value {x}")
        return math.log(x)
    if x.f <= 0.0:
        raise DomainError(f"log of non-positive value {x.f}")
    return _chain(x, math.log(x.f), 1.0 / x.f, -1.0 / x.f ** 2)


def sqrt(x):
    if _is_number(x):
        if x < 0.0:
            raise DomainError(f"sqrt of negative value {x}")
        return math.sqrt(x)
    if x.f < 0.0:
        raise DomainError(f"sqrt of negative value {x.f}")
    if x.f == 0.0:
        raise DomainError("sqrt differentiated at zero")
    r = math.sqrt(x.f)
    return _chain(x, r, 0.5 / r, -0.25 / (r * x.f))


def sin(x):
    if _is_number(x):
        return math.sin(x)
    s, c = math.sin(x.f), math.cos(x.f)
    return _chain(x, s, c, -s)


def cos(x):
    if _is_number(x):
        return math.cos(x)
    s, c = math.sin(x.f), math.cos(x.f)
    return _chain(x, c, -s, -c)


def atan2(y, x):
    """Standard branch cut on the negative x-axis; callers keep off the cut."""
    if _is_number(y) and _is_number(x):
        return math.atan2(y, x)
    if _is_number(y):
        y = Jet2.constant(y, x.n)
    if _is_number(x):
        x = Jet2.constant(x, y.n)
    r2 = y.f ** 2 + x.f ** 2
    if r2 == 0.0:
        raise DomainError("atan2 at the origin")
    f0 = math.atan2(y.f, x.f)
    fu = x.f / r2
    fv = -y.f / r2
    fuu = -2.0 * y.f * x.f / r2 ** 2
    fvv = 2.0 * y.f * x.f / r2 ** 2
    fuv = (y.f ** 2 - x.f ** 2) / r2 ** 2
    return _chain2(y, x, f0, fu, fv, fuu, fuv, fvv)


def apply_univariate(x, f0, f1, f2):
    """Apply a univariate function given by callables for value and two
    derivatives.  Used to plug gridded/spline data (e.g. a radial conformal
    factor) into the jet pipeline."""
    if _is_number(x):
        return f0(x)
    return _chain(x, f0(x.f), f1(x.f), f2(x.f))


# -- scalar fields ----------------------------------------------------------


class ScalarField:
    """Deterministic evaluation rule mapping chart coordinates to a Jet2.

    The wrapped closure receives a tuple of Jet2 (or plain floats, for the
    value-only fast path) and must be built from jet-aware operations.
    """

    __slots__ = ("fn", "dim")

    def __init__(self, fn, dim):
        self.fn = fn
        self.dim = int(dim)

    def eval(self, point):
        """Full second-order jet at ``point`` (sequence of floats)."""
        pt = tuple(float(c) for c in point)
        if len(pt) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(pt)}")
        args = tuple(Jet2.variable(c, i, self.dim) for i, c in enumerate(pt))
        out = self.fn(args)
        if _is_number(out):
            return Jet2.constant(out, self.dim)
        return out

    def __call__(self, point):
        """Value only (no derivative bookkeeping)."""
        out = self.fn(tuple(float(c) for c in point))
        return out.f if isinstance(out, Jet2) else float(out)

    # arithmetic combinators -----------------------------------------------

    def _binary(self, other, op):
        if _is_number(other):
            oth = const(other, self.dim)
        else:
            oth = other
            if oth.dim != self.dim:
                raise ValueError("field dimension mismatch")
        return ScalarField(lambda a, f=self.fn, g=oth.fn: op(f(a), g(a)), self.dim)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._binary(other, lambda x, y: y - x)

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda x, y: x / y)

    def __rtruediv__(self, other):
        return self._binary(other, lambda x, y: y / x)

    def __neg__(self):
        return ScalarField(lambda a, f=self.fn: -f(a), self.dim)

    def __pow__(self, p):
        return ScalarField(lambda a, f=self.fn: f(a) ** p, self.dim)

    def partial(self, i):
        """Partial derivative with respect to the i-th chart coordinate.

        Value and gradient of the result are exact; its Hessian is truncated
        to zero (a second derivative of a ``partial`` field is not available).
        """
        dim = self.dim

        def fn(args):
            if all(_is_number(a) for a in args):
                seeds = tuple(
                    Jet2.variable(a, k, dim) for k, a in enumerate(args)
                )
                return self.fn(seeds).g[i]
            vals = tuple(a.f if isinstance(a, Jet2) else float(a) for a in args)
            seeds = tuple(Jet2.variable(v, k, dim) for k, v in enumerate(vals))
            base = self.fn(seeds)
            m = args[0].n if isinstance(args[0], Jet2) else dim
            grad = np.zeros(m)
            for k, a in enumerate(args):
                if isinstance(a, Jet2):
                    grad += base.h[i, k] * a.g
            return Jet2(base.g[i], grad, np.zeros((m, m)))

        return ScalarField(fn, dim)

    def compose(self, inner):
        """Field in the chart of ``inner`` obtained by substituting the
        fields ``inner`` (one per coordinate of self) for the coordinates."""
        if len(inner) != self.dim:
            raise ValueError("need one inner field per coordinate")
        sub_dim = inner[0].dim
        fns = tuple(f.fn for f in inner)
        return ScalarField(
            lambda a, outer=self.fn: outer(tuple(f(a) for f in fns)), sub_dim
        )


def const(value, dim):
    v = float(value)
    return ScalarField(lambda a: v, dim)


def coords(dim):
    """The coordinate fields of a ``dim``-dimensional chart."""
    return tuple(
        ScalarField(lambda a, i=i: a[i], dim) for i in range(dim)
    )


def lift(fn):
    """Lift a jet-aware unary function to act on ScalarFields."""

    def apply(field):
        return ScalarField(lambda a, f=field.fn: fn(f(a)), field.dim)

    return apply


field_exp = lift(exp)
field_log = lift(log)
field_sqrt = lift(sqrt)
field_sin = lift(sin)
field_cos = lift(cos)


def field_atan2(yf, xf):
    return ScalarField(
        lambda a, f=yf.fn, g=xf.fn: atan2(f(a), g(a)), yf.dim
    )


def field_univariate(xf, f0, f1, f2):
    return ScalarField(
        lambda a, g=xf.fn: apply_univariate(g(a), f0, f1, f2), xf.dim
    )
