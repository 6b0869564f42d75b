"""Pointwise exterior algebra on low-dimensional charts.

A :class:`KForm` stores coefficients over strictly increasing index tuples.
Coefficients are either plain numbers (a form *value* at a point) or
:class:`~foldedhk.jets.ScalarField` instances (a form *field*); the same
algebraic routines serve both.  Complex forms are (real, imaginary) pairs,
see :class:`ComplexKForm`.

Orientation convention: the volume form is dc_0 ∧ dc_1 ∧ ... ∧ dc_{n-1} in
chart order.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .jets import Jet2, ScalarField, const

__all__ = [
    "KForm",
    "ComplexKForm",
    "wedge",
    "d",
    "d_field",
    "interior",
    "lie",
    "pullback",
    "pullback_field",
]


def _merge_sign(s, t):
    """Sign of sorting the concatenation of disjoint increasing tuples s, t.

    Returns (sign, merged) or (0, None) if they share an index.
    """
    if set(s) & set(t):
        return 0, None
    merged = tuple(sorted(s + t))
    perm = s + t
    # count inversions of perm relative to sorted order
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return (-1) ** inv, merged


def _is_number(x):
    return isinstance(x, (int, float, complex, np.integer, np.floating))


class KForm:
    """Alternating form of fixed degree on an n-dimensional chart."""

    __slots__ = ("degree", "dim", "coeffs")

    def __init__(self, degree, dim, coeffs=None):
        self.degree = int(degree)
        self.dim = int(dim)
        self.coeffs = {}
        if coeffs:
            for idx, c in coeffs.items():
                idx = tuple(idx)
                if len(idx) != self.degree:
                    raise ValueError(f"tuple {idx} has wrong length")
                if any(idx[i] >= idx[i + 1] for i in range(len(idx) - 1)):
                    raise ValueError(f"tuple {idx} is not strictly increasing")
                self[idx] = c

    def __getitem__(self, idx):
        idx = tuple(idx)
        c = self.coeffs.get(idx, 0.0)
        return c

    def __setitem__(self, idx, c):
        self.coeffs[tuple(idx)] = c

    def tuples(self):
        return itertools.combinations(range(self.dim), self.degree)

    def _check(self, other):
        if self.dim != other.dim:
            raise ValueError("chart mismatch")
        if self.degree != other.degree:
            raise ValueError("degree mismatch")

    def __add__(self, other):
        self._check(other)
        out = KForm(self.degree, self.dim)
        for idx in set(self.coeffs) | set(other.coeffs):
            out[idx] = self[idx] + other[idx]
        return out

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, s):
        out = KForm(self.degree, self.dim)
        for idx, c in self.coeffs.items():
            out[idx] = c * s
        return out

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def at(self, point):
        """Evaluate ScalarField coefficients, producing a numeric form."""
        out = KForm(self.degree, self.dim)
        for idx, c in self.coeffs.items():
            out[idx] = c(point) if isinstance(c, ScalarField) else c
        return out

    def as_array(self):
        """Numeric coefficients in lexicographic tuple order."""
        return np.array([self[idx] for idx in self.tuples()])

    def norm(self):
        return float(np.max(np.abs(self.as_array()))) if self.degree <= self.dim else 0.0

    def matrix(self):
        """For a numeric 2-form: the antisymmetric matrix A with ω(X,Y)=XᵀAY."""
        if self.degree != 2:
            raise ValueError("matrix() only for 2-forms")
        a = np.zeros((self.dim, self.dim))
        for (i, j), c in self.coeffs.items():
            a[i, j] = c
            a[j, i] = -c
        return a

    def __repr__(self):
        return f"KForm(degree={self.degree}, dim={self.dim}, coeffs={self.coeffs})"


def wedge(a, b):
    """Graded-commutative wedge product; returns the zero form for p+q > n."""
    if a.dim != b.dim:
        raise ValueError("chart mismatch")
    deg = a.degree + b.degree
    out = KForm(deg, a.dim)
    if deg > a.dim:
        return out
    for s, ca in a.coeffs.items():
        for t, cb in b.coeffs.items():
            sign, merged = _merge_sign(s, t)
            if sign == 0:
                continue
            term = ca * cb if sign > 0 else -(ca * cb)
            if merged in out.coeffs:
                out[merged] = out[merged] + term
            else:
                out[merged] = term
    return out


def d(form, point):
    """Exterior derivative of a form field, evaluated at ``point``."""
    out = KForm(form.degree + 1, form.dim)
    if form.degree + 1 > form.dim:
        return out
    for idx, c in form.coeffs.items():
        if isinstance(c, ScalarField):
            grad = c.eval(point).g
        else:
            continue  # constant coefficient: no contribution
        for i in range(form.dim):
            if i in idx or grad[i] == 0.0:
                continue
            sign, merged = _merge_sign((i,), idx)
            out[merged] = out[merged] + sign * grad[i]
    return out


def d_field(form):
    """Exterior derivative as a form field.

    Coefficients of the result are first-order exact (their Hessians are
    truncated); taking ``d`` of the result is still exact, so d∘d tests and
    Cartan-formula manipulations work.
    """
    out = KForm(form.degree + 1, form.dim)
    if form.degree + 1 > form.dim:
        return out
    terms = {}
    for idx, c in form.coeffs.items():
        if not isinstance(c, ScalarField):
            continue
        for i in range(form.dim):
            if i in idx:
                continue
            sign, merged = _merge_sign((i,), idx)
            terms.setdefault(merged, []).append(
                c.partial(i) if sign > 0 else -c.partial(i)
            )
    for merged, parts in terms.items():
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        out[merged] = total
    return out


def interior(x, form):
    """Interior product i_X ω, contracting in the first slot.

    ``x`` is a sequence of components (numbers or ScalarFields).
    """
    if len(x) != form.dim:
        raise ValueError("chart mismatch")
    if form.degree == 0:
        return KForm(0, form.dim)
    out = KForm(form.degree - 1, form.dim)
    for idx, c in form.coeffs.items():
        for pos, i in enumerate(idx):
            comp = x[i]
            if _is_number(comp) and comp == 0.0:
                continue
            rest = idx[:pos] + idx[pos + 1 :]
            term = ((-1) ** pos) * (comp * c)
            if rest in out.coeffs:
                out[rest] = out[rest] + term
            else:
                out[rest] = term
    return out


def lie(x, form, point):
    """Lie derivative via the Cartan formula L_X ω = i_X dω + d(i_X ω)."""
    part1 = interior([c(point) if isinstance(c, ScalarField) else c for c in x],
                     d(form, point))
    part2 = d(interior(x, form), point)
    return part1 + part2


def _jacobian_minor(inc_jets, amb_idx, sub_idx):
    """det of [grad(inc_a)[s_b]] for ambient tuple amb_idx, sub tuple sub_idx."""
    k = len(amb_idx)
    m = np.empty((k, k))
    for a, ia in enumerate(amb_idx):
        for b, ib in enumerate(sub_idx):
            m[a, b] = inc_jets[ia].g[ib]
    if k == 0:
        return 1.0
    if k == 1:
        return m[0, 0]
    if k == 2:
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return float(np.linalg.det(m))


def pullback(form, inclusion, point):
    """Pull a form field back through ``inclusion`` and evaluate at ``point``.

    ``inclusion`` is a sequence of ScalarFields on the submanifold chart, one
    per ambient coordinate; ``point`` lives in the submanifold chart.
    """
    sub_dim = inclusion[0].dim
    inc_jets = [f.eval(point) for f in inclusion]
    amb_point = [j.f for j in inc_jets]
    out = KForm(form.degree, sub_dim)
    if form.degree > sub_dim:
        return out
    for amb_idx, c in form.coeffs.items():
        cval = c(amb_point) if isinstance(c, ScalarField) else c
        if cval == 0.0:
            continue
        for sub_idx in itertools.combinations(range(sub_dim), form.degree):
            minor = _jacobian_minor(inc_jets, amb_idx, sub_idx)
            if minor == 0.0:
                continue
            out[sub_idx] = out[sub_idx] + cval * minor
    return out


def pullback_field(form, inclusion):
    """Pullback as a form field on the submanifold chart.

    Coefficients are first-order exact (Hessians truncated through
    ``partial``), so a subsequent ``d`` is exact.
    """
    sub_dim = inclusion[0].dim
    partials = [[f.partial(j) for j in range(sub_dim)] for f in inclusion]

    def minor_field(amb_idx, sub_idx):
        k = len(amb_idx)
        if k == 1:
            return partials[amb_idx[0]][sub_idx[0]]
        total = None
        for perm in itertools.permutations(range(k)):
            sign = _perm_sign(perm)
            prod = partials[amb_idx[0]][sub_idx[perm[0]]]
            for a in range(1, k):
                prod = prod * partials[amb_idx[a]][sub_idx[perm[a]]]
            prod = prod if sign > 0 else -prod
            total = prod if total is None else total + prod
        return total

    out = KForm(form.degree, sub_dim)
    if form.degree > sub_dim:
        return out
    for amb_idx, c in form.coeffs.items():
        if isinstance(c, ScalarField):
            cf = c.compose(list(inclusion))
        else:
            cf = const(c, sub_dim)
        for sub_idx in itertools.combinations(range(sub_dim), form.degree):
            if form.degree == 0:
                term = cf
            else:
                term = cf * minor_field(amb_idx, sub_idx)
            if sub_idx in out.coeffs:
                out[sub_idx] = out[sub_idx] + term
            else:
                out[sub_idx] = term
    return out


def _perm_sign(perm):
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return (-1) ** inv


class ComplexKForm:
    """A complex form stored as a (real, imaginary) pair of KForms."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        self.re = re
        self.im = im if im is not None else KForm(re.degree, re.dim)

    @property
    def degree(self):
        return self.re.degree

    @property
    def dim(self):
        return self.re.dim

    def conj(self):
        return ComplexKForm(self.re, -self.im)

    def __add__(self, other):
        return ComplexKForm(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return ComplexKForm(self.re - other.re, self.im - other.im)

    def __mul__(self, z):
        zr, zi = z.real, z.imag
        return ComplexKForm(zr * self.re - zi * self.im, zr * self.im + zi * self.re)

    __rmul__ = __mul__

    def at(self, point):
        return ComplexKForm(self.re.at(point), self.im.at(point))

    def coeff(self, idx):
        return complex(self.re[idx]) + 1j * complex(self.im[idx])

    def as_array(self):
        return self.re.as_array() + 1j * self.im.as_array()

    def norm(self):
        return float(np.max(np.abs(self.as_array())))


def cwedge(a, b):
    """Wedge of complex forms, distributing over real/imaginary parts."""
    re = wedge(a.re, b.re) - wedge(a.im, b.im)
    im = wedge(a.re, b.im) + wedge(a.im, b.re)
    return ComplexKForm(re, im)
