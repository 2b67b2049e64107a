"""Compactly supported smooth test functions with exact derivatives.

A 1-d test function is (P/Q)(t) · (1-t²)^{-s} · exp(-m/(1-t²)) on the
normalised variable t = (2x-a-b)/(b-a), and identically zero outside (a, b).
This family is closed under differentiation, pointwise products (on a shared
support) and multiplication by polynomials in x, so every derivative value
used to smear point distributions is computed exactly, never by finite
differences.

2-d test functions are products fx(x)·fy(y); the Wirtinger derivatives
∂ = (∂x - i∂y)/2 and ∂̄ = (∂x + i∂y)/2 follow exactly from the factors.
"""

from __future__ import annotations

from math import comb
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial as Poly

from .errors import InvalidInterval, InvalidOrder, UnsupportedOrder
from . import quad

__all__ = [
    "TestFn1D",
    "TestFn2D",
    "TestFnSum2D",
    "RadialFlatTop",
    "PolyFlat2D",
    "bump",
    "derivative",
    "norm_m",
    "cauchy_transform",
]

DERIVATIVE_CAP = 12

# exp(-m/w) underflows long before this threshold matters; skipping the
# evaluation keeps w^{-s} from being formed at tiny w.
_EXP_ARG_MAX = 700.0

_W = Poly([1.0, 0.0, -1.0])  # w(t) = 1 - t²
_T = Poly([0.0, 1.0])


def _no_real_roots_on_support(q: Poly) -> bool:
    t = np.linspace(-1.0, 1.0, 2001)
    return bool(np.min(np.abs(q(t))) > 1e-9)


class TestFn1D:
    """One smooth bump-closure function on a fixed support (a, b)."""

    __slots__ = ("a", "b", "num", "den_base", "den_pow", "edge_pow", "core_pow", "_dcache")

    def __init__(self, a, b, num, den_base=None, den_pow=0, edge_pow=0, core_pow=1):
        if not a < b:
            raise InvalidInterval(f"need a < b, got ({a}, {b})")
        if core_pow < 1:
            raise InvalidOrder("core_pow must be >= 1 (compact support)")
        self.a = float(a)
        self.b = float(b)
        self.num = num if isinstance(num, Poly) else Poly(np.atleast_1d(num))
        self.den_base = den_base if den_base is not None else Poly([1.0])
        self.den_pow = int(den_pow)
        self.edge_pow = int(edge_pow)
        self.core_pow = int(core_pow)
        if self.den_pow > 0 and self.den_base.degree() == 0:
            self.num = self.num / self.den_base.coef[0] ** self.den_pow
            self.den_base = Poly([1.0])
            self.den_pow = 0
        if self.den_pow > 0 and not _no_real_roots_on_support(self.den_base):
            raise InvalidInterval("denominator has a (near-)root on [-1, 1]")
        self._dcache = {}

    @property
    def support(self):
        return (self.a, self.b)

    def _t(self, x):
        return (2.0 * x - (self.a + self.b)) / (self.b - self.a)

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        scalar = x_arr.ndim == 0
        t = self._t(np.atleast_1d(x_arr))
        w = 1.0 - t * t
        safe = (np.abs(t) < 1.0) & (w * _EXP_ARG_MAX > self.core_pow)
        dtype = complex if np.iscomplexobj(self.num.coef) else float
        out = np.zeros(t.shape, dtype=dtype)
        if np.any(safe):
            ts, ws = t[safe], w[safe]
            val = self.num(ts)
            if self.den_pow > 0:
                val = val / self.den_base(ts) ** self.den_pow
            if self.edge_pow > 0:
                val = val * ws ** (-self.edge_pow)
            out[safe] = val * np.exp(-self.core_pow / ws)
        if scalar:
            return out[0].item()
        return out.reshape(x_arr.shape)

    def _derive_once(self) -> "TestFn1D":
        p, q = self.num, self.den_base
        s, m, j = self.edge_pow, self.core_pow, self.den_pow
        # d/dt of P/(Q^j w^s) e^{-m/w}, recombined over Q^{j'} w^{s+2}
        if j > 0:
            p_new = (p.deriv() * q - j * p * q.deriv()) * _W**2 + 2 * _T * p * q * (s * _W - m)
            j_new = j + 1
        else:
            p_new = p.deriv() * _W**2 + 2 * _T * p * (s * _W - m)
            j_new = 0
        p_new = p_new * (2.0 / (self.b - self.a))  # chain rule for t(x)
        return TestFn1D(self.a, self.b, p_new, q, j_new, s + 2, m)

    def deriv(self, k: int = 1) -> "TestFn1D":
        if k < 0:
            raise InvalidOrder("derivative order must be >= 0")
        if k > DERIVATIVE_CAP:
            raise UnsupportedOrder(f"derivative order capped at {DERIVATIVE_CAP}")
        if k == 0:
            return self
        if k not in self._dcache:
            self._dcache[k] = self.deriv(k - 1)._derive_once()
        return self._dcache[k]

    def __mul__(self, other):
        if isinstance(other, TestFn1D):
            if self.support != other.support:
                raise InvalidInterval("pointwise product needs identical supports")
            den = self.den_base**self.den_pow * other.den_base**other.den_pow
            return TestFn1D(
                self.a, self.b, self.num * other.num, den, 1 if den.degree() > 0 else 0,
                self.edge_pow + other.edge_pow, self.core_pow + other.core_pow,
            )
        return TestFn1D(
            self.a, self.b, self.num * other, self.den_base, self.den_pow,
            self.edge_pow, self.core_pow,
        )

    __rmul__ = __mul__

    def __add__(self, other: "TestFn1D") -> "TestFn1D":
        if self.support != other.support or self.core_pow != other.core_pow:
            raise InvalidInterval("sum needs identical supports and core powers")
        s = max(self.edge_pow, other.edge_pow)
        qa = self.den_base**self.den_pow
        qb = other.den_base**other.den_pow
        num = self.num * qb * _W ** (s - self.edge_pow) + other.num * qa * _W ** (s - other.edge_pow)
        den = qa * qb
        return TestFn1D(self.a, self.b, num, den, 1 if den.degree() > 0 else 0, s, self.core_pow)

    def mul_poly_x(self, coeffs_x: Sequence[float]) -> "TestFn1D":
        """Multiply by a polynomial given by coefficients in the variable x."""
        affine = Poly([0.5 * (self.a + self.b), 0.5 * (self.b - self.a)])
        px_in_t = Poly(np.atleast_1d(coeffs_x))(affine)
        return TestFn1D(
            self.a, self.b, self.num * px_in_t, self.den_base, self.den_pow,
            self.edge_pow, self.core_pow,
        )


def bump(a: float, b: float) -> TestFn1D:
    """The standard bump exp(-1/(1-t²)) on (a, b); value e^{-1} at midpoint."""
    return TestFn1D(a, b, Poly([1.0]))


def derivative(f: TestFn1D, k: int) -> TestFn1D:
    """Exact k-th derivative within the closure (k = 0 returns f)."""
    return f.deriv(k)


def norm_m(f: TestFn1D, m: int, samples: int = 4096) -> float:
    """max_{k<=m} sup |f^{(k)}| sampled on a dense grid.

    A lower bound of the true sup norm; used only as a normalisation scale.
    """
    if m < 0:
        raise InvalidOrder("m must be >= 0")
    xs = np.linspace(f.a, f.b, samples)
    return max(float(np.max(np.abs(f.deriv(k)(xs)))) for k in range(m + 1))


class TestFn2D:
    """Product test function φ(x, y) = fx(x)·fy(y) on a support rectangle."""

    def __init__(self, fx: TestFn1D, fy: TestFn1D):
        self.fx = fx
        self.fy = fy

    @property
    def support(self):
        return (self.fx.support, self.fy.support)

    def __call__(self, x, y):
        return self.fx(x) * self.fy(y)

    def eval_z(self, z):
        z = np.asarray(z, dtype=complex)
        return self.fx(z.real) * self.fy(z.imag)

    def wirtinger(self, k: int, z0: complex) -> complex:
        """Exact (∂^k φ)(z0) with ∂ = (∂x - i∂y)/2."""
        x0, y0 = float(np.real(z0)), float(np.imag(z0))
        total = 0.0 + 0.0j
        for j in range(k + 1):
            total += comb(k, j) * (-1j) ** j * complex(self.fx.deriv(k - j)(x0)) * complex(
                self.fy.deriv(j)(y0)
            )
        return total / 2**k

    def dbar(self, x, y):
        """(∂̄φ)(x, y) = (fx'·fy + i·fx·fy')/2, exact."""
        return 0.5 * (self.fx.deriv(1)(x) * self.fy(y) + 1j * self.fx(x) * self.fy.deriv(1)(y))

    def dbar_z(self, z):
        z = np.asarray(z, dtype=complex)
        return self.dbar(z.real, z.imag)

    def __mul__(self, other):
        if isinstance(other, TestFn2D):
            return TestFn2D(self.fx * other.fx, self.fy * other.fy)
        if isinstance(other, TestFnSum2D):
            return TestFnSum2D([(c, self * t) for c, t in other.terms])
        return TestFnSum2D([(other, self)])

    def mul_coordinate(self) -> "TestFnSum2D":
        """The test function z·φ(z), exact in the closure (z = x + iy)."""
        return TestFnSum2D(
            [
                (1.0, TestFn2D(self.fx.mul_poly_x([0.0, 1.0]), self.fy)),
                (1j, TestFn2D(self.fx, self.fy.mul_poly_x([0.0, 1.0]))),
            ]
        )


class TestFnSum2D:
    """Finite linear combination of product test functions."""

    def __init__(self, terms):
        self.terms = list(terms)

    def __call__(self, x, y):
        return sum(c * t(x, y) for c, t in self.terms)

    def eval_z(self, z):
        return sum(c * t.eval_z(z) for c, t in self.terms)

    def wirtinger(self, k: int, z0: complex) -> complex:
        return sum(c * t.wirtinger(k, z0) for c, t in self.terms)

    def dbar(self, x, y):
        return sum(c * t.dbar(x, y) for c, t in self.terms)

    def __mul__(self, other):
        out = []
        for c, t in self.terms:
            prod = t * other
            if isinstance(prod, TestFnSum2D):
                out.extend((c * c2, t2) for c2, t2 in prod.terms)
            else:
                out.append((c, prod))
        return TestFnSum2D(out)


def _smoothstep(u):
    """C-infinity step: 0 for u<=0, 1 for u>=1."""
    u = np.asarray(u, dtype=float)
    lo = u <= 0.0
    hi = u >= 1.0
    mid = ~(lo | hi)
    out = np.zeros(u.shape)
    out[hi] = 1.0
    if np.any(mid):
        um = u[mid]
        ea = np.exp(-1.0 / um)
        eb = np.exp(-1.0 / (1.0 - um))
        out[mid] = ea / (ea + eb)
    return out


class RadialFlatTop:
    """Radially symmetric C-infinity plateau: 1 on |z-c|<=r_flat, 0 outside r_out.

    All derivatives vanish identically on the plateau, so smearing against
    point distributions located there needs no derivatives of the transition
    ring (which is evaluated pointwise only).
    """

    def __init__(self, center: complex, r_flat: float, r_out: float, power: int = 1):
        if not 0 < r_flat < r_out:
            raise InvalidInterval("need 0 < r_flat < r_out")
        self.center = complex(center)
        self.r_flat = float(r_flat)
        self.r_out = float(r_out)
        self.power = int(power)

    @property
    def support(self):
        c, r = self.center, self.r_out
        return ((c.real - r, c.real + r), (c.imag - r, c.imag + r))

    def eval_z(self, z):
        z = np.asarray(z, dtype=complex)
        rho = np.abs(z - self.center)
        u = (self.r_out - rho) / (self.r_out - self.r_flat)
        return _smoothstep(u) ** self.power

    def __call__(self, x, y):
        return self.eval_z(np.asarray(x) + 1j * np.asarray(y))

    def _classify(self, z0: complex) -> str:
        rho = abs(complex(z0) - self.center)
        if rho <= self.r_flat:
            return "flat"
        if rho >= self.r_out:
            return "outside"
        return "ring"

    def wirtinger(self, k: int, z0: complex) -> complex:
        where = self._classify(z0)
        if where == "ring":
            raise UnsupportedOrder("derivatives inside the transition ring are not exact")
        if where == "outside":
            return 0.0
        return 1.0 if k == 0 else 0.0


class PolyFlat2D:
    """poly(z) times a radial plateau: locally holomorphic, compactly supported.

    Inside the plateau the Wirtinger derivatives are the polynomial's, and
    ∂̄ vanishes; that is all the smearing operations ever evaluate there.
    """

    def __init__(self, coeffs: Sequence[complex], flat: RadialFlatTop):
        self.poly = Poly(np.atleast_1d(np.asarray(coeffs, dtype=complex)))
        self.flat = flat

    @property
    def support(self):
        return self.flat.support

    def eval_z(self, z):
        return self.poly(np.asarray(z, dtype=complex)) * self.flat.eval_z(z)

    def __call__(self, x, y):
        return self.eval_z(np.asarray(x) + 1j * np.asarray(y))

    def wirtinger(self, k: int, z0: complex) -> complex:
        where = self.flat._classify(z0)
        if where == "ring":
            raise UnsupportedOrder("derivatives inside the transition ring are not exact")
        if where == "outside":
            return 0.0
        return complex(self.poly.deriv(k)(complex(z0))) if k > 0 else complex(self.poly(complex(z0)))

    def __mul__(self, other: "PolyFlat2D") -> "PolyFlat2D":
        f, g = self.flat, other.flat
        if (f.center, f.r_flat, f.r_out) != (g.center, g.r_flat, g.r_out):
            raise InvalidInterval("plateau product needs identical rings")
        out_flat = RadialFlatTop(f.center, f.r_flat, f.r_out, f.power + g.power)
        prod = PolyFlat2D([1.0], out_flat)
        prod.poly = self.poly * other.poly
        return prod


def cauchy_transform(f: TestFn2D, z: complex, n_r: int = 128, n_theta: int = 256) -> complex:
    """(𝔯 ∗ φ)(z) = ∬ φ(ζ)/(z - ζ) d²ζ.

    Polar coordinates centred at z: the area Jacobian cancels the kernel
    singularity, so the integrand is smooth whether or not z lies inside the
    support.
    """
    (ax, bx), (ay, by) = f.support
    corners = np.array([ax + 1j * ay, ax + 1j * by, bx + 1j * ay, bx + 1j * by])
    r_max = float(np.max(np.abs(corners - z)))
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    g = quad.gauss_grid(0.0, r_max, n_r)
    zeta = z + g.nodes[:, None] * np.exp(1j * theta[None, :])
    vals = f.eval_z(zeta) * np.exp(-1j * theta[None, :])
    return complex(-(2.0 * np.pi / n_theta) * np.sum(g.weights @ vals))
